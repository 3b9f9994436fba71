//! QPSK split into an in-phase set for source 1 and a quadrature set for
//! source 2, with an exact (or max-log) soft demapper for the superposed signal.
//!
//! Bit `b` maps to amplitude `(1 − 2b)/√2`: source 1 on the real axis, source 2
//! on the imaginary axis. Source 1 transmits `m₁(|v₁|v₁|)`, source 2 transmits
//! `m₂(|0|v₂|)`, so during the first half source 2 sends known `+j/√2` symbols.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::gf2::BitVector;

/// A complex baseband sample.
pub type ComplexSymbol = Complex64;

/// Which transmitter produced a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceId {
    One,
    Two,
}

/// The two-set partition `ℳ₁ = {±1/√2}`, `ℳ₂ = {±j/√2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSet {
    /// Points of source 1 indexed by bit value.
    pub set1: [ComplexSymbol; 2],
    /// Points of source 2 indexed by bit value.
    pub set2: [ComplexSymbol; 2],
}

impl SignalSet {
    pub const fn qpsk_partition() -> Self {
        Self {
            set1: [
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(-FRAC_1_SQRT_2, 0.0),
            ],
            set2: [
                Complex64::new(0.0, FRAC_1_SQRT_2),
                Complex64::new(0.0, -FRAC_1_SQRT_2),
            ],
        }
    }

    #[inline]
    pub fn point1(&self, bit: bool) -> ComplexSymbol {
        self.set1[usize::from(bit)]
    }

    #[inline]
    pub fn point2(&self, bit: bool) -> ComplexSymbol {
        self.set2[usize::from(bit)]
    }

    /// Maps `(v₁, v₂)` to the frames `m₁(|v₁|v₁|)` and `m₂(|0|v₂|)`.
    pub fn map_sources(&self, v1: &BitVector, v2: &BitVector) -> Result<(SymbolFrame, SymbolFrame)> {
        if v1.len() != v2.len() {
            return Err(invalid("source words differ in length"));
        }
        let n = v1.len();
        let first: Vec<_> = v1.iter().map(|b| self.point1(b)).collect();
        let mut s1 = first.clone();
        s1.extend_from_slice(&first);
        let mut s2 = Vec::with_capacity(2 * n);
        s2.extend((0..n).map(|_| self.point2(false)));
        s2.extend(v2.iter().map(|b| self.point2(b)));
        Ok((
            SymbolFrame::new(s1, Some(SourceId::One)),
            SymbolFrame::new(s2, Some(SourceId::Two)),
        ))
    }
}

impl Default for SignalSet {
    fn default() -> Self {
        Self::qpsk_partition()
    }
}

/// A sequence of complex symbols, optionally tagged with its transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    pub symbols: Vec<ComplexSymbol>,
    pub source: Option<SourceId>,
}

impl SymbolFrame {
    pub fn new(symbols: Vec<ComplexSymbol>, source: Option<SourceId>) -> Self {
        Self { symbols, source }
    }

    /// Untagged frame, e.g. a received superposition.
    pub fn received(symbols: Vec<ComplexSymbol>) -> Self {
        Self::new(symbols, None)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> SymbolFrame {
        SymbolFrame::new(self.symbols.iter().map(|s| s * factor).collect(), self.source)
    }
}

/// [`SignalSet::map_sources`] on the QPSK partition.
pub fn map_sources(v1: &BitVector, v2: &BitVector) -> Result<(SymbolFrame, SymbolFrame)> {
    SignalSet::qpsk_partition().map_sources(v1, v2)
}

/// Over-the-air sum `g₁·f₁ + g₂·f₂`, before noise.
pub fn superpose(
    f1: &SymbolFrame,
    f2: &SymbolFrame,
    g1: ComplexSymbol,
    g2: ComplexSymbol,
) -> Result<SymbolFrame> {
    if f1.len() != f2.len() {
        return Err(invalid("frames differ in length"));
    }
    Ok(SymbolFrame::received(
        f1.symbols
            .iter()
            .zip(&f2.symbols)
            .map(|(a, b)| g1 * a + g2 * b)
            .collect(),
    ))
}

/// Soft-output rule used when marginalizing over hypotheses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DemapMethod {
    #[default]
    Exact,
    MaxLog,
}

impl DemapMethod {
    fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            DemapMethod::Exact => log_sum_exp(a, b),
            DemapMethod::MaxLog => a.max(b),
        }
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// One received sample with the receiver's view of gains and noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub y: ComplexSymbol,
    pub g1: ComplexSymbol,
    pub g2: ComplexSymbol,
    /// Noise variance per real dimension.
    pub noise_var: f64,
}

/// LLRs extracted from one second-half symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLlr {
    /// Marginal LLR of the source-1 bit `v₁ᵢ`.
    pub v1: f64,
    /// Marginal LLR of the source-2 bit `v₂ᵢ`.
    pub v2: f64,
    /// LLR of the code bit `wᵢ = v₁ᵢ ⊕ v₂ᵢ`.
    pub w: f64,
}

fn metric(set: &SignalSet, obs: &Observation, a: bool, b: bool) -> f64 {
    let x = obs.g1 * set.point1(a) + obs.g2 * set.point2(b);
    -(obs.y - x).norm_sqr() / (2.0 * obs.noise_var)
}

/// LLR of the source-1 bit from a first-half symbol, where source 2 sends its
/// known zero point.
pub fn demap_first_half(set: &SignalSet, obs: &Observation) -> f64 {
    metric(set, obs, false, false) - metric(set, obs, true, false)
}

/// LLRs from a second-half symbol carrying one bit from each source.
pub fn demap_second_half(set: &SignalSet, obs: &Observation, method: DemapMethod) -> JointLlr {
    let m00 = metric(set, obs, false, false);
    let m01 = metric(set, obs, false, true);
    let m10 = metric(set, obs, true, false);
    let m11 = metric(set, obs, true, true);
    JointLlr {
        v1: method.combine(m00, m01) - method.combine(m10, m11),
        v2: method.combine(m00, m10) - method.combine(m01, m11),
        w: method.combine(m00, m11) - method.combine(m01, m10),
    }
}

/// Per-code-bit LLRs for a length-`2n` Plotkin codeword; positive favours 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    pub llr: Vec<f64>,
}

impl LlrFrame {
    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }

    /// Hard decisions, with ties going to 0.
    pub fn hard_decision(&self) -> BitVector {
        let mut out = BitVector::zeros(self.llr.len());
        for (i, &l) in self.llr.iter().enumerate() {
            if l < 0.0 {
                out.set(i, true);
            }
        }
        out
    }
}

/// Demaps a received frame of length `2n` into LLRs for `|u|w|`.
///
/// `LLR(uᵢ)` adds the first-half evidence at `i` and the marginal `v₁` evidence
/// at `n + i`; `LLR(wᵢ)` comes from the joint hypotheses at `n + i`. The two
/// are treated as independent.
pub fn demap_observations(
    set: &SignalSet,
    obs: &[Observation],
    method: DemapMethod,
) -> Result<LlrFrame> {
    if obs.is_empty() || !obs.len().is_multiple_of(2) {
        return Err(invalid("received frame length must be even and nonzero"));
    }
    if let Some(bad) = obs.iter().find(|o| !o.noise_var.is_finite() || o.noise_var <= 0.0) {
        return Err(invalid(alloc::format!(
            "noise variance must be positive and finite, got {}",
            bad.noise_var
        )));
    }
    let n = obs.len() / 2;
    let mut llr = Vec::with_capacity(2 * n);
    llr.extend(obs[..n].iter().map(|o| demap_first_half(set, o)));
    let mut w = Vec::with_capacity(n);
    for (i, o) in obs[n..].iter().enumerate() {
        let joint = demap_second_half(set, o, method);
        llr[i] += joint.v1;
        w.push(joint.w);
    }
    llr.extend(w);
    Ok(LlrFrame { llr })
}

/// Demaps with gains and noise variance constant over the frame.
pub fn demap(
    y: &SymbolFrame,
    g1: ComplexSymbol,
    g2: ComplexSymbol,
    noise_var: f64,
    method: DemapMethod,
) -> Result<LlrFrame> {
    let obs: Vec<_> = y
        .symbols
        .iter()
        .map(|&y| Observation {
            y,
            g1,
            g2,
            noise_var,
        })
        .collect();
    demap_observations(&SignalSet::qpsk_partition(), &obs, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const S: f64 = FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_bit_mapping() {
        let v1 = BitVector::from_bits(&[0]).unwrap();
        let v2 = BitVector::from_bits(&[1]).unwrap();
        let (f1, f2) = map_sources(&v1, &v2).unwrap();
        assert_eq!(f1.symbols, vec![c(S, 0.0), c(S, 0.0)]);
        assert_eq!(f2.symbols, vec![c(0.0, S), c(0.0, -S)]);
        assert_eq!(f1.source, Some(SourceId::One));
        assert_eq!(f2.source, Some(SourceId::Two));
    }

    #[test]
    fn zero_words_superpose_to_a_corner() {
        let z = BitVector::zeros(5);
        let (f1, f2) = map_sources(&z, &z).unwrap();
        let y = superpose(&f1, &f2, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        for s in y.symbols {
            assert_eq!(s, c(S, S));
        }
    }

    #[test]
    fn second_half_superpositions_form_qpsk() {
        let set = SignalSet::qpsk_partition();
        let mut pts = vec![];
        for a in [false, true] {
            for b in [false, true] {
                pts.push(set.point1(a) + set.point2(b));
            }
        }
        for p in &pts {
            assert_relative_eq!(p.norm_sqr(), 1.0, epsilon = 1e-15);
            assert_relative_eq!(p.re.abs(), S);
            assert_relative_eq!(p.im.abs(), S);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((pts[i] - pts[j]).norm() > 1.0);
            }
        }
    }

    #[test]
    fn every_source_symbol_has_half_energy() {
        let set = SignalSet::qpsk_partition();
        for b in [false, true] {
            assert_relative_eq!(set.point1(b).norm_sqr(), 0.5, epsilon = 1e-15);
            assert_relative_eq!(set.point2(b).norm_sqr(), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn map_rejects_length_mismatch() {
        assert!(map_sources(&BitVector::zeros(3), &BitVector::zeros(4)).is_err());
    }

    #[test]
    fn superpose_with_muted_source_two() {
        let v = BitVector::from_bits(&[0, 1]).unwrap();
        let (f1, f2) = map_sources(&v, &v).unwrap();
        let y = superpose(&f1, &f2, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(y.symbols, f1.symbols);
        let short = SymbolFrame::received(vec![c(0.0, 0.0)]);
        assert!(superpose(&f1, &short, c(1.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn superpose_complex_gain() {
        // (0.6+0.8j)(1/√2) + (j/√2) = (0.6 + 1.8j)/√2
        let f1 = SymbolFrame::received(vec![c(S, 0.0)]);
        let f2 = SymbolFrame::received(vec![c(0.0, S)]);
        let y = superpose(&f1, &f2, c(0.6, 0.8), c(1.0, 0.0)).unwrap();
        assert_relative_eq!(y.symbols[0].re, 0.6 * S, epsilon = 1e-15);
        assert_relative_eq!(y.symbols[0].im, 1.8 * S, epsilon = 1e-15);
    }

    #[test]
    fn zero_observation_gives_zero_second_half_llrs() {
        let set = SignalSet::qpsk_partition();
        let obs = Observation {
            y: c(0.0, 0.0),
            g1: c(1.0, 0.0),
            g2: c(1.0, 0.0),
            noise_var: 0.7,
        };
        let j = demap_second_half(&set, &obs, DemapMethod::Exact);
        assert_eq!((j.v1, j.v2, j.w), (0.0, 0.0, 0.0));
    }

    #[test]
    fn strong_corner_gives_positive_llrs() {
        let y = SymbolFrame::received(vec![c(10.0 * S, 10.0 * S); 2]);
        let l = demap(&y, c(1.0, 0.0), c(1.0, 0.0), 0.01, DemapMethod::Exact).unwrap();
        assert!(l.llr.iter().all(|&x| x > 100.0));
    }

    // Frozen from a direct Gaussian-density computation (no log-sum-exp) of
    // the four hypotheses at y = 0.3 + 0.4j, unit gains, sigma^2 = 1.
    #[test]
    fn four_hypothesis_marginals() {
        let set = SignalSet::qpsk_partition();
        let obs = Observation {
            y: c(0.3, 0.4),
            g1: c(1.0, 0.0),
            g2: c(1.0, 0.0),
            noise_var: 1.0,
        };
        let j = demap_second_half(&set, &obs, DemapMethod::Exact);
        assert_relative_eq!(j.v1, 0.424_264_068_711_928_5, max_relative = 1e-12);
        assert_relative_eq!(j.v2, 0.565_685_424_949_238, max_relative = 1e-12);
        assert_relative_eq!(j.w, 0.115_304_277_316_237_99, max_relative = 1e-12);
    }

    #[test]
    fn max_log_matches_exact_when_one_hypothesis_dominates() {
        let set = SignalSet::qpsk_partition();
        let obs = Observation {
            y: c(S, -S),
            g1: c(1.0, 0.0),
            g2: c(1.0, 0.0),
            noise_var: 0.01,
        };
        let e = demap_second_half(&set, &obs, DemapMethod::Exact);
        let m = demap_second_half(&set, &obs, DemapMethod::MaxLog);
        assert_relative_eq!(e.v1, m.v1, max_relative = 1e-9);
        assert_relative_eq!(e.v2, m.v2, max_relative = 1e-9);
        assert!(e.v1 > 0.0 && e.v2 < 0.0 && e.w < 0.0);
    }

    #[test]
    fn demap_rejects_bad_noise_and_odd_length() {
        let y = SymbolFrame::received(vec![c(0.0, 0.0); 4]);
        let one = c(1.0, 0.0);
        assert!(demap(&y, one, one, 0.0, DemapMethod::Exact).is_err());
        assert!(demap(&y, one, one, -1.0, DemapMethod::Exact).is_err());
        assert!(demap(&y, one, one, f64::NAN, DemapMethod::Exact).is_err());
        let odd = SymbolFrame::received(vec![c(0.0, 0.0); 3]);
        assert!(demap(&odd, one, one, 1.0, DemapMethod::Exact).is_err());
    }

    #[test]
    fn hard_decision_ties_to_zero() {
        let l = LlrFrame {
            llr: vec![0.0, -0.0, -1e-300, 2.0],
        };
        assert_eq!(l.hard_decision().to_bits(), vec![0, 0, 1, 0]);
    }

    fn arb_c(r: f64) -> impl Strategy<Value = Complex64> {
        (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
    }

    proptest! {
        #[test]
        fn scaling_invariance(
            y in proptest::collection::vec(arb_c(2.0), 4),
            g1 in arb_c(1.5), g2 in arb_c(1.5),
            alpha in arb_c(3.0), var in 0.05f64..3.0,
        ) {
            prop_assume!(alpha.norm() > 0.1);
            let f = SymbolFrame::received(y.clone());
            let fa = SymbolFrame::received(y.iter().map(|v| v * alpha).collect());
            for method in [DemapMethod::Exact, DemapMethod::MaxLog] {
                let a = demap(&f, g1, g2, var, method).unwrap();
                let b = demap(&fa, alpha * g1, alpha * g2, alpha.norm_sqr() * var, method).unwrap();
                for (x, z) in a.llr.iter().zip(&b.llr) {
                    prop_assert!((x - z).abs() <= 1e-9 * (1.0 + x.abs()));
                }
            }
        }

        #[test]
        fn negating_in_phase_flips_source_one(
            y in arb_c(2.0), g1 in -2.0f64..2.0, g2 in -2.0f64..2.0, var in 0.05f64..3.0,
        ) {
            let set = SignalSet::qpsk_partition();
            let obs = Observation { y, g1: c(g1, 0.0), g2: c(g2, 0.0), noise_var: var };
            let neg = Observation { y: c(-y.re, y.im), ..obs };
            let a = demap_second_half(&set, &obs, DemapMethod::Exact);
            let b = demap_second_half(&set, &neg, DemapMethod::Exact);
            prop_assert!((a.v1 + b.v1).abs() < 1e-9 * (1.0 + a.v1.abs()));
            prop_assert!((a.v2 - b.v2).abs() < 1e-9 * (1.0 + a.v2.abs()));
            let fa = demap_first_half(&set, &obs);
            let fb = demap_first_half(&set, &neg);
            prop_assert!((fa + fb).abs() < 1e-9 * (1.0 + fa.abs()));
        }
    }
}
