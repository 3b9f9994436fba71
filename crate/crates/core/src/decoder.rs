//! Tanner graph construction and flooding sum-product decoding.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::codes::PlotkinCode;
use crate::error::{invalid, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::modem::LlrFrame;

/// Iteration limit used when none is configured.
pub const DEFAULT_MAX_ITER: usize = 50;

/// Check-to-variable messages are clipped to this magnitude so `atanh` stays finite.
pub const CHECK_MESSAGE_CLIP: f64 = 40.0;

/// Bipartite graph of a parity-check matrix: one edge per nonzero entry,
/// ordered by check then variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    variable_count: usize,
    edges: Vec<(usize, usize)>,
    check_edges: Vec<Vec<usize>>,
    variable_edges: Vec<Vec<usize>>,
}

pub fn build_tanner(h: &BinaryMatrix) -> Result<TannerGraph> {
    if h.is_zero() {
        return Err(invalid("parity-check matrix has no nonzero entries"));
    }
    let mut edges = Vec::with_capacity(h.count_ones());
    let mut check_edges = Vec::with_capacity(h.rows());
    let mut variable_edges = alloc::vec![Vec::new(); h.cols()];
    for c in 0..h.rows() {
        let mut here = Vec::new();
        for v in h.row(c).support() {
            let e = edges.len();
            edges.push((c, v));
            here.push(e);
            variable_edges[v].push(e);
        }
        check_edges.push(here);
    }
    Ok(TannerGraph {
        variable_count: h.cols(),
        edges,
        check_edges,
        variable_edges,
    })
}

impl TannerGraph {
    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn check_count(&self) -> usize {
        self.check_edges.len()
    }

    /// `(check, variable)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn variable_degrees(&self) -> Vec<usize> {
        self.variable_edges.iter().map(Vec::len).collect()
    }

    pub fn check_degrees(&self) -> Vec<usize> {
        self.check_edges.iter().map(Vec::len).collect()
    }

    /// True when every check sees an even number of ones.
    pub fn syndrome_is_zero(&self, word: &BitVector) -> bool {
        self.check_edges.iter().all(|edges| {
            edges
                .iter()
                .filter(|&&e| word.get(self.edges[e].1))
                .count()
                % 2
                == 0
        })
    }

    /// Graphviz rendering: variables `v0..` as circles, checks `c0..` as boxes.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph tanner {{");
        let _ = writeln!(s, "  rankdir=TB;");
        let _ = writeln!(s, "  node [shape=circle];");
        for v in 0..self.variable_count {
            let _ = writeln!(s, "  v{v};");
        }
        let _ = writeln!(s, "  node [shape=box];");
        for c in 0..self.check_count() {
            let _ = writeln!(s, "  c{c};");
        }
        for &(c, v) in &self.edges {
            let _ = writeln!(s, "  c{c} -- v{v};");
        }
        s.push_str("}\n");
        s
    }

    /// Flooding log-domain sum-product. The syndrome of the channel hard
    /// decision is checked first (iteration 0), then after every iteration.
    pub fn decode(&self, llr: &[f64], max_iter: usize) -> Result<BpOutcome> {
        if llr.len() != self.variable_count {
            return Err(invalid(alloc::format!(
                "LLR frame has {} entries, graph has {} variables",
                llr.len(),
                self.variable_count
            )));
        }
        if max_iter == 0 {
            return Err(invalid("max_iter must be at least 1"));
        }
        let hard = |post: &[f64]| {
            let mut w = BitVector::zeros(post.len());
            for (i, &l) in post.iter().enumerate() {
                if l < 0.0 {
                    w.set(i, true);
                }
            }
            w
        };

        let mut codeword = hard(llr);
        if self.syndrome_is_zero(&codeword) {
            return Ok(BpOutcome {
                codeword,
                converged: true,
                iterations: 0,
            });
        }

        let mut to_check: Vec<f64> = self.edges.iter().map(|&(_, v)| llr[v]).collect();
        let mut to_var = alloc::vec![0.0; self.edges.len()];
        let mut posterior = llr.to_vec();
        let mut tanh_buf = Vec::new();

        for iteration in 1..=max_iter {
            for edges in &self.check_edges {
                tanh_buf.clear();
                tanh_buf.extend(edges.iter().map(|&e| libm::tanh(to_check[e] / 2.0)));
                for (j, &e) in edges.iter().enumerate() {
                    let prod: f64 = tanh_buf
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != j)
                        .map(|(_, t)| t)
                        .product();
                    let msg = 2.0 * libm::atanh(prod.clamp(-1.0, 1.0));
                    to_var[e] = msg.clamp(-CHECK_MESSAGE_CLIP, CHECK_MESSAGE_CLIP);
                }
            }
            for (v, edges) in self.variable_edges.iter().enumerate() {
                posterior[v] = llr[v] + edges.iter().map(|&e| to_var[e]).sum::<f64>();
                for &e in edges {
                    to_check[e] = posterior[v] - to_var[e];
                }
            }
            codeword = hard(&posterior);
            if self.syndrome_is_zero(&codeword) {
                return Ok(BpOutcome {
                    codeword,
                    converged: true,
                    iterations: iteration,
                });
            }
        }
        Ok(BpOutcome {
            codeword,
            converged: false,
            iterations: max_iter,
        })
    }
}

/// Codeword-level result of [`TannerGraph::decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpOutcome {
    pub codeword: BitVector,
    pub converged: bool,
    pub iterations: usize,
}

/// Decoded codeword together with the two recovered messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub codeword: BitVector,
    pub converged: bool,
    pub iterations: usize,
    pub msg1: BitVector,
    pub msg2: BitVector,
}

/// BP decoder on the Tanner graph of a Plotkin code.
#[derive(Debug, Clone)]
pub struct PlotkinDecoder {
    code: PlotkinCode,
    graph: TannerGraph,
}

impl PlotkinDecoder {
    pub fn new(code: PlotkinCode) -> Result<Self> {
        let graph = build_tanner(code.inner().parity_check())?;
        Ok(Self { code, graph })
    }

    pub fn code(&self) -> &PlotkinCode {
        &self.code
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    /// Decodes and reads `msg1` from `v₁ = u` and `msg2` from `v₂ = u ⊕ w`.
    /// Non-converged results still carry the final hard decision.
    pub fn decode(&self, llr: &LlrFrame, max_iter: usize) -> Result<DecodeResult> {
        let out = self.graph.decode(&llr.llr, max_iter)?;
        debug_assert!(!out.converged || self.code.inner().is_codeword(&out.codeword));
        let (msg2, msg1) = self.code.extract_messages(&out.codeword)?;
        Ok(DecodeResult {
            codeword: out.codeword,
            converged: out.converged,
            iterations: out.iterations,
            msg1,
            msg2,
        })
    }
}

/// Convenience wrapper matching the graph/LLR/iteration-limit call shape.
pub fn bp_decode(
    code: &PlotkinCode,
    graph: &TannerGraph,
    llr: &LlrFrame,
    max_iter: usize,
) -> Result<DecodeResult> {
    let out = graph.decode(&llr.llr, max_iter)?;
    let (msg2, msg1) = code.extract_messages(&out.codeword)?;
    Ok(DecodeResult {
        codeword: out.codeword,
        converged: out.converged,
        iterations: out.iterations,
        msg1,
        msg2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{gallager_ldpc, plotkin_combine, repetition_code, spc_code};
    use crate::GOLDEN_LDPC_SEED;
    use alloc::vec;

    fn toy() -> PlotkinCode {
        plotkin_combine(&spc_code(8).unwrap(), &repetition_code(8).unwrap()).unwrap()
    }

    fn reference_code() -> PlotkinCode {
        let c2 = gallager_ldpc(20, 7, 6, GOLDEN_LDPC_SEED).unwrap();
        plotkin_combine(&spc_code(20).unwrap(), &c2).unwrap()
    }

    #[test]
    fn spc3_graph() {
        let g = build_tanner(spc_code(3).unwrap().parity_check()).unwrap();
        assert_eq!((g.check_count(), g.variable_count()), (1, 3));
        assert_eq!(g.check_degrees(), vec![3]);
        assert_eq!(g.edges(), &[(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn toy_edge_count_matches_ones() {
        let p = toy();
        let g = build_tanner(p.inner().parity_check()).unwrap();
        assert_eq!(g.edges().len(), p.inner().parity_check().count_ones());
    }

    #[test]
    fn composite_graph_degree_profile() {
        let p = reference_code();
        let g = build_tanner(p.inner().parity_check()).unwrap();
        assert_eq!((g.check_count(), g.variable_count()), (14, 40));
        let deg = g.variable_degrees();
        // First-half variables sit on the SPC check and on H₂; second-half ones on H₂ only.
        assert!(deg[..20].iter().all(|&d| d == 4));
        assert!(deg[20..].iter().all(|&d| d == 3));
    }

    #[test]
    fn empty_matrix_rejected() {
        assert!(build_tanner(&BinaryMatrix::zeros(2, 4)).is_err());
    }

    #[test]
    fn strong_zero_llrs_converge_immediately() {
        let p = toy();
        let dec = PlotkinDecoder::new(p).unwrap();
        let r = dec.decode(&LlrFrame { llr: vec![10.0; 16] }, 50).unwrap();
        assert!(r.converged && r.iterations == 0 && r.codeword.is_zero());
    }

    #[test]
    fn all_zero_llrs_tie_break_to_zero_codeword() {
        let dec = PlotkinDecoder::new(reference_code()).unwrap();
        let r = dec.decode(&LlrFrame { llr: vec![0.0; 40] }, 50).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert!(r.msg1.is_zero() && r.msg2.is_zero());
    }

    #[test]
    fn corrects_a_single_flip() {
        let p = reference_code();
        let dec = PlotkinDecoder::new(p.clone()).unwrap();
        let m1 = BitVector::from_u64(0b101_1001_0110_1100_1011, 19);
        let m2 = BitVector::from_u64(0b1011001, 7);
        let cw = p.encode(&m2, &m1).unwrap();
        let mut llr: Vec<f64> = cw.iter().map(|b| if b { -2.0 } else { 2.0 }).collect();
        llr[25] = -llr[25] * 0.5;
        let r = dec.decode(&LlrFrame { llr }, 50).unwrap();
        assert!(r.converged && r.iterations >= 1);
        assert_eq!(r.codeword, cw);
        assert_eq!((r.msg1, r.msg2), (m1, m2));
    }

    #[test]
    fn length_and_iteration_validation() {
        let dec = PlotkinDecoder::new(toy()).unwrap();
        assert!(dec.decode(&LlrFrame { llr: vec![1.0; 15] }, 50).is_err());
        assert!(dec.decode(&LlrFrame { llr: vec![1.0; 16] }, 0).is_err());
    }

    #[test]
    fn non_converged_reports_hard_decision() {
        let dec = PlotkinDecoder::new(reference_code()).unwrap();
        // Alternating strong signs violate most checks.
        let llr: Vec<f64> = (0..40).map(|i| if i % 3 == 0 { -0.1 } else { 0.1 }).collect();
        let r = dec.decode(&LlrFrame { llr: llr.clone() }, 1).unwrap();
        assert!(r.iterations <= 1);
        if !r.converged {
            assert_eq!(r.codeword.len(), 40);
        }
        let again = dec.decode(&LlrFrame { llr }, 1).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn dot_output_lists_every_edge() {
        let g = build_tanner(spc_code(3).unwrap().parity_check()).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph tanner {"));
        assert_eq!(dot.matches(" -- ").count(), 3);
    }
}
