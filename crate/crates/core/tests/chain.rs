use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supercast_core::channel::NoiseParams;
use supercast_core::codes::{gallager_ldpc, ml_decode, plotkin_combine, repetition_code, spc_code, PlotkinCode};
use supercast_core::decoder::{PlotkinDecoder, DEFAULT_MAX_ITER};
use supercast_core::gf2::BitVector;
use supercast_core::link::{random_bits, ChannelKind, LinkConfig, System};
use supercast_core::modem::{demap, LlrFrame, SignalSet};
use supercast_core::stbc::Pairing;
use supercast_core::GOLDEN_LDPC_SEED;

fn composite() -> PlotkinCode {
    let c2 = gallager_ldpc(20, 7, 6, GOLDEN_LDPC_SEED).unwrap();
    plotkin_combine(&spc_code(20).unwrap(), &c2).unwrap()
}

fn toy() -> PlotkinCode {
    plotkin_combine(&spc_code(8).unwrap(), &repetition_code(8).unwrap()).unwrap()
}

#[test]
fn noiseless_alamouti_round_trip_with_random_block_gains() {
    let sys = System::new(composite()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (pairing, block_len) in [(Pairing::OffsetN, None), (Pairing::Adjacent, Some(4))] {
        let cfg = LinkConfig {
            channel: ChannelKind::Rayleigh,
            alamouti: true,
            pairing,
            block_len,
            ..LinkConfig::default()
        };
        for _ in 0..1000 {
            let m1 = random_bits(&mut rng, 19);
            let m2 = random_bits(&mut rng, 7);
            let out = sys
                .run_superposition(&cfg, NoiseParams::noiseless(), &m2, &m1, &mut rng)
                .unwrap();
            assert_eq!((out.errors_high, out.errors_low), (0, 0));
            assert!(out.converged);
        }
    }
}

#[test]
fn toy_code_noiseless_identifiability() {
    let code = toy();
    let sys = System::new(code.clone()).unwrap();
    let cfg = LinkConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for m in 0..1u64 << 8 {
        let m1 = BitVector::from_u64(m & 0x7f, 7);
        let m2 = BitVector::from_u64(m >> 7, 1);
        let out = sys
            .run_superposition(&cfg, NoiseParams::noiseless(), &m2, &m1, &mut rng)
            .unwrap();
        assert_eq!(out.iterations, 0);
        assert!(!out.block_error);
    }
}

#[test]
fn bp_agrees_with_ml_on_the_toy_code() {
    let code = toy();
    let dec = PlotkinDecoder::new(code.clone()).unwrap();
    let set = SignalSet::qpsk_partition();
    let noise = NoiseParams::from_ebn0_db(6.0, 8, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut converged, mut agree) = (0, 0);
    while converged < 500 {
        let m1 = random_bits(&mut rng, 7);
        let m2 = random_bits(&mut rng, 1);
        let (v1, v2) = code.encode_parts(&m2, &m1).unwrap();
        let (f1, f2) = set.map_sources(&v1, &v2).unwrap();
        let x = supercast_core::modem::superpose(&f1, &f2, 1.0.into(), 1.0.into()).unwrap();
        let y = supercast_core::channel::awgn(&x, noise, &mut rng);
        let llr = demap(&y, 1.0.into(), 1.0.into(), noise.sigma2(), Default::default()).unwrap();
        let out = dec.decode(&llr, DEFAULT_MAX_ITER).unwrap();
        if out.converged {
            converged += 1;
            agree += usize::from(out.codeword == ml_decode(code.inner(), &llr.llr).unwrap());
        }
    }
    assert!(agree * 100 >= 95 * converged, "{agree}/{converged}");
}

#[test]
fn bler_is_monotone_in_snr() {
    let sys = System::new(composite()).unwrap();
    let cfg = LinkConfig::default();
    let bler = |ebn0: f64| {
        let noise = NoiseParams::from_ebn0_db(ebn0, 26, 40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        (0..10_000)
            .filter(|_| sys.simulate_frame(&cfg, noise, &mut rng).unwrap().block_error)
            .count()
    };
    let rates: Vec<usize> = [2.0, 4.0, 6.0, 8.0].into_iter().map(bler).collect();
    for w in rates.windows(2) {
        assert!(w[1] <= w[0], "{rates:?}");
    }
}

#[test]
fn single_active_node_is_plain_fading() {
    // With node 2 silent, Alamouti combining collapses to |h1|²-weighted
    // reception of source 1 alone.
    use supercast_core::channel::{transmit, ChannelRealization, CsiEstimate, FadingGains};
    use supercast_core::modem::{ComplexSymbol, SymbolFrame};
    use supercast_core::stbc::{alamouti_schedule, mrc_combine};

    let h1 = ComplexSymbol::new(0.3, -1.1);
    let truth = ChannelRealization::new(
        8,
        vec![FadingGains {
            h1,
            h2: ComplexSymbol::new(0.0, 0.0),
        }],
    )
    .unwrap();
    let f1 = SymbolFrame::received(vec![ComplexSymbol::new(0.5, 0.0), ComplexSymbol::new(-0.5, 0.0), ComplexSymbol::new(0.5, 0.0), ComplexSymbol::new(0.5, 0.0)]);
    let f2 = SymbolFrame::received(vec![ComplexSymbol::new(0.0, 0.5); 4]);
    let tx = alamouti_schedule(&f1, &f2, Pairing::OffsetN).unwrap();
    let y = transmit(&tx.node1_tx, &tx.node2_tx, &truth).unwrap();
    let comb = mrc_combine(&y, &CsiEstimate::perfect(&truth), Pairing::OffsetN).unwrap();
    for (i, s) in comb.s1_tilde.iter().enumerate() {
        let g = h1.norm_sqr();
        assert!((s - f1.symbols[i] * g).norm() < 1e-12);
        assert!((comb.s2_tilde[i] - f2.symbols[i] * g).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encoding_is_linear(a1 in any::<u32>(), a2 in any::<u8>(), b1 in any::<u32>(), b2 in any::<u8>()) {
        let code = composite();
        let (a1, b1) = (BitVector::from_u64(a1 as u64 & 0x7ffff, 19), BitVector::from_u64(b1 as u64 & 0x7ffff, 19));
        let (a2, b2) = (BitVector::from_u64(a2 as u64 & 0x7f, 7), BitVector::from_u64(b2 as u64 & 0x7f, 7));
        let ca = code.encode(&a2, &a1).unwrap();
        let cb = code.encode(&b2, &b1).unwrap();
        let cs = code.encode(&a2.xor(&b2), &a1.xor(&b1)).unwrap();
        prop_assert_eq!(ca.xor(&cb), cs);
        prop_assert!(code.inner().is_codeword(&ca));
        prop_assert_eq!(code.extract_messages(&ca).unwrap(), (a2, a1));
    }

    #[test]
    fn converged_decodes_are_codewords(seed in any::<u64>(), scale in 0.1f64..4.0, max_iter in 1usize..60) {
        let code = composite();
        let dec = PlotkinDecoder::new(code.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let llr = LlrFrame { llr: (0..40).map(|_| scale * rng.random_range(-1.0..1.5)).collect() };
        let out = dec.decode(&llr, max_iter).unwrap();
        prop_assert!(out.iterations <= max_iter);
        if out.converged {
            prop_assert!(code.inner().is_codeword(&out.codeword));
        }
        prop_assert_eq!(dec.decode(&llr, max_iter).unwrap(), out);
    }
}
