mod common;

use agbms::agcode::{inject_errors, is_codeword, syndromes, Word};
use agbms::bms::{LocatorOutput, Mode};
use agbms::curve::{BiPoly, MonoIdx};
use agbms::decoder::{chien_search, decode, decode_with, error_values_syndrome, DecodeStatus, Evaluator};
use agbms::galois::{FieldElem, Session};
use agbms::oracle::{is_generic, random_pattern};
use proptest::prelude::*;

#[test]
fn reference_scenarios_decode() {
    for sc in common::scenarios() {
        for mode in [Mode::InverseFree, Mode::Division] {
            let r = decode_with(&sc.code, &sc.received(), mode);
            let e = sc.errors();
            assert_eq!(r.status, DecodeStatus::Success, "{} {mode}", sc.name);
            assert_eq!(r.evaluator, Some(Evaluator::OSullivan), "{} {mode}", sc.name);
            let mut got: Vec<_> = r.error_locs.iter().copied().zip(r.error_vals.iter().copied()).collect();
            let mut want: Vec<_> = e.locs.iter().copied().zip(e.vals.iter().copied()).collect();
            got.sort();
            want.sort();
            assert_eq!(got, want, "{} {mode}", sc.name);
            assert_eq!(r.corrected, Word::zero(sc.code.n));
        }
    }
}

#[test]
fn zero_errors() {
    for code in common::codes() {
        let mut rng = common::rng(3);
        let c = common::random_codeword(&code, &mut rng);
        let r = decode(&code, &c);
        assert_eq!(r.status, DecodeStatus::Success);
        assert!(r.error_locs.is_empty());
        assert_eq!(r.corrected, c);
    }
}

#[test]
fn chien_on_constant_basis_is_empty() {
    let code = common::elliptic().code;
    let one = BiPoly::constant(FieldElem::ONE);
    let basis = LocatorOutput {
        f: vec![one.clone(), one],
        g: vec![BiPoly::zero(), BiPoly::zero()],
        lead_f: vec![FieldElem::ONE; 2],
        head_e: vec![FieldElem::ONE; 2],
        s_final: vec![MonoIdx::new(0, 0), MonoIdx::new(0, 1)],
        c_final: vec![-1, -1],
        t_deg: vec![None, None],
    };
    assert!(chien_search(&code, &basis).is_empty());
}

#[test]
fn inversions_only_after_bms() {
    for sc in common::scenarios() {
        let r = decode(&sc.code, &sc.received());
        let w = sc.code.field().w() as u64;
        assert_eq!(r.bms_ops.invs, 0, "{}", sc.name);
        assert!(r.eval_ops.invs > 0);
        assert_eq!(r.eval_ops.inv_muls, r.eval_ops.invs * (2 * w - 3));
    }
}

#[test]
fn syndrome_solver_matches_reference_values() {
    for sc in common::scenarios() {
        let e = sc.errors();
        let synd = syndromes(&sc.code, &sc.received()).unwrap();
        let mut s = Session::new(sc.code.field());
        assert_eq!(error_values_syndrome(&sc.code, &e.locs, &synd, &mut s).unwrap(), e.vals, "{}", sc.name);
        assert_eq!(s.ops.inv_muls, s.ops.invs * (2 * sc.code.field().w() as u64 - 3));
    }
}

/// Some pattern whose locations fail the genericity test and which the
/// decoder does not report as corrected.
#[test]
fn non_generic_pattern_is_not_success() {
    let code = common::elliptic().code;
    let mut rng = common::rng(11);
    let mut found = None;
    for _ in 0..20_000 {
        let e = random_pattern(&code, 2, &mut rng);
        if is_generic(&code, &e.locs).is_generic {
            continue;
        }
        if decode(&code, &e.to_word(code.n)).status != DecodeStatus::Success {
            found = Some(e);
            break;
        }
    }
    let e = found.expect("a non-generic 2-error pattern that does not decode");
    // two points over the same x
    assert_eq!(code.curve.eval_monomial(MonoIdx::new(1, 0), code.points[e.locs[0]]),
               code.curve.eval_monomial(MonoIdx::new(1, 0), code.points[e.locs[1]]));
}

#[test]
fn wrong_length_word_fails() {
    let code = common::elliptic().code;
    let r = decode(&code, &Word { symbols: vec![FieldElem::ZERO; 3] });
    assert_eq!(r.status, DecodeStatus::Failure);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn generic_round_trip(which in 0usize..3, seed in any::<u64>(), mode in prop_oneof![Just(Mode::InverseFree), Just(Mode::Division)]) {
        let code = &common::codes()[which];
        let mut rng = common::rng(seed);
        let c = common::random_codeword(code, &mut rng);
        let e = common::generic_pattern_upto(code, code.t_generic(), &mut rng);
        let r = decode_with(code, &inject_errors(code, &c, &e).unwrap(), mode);
        prop_assert_eq!(r.status, DecodeStatus::Success);
        prop_assert_eq!(&r.corrected, &c);
        prop_assert_eq!(&r.error_locs, &e.locs);
        prop_assert_eq!(r.bms_ops.invs == 0, mode == Mode::InverseFree);
    }

    #[test]
    fn success_implies_codeword(which in 0usize..3, seed in any::<u64>(), extra in 0usize..3) {
        let code = &common::codes()[which];
        let mut rng = common::rng(seed);
        let e = random_pattern(code, code.t_generic() + extra, &mut rng);
        let r = decode(code, &e.to_word(code.n));
        if r.status == DecodeStatus::Success {
            prop_assert!(is_codeword(code, &r.corrected));
            prop_assert!(r.error_locs.len() <= code.t_generic());
        } else {
            prop_assert!(r.error_locs.is_empty());
        }
    }
}
