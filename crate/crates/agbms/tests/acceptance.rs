//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use agbms::agcode::{full_syndromes_from_errors, inject_errors, syndromes, CodeSpec};
use agbms::archsim::{resources, simulate_checked, ArchKind, Architecture, SimOptions};
use agbms::bms::{self, extract_locators, partner_labels, Mode};
use agbms::curve::{BiPoly, MonoIdx};
use agbms::decoder::{chien_search, decode, error_values, DecodeStatus};
use agbms::galois::{FieldElem, Session};
use agbms::oracle::{generic_ratio, ideal_membership, is_generic, random_pattern};
use num_rational::Ratio;

const GOLDEN_ELLIPTIC_LIMIT: Duration = Duration::from_secs(1);
const GOLDEN_KLEIN_LIMIT: Duration = Duration::from_secs(1);
const GOLDEN_HERMITIAN_LIMIT: Duration = Duration::from_secs(2);
const INVERSION_TRIALS: usize = 1000;
const MODE_TRIALS: usize = 200;
const INVARIANT_TRIALS: usize = 50;
const FULL_SYNDROME_TRIALS: usize = 500;
const FULL_SYNDROME_MAX_WEIGHT: usize = 3;
const RATIO_TRIALS: usize = 20_000;
const RATIO_TOL_GF8: f64 = 0.04;
const RATIO_TOL_GF16: f64 = 0.03;
const ARCH_TRIALS: usize = 50;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Terms given as (coefficient log, n1, n2), i.e. alpha^c x^n1 y^n2.
fn poly(code: &CodeSpec, terms: &[(i64, u32, u32)]) -> BiPoly {
    let f = code.field();
    BiPoly::from_terms(&terms.iter().map(|&(c, n1, n2)| (MonoIdx::new(n1, n2), f.alpha_pow(c))).collect::<Vec<_>>())
}

fn sorted_errors(locs: &[usize], vals: &[FieldElem]) -> Vec<(usize, FieldElem)> {
    let mut v: Vec<_> = locs.iter().copied().zip(vals.iter().copied()).collect();
    v.sort();
    v
}

fn criterion1() -> Outcome {
    let sc = common::elliptic();
    let code = &sc.code;
    let start = Instant::now();
    let r = decode(code, &sc.received());
    let took = start.elapsed();
    let loc = r.locators.as_ref().ok_or("no locators")?;
    let f0 = poly(code, &[(13, 2, 0), (13, 0, 1), (12, 1, 0), (2, 0, 0)]);
    let f1 = poly(code, &[(13, 1, 1), (11, 2, 0), (10, 0, 1), (2, 1, 0), (4, 0, 0)]);
    let g0 = poly(code, &[(10, 1, 0), (14, 0, 0)]);
    let g1 = poly(code, &[(4, 0, 1), (2, 1, 0)]);
    ensure!(loc.f == vec![f0, f1], "F mismatch: {:?}", loc.f);
    ensure!(loc.g == vec![g0, g1], "G mismatch: {:?}", loc.g);
    ensure!(r.status == DecodeStatus::Success, "status {}", r.status);
    let e = sc.errors();
    ensure!(sorted_errors(&r.error_locs, &r.error_vals) == sorted_errors(&e.locs, &e.vals), "errors {:?}", r.error_locs);
    ensure!(took < GOLDEN_ELLIPTIC_LIMIT, "took {took:?}");
    Ok(format!("F_9, G_9 exact, 3 errors recovered in {took:?}"))
}

fn criterion2() -> Outcome {
    let sc = common::klein();
    let code = &sc.code;
    let start = Instant::now();
    let synd = syndromes(code, &sc.received()).map_err(|e| e.to_string())?;
    let tr = simulate_checked(code, &synd, ArchKind::Serial, SimOptions::default()).map_err(|e| e.to_string())?;
    let loc = tr.locators(code).map_err(|e| e.to_string())?;
    let locs = chien_search(code, &loc);
    let mut s = Session::new(code.field());
    let u00 = synd.get(MonoIdx::new(0, 0)).unwrap_or(FieldElem::ZERO);
    let vals = error_values(code, &locs, &loc, true, u00, &mut s).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let f = vec![
        poly(code, &[(0, 3, 0), (0, 2, 0), (3, 1, 1), (2, 1, 0), (1, 0, 0)]),
        poly(code, &[(0, 2, 1), (1, 2, 0), (6, 1, 1), (2, 1, 0), (6, 0, 0)]),
        poly(code, &[(0, 1, 2), (2, 2, 0), (0, 1, 1), (6, 1, 0), (5, 0, 0)]),
    ];
    let g = vec![poly(code, &[(4, 1, 1), (6, 1, 0), (6, 0, 0)]), BiPoly::zero(), poly(code, &[(4, 2, 0), (6, 1, 0), (4, 0, 0)])];
    ensure!(loc.f == f, "F mismatch: {:?}", loc.f);
    ensure!(partner_labels(&code.curve, &loc.g, code.m) == g, "G mismatch: {:?}", loc.g);
    let e = sc.errors();
    ensure!(sorted_errors(&locs, &vals) == sorted_errors(&e.locs, &e.vals), "errors {locs:?} {vals:?}");
    ensure!(took < GOLDEN_KLEIN_LIMIT, "took {took:?}");
    Ok(format!("serial division run: F_16, G_16 exact (G^(1) = 0), errors 1,2,5,4 in {took:?}"))
}

fn criterion3() -> Outcome {
    let sc = common::hermitian();
    let code = &sc.code;
    let start = Instant::now();
    let r = decode(code, &sc.received());
    let took = start.elapsed();
    let loc = r.locators.as_ref().ok_or("no locators")?;
    let f0 = poly(code, &[(11, 3, 0), (10, 1, 1), (8, 2, 0), (2, 0, 1), (1, 1, 0), (2, 0, 0)]);
    ensure!(loc.f[0] == f0, "F^(0) mismatch: {:?}", loc.f[0]);
    ensure!(r.status == DecodeStatus::Success, "status {}", r.status);
    let e = sc.errors();
    ensure!(sorted_errors(&r.error_locs, &r.error_vals) == sorted_errors(&e.locs, &e.vals), "errors {:?}", r.error_locs);
    ensure!(took < GOLDEN_HERMITIAN_LIMIT, "took {took:?}");
    Ok(format!("F_25^(0) exact, 5 errors recovered in {took:?}"))
}

fn criterion4() -> Outcome {
    let mut runs = 0;
    for code in common::codes() {
        let w = code.field().w() as u64;
        let mut rng = common::rng(0x4000 + code.n as u64);
        for _ in 0..INVERSION_TRIALS {
            let c = common::random_codeword(&code, &mut rng);
            let e = random_pattern(&code, rng_weight(&code, &mut rng), &mut rng);
            let r = decode(&code, &inject_errors(&code, &c, &e).map_err(|e| e.to_string())?);
            ensure!(r.bms_ops.invs == 0, "inversion inside BMS (n = {})", code.n);
            ensure!(r.eval_ops.inv_muls == r.eval_ops.invs * (2 * w - 3), "inversion cost off (n = {})", code.n);
            runs += 1;
        }
    }
    Ok(format!("{runs} decodes, 0 BMS inversions, each evaluation inversion = 2w-3 multiplications"))
}

fn rng_weight(code: &CodeSpec, rng: &mut impl rand::Rng) -> usize {
    rng.gen_range(0..=code.t_generic() + 1)
}

fn modes_agree(code: &CodeSpec, synd: &agbms::agcode::SyndromeTable, locs: &[usize]) -> Result<(), String> {
    let (a, _, _) = common::trajectory(code, synd, Mode::InverseFree, code.m);
    let (b, _, _) = common::trajectory(code, synd, Mode::Division, code.m);
    for (x, y) in a.iter().zip(&b) {
        ensure!(x.s1() == y.s1() && x.c1() == y.c1(), "(s,c) differ at N = {}", x.n);
    }
    let la = extract_locators(a.last().unwrap(), &code.curve).map_err(|e| e.to_string())?;
    let lb = extract_locators(b.last().unwrap(), &code.curve).map_err(|e| e.to_string())?;
    ensure!(la.s_final == lb.s_final, "delta sets differ");
    for f in la.f.iter().chain(&lb.f) {
        ensure!(ideal_membership(code, f, locs), "basis does not vanish on E");
    }
    Ok(())
}

fn criterion5() -> Outcome {
    let mut runs = 0;
    for sc in common::scenarios() {
        let synd = syndromes(&sc.code, &sc.received()).map_err(|e| e.to_string())?;
        modes_agree(&sc.code, &synd, &sc.errors().locs).map_err(|e| format!("{}: {e}", sc.name))?;
        runs += 1;
    }
    for code in common::codes() {
        let mut rng = common::rng(0x5000 + code.n as u64);
        for _ in 0..MODE_TRIALS {
            let e = common::generic_pattern_upto(&code, code.t_generic(), &mut rng);
            let synd = syndromes(&code, &e.to_word(code.n)).map_err(|e| e.to_string())?;
            modes_agree(&code, &synd, &e.locs).map_err(|err| format!("n = {} locs {:?}: {err}", code.n, e.locs))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} scenarios, identical (s,c) trajectories and equal footprints"))
}

fn criterion6() -> Outcome {
    let mut runs = 0;
    for sc in common::scenarios() {
        let synd = syndromes(&sc.code, &sc.received()).map_err(|e| e.to_string())?;
        for mode in [Mode::InverseFree, Mode::Division] {
            common::check_invariants(&sc.code, &synd, mode).map_err(|e| format!("{} {mode}: {e}", sc.name))?;
            runs += 1;
        }
    }
    for code in common::codes() {
        let mut rng = common::rng(0x6000 + code.n as u64);
        for _ in 0..INVARIANT_TRIALS {
            let c = common::random_codeword(&code, &mut rng);
            let e = common::generic_pattern_upto(&code, code.t_generic(), &mut rng);
            let synd = syndromes(&code, &inject_errors(&code, &c, &e).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            common::check_invariants(&code, &synd, Mode::InverseFree).map_err(|err| format!("n = {}: {err}", code.n))?;
            runs += 1;
        }
    }
    Ok(format!("degree, discrepancy, chain, minimality and s1 = c1 + 1 at every N on {runs} runs"))
}

fn criterion7() -> Outcome {
    let codes = common::codes();
    let mut runs = 0;
    let mut generic_runs = 0;
    for code in &codes[..2] {
        let curve = &code.curve;
        let (g, a) = (curve.genus() as i64, curve.a() as i64);
        let mut rng = common::rng(0x7000 + code.n as u64);
        for t in 1..=FULL_SYNDROME_MAX_WEIGHT {
            let b = 2 * t as i64 + 4 * g - 2 + a;
            for _ in 0..FULL_SYNDROME_TRIALS {
                let e = random_pattern(code, t, &mut rng);
                let synd = full_syndromes_from_errors(code, &e, b);
                let mut s = Session::new(code.field());
                let st = bms::run(curve, &synd, Mode::InverseFree, b, &mut s).map_err(|e| e.to_string())?;
                let loc = extract_locators(&st, curve).map_err(|e| e.to_string())?;
                ensure!(loc.f.iter().all(|f| ideal_membership(code, f, &e.locs)), "V(u,B) basis off E: {:?}", e.locs);
                ensure!(loc.delta_size(curve) == t, "footprint {} for t = {t}: {:?}", loc.delta_size(curve), e.locs);
                runs += 1;
                if is_generic(code, &e.locs).is_generic {
                    let short = 2 * t as i64 + 2 * g + a - 2;
                    let st = bms::run(curve, &synd, Mode::InverseFree, short, &mut s).map_err(|e| e.to_string())?;
                    let loc = extract_locators(&st, curve).map_err(|e| e.to_string())?;
                    ensure!(loc.f.iter().all(|f| ideal_membership(code, f, &e.locs)), "truncated basis off E: {:?}", e.locs);
                    ensure!(loc.delta_size(curve) == t, "truncated footprint for t = {t}: {:?}", e.locs);
                    generic_runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} patterns to B = 2t+4g-2+a, {generic_runs} generic ones truncated at m+a-1, 0 violations"))
}

fn criterion8() -> Outcome {
    let klein = agbms::presets::klein_gf8();
    let ell = agbms::presets::elliptic_gf16();
    let r8 = generic_ratio(&klein, klein.t_generic(), RATIO_TRIALS, 8);
    let r16 = generic_ratio(&ell, ell.t_generic(), RATIO_TRIALS, 16);
    let msg = format!(
        "GF(8) t={}: {:.4} vs {:.4}; GF(16) t={}: {:.4} vs {:.4}; {} trials each",
        klein.t_generic(),
        r8.estimate,
        r8.expected,
        ell.t_generic(),
        r16.estimate,
        r16.expected,
        RATIO_TRIALS
    );
    ensure!((r8.estimate - 7.0 / 8.0).abs() <= RATIO_TOL_GF8, "{msg}");
    ensure!((r16.estimate - 15.0 / 16.0).abs() <= RATIO_TOL_GF16, "{msg}");
    Ok(msg)
}

fn criterion9() -> Outcome {
    let setups = [
        (common::elliptic(), ArchKind::InverseFree, 11u64),
        (common::klein(), ArchKind::Serial, 54),
        (common::hermitian(), ArchKind::SerialInverseFree, 112),
    ];
    let mut runs = 0;
    for (sc, arch, period) in setups {
        let code = &sc.code;
        let synd = syndromes(code, &sc.received()).map_err(|e| e.to_string())?;
        let tr = simulate_checked(code, &synd, arch, SimOptions::default()).map_err(|e| format!("{}: {e}", arch.name()))?;
        ensure!(tr.period == period, "{} period {}", arch.name(), tr.period);
        ensure!(tr.total_clocks == (code.m as u64 + 1) * period, "{} total {}", arch.name(), tr.total_clocks);
        runs += 1;
        let mut rng = common::rng(0x9000 + period);
        for _ in 0..ARCH_TRIALS {
            let c = common::random_codeword(code, &mut rng);
            let e = common::generic_pattern_upto(code, code.t_generic(), &mut rng);
            let synd = syndromes(code, &inject_errors(code, &c, &e).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let tr = simulate_checked(code, &synd, arch, SimOptions::default()).map_err(|e| format!("{}: {e}", arch.name()))?;
            ensure!(tr.max_mults_per_clock <= tr.mult_budget, "{} over multiplier budget", arch.name());
            runs += 1;
        }
    }
    Ok(format!("{runs} simulations equal the reference at every boundary; periods 11/54/112"))
}

fn criterion10() -> Outcome {
    let int = Ratio::from_integer;
    for code in common::codes() {
        let (a, m) = (code.curve.a() as i64, code.m);
        let r = |x| resources(x, a, m);
        let regs = int(2 * a * (m + 2));
        let expect = [
            (Architecture::InverseFree, int(2 * a), int(0)),
            (Architecture::Serial, int(2), int(1)),
            (Architecture::SerialInverseFree, int(2), int(0)),
        ];
        for (arch, mults, invs) in expect {
            let e = r(arch);
            ensure!(e.multipliers == mults && e.inverters == invs && e.registers == regs, "{arch}: {e:?}");
            ensure!(e.multipliers.is_integer() && e.registers.is_integer(), "{arch} not integral");
        }
        let k = r(Architecture::Koetter);
        ensure!(k.multipliers == int(3 * a) && k.inverters == int(a), "koetter: {k:?}");
    }
    Ok("closed forms 2a/2/2 multipliers, 0/1/0 inverters, 2a(m+2) registers, Koetter 3a and a".to_string())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("golden decode, elliptic", criterion1),
        ("golden decode, Klein", criterion2),
        ("golden decode, Hermitian", criterion3),
        ("zero inversions", criterion4),
        ("mode equivalence", criterion5),
        ("BMS invariants", criterion6),
        ("full-syndrome ideal", criterion7),
        ("generic ratio", criterion8),
        ("architecture equivalence", criterion9),
        ("resource table", criterion10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
