#![allow(dead_code)]

use agbms::agcode::{encode, CodeSpec, ErrorPattern, SyndromeTable, Word};
use agbms::bms::{discrepancy_direct, extract_locators, init_state, BmsState, Mode, StepRecord};
use agbms::curve::{BiPoly, Curve, MonoIdx};
use agbms::oracle::min_degree;
use agbms::curve::RationalPoint;

use agbms::galois::{FieldElem, Session};
use agbms::oracle::{is_generic, random_pattern};
use agbms::presets;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An error pattern given by point coordinates in log notation (-1 = 0).
pub struct Scenario {
    pub name: &'static str,
    pub code: CodeSpec,
    pub points: Vec<(i32, i32)>,
    pub vals: Vec<i32>,
    pub mode: Mode,
}

impl Scenario {
    pub fn errors(&self) -> ErrorPattern {
        let f = self.code.field();
        let locs = self
            .points
            .iter()
            .map(|&(x, y)| {
                let p = RationalPoint::Affine { x: f.elem(x).unwrap(), y: f.elem(y).unwrap() };
                self.code.point_index(p).expect("point on curve")
            })
            .collect();
        ErrorPattern { locs, vals: self.vals.iter().map(|&v| f.elem(v).unwrap()).collect() }
    }

    pub fn received(&self) -> Word {
        self.errors().to_word(self.code.n)
    }
}

pub fn elliptic() -> Scenario {
    Scenario {
        name: "elliptic",
        code: presets::elliptic_gf16(),
        points: vec![(3, 7), (9, 11), (14, 4)],
        vals: vec![6, 8, 11],
        mode: Mode::InverseFree,
    }
}

pub fn klein() -> Scenario {
    Scenario {
        name: "klein",
        code: presets::klein_gf8(),
        points: vec![(0, 1), (1, 0), (2, 0), (3, 3)],
        vals: vec![1, 2, 5, 4],
        mode: Mode::Division,
    }
}

pub fn hermitian() -> Scenario {
    Scenario {
        name: "hermitian",
        code: presets::hermitian_gf16(),
        points: vec![(-1, 0), (5, 3), (9, 8), (10, 13), (12, 2)],
        vals: vec![11, 13, 2, 12, 9],
        mode: Mode::InverseFree,
    }
}

pub fn scenarios() -> Vec<Scenario> {
    vec![elliptic(), klein(), hermitian()]
}

pub fn codes() -> Vec<CodeSpec> {
    vec![presets::elliptic_gf16(), presets::klein_gf8(), presets::hermitian_gf16()]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_codeword<R: Rng>(code: &CodeSpec, rng: &mut R) -> Word {
    let order = code.field().order() as i64;
    let msg: Vec<FieldElem> = (0..code.dimension())
        .map(|_| {
            let k = rng.gen_range(-1..order);
            if k < 0 {
                FieldElem::ZERO
            } else {
                code.field().alpha_pow(k)
            }
        })
        .collect();
    encode(code, &msg).unwrap()
}

/// Random generic pattern of the given weight (rejection sampling).
pub fn generic_pattern<R: Rng>(code: &CodeSpec, weight: usize, rng: &mut R) -> ErrorPattern {
    loop {
        let e = random_pattern(code, weight, rng);
        if is_generic(code, &e.locs).is_generic {
            return e;
        }
    }
}

/// Random generic pattern of weight 1..=max.
pub fn generic_pattern_upto<R: Rng>(code: &CodeSpec, max: usize, rng: &mut R) -> ErrorPattern {
    let w = rng.gen_range(1..=max);
    generic_pattern(code, w, rng)
}

/// The syndrome values the BMS initializer actually reads: entries at
/// monomials that are not functions on the curve are zero.
pub fn bms_view(code: &CodeSpec, synd: &SyndromeTable) -> SyndromeTable {
    let c = &code.curve;
    let mut t = synd.clone();
    for (l, v) in t.u.iter_mut() {
        if !c.is_regular(*l) || c.spec().excluded.contains(l) {
            *v = FieldElem::ZERO;
        }
    }
    t
}

/// States at every boundary N = 0..=n_max+1, with the record of the loop
/// that followed each (None for the last).
pub fn trajectory(code: &CodeSpec, synd: &SyndromeTable, mode: Mode, n_max: i64) -> (Vec<BmsState>, Vec<StepRecord>, u64) {
    let f = code.field();
    let mut s = Session::new(f);
    let mut st = init_state(&code.curve, synd, mode, n_max).unwrap();
    let mut states = vec![st.clone()];
    let mut recs = Vec::new();
    while st.n <= n_max {
        recs.push(st.step(&code.curve, &mut s).unwrap());
        states.push(st.clone());
    }
    (states, recs, s.ops.invs)
}

pub fn row_start(curve: &Curve, i: u32) -> i64 {
    (0..).find(|&n1| curve.is_canonical(MonoIdx::new(n1, i))).unwrap() as i64
}

/// z^(l^(s2) - s) is a function on the curve, so the discrepancy at l is a
/// constraint on F.
pub fn shift_is_function(curve: &Curve, f: &BiPoly, l: MonoIdx) -> bool {
    let Some(s) = curve.degree(f) else { return true };
    match curve.l_of(s.n2, curve.pole_order(l)) {
        Some(ls) if ls.n1 >= s.n1 => curve.is_canonical(MonoIdx::new(ls.n1 - s.n1, ls.n2 - s.n2)),
        _ => true,
    }
}

/// Degree, zero-discrepancy, chain, minimality and s1 = c1 + 1 at every
/// boundary of one run.
pub fn check_invariants(code: &CodeSpec, synd: &SyndromeTable, mode: Mode) -> Result<(), String> {
    let curve = &code.curve;
    let view = bms_view(code, synd);
    let (states, recs, _) = trajectory(code, synd, mode, code.m);
    for (k, st) in states.iter().enumerate() {
        let n = st.n;
        let loc = extract_locators(st, curve).map_err(|e| format!("N={n}: {e}"))?;
        for (i, f) in loc.f.iter().enumerate() {
            let s1 = st.blocks[i].s1;
            // degree
            if curve.degree(f) != Some(MonoIdx::new(s1 as u32, i as u32)) {
                return Err(format!("N={n} i={i}: deg F = {:?}, s1 = {s1}", curve.degree(f)));
            }
            // zero discrepancies so far
            for l in curve.phi_set(0, curve.a(), n - 1) {
                if !shift_is_function(curve, f, l) {
                    continue;
                }
                let d = discrepancy_direct(curve, f, &view, l).map_err(|e| e.to_string())?;
                if !d.is_zero() {
                    return Err(format!("N={n} i={i}: discrepancy at {l:?} is {d:?}"));
                }
            }
            // step discrepancy = direct discrepancy at l^(i)
            if let Some(rec) = recs.get(k) {
                let direct = match curve.l_of(i as u32, n) {
                    Some(l) if s1 <= l.n1 as i64 => discrepancy_direct(curve, f, &view, l).map_err(|e| e.to_string())?,
                    _ => FieldElem::ZERO,
                };
                if rec.d[i] != direct {
                    return Err(format!("N={n} i={i}: step d {:?} vs direct {:?}", rec.d[i], direct));
                }
            }
            // minimal degree
            if min_degree(curve, &view, i as u32, n, s1) != Some(s1) {
                return Err(format!("N={n} i={i}: minimal degree {:?} vs s1 {s1}", min_degree(curve, &view, i as u32, n, s1)));
            }
        }
        let s1 = st.s1();
        // chain; rows start at their first basis monomial
        let rel: Vec<i64> = (0..curve.a()).map(|i| s1[i as usize] - row_start(curve, i)).collect();
        if rel.windows(2).any(|w| w[0] < w[1]) {
            return Err(format!("N={n}: s1 chain {s1:?}"));
        }
        if st.c1().iter().zip(&s1).any(|(c, s)| *s != c + 1) {
            return Err(format!("N={n}: s1 {s1:?} c1 {:?}", st.c1()));
        }
    }
    Ok(())
}
