//! Linear-algebra ground truth: genericity, footprints, Groebner bases by
//! solving linear systems, and minimal-degree checks.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::agcode::{CodeSpec, ErrorPattern, SyndromeTable};
use crate::curve::{BiPoly, Curve, MonoIdx, RationalPoint};
use crate::galois::FieldElem;
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("error locations are not generic")]
    NotGeneric,
    #[error("need at least one location")]
    Empty,
}

/// Smallest m with dim L(mP) = t.
pub fn m_t(curve: &Curve, t: usize) -> i64 {
    (0..).find(|&m| curve.count_nongaps(m) == t).expect("non-gaps are unbounded")
}

/// The first t basis monomials in pole order.
pub fn first_nongaps(curve: &Curve, t: usize) -> Vec<MonoIdx> {
    curve.code_basis(m_t(curve, t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub is_generic: bool,
    pub m_t: i64,
    /// Footprint of I(E) under the pole order.
    pub delta_set: BTreeSet<MonoIdx>,
    pub det_nonzero: bool,
}

fn eval_matrix(curve: &Curve, monos: &[MonoIdx], pts: &[RationalPoint]) -> Matrix {
    Matrix::from_rows(pts.iter().map(|&p| monos.iter().map(|&l| curve.eval_monomial(l, p)).collect()).collect())
}

/// Monomials whose evaluation vectors on `pts` are independent of all
/// smaller ones: the footprint of the ideal of `pts`.
pub fn footprint(curve: &Curve, pts: &[RationalPoint]) -> BTreeSet<MonoIdx> {
    let t = pts.len();
    let mut chosen: Vec<MonoIdx> = Vec::new();
    let mut out = BTreeSet::new();
    let mut m = 0;
    while out.len() < t {
        if let Some(l) = curve.mono_of_order(m) {
            let mut trial = chosen.clone();
            trial.push(l);
            if eval_matrix(curve, &trial, pts).rank(curve.field()) == trial.len() {
                chosen = trial;
                out.insert(l);
            }
        }
        m += 1;
    }
    out
}

pub fn is_generic(code: &CodeSpec, locs: &[usize]) -> GenericityReport {
    let curve = &code.curve;
    let t = locs.len();
    let pts: Vec<_> = locs.iter().map(|&j| code.points[j]).collect();
    let mt = if t == 0 { -1 } else { m_t(curve, t) };
    let ls = curve.code_basis(mt);
    let det_nonzero = t == 0 || !eval_matrix(curve, &ls, &pts).is_singular(curve.field());
    let delta_set = footprint(curve, &pts);
    GenericityReport { is_generic: det_nonzero, m_t: mt, delta_set, det_nonzero }
}

/// For each row i: f = z^s + sum_{l in Delta} f_l z^l vanishing on the
/// locations, with s the smallest basis monomial in row i outside Delta.
pub fn groebner_la(code: &CodeSpec, locs: &[usize]) -> Result<Vec<BiPoly>, OracleError> {
    if locs.is_empty() {
        return Err(OracleError::Empty);
    }
    let rep = is_generic(code, locs);
    if !rep.is_generic {
        return Err(OracleError::NotGeneric);
    }
    let curve = &code.curve;
    let f = curve.field();
    let pts: Vec<_> = locs.iter().map(|&j| code.points[j]).collect();
    let delta: Vec<MonoIdx> = rep.delta_set.iter().copied().collect();
    let a = eval_matrix(curve, &delta, &pts);
    let mut out = Vec::new();
    for i in 0..curve.a() {
        let s = (0..)
            .map(|n1| MonoIdx::new(n1, i))
            .find(|&n| curve.is_canonical(n) && !rep.delta_set.contains(&n))
            .unwrap();
        let rhs: Vec<_> = pts.iter().map(|&p| curve.eval_monomial(s, p)).collect();
        let x = a.solve(f, &rhs).ok_or(OracleError::NotGeneric)?;
        let mut poly = BiPoly::constant(FieldElem::ZERO);
        poly.set(s, FieldElem::ONE);
        for (&l, &c) in delta.iter().zip(&x) {
            poly.add_term(f, l, c);
        }
        out.push(poly);
    }
    Ok(out)
}

pub fn ideal_membership(code: &CodeSpec, poly: &BiPoly, locs: &[usize]) -> bool {
    locs.iter().all(|&j| code.curve.eval(poly, code.points[j]).is_zero())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericRatio {
    pub trials: usize,
    pub hits: usize,
    pub estimate: f64,
    pub expected: f64,
    pub seed: u64,
}

/// Uniformly random t-subset of points with random nonzero values.
pub fn random_pattern<R: Rng>(code: &CodeSpec, t: usize, rng: &mut R) -> ErrorPattern {
    let mut locs = sample(rng, code.n, t).into_vec();
    locs.sort_unstable();
    let order = code.field().order() as i64;
    let vals = (0..t).map(|_| code.field().alpha_pow(rng.gen_range(0..order))).collect();
    ErrorPattern { locs, vals }
}

pub fn generic_ratio(code: &CodeSpec, t: usize, trials: usize, seed: u64) -> GenericRatio {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..trials {
        let e = random_pattern(code, t, &mut rng);
        if is_generic(code, &e.locs).is_generic {
            hits += 1;
        }
    }
    let q = code.field().q() as f64;
    GenericRatio { trials, hits, estimate: hits as f64 / trials as f64, expected: (q - 1.0) / q, seed }
}

/// u_{n + l^(s2) - s}: the contribution of z^n to the discrepancy at l of a
/// polynomial of degree s; None when l^(s2) < s or the shift is not a
/// function on the curve.
fn disc_term(curve: &Curve, synd: &SyndromeTable, s: MonoIdx, n: MonoIdx, l: MonoIdx) -> Option<Option<FieldElem>> {
    let ls = curve.l_of(s.n2, curve.pole_order(l))?;
    if ls.n1 < s.n1 || !curve.is_canonical(MonoIdx::new(ls.n1 - s.n1, ls.n2 - s.n2)) {
        return None;
    }
    Some(synd.get(MonoIdx::new(n.n1 + ls.n1 - s.n1, n.n2 + ls.n2 - s.n2)))
}

/// Smallest n1 such that some F of degree (n1, i) has zero discrepancy on
/// all of Phi(a, n-1), searched up to `limit`. None if none is found or the
/// syndromes run out.
pub fn min_degree(curve: &Curve, synd: &SyndromeTable, i: u32, n: i64, limit: i64) -> Option<i64> {
    let f = curve.field();
    let ls = curve.phi_set(0, curve.a(), n - 1);
    for n1 in 0..=limit {
        let s = MonoIdx::new(n1 as u32, i);
        if !curve.is_canonical(s) {
            continue;
        }
        let lower = curve.code_basis(curve.pole_order(s) - 1);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &l in &ls {
            let Some(lead) = disc_term(curve, synd, s, s, l) else { continue };
            rhs.push(lead?);
            let row: Option<Vec<FieldElem>> =
                lower.iter().map(|&mono| disc_term(curve, synd, s, mono, l).flatten()).collect();
            rows.push(row?);
        }
        let feasible = if lower.is_empty() || rows.is_empty() {
            rhs.iter().all(|v| v.is_zero())
        } else {
            Matrix::from_rows(rows).solve(f, &rhs).is_some()
        };
        if feasible {
            return Some(n1);
        }
    }
    None
}
