//! Parallel BMS over a one-point code: inverse-free and division forms.
//!
//! Block i keeps (s, c, f, g, v, w). Coefficient k of f stands for the
//! monomial of pole order o(s) - k; v and w are syndrome series in Z whose
//! coefficient at Z^N is the discrepancy / head for loop N.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::agcode::SyndromeTable;
use crate::curve::{BiPoly, Curve, MonoIdx};
use crate::galois::{FieldElem, FieldError, Session};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BmsError {
    #[error("syndrome u{0:?} missing from the table")]
    MissingSyndrome(MonoIdx),
    #[error("loop index {n} beyond the syndrome horizon {horizon}")]
    BeyondHorizon { n: i64, horizon: i64 },
    #[error("coefficient of order {0} has no basis monomial")]
    ExtractionGap(i64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    InverseFree,
    Division,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::InverseFree => "inverse_free",
            Mode::Division => "division",
        })
    }
}

/// Univariate series in Z with sparse coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ZPoly {
    pub coeff: BTreeMap<i64, FieldElem>,
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeff.iter()).finish()
    }
}

impl ZPoly {
    pub fn one() -> ZPoly {
        let mut p = ZPoly::default();
        p.set(0, FieldElem::ONE);
        p
    }

    pub fn get(&self, h: i64) -> FieldElem {
        self.coeff.get(&h).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn set(&mut self, h: i64, v: FieldElem) {
        if v.is_zero() {
            self.coeff.remove(&h);
        } else {
            self.coeff.insert(h, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    /// Z * self.
    pub fn shift(&self) -> ZPoly {
        ZPoly { coeff: self.coeff.iter().map(|(&h, &v)| (h + 1, v)).collect() }
    }

    /// a*self + b*other, counted.
    pub fn lin2(&self, a: FieldElem, b: FieldElem, other: &ZPoly, s: &mut Session) -> ZPoly {
        let mut out = ZPoly::default();
        let keys: std::collections::BTreeSet<i64> = self.coeff.keys().chain(other.coeff.keys()).copied().collect();
        for h in keys {
            out.set(h, s.lin2(a, self.get(h), b, other.get(h)));
        }
        out
    }

    pub fn scale(&self, c: FieldElem, s: &mut Session) -> ZPoly {
        let mut out = ZPoly::default();
        for (&h, &v) in &self.coeff {
            out.set(h, s.mul(c, v));
        }
        out
    }

    /// Coefficients with exponent in [lo, hi].
    pub fn window(&self, lo: i64, hi: i64) -> ZPoly {
        if lo > hi {
            return ZPoly::default();
        }
        ZPoly { coeff: self.coeff.range(lo..=hi).map(|(&h, &v)| (h, v)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub s1: i64,
    pub c1: i64,
    pub f: ZPoly,
    pub g: ZPoly,
    pub v: ZPoly,
    pub w: ZPoly,
    /// Degree of f when it was last copied into g, and the loop it happened in.
    pub g_origin: Option<(MonoIdx, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmsState {
    pub n: i64,
    pub horizon: i64,
    pub mode: Mode,
    pub blocks: Vec<Block>,
}

/// Per-loop record: the state entering loop N plus the d, e read in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub n: i64,
    pub s1: Vec<i64>,
    pub c1: Vec<i64>,
    pub d: Vec<FieldElem>,
    pub e: Vec<FieldElem>,
    /// Block i took the replacement branch (condition (P) failed).
    pub replaced: Vec<bool>,
    pub f: Vec<ZPoly>,
    pub g: Vec<ZPoly>,
    pub v: Vec<ZPoly>,
    pub w: Vec<ZPoly>,
}

/// Smallest basis monomial (n1, i) in row i.
fn row_start(curve: &Curve, i: u32) -> u32 {
    (0..).find(|&n1| curve.is_canonical(MonoIdx::new(n1, i))).unwrap()
}

pub fn init_state(curve: &Curve, synd: &SyndromeTable, mode: Mode, horizon: i64) -> Result<BmsState, BmsError> {
    if horizon > synd.horizon {
        return Err(BmsError::BeyondHorizon { n: horizon, horizon: synd.horizon });
    }
    let a = curve.a();
    let mut blocks = Vec::with_capacity(a as usize);
    for i in 0..a {
        let mut v = ZPoly::default();
        for n in curve.phi_set(i, a, horizon) {
            if !curve.is_regular(n) || curve.spec().excluded.contains(&n) {
                continue;
            }
            let u = synd.get(n).ok_or(BmsError::MissingSyndrome(n))?;
            v.set(curve.pole_order(n), u);
        }
        let s1 = row_start(curve, i) as i64;
        blocks.push(Block { s1, c1: s1 - 1, f: ZPoly::one(), g: ZPoly::default(), v, w: ZPoly::one(), g_origin: None });
    }
    Ok(BmsState { n: 0, horizon, mode, blocks })
}

impl BmsState {
    pub fn a(&self) -> usize {
        self.blocks.len()
    }

    pub fn s1(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.s1).collect()
    }

    pub fn c1(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.c1).collect()
    }

    fn record(&self, d: Vec<FieldElem>, e: Vec<FieldElem>, replaced: Vec<bool>) -> StepRecord {
        StepRecord {
            n: self.n,
            s1: self.s1(),
            c1: self.c1(),
            d,
            e,
            replaced,
            f: self.blocks.iter().map(|b| b.f.clone()).collect(),
            g: self.blocks.iter().map(|b| b.g.clone()).collect(),
            v: self.blocks.iter().map(|b| b.v.clone()).collect(),
            w: self.blocks.iter().map(|b| b.w.clone()).collect(),
        }
    }

    /// Discrepancy d^(i) and head e^(i) for the current loop.
    pub fn discrepancies(&self, curve: &Curve) -> (Vec<FieldElem>, Vec<FieldElem>) {
        let n = self.n;
        let mut d = Vec::new();
        let mut e = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let di = match curve.l_of(i as u32, n) {
                Some(l) if b.s1 <= l.n1 as i64 => b.v.get(n),
                _ => FieldElem::ZERO,
            };
            d.push(di);
            e.push(b.w.get(n));
        }
        (d, e)
    }

    /// One loop: read d, e, then update every block from the pre-step snapshot.
    pub fn step(&mut self, curve: &Curve, s: &mut Session) -> Result<StepRecord, BmsError> {
        let n = self.n;
        if n > self.horizon {
            return Err(BmsError::BeyondHorizon { n, horizon: self.horizon });
        }
        let a = self.a();
        let (d, e) = self.discrepancies(curve);
        let mut rec = self.record(d.clone(), e.clone(), vec![]);
        let old = self.blocks.clone();
        let mut replaced = vec![false; a];
        for i in 0..a {
            let j = curve.ibar(i as u32, n) as usize;
            let (bi, bj) = (&old[i], &old[j]);
            let keep = d[i].is_zero() || {
                let l1 = curve.l_of(i as u32, n).expect("nonzero discrepancy needs l").n1 as i64;
                bi.s1 >= l1 - bj.c1
            };
            if !keep {
                let l1 = curve.l_of(i as u32, n).unwrap().n1 as i64;
                self.blocks[i].s1 = l1 - bj.c1;
                self.blocks[j].c1 = l1 - bi.s1;
                replaced[i] = true;
            }
            let ej = match self.mode {
                Mode::InverseFree => e[j],
                Mode::Division => FieldElem::ONE,
            };
            self.blocks[i].f = bi.f.lin2(ej, d[i], &bj.g, s);
            let mut v = bi.v.lin2(ej, d[i], &bj.w, s);
            v.coeff.remove(&n);
            self.blocks[i].v = v;
            if keep {
                self.blocks[j].g = bj.g.shift();
                self.blocks[j].w = bj.w.shift();
                self.blocks[j].g_origin = bj.g_origin;
            } else {
                let (g, w) = match self.mode {
                    Mode::InverseFree => (bi.f.shift(), bi.v.shift()),
                    Mode::Division => {
                        let dinv = s.inv(d[i])?;
                        (bi.f.shift().scale(dinv, s), bi.v.shift().scale(dinv, s))
                    }
                };
                self.blocks[j].g = g;
                self.blocks[j].w = w;
                self.blocks[j].g_origin = Some((MonoIdx::new(bi.s1 as u32, i as u32), n));
            }
        }
        rec.replaced = replaced;
        self.n += 1;
        Ok(rec)
    }
}

/// Runs loops N = 0..=n_max.
pub fn run(curve: &Curve, synd: &SyndromeTable, mode: Mode, n_max: i64, s: &mut Session) -> Result<BmsState, BmsError> {
    Ok(run_traced(curve, synd, mode, n_max, s)?.0)
}

pub fn run_traced(
    curve: &Curve,
    synd: &SyndromeTable,
    mode: Mode,
    n_max: i64,
    s: &mut Session,
) -> Result<(BmsState, Vec<StepRecord>), BmsError> {
    let mut st = init_state(curve, synd, mode, n_max)?;
    let mut trace = Vec::new();
    while st.n <= n_max {
        trace.push(st.step(curve, s)?);
    }
    Ok((st, trace))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatorOutput {
    pub f: Vec<BiPoly>,
    pub g: Vec<BiPoly>,
    pub lead_f: Vec<FieldElem>,
    pub head_e: Vec<FieldElem>,
    pub s_final: Vec<MonoIdx>,
    pub c_final: Vec<i64>,
    /// Degree of G^(i), when g was ever set.
    pub t_deg: Vec<Option<MonoIdx>>,
}

impl LocatorOutput {
    pub fn delta_size(&self, curve: &Curve) -> usize {
        delta_set(curve, &self.s_final.iter().map(|s| s.n1 as i64).collect::<Vec<_>>()).len()
    }
}

/// Coefficient k of `z` becomes the monomial of pole order o(top) - k.
fn to_bipoly(curve: &Curve, z: &ZPoly, top: i64) -> Result<BiPoly, BmsError> {
    let mut p = BiPoly::zero();
    for (&k, &val) in &z.coeff {
        let o = top - k;
        let n = curve.mono_of_order(o).ok_or(BmsError::ExtractionGap(o))?;
        p.set(n, val);
    }
    Ok(p)
}

pub fn extract_locators(state: &BmsState, curve: &Curve) -> Result<LocatorOutput, BmsError> {
    let mut out = LocatorOutput {
        f: vec![],
        g: vec![],
        lead_f: vec![],
        head_e: vec![],
        s_final: vec![],
        c_final: vec![],
        t_deg: vec![],
    };
    for (i, b) in state.blocks.iter().enumerate() {
        let s = MonoIdx::new(b.s1 as u32, i as u32);
        let f = to_bipoly(curve, &b.f, curve.pole_order(s))?;
        let g = match b.g_origin {
            Some((t, m)) => to_bipoly(curve, &b.g, curve.pole_order(t) + (state.n - m))?,
            None => BiPoly::zero(),
        };
        out.lead_f.push(f.get(s));
        out.head_e.push(b.w.get(state.n));
        out.f.push(f);
        out.g.push(g);
        out.s_final.push(s);
        out.c_final.push(b.c1);
        out.t_deg.push(b.g_origin.map(|(t, _)| t));
    }
    Ok(out)
}

/// Auxiliary polynomials relabelled by the pairing of loop `n`: entry i is
/// the G that updated F^(i) in that loop.
pub fn partner_labels(curve: &Curve, g: &[BiPoly], n: i64) -> Vec<BiPoly> {
    (0..g.len()).map(|i| g[curve.ibar(i as u32, n) as usize].clone()).collect()
}

/// F^(i) of the current state, as bivariate polynomials.
pub fn current_locators(state: &BmsState, curve: &Curve) -> Result<Vec<BiPoly>, BmsError> {
    Ok(extract_locators(state, curve)?.f)
}

/// {(n1, i) in the basis : n1 < s1^(i)}.
pub fn delta_set(curve: &Curve, s1: &[i64]) -> Vec<MonoIdx> {
    let mut out = Vec::new();
    for (i, &s) in s1.iter().enumerate() {
        for n1 in 0..s.max(0) {
            let n = MonoIdx::new(n1 as u32, i as u32);
            if curve.is_canonical(n) {
                out.push(n);
            }
        }
    }
    out
}

/// Direct discrepancy of F at l: sum_n F_n u_{n + l^(s2) - s}.
pub fn discrepancy_direct(curve: &Curve, f: &BiPoly, synd: &SyndromeTable, l: MonoIdx) -> Result<FieldElem, BmsError> {
    let field = curve.field();
    let Some(s) = curve.degree(f) else {
        return Ok(FieldElem::ZERO);
    };
    let Some(ls) = curve.l_of(s.n2, curve.pole_order(l)) else {
        return Ok(FieldElem::ZERO);
    };
    if ls.n1 < s.n1 {
        return Ok(FieldElem::ZERO);
    }
    let mut acc = FieldElem::ZERO;
    for (&n, &c) in &f.coeff {
        let k = MonoIdx::new(n.n1 + ls.n1 - s.n1, n.n2 + ls.n2 - s.n2);
        let u = synd.get(k).ok_or(BmsError::MissingSyndrome(k))?;
        acc = field.add(acc, field.mul(c, u));
    }
    Ok(acc)
}

/// What a register-level implementation can see at a loop boundary: v up to
/// exponent m, w up to max(m, N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryState {
    pub n: i64,
    pub s1: Vec<i64>,
    pub c1: Vec<i64>,
    pub f: Vec<ZPoly>,
    pub g: Vec<ZPoly>,
    pub v: Vec<ZPoly>,
    pub w: Vec<ZPoly>,
}

impl BoundaryState {
    pub fn of_state(st: &BmsState, m: i64) -> BoundaryState {
        let hi = m.max(st.n);
        BoundaryState {
            n: st.n,
            s1: st.s1(),
            c1: st.c1(),
            f: st.blocks.iter().map(|b| b.f.clone()).collect(),
            g: st.blocks.iter().map(|b| b.g.clone()).collect(),
            v: st.blocks.iter().map(|b| b.v.window(st.n, m)).collect(),
            w: st.blocks.iter().map(|b| b.w.window(st.n, hi)).collect(),
        }
    }

    pub fn of_record(r: &StepRecord, m: i64) -> BoundaryState {
        let hi = m.max(r.n);
        BoundaryState {
            n: r.n,
            s1: r.s1.clone(),
            c1: r.c1.clone(),
            f: r.f.clone(),
            g: r.g.clone(),
            v: r.v.iter().map(|p| p.window(r.n, m)).collect(),
            w: r.w.iter().map(|p| p.window(r.n, hi)).collect(),
        }
    }
}

/// Reference boundary sequence N = 0..=m+1 for the architecture simulators.
pub fn reference_boundaries(
    curve: &Curve,
    synd: &SyndromeTable,
    mode: Mode,
    m: i64,
) -> Result<Vec<BoundaryState>, BmsError> {
    let f = curve.field();
    let mut s = Session::new(f);
    let (st, trace) = run_traced(curve, synd, mode, m, &mut s)?;
    let mut out: Vec<_> = trace.iter().map(|r| BoundaryState::of_record(r, m)).collect();
    out.push(BoundaryState::of_state(&st, m));
    Ok(out)
}

fn fmt_z(out: &mut String, name: &str, p: &ZPoly) {
    let _ = write!(out, " {}=[", name);
    for (k, (h, v)) in p.coeff.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "({},{})", h, v.log());
    }
    out.push(']');
}

fn fmt_block(
    out: &mut String,
    n: i64,
    i: usize,
    s1: i64,
    c1: i64,
    de: Option<(FieldElem, FieldElem)>,
    polys: [&ZPoly; 4],
) {
    let _ = write!(out, "N={} i={} s1={} c1={}", n, i, s1, c1);
    if let Some((d, e)) = de {
        let _ = write!(out, " d={} e={}", d.log(), e.log());
    }
    for (name, p) in ["f", "g", "v", "w"].iter().zip(polys) {
        fmt_z(out, name, p);
    }
    out.push('\n');
}

/// Text dump: one line per (N, i).
pub fn dump_records(records: &[StepRecord]) -> String {
    let mut out = String::new();
    for r in records {
        for i in 0..r.s1.len() {
            fmt_block(&mut out, r.n, i, r.s1[i], r.c1[i], Some((r.d[i], r.e[i])), [&r.f[i], &r.g[i], &r.v[i], &r.w[i]]);
        }
    }
    out
}

pub fn dump_boundaries(states: &[BoundaryState]) -> String {
    let mut out = String::new();
    for b in states {
        for i in 0..b.s1.len() {
            fmt_block(&mut out, b.n, i, b.s1[i], b.c1[i], None, [&b.f[i], &b.g[i], &b.v[i], &b.w[i]]);
        }
    }
    out
}
