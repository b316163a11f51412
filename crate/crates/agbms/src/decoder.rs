//! Syndromes -> BMS -> Chien search -> O'Sullivan error values -> check.

use std::fmt;

use thiserror::Error;

use crate::agcode::{is_codeword, syndromes, CodeSpec, SyndromeTable, Word};
use crate::bms::{self, extract_locators, LocatorOutput, Mode};
use crate::curve::{CurveError, MonoIdx, RationalPoint};
use crate::galois::{FieldElem, FieldError, OpCounter, Session};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    NotGenericDetected,
    Failure,
}

impl fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeStatus::Success => "success",
            DecodeStatus::NotGenericDetected => "not_generic_detected",
            DecodeStatus::Failure => "failure",
        })
    }
}

/// Which error-value computation produced the accepted correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    /// O'Sullivan's formula on the final F, G pairs.
    OSullivan,
    /// Linear solve against the syndromes of the first t basis monomials.
    Syndrome,
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evaluator::OSullivan => "osullivan",
            Evaluator::Syndrome => "syndrome",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("error-value sum vanishes at point {0}")]
    ZeroSum(usize),
    #[error("zero divisor in the error-value formula for block {0}")]
    ZeroHead(usize),
    #[error("more than one location needs the syndrome fallback")]
    Underdetermined,
    #[error("evaluation matrix of the error locations is singular")]
    Singular,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub error_locs: Vec<usize>,
    pub error_vals: Vec<FieldElem>,
    pub corrected: Word,
    /// Field operations spent in the BMS loops.
    pub bms_ops: OpCounter,
    /// Field operations spent locating and evaluating.
    pub eval_ops: OpCounter,
    pub locators: Option<LocatorOutput>,
    pub evaluator: Option<Evaluator>,
}

/// Indices of points where every F^(i) vanishes.
pub fn chien_search(code: &CodeSpec, basis: &LocatorOutput) -> Vec<usize> {
    (0..code.n)
        .filter(|&j| basis.f.iter().all(|f| code.curve.eval(f, code.points[j]).is_zero()))
        .collect()
}

/// e_j = (sum_i F_i'(P_j) G_i(P_j) / (F_i,s e_i))^-1. With `monic` the two
/// divisors are known to be 1 and skipped. Derivatives are not defined at a
/// special point; a single such location takes its value from
/// u_(0,0) = sum of all error values instead.
pub fn error_values(
    code: &CodeSpec,
    locs: &[usize],
    basis: &LocatorOutput,
    monic: bool,
    u00: FieldElem,
    s: &mut Session,
) -> Result<Vec<FieldElem>, EvalError> {
    let curve = &code.curve;
    let a = basis.f.len();
    let mut scale = vec![FieldElem::ONE; a];
    if !monic {
        for i in 0..a {
            let den = s.mul(basis.lead_f[i], basis.head_e[i]);
            if den.is_zero() {
                return Err(EvalError::ZeroHead(i));
            }
            scale[i] = s.inv_chain(den)?.0;
        }
    }
    let derivs = basis.f.iter().map(|f| curve.formal_derivative(f)).collect::<Result<Vec<_>, _>>()?;
    let mut vals = vec![FieldElem::ZERO; locs.len()];
    let mut pending = None;
    for (pos, &j) in locs.iter().enumerate() {
        let p = code.points[j];
        if matches!(p, RationalPoint::Special(_)) {
            if pending.replace(pos).is_some() {
                return Err(EvalError::Underdetermined);
            }
            continue;
        }
        let mut acc = FieldElem::ZERO;
        for i in 0..a {
            let gv = curve.eval_counted(&basis.g[i], p, s);
            if gv.is_zero() {
                continue;
            }
            let dv = curve.eval_derivative(&derivs[i], p, s)?;
            let t = s.mul(dv, gv);
            let t = if monic { t } else { s.mul(t, scale[i]) };
            acc = s.add(acc, t);
        }
        if acc.is_zero() {
            return Err(EvalError::ZeroSum(j));
        }
        vals[pos] = s.inv_chain(acc)?.0;
    }
    if let Some(pos) = pending {
        let mut acc = u00;
        for (k, &v) in vals.iter().enumerate() {
            if k != pos {
                acc = s.add(acc, v);
            }
        }
        if acc.is_zero() {
            return Err(EvalError::ZeroSum(locs[pos]));
        }
        vals[pos] = acc;
    }
    Ok(vals)
}

/// Solves sum_j e_j z^l(P_j) = u_l over the first |locs| basis monomials.
/// The matrix is the one whose determinant defines generic locations.
pub fn error_values_syndrome(
    code: &CodeSpec,
    locs: &[usize],
    synd: &SyndromeTable,
    s: &mut Session,
) -> Result<Vec<FieldElem>, EvalError> {
    let curve = &code.curve;
    let t = locs.len();
    let monos: Vec<MonoIdx> = (0..).filter_map(|o| curve.mono_of_order(o)).take(t).collect();
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(t);
    for &l in &monos {
        let mut row: Vec<FieldElem> = locs.iter().map(|&j| curve.eval_monomial(l, code.points[j])).collect();
        row.push(synd.get(l).ok_or(EvalError::Singular)?);
        rows.push(row);
    }
    for col in 0..t {
        let piv = (col..t).find(|&r| !rows[r][col].is_zero()).ok_or(EvalError::Singular)?;
        rows.swap(col, piv);
        let inv = s.inv_chain(rows[col][col])?.0;
        for k in col..=t {
            rows[col][k] = s.mul(rows[col][k], inv);
        }
        for r in 0..t {
            let c = rows[r][col];
            if r == col || c.is_zero() {
                continue;
            }
            for k in col..=t {
                let v = s.mul(c, rows[col][k]);
                rows[r][k] = s.add(rows[r][k], v);
            }
        }
    }
    Ok(rows.into_iter().map(|r| r[t]).collect())
}

pub fn decode(code: &CodeSpec, received: &Word) -> DecodeResult {
    decode_with(code, received, Mode::InverseFree)
}

pub fn decode_with(code: &CodeSpec, received: &Word, mode: Mode) -> DecodeResult {
    let synd = match syndromes(code, received) {
        Ok(s) => s,
        Err(_) => return failed(code, received, DecodeStatus::Failure, OpCounter::default(), None),
    };
    decode_syndromes(code, received, &synd, mode)
}

fn failed(
    code: &CodeSpec,
    received: &Word,
    status: DecodeStatus,
    bms_ops: OpCounter,
    locators: Option<LocatorOutput>,
) -> DecodeResult {
    let corrected = if received.symbols.len() == code.n { received.clone() } else { Word::zero(code.n) };
    DecodeResult {
        status,
        error_locs: vec![],
        error_vals: vec![],
        corrected,
        bms_ops,
        eval_ops: OpCounter::default(),
        locators,
        evaluator: None,
    }
}

pub fn decode_syndromes(code: &CodeSpec, received: &Word, synd: &SyndromeTable, mode: Mode) -> DecodeResult {
    let field = code.field();
    let curve = &code.curve;
    let mut s = Session::new(field);
    let state = match bms::run(curve, synd, mode, code.m, &mut s) {
        Ok(st) => st,
        Err(_) => return failed(code, received, DecodeStatus::Failure, s.ops, None),
    };
    let bms_ops = s.ops;
    let basis = match extract_locators(&state, curve) {
        Ok(b) => b,
        Err(_) => return failed(code, received, DecodeStatus::NotGenericDetected, bms_ops, None),
    };
    let locs = chien_search(code, &basis);
    if locs.len() != basis.delta_size(curve) || locs.len() > code.t_generic() {
        return failed(code, received, DecodeStatus::NotGenericDetected, bms_ops, Some(basis));
    }
    let mut es = Session::new(field);
    let u00 = synd.get(MonoIdx::new(0, 0)).unwrap_or(FieldElem::ZERO);
    let apply = |vals: &[FieldElem]| {
        let mut w = received.clone();
        for (&j, &v) in locs.iter().zip(vals) {
            w.symbols[j] = field.add(w.symbols[j], v);
        }
        w
    };
    // The formula needs G^(i) dual to the footprint corners, which the
    // stored auxiliary polynomials are not after some replacement orders;
    // the correction is re-checked and the syndrome solve takes over then.
    let mut accepted = None;
    if let Ok(vals) = error_values(code, &locs, &basis, mode == Mode::Division, u00, &mut es) {
        let w = apply(&vals);
        if is_codeword(code, &w) {
            accepted = Some((vals, w, Evaluator::OSullivan));
        }
    }
    if accepted.is_none() {
        if let Ok(vals) = error_values_syndrome(code, &locs, synd, &mut es) {
            let w = apply(&vals);
            if is_codeword(code, &w) {
                accepted = Some((vals, w, Evaluator::Syndrome));
            }
        }
    }
    let Some((vals, corrected, evaluator)) = accepted else {
        let mut r = failed(code, received, DecodeStatus::NotGenericDetected, bms_ops, Some(basis));
        r.eval_ops = es.ops;
        return r;
    };
    let status = DecodeStatus::Success;
    DecodeResult {
        status,
        error_locs: locs,
        error_vals: vals,
        corrected,
        bms_ops,
        eval_ops: es.ops,
        locators: Some(basis),
        evaluator: Some(evaluator),
    }
}
