//! One-point codes C(m): parity checks, systematic encoding, error injection
//! and syndromes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::curve::{Curve, MonoIdx, RationalPoint};
use crate::galois::{Field, FieldElem};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("m = {m} must exceed 2g-2 = {bound}")]
    Unsupported { m: i64, bound: i64 },
    #[error("parity-check rank {rank} differs from dim L(mP) = {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("message length {got}, expected {expected}")]
    MessageLength { got: usize, expected: usize },
    #[error("word length {got}, expected {expected}")]
    WordLength { got: usize, expected: usize },
    #[error("error index {0} repeated")]
    DuplicateIndex(usize),
    #[error("error index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("zero error value at index {0}")]
    ZeroValue(usize),
    #[error("error locations and values differ in length")]
    LengthMismatch,
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub curve: Curve,
    pub points: Vec<RationalPoint>,
    pub m: i64,
    pub n: usize,
    /// Designed capability floor((m - 2g + 1) / 2).
    pub t: usize,
    pub d_g: i64,
    basis: Vec<MonoIdx>,
    h_rref: Matrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl CodeSpec {
    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    /// Monomials whose evaluations form the rows of H.
    pub fn basis(&self) -> &[MonoIdx] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Errors corrected without unknown syndromes: C(m) = C(2t + 2g - 1 + a - 1).
    pub fn t_generic(&self) -> usize {
        let g = self.curve.genus() as i64;
        let a = self.curve.a() as i64;
        ((self.m - 2 * g + 2 - a).max(0) / 2) as usize
    }

    pub fn parity_check(&self) -> Matrix {
        let rows = self
            .basis
            .iter()
            .map(|&l| self.points.iter().map(|&p| self.curve.eval_monomial(l, p)).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn point_index(&self, p: RationalPoint) -> Option<usize> {
        self.points.iter().position(|&q| q == p)
    }
}

pub fn build_code(curve: Curve, m: i64) -> Result<CodeSpec, CodeError> {
    let g = curve.genus() as i64;
    if m <= 2 * g - 2 {
        return Err(CodeError::Unsupported { m, bound: 2 * g - 2 });
    }
    let points = curve.enumerate_points();
    let basis = curve.code_basis(m);
    let n = points.len();
    let mut code = CodeSpec {
        curve,
        points,
        m,
        n,
        t: ((m - 2 * g + 1) / 2) as usize,
        d_g: m - 2 * g + 2,
        basis,
        h_rref: Matrix::zeros(0, n),
        pivots: vec![],
        free: vec![],
    };
    let mut h = code.parity_check();
    let pivots = h.rref(code.field());
    if pivots.len() != code.basis.len() {
        return Err(CodeError::RankDeficient { rank: pivots.len(), expected: code.basis.len() });
    }
    let pset: BTreeSet<usize> = pivots.iter().copied().collect();
    code.free = (0..n).filter(|c| !pset.contains(c)).collect();
    code.pivots = pivots;
    code.h_rref = h;
    Ok(code)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub symbols: Vec<FieldElem>,
}

impl Word {
    pub fn zero(n: usize) -> Word {
        Word { symbols: vec![FieldElem::ZERO; n] }
    }

    pub fn add(&self, f: &Field, other: &Word) -> Word {
        Word { symbols: self.symbols.iter().zip(&other.symbols).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    /// Nonzero positions and values.
    pub fn support(&self) -> Vec<(usize, FieldElem)> {
        self.symbols.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, &v)| (i, v)).collect()
    }
}

/// Message symbols go on the free columns of rref(H); parity is solved on pivots.
pub fn encode(code: &CodeSpec, message: &[FieldElem]) -> Result<Word, CodeError> {
    let f = code.field();
    if message.len() != code.dimension() {
        return Err(CodeError::MessageLength { got: message.len(), expected: code.dimension() });
    }
    let mut c = Word::zero(code.n);
    for (&col, &v) in code.free.iter().zip(message) {
        c.symbols[col] = v;
    }
    for (r, &p) in code.pivots.iter().enumerate() {
        let mut acc = FieldElem::ZERO;
        for &col in &code.free {
            acc = f.add(acc, f.mul(code.h_rref.get(r, col), c.symbols[col]));
        }
        c.symbols[p] = acc;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErrorPattern {
    pub locs: Vec<usize>,
    pub vals: Vec<FieldElem>,
}

impl ErrorPattern {
    pub fn validate(&self, n: usize) -> Result<(), CodeError> {
        if self.locs.len() != self.vals.len() {
            return Err(CodeError::LengthMismatch);
        }
        let mut seen = BTreeSet::new();
        for (&j, &v) in self.locs.iter().zip(&self.vals) {
            if j >= n {
                return Err(CodeError::IndexOutOfRange(j));
            }
            if !seen.insert(j) {
                return Err(CodeError::DuplicateIndex(j));
            }
            if v.is_zero() {
                return Err(CodeError::ZeroValue(j));
            }
        }
        Ok(())
    }

    pub fn to_word(&self, n: usize) -> Word {
        let mut w = Word::zero(n);
        for (&j, &v) in self.locs.iter().zip(&self.vals) {
            w.symbols[j] = v;
        }
        w
    }
}

pub fn inject_errors(code: &CodeSpec, word: &Word, errors: &ErrorPattern) -> Result<Word, CodeError> {
    if word.symbols.len() != code.n {
        return Err(CodeError::WordLength { got: word.symbols.len(), expected: code.n });
    }
    errors.validate(code.n)?;
    Ok(word.add(code.field(), &errors.to_word(code.n)))
}

/// u_l for l in a Phi-set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SyndromeTable {
    pub u: BTreeMap<MonoIdx, FieldElem>,
    /// Largest pole order covered.
    pub horizon: i64,
}

impl SyndromeTable {
    pub fn get(&self, n: MonoIdx) -> Option<FieldElem> {
        self.u.get(&n).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.u.values().all(|v| v.is_zero())
    }
}

fn table_from(code: &CodeSpec, support: &[(usize, FieldElem)], horizon: i64) -> SyndromeTable {
    let f = code.field();
    let a = code.curve.a();
    let mut u = BTreeMap::new();
    for l in code.curve.phi_set(0, 2 * a - 1, horizon) {
        let mut acc = FieldElem::ZERO;
        for &(j, v) in support {
            acc = f.add(acc, f.mul(v, code.curve.eval_monomial(l, code.points[j])));
        }
        u.insert(l, acc);
    }
    SyndromeTable { u, horizon }
}

/// Syndromes on Phi(2a-1, m).
pub fn syndromes(code: &CodeSpec, word: &Word) -> Result<SyndromeTable, CodeError> {
    if word.symbols.len() != code.n {
        return Err(CodeError::WordLength { got: word.symbols.len(), expected: code.n });
    }
    Ok(table_from(code, &word.support(), code.m))
}

/// Syndromes on Phi(2a-1, B) straight from a known error vector. Test use only.
pub fn full_syndromes_from_errors(code: &CodeSpec, errors: &ErrorPattern, horizon: i64) -> SyndromeTable {
    let support: Vec<_> = errors.locs.iter().copied().zip(errors.vals.iter().copied()).collect();
    table_from(code, &support, horizon)
}

/// H c on the code basis; all zero iff c is a codeword.
pub fn parity_syndromes(code: &CodeSpec, word: &Word) -> Vec<FieldElem> {
    let f = code.field();
    let support = word.support();
    code.basis
        .iter()
        .map(|&l| {
            support.iter().fold(FieldElem::ZERO, |acc, &(j, v)| {
                f.add(acc, f.mul(v, code.curve.eval_monomial(l, code.points[j])))
            })
        })
        .collect()
}

pub fn is_codeword(code: &CodeSpec, word: &Word) -> bool {
    parity_syndromes(code, word).iter().all(|v| v.is_zero())
}
