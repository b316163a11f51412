//! GF(2^w) arithmetic in log form.
//!
//! Elements are stored as the exponent of the primitive element, with `-1`
//! standing for zero. Tables are built once per field.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside the supported range 2..=16")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#b} is not primitive of degree {w}")]
    NotPrimitive { w: u32, poly: u32 },
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("log value {0} out of range for this field")]
    BadLog(i32),
}

/// A field element as a log: `-1` is zero, `k` is alpha^k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(i32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(-1);
    pub const ONE: FieldElem = FieldElem(0);

    pub fn log(self) -> i32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 < 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "a^{}", self.0)
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub w: u32,
    pub prim_poly: u32,
}

impl FieldSpec {
    pub fn q(&self) -> usize {
        1 << self.w
    }
}

/// Field tables. Immutable once built.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    exp: Vec<u32>,
    log: Vec<i32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#b})", self.spec.w, self.spec.prim_poly)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        let w = spec.w;
        if !(2..=16).contains(&w) {
            return Err(FieldError::UnsupportedDegree(w));
        }
        let q = 1usize << w;
        if spec.prim_poly >> w != 1 {
            return Err(FieldError::NotPrimitive { w, poly: spec.prim_poly });
        }
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![-1i32; q];
        let mut x = 1u32;
        for (k, slot) in exp.iter_mut().enumerate() {
            if log[x as usize] != -1 {
                return Err(FieldError::NotPrimitive { w, poly: spec.prim_poly });
            }
            *slot = x;
            log[x as usize] = k as i32;
            x <<= 1;
            if x & (q as u32) != 0 {
                x ^= spec.prim_poly;
            }
        }
        if x != 1 {
            return Err(FieldError::NotPrimitive { w, poly: spec.prim_poly });
        }
        Ok(Field { spec, exp, log })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn w(&self) -> u32 {
        self.spec.w
    }

    pub fn q(&self) -> usize {
        self.spec.q()
    }

    /// Multiplicative order q-1.
    pub fn order(&self) -> i32 {
        (self.q() - 1) as i32
    }

    /// Checked constructor from a log value.
    pub fn elem(&self, log: i32) -> Result<FieldElem, FieldError> {
        if log < -1 || log >= self.order() {
            return Err(FieldError::BadLog(log));
        }
        Ok(FieldElem(log))
    }

    /// alpha^k for any integer k.
    pub fn alpha_pow(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.order() as i64) as i32)
    }

    pub fn to_bits(&self, a: FieldElem) -> u32 {
        if a.is_zero() {
            0
        } else {
            self.exp[a.0 as usize]
        }
    }

    pub fn from_bits(&self, v: u32) -> FieldElem {
        FieldElem(self.log[v as usize])
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        self.from_bits(self.exp[a.0 as usize] ^ self.exp[b.0 as usize])
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        FieldElem((a.0 + b.0) % self.order())
    }

    /// Table inverse. Used by oracles and the division-mode hardware inverter.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElem((self.order() - a.0) % self.order()))
    }

    pub fn pow(&self, a: FieldElem, k: u64) -> FieldElem {
        if k == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let e = (a.0 as u64 * (k % self.order() as u64)) % self.order() as u64;
        FieldElem(e as i32)
    }

    /// Iterates over all q elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (-1..self.order()).map(FieldElem)
    }
}

/// Operation counts for one session.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub muls: u64,
    pub invs: u64,
    pub adds: u64,
    /// Multiplications spent inside `inv_chain`, also included in `muls`.
    pub inv_muls: u64,
}

impl OpCounter {
    pub fn reset(&mut self) {
        *self = OpCounter::default();
    }
}

/// Counted arithmetic over a shared field.
#[derive(Debug)]
pub struct Session<'f> {
    field: &'f Field,
    pub ops: OpCounter,
}

impl<'f> Session<'f> {
    pub fn new(field: &'f Field) -> Session<'f> {
        Session { field, ops: OpCounter::default() }
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn add(&mut self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.ops.adds += 1;
        self.field.add(a, b)
    }

    pub fn mul(&mut self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.ops.muls += 1;
        self.field.mul(a, b)
    }

    /// a*x + b*y with two multiplications and one addition.
    pub fn lin2(&mut self, a: FieldElem, x: FieldElem, b: FieldElem, y: FieldElem) -> FieldElem {
        let p = self.mul(a, x);
        let r = self.mul(b, y);
        self.add(p, r)
    }

    /// Single-cycle inverter (the hardware inverse calculator). Counts one inversion.
    pub fn inv(&mut self, a: FieldElem) -> Result<FieldElem, FieldError> {
        self.ops.invs += 1;
        self.field.inv(a)
    }

    /// a^(q-2) by square-and-multiply: w-1 squarings and w-2 multiplications by a.
    pub fn inv_chain(&mut self, a: FieldElem) -> Result<(FieldElem, u64), FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let before = self.ops.muls;
        let mut r = a;
        for _ in 1..self.field.w() - 1 {
            r = self.mul(r, r);
            r = self.mul(r, a);
        }
        r = self.mul(r, r);
        let used = self.ops.muls - before;
        self.ops.invs += 1;
        self.ops.inv_muls += used;
        Ok((r, used))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> Field {
        Field::new(FieldSpec { w: 4, prim_poly: 0b10011 }).unwrap()
    }

    #[test]
    fn preset_fields_build() {
        let f16 = gf16();
        // alpha^4 = alpha + 1
        assert_eq!(f16.to_bits(f16.alpha_pow(4)), 0b0011);
        let f8 = Field::new(FieldSpec { w: 3, prim_poly: 0b1011 }).unwrap();
        assert_eq!(f8.to_bits(f8.alpha_pow(3)), 0b011);
    }

    #[test]
    fn rejects_non_primitive() {
        // x^4+x^3+x^2+x+1 has order 5
        assert!(Field::new(FieldSpec { w: 4, prim_poly: 0b11111 }).is_err());
        assert!(Field::new(FieldSpec { w: 17, prim_poly: 0 }).is_err());
    }

    #[test]
    fn add_examples() {
        let f = gf16();
        let a = f.alpha_pow(7);
        assert!(f.add(a, a).is_zero());
        assert_eq!(f.add(a, FieldElem::ZERO), a);
        assert_eq!(f.add(f.alpha_pow(0), f.alpha_pow(1)), f.alpha_pow(4));
    }

    #[test]
    fn mul_examples() {
        let f = gf16();
        assert_eq!(f.mul(f.alpha_pow(3), f.alpha_pow(7)), f.alpha_pow(10));
        assert_eq!(f.mul(f.alpha_pow(6), f.alpha_pow(12)), f.alpha_pow(3));
        assert!(f.mul(f.alpha_pow(5), FieldElem::ZERO).is_zero());
    }

    #[test]
    fn inv_chain_cost() {
        let f = gf16();
        let mut s = Session::new(&f);
        let (r, c) = s.inv_chain(f.alpha_pow(5)).unwrap();
        assert_eq!(r, f.alpha_pow(10));
        assert_eq!(c, 5);
        assert_eq!(s.ops.invs, 1);
        assert_eq!(s.inv_chain(FieldElem::ONE).unwrap().0, FieldElem::ONE);
        assert_eq!(s.inv_chain(FieldElem::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn inv_chain_all_degrees() {
        for (w, p) in [(2u32, 0b111u32), (3, 0b1011), (4, 0b10011), (8, 0x11d), (16, 0x1100b)] {
            let f = Field::new(FieldSpec { w, prim_poly: p }).unwrap();
            let mut s = Session::new(&f);
            for a in f.elements().skip(1).step_by(97.min(f.q() / 4).max(1)) {
                let (r, c) = s.inv_chain(a).unwrap();
                assert_eq!(c, 2 * w as u64 - 3);
                assert_eq!(f.mul(a, r), FieldElem::ONE);
            }
        }
    }
}
