//! C_a^b curves (plus the Klein quartic): monomial order, index sets,
//! rational points, evaluation, reduction and formal derivatives.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::galois::{Field, FieldElem, FieldError, Session};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: u32, b: u32 },
    #[error("coefficient e of x^b must be nonzero")]
    ZeroLeading,
    #[error("genus {given} does not match (a-1)(b-1)/2 = {expected}")]
    GenusMismatch { given: u32, expected: u32 },
    #[error("chi term {0:?} has pole order >= ab")]
    ChiTooLarge(MonoIdx),
    #[error("Klein quartic needs (a, b) = (3, 2)")]
    BadKlein,
    #[error("monomial {0:?} is not a regular function on the curve")]
    NotInRing(MonoIdx),
    #[error("cannot evaluate at the special point")]
    SpecialPoint,
    #[error("derivative denominator vanishes at the point")]
    ZeroDenominator,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent pair of x^n1 y^n2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoIdx {
    pub n1: u32,
    pub n2: u32,
}

impl MonoIdx {
    pub const fn new(n1: u32, n2: u32) -> MonoIdx {
        MonoIdx { n1, n2 }
    }
}

impl fmt::Debug for MonoIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPoint {
    Affine { x: FieldElem, y: FieldElem },
    /// Non-affine code point; the Klein quartic has one, P_(1:0:0).
    Special(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub a: u32,
    pub b: u32,
    pub e: FieldElem,
    pub chi: Vec<(MonoIdx, FieldElem)>,
    pub genus: u32,
    pub klein: bool,
    pub excluded: Vec<MonoIdx>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CurveSpec {
    /// y^a + e x^b + sum chi_n x^n1 y^n2 = 0.
    pub fn c_ab(a: u32, b: u32, e: FieldElem, chi: Vec<(MonoIdx, FieldElem)>) -> CurveSpec {
        CurveSpec { a, b, e, chi, genus: (a - 1) * (b - 1) / 2, klein: false, excluded: vec![] }
    }

    /// x y^3 + x^3 + y = 0 with o(x^n1 y^n2) = 3 n1 + 2 n2.
    pub fn klein() -> CurveSpec {
        CurveSpec {
            a: 3,
            b: 2,
            e: FieldElem::ONE,
            chi: vec![],
            genus: 3,
            klein: true,
            excluded: vec![MonoIdx::new(0, 1), MonoIdx::new(0, 2)],
        }
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        if self.klein {
            if (self.a, self.b) != (3, 2) || self.genus != 3 {
                return Err(CurveError::BadKlein);
            }
            return Ok(());
        }
        if self.a == 0 || self.b == 0 || gcd(self.a, self.b) != 1 {
            return Err(CurveError::NotCoprime { a: self.a, b: self.b });
        }
        if self.e.is_zero() {
            return Err(CurveError::ZeroLeading);
        }
        let expected = (self.a - 1) * (self.b - 1) / 2;
        if self.genus != expected {
            return Err(CurveError::GenusMismatch { given: self.genus, expected });
        }
        for &(n, _) in &self.chi {
            if n.n1 * self.a + n.n2 * self.b >= self.a * self.b {
                return Err(CurveError::ChiTooLarge(n));
            }
        }
        Ok(())
    }
}

/// Bivariate polynomial keyed by exponent pair; no zero coefficients stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BiPoly {
    pub coeff: BTreeMap<MonoIdx, FieldElem>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.coeff.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*{:?}", c, n)?;
        }
        Ok(())
    }
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly::default()
    }

    pub fn constant(c: FieldElem) -> BiPoly {
        let mut p = BiPoly::zero();
        p.set(MonoIdx::new(0, 0), c);
        p
    }

    pub fn from_terms(terms: &[(MonoIdx, FieldElem)]) -> BiPoly {
        let mut p = BiPoly::zero();
        for &(n, c) in terms {
            p.set(n, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn get(&self, n: MonoIdx) -> FieldElem {
        self.coeff.get(&n).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn set(&mut self, n: MonoIdx, c: FieldElem) {
        if c.is_zero() {
            self.coeff.remove(&n);
        } else {
            self.coeff.insert(n, c);
        }
    }

    pub fn add_term(&mut self, field: &Field, n: MonoIdx, c: FieldElem) {
        let v = field.add(self.get(n), c);
        self.set(n, v);
    }

    pub fn add(&self, field: &Field, other: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&n, &c) in &other.coeff {
            r.add_term(field, n, c);
        }
        r
    }

    pub fn scale(&self, field: &Field, c: FieldElem) -> BiPoly {
        let mut r = BiPoly::zero();
        for (&n, &v) in &self.coeff {
            r.set(n, field.mul(v, c));
        }
        r
    }

    /// Raw product, no reduction.
    pub fn mul(&self, field: &Field, other: &BiPoly) -> BiPoly {
        let mut r = BiPoly::zero();
        for (&n, &c) in &self.coeff {
            for (&k, &d) in &other.coeff {
                r.add_term(field, MonoIdx::new(n.n1 + k.n1, n.n2 + k.n2), field.mul(c, d));
            }
        }
        r
    }
}

/// A curve bound to its field.
#[derive(Debug, Clone)]
pub struct Curve {
    spec: CurveSpec,
    field: Field,
    binv: u32,
}

/// F' = num / den as functions on the curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivative {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl Curve {
    pub fn new(spec: CurveSpec, field: Field) -> Result<Curve, CurveError> {
        spec.validate()?;
        let a = spec.a;
        let binv = (0..a).find(|k| (spec.b * k) % a == 1 % a).unwrap_or(0);
        Ok(Curve { spec, field, binv })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> u32 {
        self.spec.a
    }

    pub fn b(&self) -> u32 {
        self.spec.b
    }

    pub fn genus(&self) -> u32 {
        self.spec.genus
    }

    /// b^{-1} mod a.
    pub fn binv(&self) -> u32 {
        self.binv
    }

    pub fn pole_order(&self, n: MonoIdx) -> i64 {
        (n.n1 * self.spec.a + n.n2 * self.spec.b) as i64
    }

    /// Whether z^n is a regular function (always, except on the Klein quartic).
    pub fn is_regular(&self, n: MonoIdx) -> bool {
        !self.spec.klein || 2 * n.n1 >= n.n2
    }

    /// Member of the monomial basis of K[X].
    pub fn is_canonical(&self, n: MonoIdx) -> bool {
        n.n2 < self.spec.a && self.is_regular(n) && !self.spec.excluded.contains(&n)
    }

    /// Phi^(i)(A, A'): i <= n2 < i + A, o(n) <= A', sorted by pole order then n2.
    pub fn phi_set(&self, i: u32, big_a: u32, a_prime: i64) -> Vec<MonoIdx> {
        let mut out = Vec::new();
        for n2 in i..i + big_a {
            let mut n1 = 0;
            while self.pole_order(MonoIdx::new(n1, n2)) <= a_prime {
                out.push(MonoIdx::new(n1, n2));
                n1 += 1;
            }
        }
        out.sort_by_key(|&n| (self.pole_order(n), n.n2));
        out
    }

    /// Canonical basis of L(m P_inf).
    pub fn code_basis(&self, m: i64) -> Vec<MonoIdx> {
        self.phi_set(0, self.spec.a, m).into_iter().filter(|&n| self.is_canonical(n)).collect()
    }

    pub fn count_nongaps(&self, m: i64) -> usize {
        self.code_basis(m).len()
    }

    /// The basis monomial with pole order `o`, if `o` is a non-gap.
    pub fn mono_of_order(&self, o: i64) -> Option<MonoIdx> {
        self.l_of(0, o).filter(|&n| self.is_canonical(n))
    }

    pub fn ibar(&self, i: u32, big_n: i64) -> u32 {
        let a = self.spec.a as i64;
        (self.binv as i64 * big_n - i as i64).rem_euclid(a) as u32
    }

    /// The unique n in Phi^(i)(a) with o(n) = N.
    pub fn l_of(&self, i: u32, big_n: i64) -> Option<MonoIdx> {
        if big_n < 0 {
            return None;
        }
        let n2 = i + self.ibar(i, big_n);
        let rest = big_n - (self.spec.b * n2) as i64;
        if rest < 0 {
            return None;
        }
        debug_assert_eq!(rest % self.spec.a as i64, 0);
        Some(MonoIdx::new((rest / self.spec.a as i64) as u32, n2))
    }

    /// D(x, y) at an affine point.
    pub fn defining_poly(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let f = &self.field;
        if self.spec.klein {
            let t = f.mul(x, f.pow(y, 3));
            return f.add(f.add(t, f.pow(x, 3)), y);
        }
        let mut acc = f.add(f.pow(y, self.spec.a as u64), f.mul(self.spec.e, f.pow(x, self.spec.b as u64)));
        for &(n, c) in &self.spec.chi {
            acc = f.add(acc, f.mul(c, self.eval_affine(n, x, y)));
        }
        acc
    }

    /// Affine solutions sorted by (log x, log y), then special points.
    pub fn enumerate_points(&self) -> Vec<RationalPoint> {
        let mut pts = Vec::new();
        for x in self.field.elements() {
            for y in self.field.elements() {
                if self.defining_poly(x, y).is_zero() {
                    pts.push(RationalPoint::Affine { x, y });
                }
            }
        }
        if self.spec.klein {
            pts.push(RationalPoint::Special(0));
        }
        pts
    }

    fn eval_affine(&self, n: MonoIdx, x: FieldElem, y: FieldElem) -> FieldElem {
        let f = &self.field;
        f.mul(f.pow(x, n.n1 as u64), f.pow(y, n.n2 as u64))
    }

    /// z^n(P). At P_(1:0:0), with local parameter v, x = v^2(1+..) and y = v^-1,
    /// so z^n has value 1 exactly when 2 n1 = n2 and vanishes when 2 n1 > n2.
    pub fn eval_monomial(&self, n: MonoIdx, p: RationalPoint) -> FieldElem {
        match p {
            RationalPoint::Affine { x, y } => self.eval_affine(n, x, y),
            RationalPoint::Special(_) => {
                if 2 * n.n1 == n.n2 {
                    FieldElem::ONE
                } else {
                    FieldElem::ZERO
                }
            }
        }
    }

    pub fn eval(&self, poly: &BiPoly, p: RationalPoint) -> FieldElem {
        let f = &self.field;
        poly.coeff
            .iter()
            .fold(FieldElem::ZERO, |acc, (&n, &c)| f.add(acc, f.mul(c, self.eval_monomial(n, p))))
    }

    /// Same as `eval` with counted arithmetic.
    pub fn eval_counted(&self, poly: &BiPoly, p: RationalPoint, s: &mut Session) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for (&n, &c) in &poly.coeff {
            let z = self.eval_monomial(n, p);
            let t = s.mul(c, z);
            acc = s.add(acc, t);
        }
        acc
    }

    /// Canonical representative modulo the curve equation.
    pub fn reduce(&self, raw: &BiPoly) -> Result<BiPoly, CurveError> {
        let f = &self.field;
        let mut work = raw.clone();
        let mut out = BiPoly::zero();
        // highest pole order first; every rewrite keeps or lowers it
        while let Some((&n, &c)) = work.coeff.iter().max_by_key(|(&n, _)| (self.pole_order(n), n.n2)) {
            work.coeff.remove(&n);
            if !self.is_regular(n) || (self.spec.klein && n.n2 >= 1 && n.n1 == 0) {
                return Err(CurveError::NotInRing(n));
            }
            if n.n2 < self.spec.a {
                out.add_term(f, n, c);
                continue;
            }
            if self.spec.klein {
                work.add_term(f, MonoIdx::new(n.n1 + 2, n.n2 - 3), c);
                work.add_term(f, MonoIdx::new(n.n1 - 1, n.n2 - 2), c);
            } else {
                let rest = MonoIdx::new(n.n1, n.n2 - self.spec.a);
                work.add_term(f, MonoIdx::new(rest.n1 + self.spec.b, rest.n2), f.mul(c, self.spec.e));
                for &(k, ck) in &self.spec.chi {
                    work.add_term(f, MonoIdx::new(rest.n1 + k.n1, rest.n2 + k.n2), f.mul(c, ck));
                }
            }
        }
        Ok(out)
    }

    fn partials(&self, poly: &BiPoly) -> (BiPoly, BiPoly) {
        let mut px = BiPoly::zero();
        let mut py = BiPoly::zero();
        for (&n, &c) in &poly.coeff {
            if n.n1 % 2 == 1 {
                px.add_term(&self.field, MonoIdx::new(n.n1 - 1, n.n2), c);
            }
            if n.n2 % 2 == 1 {
                py.add_term(&self.field, MonoIdx::new(n.n1, n.n2 - 1), c);
            }
        }
        (px, py)
    }

    /// (D_x, D_y) of the defining polynomial, in characteristic 2.
    pub fn defining_partials(&self) -> (BiPoly, BiPoly) {
        let one = FieldElem::ONE;
        let d = if self.spec.klein {
            BiPoly::from_terms(&[(MonoIdx::new(1, 3), one), (MonoIdx::new(3, 0), one), (MonoIdx::new(0, 1), one)])
        } else {
            let mut d = BiPoly::from_terms(&[
                (MonoIdx::new(0, self.spec.a), one),
                (MonoIdx::new(self.spec.b, 0), self.spec.e),
            ]);
            for &(n, c) in &self.spec.chi {
                d.add_term(&self.field, n, c);
            }
            d
        };
        self.partials(&d)
    }

    /// dF/dx + dF/dy * y' with y' = D_x / D_y. When D_y is a constant the
    /// numerator is reduced and divided through, leaving den = 1; otherwise
    /// both parts are kept as raw polynomials for pointwise evaluation.
    pub fn formal_derivative(&self, poly: &BiPoly) -> Result<Derivative, CurveError> {
        let f = &self.field;
        let (fx, fy) = self.partials(poly);
        let (dx, dy) = self.defining_partials();
        let num = fx.mul(f, &dy).add(f, &fy.mul(f, &dx));
        let const_den = dy.coeff.len() == 1 && dy.coeff.contains_key(&MonoIdx::new(0, 0));
        if const_den {
            let c = f.inv(dy.get(MonoIdx::new(0, 0)))?;
            Ok(Derivative { num: self.reduce(&num)?.scale(f, c), den: BiPoly::constant(FieldElem::ONE) })
        } else {
            let num = self.reduce(&num).unwrap_or(num);
            Ok(Derivative { num, den: dy })
        }
    }

    /// F'(P) with the denominator inverted through the squaring chain.
    pub fn eval_derivative(&self, d: &Derivative, p: RationalPoint, s: &mut Session) -> Result<FieldElem, CurveError> {
        if matches!(p, RationalPoint::Special(_)) {
            return Err(CurveError::SpecialPoint);
        }
        let num = self.eval_counted(&d.num, p, s);
        if d.den == BiPoly::constant(FieldElem::ONE) {
            return Ok(num);
        }
        let den = self.eval_counted(&d.den, p, s);
        if den.is_zero() {
            return Err(CurveError::ZeroDenominator);
        }
        let (inv, _) = s.inv_chain(den)?;
        Ok(s.mul(num, inv))
    }

    /// Leading monomial under the pole order.
    pub fn degree(&self, poly: &BiPoly) -> Option<MonoIdx> {
        poly.coeff.keys().copied().max_by_key(|&n| (self.pole_order(n), n.n2))
    }
}
