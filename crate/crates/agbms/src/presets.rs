//! The three codes used throughout: elliptic over GF(16), Klein quartic over
//! GF(8), Hermitian over GF(16).

use crate::agcode::{build_code, CodeSpec};
use crate::curve::{Curve, CurveSpec, MonoIdx};
use crate::galois::{Field, FieldElem, FieldSpec};

pub const GF8: FieldSpec = FieldSpec { w: 3, prim_poly: 0b1011 };
pub const GF16: FieldSpec = FieldSpec { w: 4, prim_poly: 0b10011 };

pub const NAMES: [&str; 3] = ["elliptic_gf16", "klein_gf8", "hermitian_gf16"];

/// y^2 + y + x^3 + x = 0.
pub fn elliptic_curve() -> Curve {
    let one = FieldElem::ONE;
    let spec = CurveSpec::c_ab(2, 3, one, vec![(MonoIdx::new(0, 1), one), (MonoIdx::new(1, 0), one)]);
    Curve::new(spec, Field::new(GF16).expect("GF(16)")).expect("elliptic curve")
}

pub fn klein_curve() -> Curve {
    Curve::new(CurveSpec::klein(), Field::new(GF8).expect("GF(8)")).expect("Klein quartic")
}

/// y^4 + y + x^5 = 0.
pub fn hermitian_curve() -> Curve {
    let one = FieldElem::ONE;
    let spec = CurveSpec::c_ab(4, 5, one, vec![(MonoIdx::new(0, 1), one)]);
    Curve::new(spec, Field::new(GF16).expect("GF(16)")).expect("Hermitian curve")
}

/// C(8) on the elliptic curve, t = 3.
pub fn elliptic_gf16() -> CodeSpec {
    build_code(elliptic_curve(), 8).expect("elliptic code")
}

/// C(15) on the Klein quartic, t = 4.
pub fn klein_gf8() -> CodeSpec {
    build_code(klein_curve(), 15).expect("Klein code")
}

/// C(24) on the Hermitian curve, t = 5.
pub fn hermitian_gf16() -> CodeSpec {
    build_code(hermitian_curve(), 24).expect("Hermitian code")
}

pub fn by_name(name: &str) -> Option<CodeSpec> {
    match name {
        "elliptic_gf16" => Some(elliptic_gf16()),
        "klein_gf8" => Some(klein_gf8()),
        "hermitian_gf16" => Some(hermitian_gf16()),
        _ => None,
    }
}
