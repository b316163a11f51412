//! Code-spec files (TOML) and the bundled presets.

use std::path::Path;

use agbms::agcode::{build_code, CodeError, CodeSpec};
use agbms::curve::{Curve, CurveError, CurveSpec, MonoIdx};
use agbms::galois::{Field, FieldError, FieldSpec};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad spec file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("log value {0} is not a field element")]
    BadLog(i64),
    #[error("declared t = {declared} but the decoder corrects t = {actual} on C(m)")]
    WrongT { declared: usize, actual: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub field: FieldSection,
    pub curve: CurveSection,
    pub code: CodeSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub w: u32,
    pub prim_poly: u32,
}

/// Coefficients are logs; chi entries are [n1, n2, log].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub a: u32,
    pub b: u32,
    #[serde(default)]
    pub e: i64,
    #[serde(default)]
    pub chi: Vec<[i64; 3]>,
    pub genus: u32,
    #[serde(default)]
    pub klein: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub m: i64,
    /// Errors corrected from the known syndromes alone, checked if given.
    pub t: Option<usize>,
}

pub const PRESETS: [(&str, &str); 3] = [
    ("elliptic_gf16", include_str!("../presets/elliptic_gf16.toml")),
    ("klein_gf8", include_str!("../presets/klein_gf8.toml")),
    ("hermitian_gf16", include_str!("../presets/hermitian_gf16.toml")),
];

/// A parsed spec together with the hash of its source text.
pub struct LoadedSpec {
    pub code: CodeSpec,
    pub hash: String,
}

fn elem(field: &Field, log: i64) -> Result<agbms::galois::FieldElem, SpecError> {
    let l = i32::try_from(log).map_err(|_| SpecError::BadLog(log))?;
    field.elem(l).map_err(|_| SpecError::BadLog(log))
}

pub fn parse(text: &str) -> Result<CodeSpec, SpecError> {
    let file: SpecFile = toml::from_str(text)?;
    let field = Field::new(FieldSpec { w: file.field.w, prim_poly: file.field.prim_poly })?;
    let c = &file.curve;
    let curve_spec = if c.klein {
        let mut k = CurveSpec::klein();
        k.a = c.a;
        k.b = c.b;
        k.genus = c.genus;
        k
    } else {
        let mut chi = Vec::with_capacity(c.chi.len());
        for &[n1, n2, log] in &c.chi {
            let n1 = u32::try_from(n1).map_err(|_| SpecError::BadLog(n1))?;
            let n2 = u32::try_from(n2).map_err(|_| SpecError::BadLog(n2))?;
            chi.push((MonoIdx::new(n1, n2), elem(&field, log)?));
        }
        let mut s = CurveSpec::c_ab(c.a, c.b, elem(&field, c.e)?, chi);
        s.genus = c.genus;
        s
    };
    curve_spec.validate()?;
    let code = build_code(Curve::new(curve_spec, field)?, file.code.m)?;
    if let Some(t) = file.code.t {
        if t != code.t_generic() {
            return Err(SpecError::WrongT { declared: t, actual: code.t_generic() });
        }
    }
    Ok(code)
}

pub fn hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Reads a spec file; a bare preset name selects the bundled file.
pub fn load(path: &str) -> Result<LoadedSpec, SpecError> {
    let text = if !Path::new(path).exists() {
        match PRESETS.iter().find(|(name, _)| *name == path) {
            Some((_, text)) => text.to_string(),
            None => std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.into(), source })?,
        }
    } else {
        std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.into(), source })?
    };
    Ok(LoadedSpec { code: parse(&text)?, hash: hash(&text) })
}
