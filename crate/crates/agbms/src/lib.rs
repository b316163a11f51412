//! Decoding one-point algebraic-geometry codes with the parallel inverse-free
//! BMS algorithm, plus clock-level models of its shift-register
//! architectures.

pub mod agcode;
pub mod archsim;
pub mod bms;
pub mod curve;
pub mod decoder;
pub mod galois;
pub mod linalg;
pub mod oracle;
pub mod presets;
