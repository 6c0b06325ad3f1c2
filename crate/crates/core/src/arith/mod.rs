//! Digits, absolute values, pairings, characters and exact cyclotomic scalars.

pub mod cyclotomic;
pub(crate) mod index;
pub mod modulus;
pub mod scalar;
pub mod vector;

pub use cyclotomic::{format_rational, parse_rational, CycScalar};
pub use modulus::Modulus;
pub use scalar::{unit_root, Mode, Scalar};
pub use vector::{abs_dual, abs_point, character, pair, AbsValue, DualVec, PointVec};

/// Embeds an exact scalar into the complex numbers.
pub fn embed_complex(s: &CycScalar) -> num_complex::Complex64 {
    s.embed()
}
