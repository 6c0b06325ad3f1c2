use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cyclotomic::CycScalar;
use super::modulus::Modulus;
use crate::error::{Error, Result};

/// Arithmetic mode of a computation. Fixed for the whole computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::param("mode", format!("expected exact|float, got `{other}`"))),
        }
    }
}

/// A value in `Q(zeta_q)` (exact mode) or a complex double (float mode).
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Exact(CycScalar),
    Float(Complex64),
}

/// `exp(2 pi i k / q)`.
pub fn unit_root(q: Modulus, k: i64) -> Complex64 {
    let r = q.reduce(k) as f64;
    let angle = 2.0 * PI * r / q.get() as f64;
    Complex64::new(angle.cos(), angle.sin())
}

impl Scalar {
    pub fn zero(q: Modulus, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(CycScalar::zero(q)),
            Mode::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn zeta_pow(q: Modulus, k: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(CycScalar::zeta_pow(q, k)),
            Mode::Float => Scalar::Float(unit_root(q, k)),
        }
    }

    pub fn from_rational(q: Modulus, r: &BigRational, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(CycScalar::from_rational(q, r)),
            Mode::Float => Scalar::Float(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.embed(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn as_exact(&self) -> Option<&CycScalar> {
        match self {
            Scalar::Exact(c) => Some(c),
            Scalar::Float(_) => None,
        }
    }

    /// Exact rational value, if this is an exact scalar lying in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.as_exact().and_then(CycScalar::to_rational)
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    /// Exact zero in exact mode; `|z| <= tol` in float mode.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Float(z) => z.norm() <= tol,
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(c) => write!(f, "{c:?}"),
            Scalar::Float(z) => write!(f, "{z}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(c) => write!(f, "{c}"),
            Scalar::Float(z) => write!(f, "{},{}", z.re, z.im),
        }
    }
}
