//! Points of `F_q^d` and characters of `F_q^d` as digit sequences.
//!
//! A point `x = (x_0, ..., x_{d-1})` is indexed from 0 and has absolute value
//! `q^{-j}` for the first nonzero digit `x_j`. A dual vector
//! `xi = (xi_1, ..., xi_d)` is indexed from 1 and has absolute value `q^j` for
//! the last nonzero digit `xi_j`. Both encode to table indices with the
//! leading digit least significant: `n = sum x_i q^i`, `m = sum xi_k q^{k-1}`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modulus::Modulus;
use super::scalar::{Mode, Scalar};
use crate::error::{Error, Result};

/// Absolute value on `F_q^d` or its dual: either 0 or an integer power of `q`.
///
/// Variant order gives the numeric order, so `Ord` compares values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbsValue {
    Zero,
    Pow(i32),
}

impl AbsValue {
    pub fn is_zero(self) -> bool {
        self == AbsValue::Zero
    }

    pub fn exponent(self) -> Option<i32> {
        match self {
            AbsValue::Zero => None,
            AbsValue::Pow(e) => Some(e),
        }
    }

    pub fn to_rational(self, q: Modulus) -> BigRational {
        match self {
            AbsValue::Zero => BigRational::zero(),
            AbsValue::Pow(e) => {
                let base = BigInt::from(q.get()).pow(e.unsigned_abs());
                if e >= 0 {
                    BigRational::from_integer(base)
                } else {
                    BigRational::new(BigInt::one(), base)
                }
            }
        }
    }

    pub fn to_f64(self, q: Modulus) -> f64 {
        match self {
            AbsValue::Zero => 0.0,
            AbsValue::Pow(e) => (q.get() as f64).powi(e),
        }
    }

    /// `|v|^power` for a nonzero value.
    pub fn powf(self, q: Modulus, power: f64) -> f64 {
        match self {
            AbsValue::Zero => 0.0_f64.powf(power),
            AbsValue::Pow(e) => (q.get() as f64).powf(e as f64 * power),
        }
    }
}

macro_rules! digit_vector {
    ($name:ident) => {
        #[derive(Clone, PartialEq, Eq, Hash)]
        pub struct $name {
            q: Modulus,
            digits: Vec<u8>,
        }

        impl $name {
            pub fn new(q: Modulus, digits: Vec<u32>) -> Result<Self> {
                let mut out = Vec::with_capacity(digits.len());
                for digit in digits {
                    if digit >= q.get() {
                        return Err(Error::DigitOutOfRange { digit, q: q.get() });
                    }
                    out.push(digit as u8);
                }
                Ok($name { q, digits: out })
            }

            pub fn zero(q: Modulus, d: usize) -> Self {
                $name {
                    q,
                    digits: vec![0; d],
                }
            }

            pub fn from_index(q: Modulus, d: usize, index: usize) -> Result<Self> {
                let size = q.checked_size(d).unwrap_or(usize::MAX);
                if index >= size {
                    return Err(Error::IndexOutOfRange { index, size });
                }
                let mut digits = Vec::with_capacity(d);
                let mut rest = index;
                for _ in 0..d {
                    digits.push((rest % q.as_usize()) as u8);
                    rest /= q.as_usize();
                }
                Ok($name { q, digits })
            }

            /// Table index, leading digit least significant.
            pub fn index(&self) -> usize {
                self.digits
                    .iter()
                    .rev()
                    .fold(0usize, |acc, &x| acc * self.q.as_usize() + x as usize)
            }

            #[inline]
            pub fn modulus(&self) -> Modulus {
                self.q
            }

            #[inline]
            pub fn level(&self) -> usize {
                self.digits.len()
            }

            #[inline]
            pub fn digits(&self) -> &[u8] {
                &self.digits
            }

            pub fn is_zero(&self) -> bool {
                self.digits.iter().all(|&x| x == 0)
            }

            /// First `d` digits.
            pub fn project(&self, d: usize) -> Result<Self> {
                if d > self.level() {
                    return Err(Error::LevelOutOfRange {
                        requested: d,
                        available: self.level(),
                    });
                }
                Ok($name {
                    q: self.q,
                    digits: self.digits[..d].to_vec(),
                })
            }

            /// Order-`d` decomposition: the first `d` digits and the rest, both at
            /// the original level, summing back to `self`.
            pub fn decompose(&self, d: usize) -> Result<(Self, Self)> {
                if d > self.level() {
                    return Err(Error::LevelOutOfRange {
                        requested: d,
                        available: self.level(),
                    });
                }
                let mut prime = self.digits.clone();
                let mut double = self.digits.clone();
                prime[d..].iter_mut().for_each(|x| *x = 0);
                double[..d].iter_mut().for_each(|x| *x = 0);
                Ok((
                    $name {
                        q: self.q,
                        digits: prime,
                    },
                    $name {
                        q: self.q,
                        digits: double,
                    },
                ))
            }

            /// Zero-padded copy at a higher level.
            pub fn extend(&self, level: usize) -> Result<Self> {
                if level < self.level() {
                    return Err(Error::LevelOutOfRange {
                        requested: level,
                        available: self.level(),
                    });
                }
                let mut digits = self.digits.clone();
                digits.resize(level, 0);
                Ok($name { q: self.q, digits })
            }

            pub fn scale(&self, c: u32) -> Self {
                let q = self.q.get();
                $name {
                    q: self.q,
                    digits: self
                        .digits
                        .iter()
                        .map(|&x| ((x as u32 * (c % q)) % q) as u8)
                        .collect(),
                }
            }

            fn zip_with(&self, other: &Self, f: impl Fn(u32, u32) -> u32) -> Self {
                assert_eq!(self.q, other.q, "modulus mismatch");
                assert_eq!(self.level(), other.level(), "level mismatch");
                $name {
                    q: self.q,
                    digits: self
                        .digits
                        .iter()
                        .zip(&other.digits)
                        .map(|(&a, &b)| f(a as u32, b as u32) as u8)
                        .collect(),
                }
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                let q = self.q.get();
                self.zip_with(rhs, |a, b| (a + b) % q)
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                let q = self.q.get();
                self.zip_with(rhs, |a, b| (a + q - b) % q)
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(self.q.get() - 1)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($name), self.digits)
            }
        }
    };
}

digit_vector!(PointVec);
digit_vector!(DualVec);

impl PointVec {
    /// `q^{-j}` for the first nonzero digit `x_j`, or 0.
    pub fn abs(&self) -> AbsValue {
        match self.digits.iter().position(|&x| x != 0) {
            Some(j) => AbsValue::Pow(-(j as i32)),
            None => AbsValue::Zero,
        }
    }
}

impl DualVec {
    /// `q^j` for the last nonzero digit `xi_j` (1-based), or 0.
    pub fn abs(&self) -> AbsValue {
        match self.digits.iter().rposition(|&x| x != 0) {
            Some(k) => AbsValue::Pow(k as i32 + 1),
            None => AbsValue::Zero,
        }
    }
}

pub fn abs_point(x: &PointVec) -> AbsValue {
    x.abs()
}

pub fn abs_dual(xi: &DualVec) -> AbsValue {
    xi.abs()
}

/// `xi_1 x_0 + ... + xi_d x_{d-1}` in `Z/q`. A longer `x` is projected to the
/// level of `xi` first.
pub fn pair(xi: &DualVec, x: &PointVec) -> Result<u32> {
    if xi.q != x.q {
        return Err(Error::ModulusMismatch {
            left: xi.q.get(),
            right: x.q.get(),
        });
    }
    if xi.level() > x.level() {
        return Err(Error::LevelMismatch {
            left: xi.level(),
            right: x.level(),
        });
    }
    let q = xi.q.get();
    let s = xi
        .digits
        .iter()
        .zip(&x.digits)
        .fold(0u32, |acc, (&a, &b)| (acc + a as u32 * b as u32) % q);
    Ok(s)
}

/// `e_q(xi . x)`: `zeta^{xi . x}` exactly, or `exp(2 pi i (xi . x) / q)`.
pub fn character(xi: &DualVec, x: &PointVec, mode: Mode) -> Result<Scalar> {
    let k = pair(xi, x)?;
    Ok(Scalar::zeta_pow(xi.q, k as i64, mode))
}

/// Index of the highest nonzero base-`q` digit plus one; 0 for `m = 0`.
/// For a dual index this is the shell `j` with `|xi| = q^j`.
#[inline]
pub fn dual_shell(q: Modulus, mut m: usize) -> usize {
    let mut j = 0;
    while m > 0 {
        m /= q.as_usize();
        j += 1;
    }
    j
}

/// Index of the lowest nonzero base-`q` digit; `None` for `n = 0`.
/// For a point index `n` this is `j` with `|x| = q^{-j}`.
#[inline]
pub fn point_valuation(q: Modulus, mut n: usize) -> Option<usize> {
    if n == 0 {
        return None;
    }
    let mut j = 0;
    while n % q.as_usize() == 0 {
        n /= q.as_usize();
        j += 1;
    }
    Some(j)
}
