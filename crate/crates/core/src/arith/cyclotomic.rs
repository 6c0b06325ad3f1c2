//! Exact arithmetic in `Q(zeta)` for a primitive `q`-th root of unity `zeta`.
//!
//! A [`CycScalar`] is stored in the power basis `1, zeta, ..., zeta^{q-2}`
//! with integer numerators over one positive common denominator, reduced so
//! that the gcd of the denominator and all numerators is 1. Equal values
//! therefore have equal representations.
//!
//! Products are formed in `Z[x]/(x^q - 1)`, where multiplication by `zeta^k` is
//! a rotation, and then reduced with `zeta^{q-1} = -(1 + zeta + ... + zeta^{q-2})`.
//! The length-`q` "cyclic" form is also what the transform kernels use
//! internally.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modulus::Modulus;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    q: Modulus,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycScalar {
    pub fn zero(q: Modulus) -> Self {
        CycScalar {
            q,
            num: vec![BigInt::zero(); q.as_usize() - 1],
            den: BigInt::one(),
        }
    }

    pub fn one(q: Modulus) -> Self {
        Self::from_integer(q, BigInt::one())
    }

    pub fn from_integer(q: Modulus, n: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(q);
        s.num[0] = n.into();
        s
    }

    pub fn from_rational(q: Modulus, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); q.as_usize() - 1];
        num[0] = r.numer().clone();
        Self::normalized(q, num, r.denom().clone())
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(q: Modulus, k: i64) -> Self {
        let mut cyclic = vec![BigInt::zero(); q.as_usize()];
        cyclic[q.reduce(k) as usize] = BigInt::one();
        Self::from_cyclic(q, cyclic, BigInt::one())
    }

    /// Builds a scalar from power-basis coefficients `c_0, ..., c_{q-2}`.
    pub fn from_coeffs(q: Modulus, coeffs: &[BigRational]) -> Result<Self> {
        if coeffs.len() != q.as_usize() - 1 {
            return Err(Error::param(
                "coeffs",
                format!("expected {} coefficients, got {}", q.as_usize() - 1, coeffs.len()),
            ));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::normalized(q, num, den))
    }

    /// Reduces a length-`q` vector in `Z[x]/(x^q - 1)`, divided by `den`.
    pub fn from_cyclic(q: Modulus, cyclic: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(cyclic.len(), q.as_usize());
        let mut cyclic = cyclic;
        let top = cyclic.pop().expect("q >= 3");
        if !top.is_zero() {
            for c in cyclic.iter_mut() {
                *c -= &top;
            }
        }
        Self::normalized(q, cyclic, den)
    }

    /// Length-`q` representative in `Z[x]/(x^q - 1)` and the common denominator.
    pub fn to_cyclic(&self) -> (Vec<BigInt>, BigInt) {
        let mut v = self.num.clone();
        v.push(BigInt::zero());
        (v, self.den.clone())
    }

    fn normalized(q: Modulus, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        if num.iter().all(Zero::is_zero) {
            return CycScalar {
                q,
                num,
                den: BigInt::one(),
            };
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                num.iter_mut().for_each(|c| *c /= &g);
                den /= &g;
            }
        }
        CycScalar { q, num, den }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Complex conjugate, `zeta^k -> zeta^{-k}`.
    pub fn conj(&self) -> Self {
        let (cyc, den) = self.to_cyclic();
        let q = self.q.as_usize();
        let mut out = vec![BigInt::zero(); q];
        for (k, c) in cyc.into_iter().enumerate() {
            out[(q - k) % q] = c;
        }
        Self::from_cyclic(self.q, out, den)
    }

    /// Image under `zeta -> exp(2 pi i / q)`.
    pub fn embed(&self) -> Complex64 {
        let q = self.q.get() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * PI * k as f64 / q;
            acc += Complex64::new(v * angle.cos(), v * angle.sin());
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.q, num, &self.den * r.denom())
    }

    /// Parses `c_0/r_0,...,c_{q-2}/r_{q-2}`; a bare integer is accepted for
    /// any coefficient.
    pub fn parse(q: Modulus, s: &str) -> Result<Self> {
        let coeffs = s
            .trim()
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(q, &coeffs)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.q, other.q, "cyclotomic scalars over different moduli");
    }
}

/// Parses `n`, `n/d`, or `-n/d`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |msg: &str| Error::Parse {
        line: 0,
        message: format!("{msg}: `{s}`"),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}[{}]", self.q, self)
    }
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return CycScalar::normalized(self.q, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        CycScalar::normalized(self.q, num, &self.den * &rhs.den)
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self + &(-rhs)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            q: self.q,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        let q = self.q.as_usize();
        let mut out = vec![BigInt::zero(); q];
        // the zeta^{q-1} slot of a canonical scalar is always zero
        cyclic::mul_acc(&mut out, &self.num, &rhs.num);
        CycScalar::from_cyclic(self.q, out, &self.den * &rhs.den)
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

/// Kernels on length-`q` integer vectors in `Z[x]/(x^q - 1)`.
pub(crate) mod cyclic {
    use num_bigint::BigInt;

    /// `out += a * b`; `a` and `b` may be shorter than `out.len() == q`.
    pub fn mul_acc(out: &mut [BigInt], a: &[BigInt], b: &[BigInt]) {
        let q = out.len();
        for (i, x) in a.iter().enumerate() {
            if x.bits() == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.bits() == 0 {
                    continue;
                }
                let k = (i + j) % q;
                out[k] += x * y;
            }
        }
    }

    /// `out += zeta^r * a`.
    pub fn add_rotated(out: &mut [BigInt], a: &[BigInt], r: usize) {
        let q = out.len();
        for (i, x) in a.iter().enumerate() {
            if x.bits() != 0 {
                out[(i + r) % q] += x;
            }
        }
    }
}
