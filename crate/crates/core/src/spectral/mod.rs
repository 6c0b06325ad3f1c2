//! Fourier transforms on `F_q^d`.
//!
//! The forward transform follows the convention without a minus sign,
//!
//! ```text
//! F(xi) = sum_x f(x) e_q(xi . x),
//! ```
//!
//! so the inverse uses the conjugate character and a factor `q^{-d}`. Most
//! references put the minus sign on the forward side; this crate never does.
//!
//! Tables are indexed by the digit encoding of points and dual vectors. With
//! that encoding the shell `|xi| = q^j` (j >= 1) is the contiguous index range
//! `q^{j-1} .. q^j`.

mod io;
mod stats;
mod transform;

use std::ops::Range;

use num_complex::Complex64;

use crate::arith::vector::dual_shell;
use crate::arith::{CycScalar, DualVec, Mode, Modulus, PointVec, Scalar};
use crate::error::{Error, Result};

pub use io::{format_exact_line, write_exact_sidecar, write_spectrum_csv};
pub use stats::{decay_fit, shell_profile, DecayFit, ShellStats};
pub use transform::{dft_forward, dft_inverse, dft_inverse_with, Algorithm};

/// Mode-uniform storage of `q^d` scalars.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Exact(Vec<CycScalar>),
    Float(Vec<Complex64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Exact(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            Values::Exact(_) => Mode::Exact,
            Values::Float(_) => Mode::Float,
        }
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self {
            Values::Exact(v) => Scalar::Exact(v[i].clone()),
            Values::Float(v) => Scalar::Float(v[i]),
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            Values::Exact(v) => v.iter().map(CycScalar::embed).collect(),
            Values::Float(v) => v.clone(),
        }
    }

    fn check_modulus(&self, q: Modulus) -> Result<()> {
        if let Values::Exact(v) = self {
            if let Some(bad) = v.iter().find(|c| c.modulus() != q) {
                return Err(Error::ModulusMismatch {
                    left: q.get(),
                    right: bad.modulus().get(),
                });
            }
        }
        Ok(())
    }
}

/// A function on `F_q^d`, indexed by point encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTable {
    q: Modulus,
    d: usize,
    values: Values,
}

impl DenseTable {
    pub fn new(q: Modulus, d: usize, values: Values) -> Result<Self> {
        check_len(q, d, values.len())?;
        values.check_modulus(q)?;
        Ok(DenseTable { q, d, values })
    }

    pub fn from_fn(q: Modulus, d: usize, mode: Mode, f: impl Fn(&PointVec) -> Scalar) -> Result<Self> {
        let n = q.size(d);
        let values = match mode {
            Mode::Exact => Values::Exact(
                (0..n)
                    .map(|i| {
                        let x = PointVec::from_index(q, d, i)?;
                        match f(&x) {
                            Scalar::Exact(c) => Ok(c),
                            Scalar::Float(_) => Err(Error::ModeMismatch),
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
            Mode::Float => Values::Float(
                (0..n)
                    .map(|i| {
                        let x = PointVec::from_index(q, d, i)?;
                        match f(&x) {
                            Scalar::Float(z) => Ok(z),
                            Scalar::Exact(_) => Err(Error::ModeMismatch),
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        Self::new(q, d, values)
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn level(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.values.mode()
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn into_values(self) -> Values {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: &PointVec) -> Result<Scalar> {
        self.check_point(x)?;
        Ok(self.values.get(x.index()))
    }

    pub fn get_index(&self, n: usize) -> Scalar {
        self.values.get(n)
    }

    /// `x -> f(x + t)`.
    pub fn translate(&self, t: &PointVec) -> Result<DenseTable> {
        self.check_point(t)?;
        let n = self.len();
        let perm: Vec<usize> = (0..n)
            .map(|i| {
                let x = PointVec::from_index(self.q, self.d, i).expect("index in range");
                (&x + t).index()
            })
            .collect();
        let values = match &self.values {
            Values::Exact(v) => Values::Exact(perm.iter().map(|&j| v[j].clone()).collect()),
            Values::Float(v) => Values::Float(perm.iter().map(|&j| v[j]).collect()),
        };
        Ok(DenseTable {
            q: self.q,
            d: self.d,
            values,
        })
    }

    fn check_point(&self, x: &PointVec) -> Result<()> {
        if x.modulus() != self.q {
            return Err(Error::ModulusMismatch {
                left: self.q.get(),
                right: x.modulus().get(),
            });
        }
        if x.level() != self.d {
            return Err(Error::LevelMismatch {
                left: self.d,
                right: x.level(),
            });
        }
        Ok(())
    }
}

/// A function on the dual group, indexed by dual encoding and split into shells.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    q: Modulus,
    d: usize,
    values: Values,
    shells: Vec<Range<usize>>,
}

impl SpectralTable {
    /// Builds the table and its shell index, asserting the shell sizes
    /// `#{xi : |xi| = q^j} = (q-1) q^{j-1}`.
    pub fn new(q: Modulus, d: usize, values: Values) -> Result<Self> {
        check_len(q, d, values.len())?;
        values.check_modulus(q)?;
        let shells = shell_index(q, d);
        Ok(SpectralTable { q, d, values, shells })
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn level(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.values.mode()
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index ranges of the shells `j = 0..=d`.
    pub fn shells(&self) -> &[Range<usize>] {
        &self.shells
    }

    pub fn shell_of(&self, m: usize) -> usize {
        dual_shell(self.q, m)
    }

    pub fn get(&self, xi: &DualVec) -> Result<Scalar> {
        if xi.modulus() != self.q {
            return Err(Error::ModulusMismatch {
                left: self.q.get(),
                right: xi.modulus().get(),
            });
        }
        if xi.level() != self.d {
            return Err(Error::LevelMismatch {
                left: self.d,
                right: xi.level(),
            });
        }
        Ok(self.values.get(xi.index()))
    }

    pub fn get_index(&self, m: usize) -> Scalar {
        self.values.get(m)
    }
}

fn check_len(q: Modulus, d: usize, len: usize) -> Result<()> {
    let expected = q
        .checked_size(d)
        .ok_or_else(|| Error::param("d", "q^d overflows"))?;
    if len != expected {
        return Err(Error::param(
            "values",
            format!("expected q^d = {expected} entries, got {len}"),
        ));
    }
    Ok(())
}

fn shell_index(q: Modulus, d: usize) -> Vec<Range<usize>> {
    let mut counts = vec![0usize; d + 1];
    for m in 0..q.size(d) {
        counts[dual_shell(q, m)] += 1;
    }
    let mut shells = Vec::with_capacity(d + 1);
    shells.push(0..1);
    for (j, &count) in counts.iter().enumerate().skip(1) {
        let lo = q.size(j - 1);
        let expected = (q.as_usize() - 1) * lo;
        assert_eq!(count, expected, "shell {j} has {count} frequencies");
        shells.push(lo..lo + count);
    }
    assert_eq!(counts[0], 1);
    shells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_ranges_match_absolute_values() {
        let q = Modulus::new(5).unwrap();
        let t = SpectralTable::new(q, 3, Values::Float(vec![Complex64::new(0.0, 0.0); 125])).unwrap();
        for (j, r) in t.shells().iter().enumerate() {
            for m in r.clone() {
                let xi = DualVec::from_index(q, 3, m).unwrap();
                let expect = if j == 0 { crate::arith::AbsValue::Zero } else { crate::arith::AbsValue::Pow(j as i32) };
                assert_eq!(xi.abs(), expect);
            }
        }
        assert_eq!(t.shells().iter().map(|r| r.len()).sum::<usize>(), 125);
    }

    #[test]
    fn rejects_wrong_length() {
        let q = Modulus::new(3).unwrap();
        assert!(DenseTable::new(q, 2, Values::Float(vec![Complex64::new(0.0, 0.0); 8])).is_err());
    }
}
