//! Three-term progressions `x, x+a, x+2a` with `a != 0`.
//!
//! Pairs `(x, a)` are ordered and never deduplicated, so every progression is
//! seen once per direction.

mod decomposition;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::index::IndexOps;
use crate::arith::{CycScalar, DualVec, Mode, Modulus, PointVec, Scalar};
use crate::error::{Error, Result};
use crate::measures::{MeasureTable, PointSet, Weights};

pub use decomposition::{error_bound, spectral_decomposition, APReport, APReportJson, ErrorBound};

/// `a` is admissible iff its first `d` digits are not all zero, i.e. the
/// prime part of its order-`d` decomposition is nonzero. Equivalently
/// `|a| >= q^{-(d-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparationPredicate {
    pub d: usize,
}

impl SeparationPredicate {
    pub fn new(d: usize) -> Self {
        SeparationPredicate { d }
    }

    pub fn holds(&self, a: &PointVec) -> bool {
        a.digits().iter().take(self.d).any(|&c| c != 0)
    }

    #[inline]
    fn holds_index(&self, q: Modulus, a: usize) -> bool {
        a % q.size(self.d) != 0
    }
}

/// Number of ordered pairs `(x, a)`, `a != 0`, with `x, x+a, x+2a` all in `set`.
pub fn count_aps_set(set: &PointSet) -> u64 {
    let q = set.modulus();
    let ops = IndexOps::new(q, set.level());
    let members = set.indices();
    let mut count = 0;
    for &x in &members {
        for &y in &members {
            // y = x + a, so x + 2a = 2y - x
            if y != x && set.contains(ops.combine(2, y, q.as_usize() - 1, x)) {
                count += 1;
            }
        }
    }
    count
}

/// `sum_x sum_{a != 0} mu(x) mu(x+a) mu(x+2a)`.
pub fn trilinear_g(mu: &MeasureTable) -> Scalar {
    weighted_triples(mu, |_| true)
}

/// As [`trilinear_g`], restricted to differences `a` accepted by `sep`.
pub fn trilinear_g_separated(mu: &MeasureTable, sep: SeparationPredicate) -> Result<Scalar> {
    if sep.d > mu.level() {
        return Err(Error::LevelOutOfRange {
            requested: sep.d,
            available: mu.level(),
        });
    }
    let q = mu.modulus();
    Ok(weighted_triples(mu, |a| sep.holds_index(q, a)))
}

fn weighted_triples(mu: &MeasureTable, admit: impl Fn(usize) -> bool) -> Scalar {
    let q = mu.modulus();
    let ops = IndexOps::new(q, mu.level());
    let support = mu.support().indices();
    let back = q.as_usize() - 1;
    match mu.weights() {
        Weights::Exact(_) => {
            let (nums, den) = mu.common_denominator().expect("exact");
            let mut acc = BigInt::zero();
            for &x in &support {
                for &y in &support {
                    if y == x || !admit(ops.sub(y, x)) {
                        continue;
                    }
                    let z = ops.combine(2, y, back, x);
                    let wz = &nums[z];
                    if !wz.is_zero() {
                        acc += &nums[x] * &nums[y] * wz;
                    }
                }
            }
            let r = BigRational::new(acc, den.pow(3));
            Scalar::Exact(CycScalar::from_rational(q, &r))
        }
        Weights::Float(w) => {
            let mut acc = 0.0;
            for &x in &support {
                for &y in &support {
                    if y == x || !admit(ops.sub(y, x)) {
                        continue;
                    }
                    acc += w[x] * w[y] * w[ops.combine(2, y, back, x)];
                }
            }
            Scalar::Float(num_complex::Complex64::new(acc, 0.0))
        }
    }
}

/// `sum_{a' in F_q^d, a' != 0} e_q(theta . a')`: `q^d - 1` at `theta = 0`,
/// otherwise `-1`.
pub fn character_sum_nonzero(theta: &DualVec, mode: Mode) -> Scalar {
    let q = theta.modulus();
    let n: i64 = if theta.is_zero() {
        q.size(theta.level()) as i64 - 1
    } else {
        -1
    };
    Scalar::from_rational(q, &BigRational::from_integer(n.into()), mode)
}

/// The same sum evaluated term by term.
pub fn character_sum_nonzero_brute(theta: &DualVec, mode: Mode) -> Result<Scalar> {
    let q = theta.modulus();
    let d = theta.level();
    let mut acc = Scalar::zero(q, mode);
    for n in 1..q.size(d) {
        let a = PointVec::from_index(q, d, n)?;
        acc = acc.try_add(&crate::arith::character(theta, &a, mode)?)?;
    }
    Ok(acc)
}

/// Up to `limit` pairs `(x, a)` with `mu(x), mu(x+a), mu(x+2a) > 0` and `a`
/// accepted by `sep`, in increasing order of `(x, a)` indices.
pub fn extract_progressions(
    mu: &MeasureTable,
    sep: SeparationPredicate,
    limit: usize,
) -> Result<Vec<(PointVec, PointVec)>> {
    if sep.d > mu.level() {
        return Err(Error::LevelOutOfRange {
            requested: sep.d,
            available: mu.level(),
        });
    }
    let q = mu.modulus();
    let d = mu.level();
    let ops = IndexOps::new(q, d);
    let support = mu.support();
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for x in support.indices() {
        for a in 1..q.size(d) {
            if !sep.holds_index(q, a) {
                continue;
            }
            let y = ops.add(x, a);
            if support.contains(y) && support.contains(ops.combine(1, x, 2, a)) {
                out.push((PointVec::from_index(q, d, x)?, PointVec::from_index(q, d, a)?));
                if out.len() == limit {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}
