use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{pushforward, MeasureTable, PointSet};
use crate::arith::PointVec;
use crate::error::{Error, Result};

const REL_TIE: f64 = 1e-12;

/// Largest value of `mu(B) / rad(B)^alpha` over all balls.
#[derive(Debug, Clone, PartialEq)]
pub struct BallReport {
    pub alpha: f64,
    pub c_star: f64,
    /// Level `j` of the witness cylinder; its radius is `q^{-j}`.
    pub witness_level: usize,
    pub witness_center: PointVec,
    pub witness_mass: f64,
}

/// Scans every cylinder at levels `0..=d`. Level 0 is the whole space.
/// Ties keep the coarsest (then lowest-index) ball.
pub fn ball_condition_constant(mu: &MeasureTable, alpha: f64) -> Result<BallReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha", format!("need 0 < alpha <= 1, got {alpha}")));
    }
    let q = mu.modulus();
    let qf = q.get() as f64;
    let mut best: Option<(f64, usize, usize, f64)> = None;
    for j in 0..=mu.level() {
        let cells = pushforward(mu, j)?.weights().to_f64();
        let scale = qf.powf(j as f64 * alpha);
        for (n, &m) in cells.iter().enumerate() {
            let ratio = m * scale;
            let better = match best {
                None => true,
                Some((b, ..)) => ratio > b * (1.0 + REL_TIE) && ratio > b,
            };
            if better {
                best = Some((ratio, j, n, m));
            }
        }
    }
    let (c_star, j, n, m) = best.expect("level 0 always exists");
    Ok(BallReport {
        alpha,
        c_star,
        witness_level: j,
        witness_center: PointVec::from_index(q, j, n)?,
        witness_mass: m,
    })
}

/// Minimal covering cost and the balls used, counted by level.
#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffContent<T> {
    pub value: T,
    pub balls_per_level: Vec<usize>,
}

trait Cost: Clone + Add<Output = Self> + Mul<Output = Self> + Zero {
    /// `self <= other` up to the tie rule, so the parent ball wins ties.
    fn no_worse(&self, other: &Self) -> bool;
}

impl Cost for f64 {
    fn no_worse(&self, other: &Self) -> bool {
        *self <= *other * (1.0 + REL_TIE)
    }
}

impl Cost for BigRational {
    fn no_worse(&self, other: &Self) -> bool {
        self <= other
    }
}

/// `s`-dimensional `t`-Hausdorff content of the union of the level-`d`
/// cylinders in `set`, where a ball of radius `q^{-j}` costs `q^{-js}`.
///
/// Balls finer than level `d` only appear when `t < q^{-d}`; each leaf is then
/// tiled at the first admissible level.
pub fn hausdorff_content(set: &PointSet, s: f64, t: f64) -> Result<HausdorffContent<f64>> {
    if !(s > 0.0) {
        return Err(Error::param("s", format!("need s > 0, got {s}")));
    }
    let qf = set.modulus().get() as f64;
    content_dp(set, t, |j| qf.powf(-(j as f64) * s), |k| qf.powi(k as i32))
}

/// Exact variant: a ball of radius `q^{-j}` costs `ratio^j`, i.e.
/// `ratio = q^{-s}`. With `q = 3` and `ratio = 1/2` this is `s = log_3 2`.
pub fn hausdorff_content_exact(set: &PointSet, ratio: &BigRational, t: f64) -> Result<HausdorffContent<BigRational>> {
    if !(ratio > &BigRational::zero() && ratio < &BigRational::one()) {
        return Err(Error::param("ratio", "need 0 < q^{-s} < 1"));
    }
    let q = set.modulus().get();
    content_dp(
        set,
        t,
        |j| num_traits::pow(ratio.clone(), j),
        |k| BigRational::from_integer(num_bigint::BigInt::from(q).pow(k as u32)),
    )
}

fn content_dp<T: Cost>(
    set: &PointSet,
    t: f64,
    ball_cost: impl Fn(usize) -> T,
    count: impl Fn(usize) -> T,
) -> Result<HausdorffContent<T>> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::param("t", format!("need 0 < t <= 1, got {t}")));
    }
    let q = set.modulus();
    let d = set.level();
    let qf = q.get() as f64;
    // first level whose balls have radius <= t
    let k0 = (0..)
        .find(|&j| qf.powi(-(j as i32)) <= t * (1.0 + REL_TIE))
        .expect("t > 0");

    // per node: (cost, balls used per level)
    type Node<T> = Option<(T, Vec<usize>)>;
    let depth = d.max(k0);
    let mut level: Vec<Node<T>> = set
        .mask()
        .iter()
        .map(|&inside| {
            inside.then(|| {
                let mut used = vec![0usize; depth + 1];
                if d >= k0 {
                    used[d] = 1;
                    (ball_cost(d), used)
                } else {
                    let tiles = q.size(k0 - d);
                    used[k0] = tiles;
                    (count(k0 - d) * ball_cost(k0).clone(), used)
                }
            })
        })
        .collect();

    for j in (0..d).rev() {
        let width = q.size(j);
        let mut parent: Vec<Node<T>> = Vec::with_capacity(width);
        for p in 0..width {
            let mut sum: Node<T> = None;
            for c in 0..q.as_usize() {
                if let Some((cost, used)) = level[p + c * width].take() {
                    sum = Some(match sum {
                        None => (cost, used),
                        Some((acc, mut acc_used)) => {
                            for (a, b) in acc_used.iter_mut().zip(&used) {
                                *a += b;
                            }
                            (acc + cost, acc_used)
                        }
                    });
                }
            }
            let node = sum.map(|(children, used)| {
                if j >= k0 {
                    let own = ball_cost(j);
                    if own.no_worse(&children) {
                        let mut one = vec![0usize; depth + 1];
                        one[j] = 1;
                        return (own, one);
                    }
                }
                (children, used)
            });
            parent.push(node);
        }
        level = parent;
    }
    let (value, balls_per_level) = level
        .pop()
        .flatten()
        .unwrap_or_else(|| (T::zero(), vec![0; depth + 1]));
    Ok(HausdorffContent { value, balls_per_level })
}
