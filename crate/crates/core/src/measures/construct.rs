use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;

use super::{MeasureTable, PointSet, Weight, Weights};
use crate::arith::{Modulus, PointVec};
use crate::error::{Error, Result};
use crate::rng;

fn inv_pow(base: u64, exp: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(base).pow(exp as u32))
}

/// Uniform probability measure on the ball of radius `q^{-k}` about `center`,
/// tabulated at level `d`.
pub fn make_haar_ball(q: Modulus, d: usize, k: usize, center: &PointVec) -> Result<MeasureTable> {
    if k > d {
        return Err(Error::param("k", format!("ball level k = {k} exceeds d = {d}")));
    }
    if center.modulus() != q || center.level() != d {
        return Err(Error::param("center", "center must be a point of F_q^d"));
    }
    let prefix = center.project(k)?.index();
    let block = q.size(k);
    let w = inv_pow(q.get() as u64, d - k);
    let weights = (0..q.size(d))
        .map(|n| if n % block == prefix { w.clone() } else { BigRational::zero() })
        .collect();
    MeasureTable::new(q, d, Weights::Exact(weights))
}

/// Uniform probability measure on `{0,1}^d` inside `F_3^d`, which has no
/// nontrivial three-term progression.
pub fn make_capset_measure(q: Modulus, d: usize) -> Result<MeasureTable> {
    if q.get() != 3 {
        return Err(Error::param("q", format!("capset fixture requires q = 3, got {q}")));
    }
    let w = inv_pow(2, d);
    let weights = (0..q.size(d))
        .map(|n| {
            let x = PointVec::from_index(q, d, n).expect("in range");
            if x.digits().iter().all(|&c| c <= 1) {
                w.clone()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    MeasureTable::new(q, d, Weights::Exact(weights))
}

/// Random cascade on the `q`-ary digit tree: every node keeps `m` of its `q`
/// children, chosen uniformly, and splits its mass equally among them.
///
/// Nodes are visited level by level in index order, so the result depends
/// only on `(q, d, m, seed)`.
pub fn make_cascade_measure(q: Modulus, d: usize, m: usize, seed: u64) -> Result<MeasureTable> {
    if m == 0 || m > q.as_usize() {
        return Err(Error::param("m", format!("need 1 <= m <= q = {q}, got {m}")));
    }
    let mut rng = rng::seeded(seed);
    let mut nodes: Vec<usize> = vec![0];
    for level in 0..d {
        let block = q.size(level);
        let mut next = Vec::with_capacity(nodes.len() * m);
        for &node in &nodes {
            let mut kids: Vec<usize> = rand::seq::index::sample(&mut rng, q.as_usize(), m).into_vec();
            kids.sort_unstable();
            next.extend(kids.into_iter().map(|c| node + c * block));
        }
        nodes = next;
    }
    let w = inv_pow(m as u64, d);
    let mut weights = vec![BigRational::zero(); q.size(d)];
    for n in nodes {
        weights[n] = w.clone();
    }
    MeasureTable::new(q, d, Weights::Exact(weights))
}

/// Random exact probability measure: integer weights drawn uniformly from
/// `0..=max_weight`, normalized. Each cell is zero with probability about
/// `1/(max_weight+1)`; an all-zero draw is replaced by a point mass at 0.
pub fn make_random_measure(q: Modulus, d: usize, max_weight: u32, seed: u64) -> Result<MeasureTable> {
    if max_weight == 0 {
        return Err(Error::param("max_weight", "must be positive"));
    }
    let mut rng = rng::seeded(seed);
    let mut raw: Vec<u32> = (0..q.size(d)).map(|_| rng.gen_range(0..=max_weight)).collect();
    if raw.iter().all(|&w| w == 0) {
        raw[0] = 1;
    }
    let total: u64 = raw.iter().map(|&w| w as u64).sum();
    let weights = raw
        .into_iter()
        .map(|w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect();
    MeasureTable::new(q, d, Weights::Exact(weights))
}

/// Pushforward under `pi_d`: `weight(y) = sum_{pi_d(x) = y} weight(x)`.
pub fn pushforward(mu: &MeasureTable, d: usize) -> Result<MeasureTable> {
    if d > mu.d {
        return Err(Error::LevelOutOfRange {
            requested: d,
            available: mu.d,
        });
    }
    let block = mu.q.size(d);
    let weights = match &mu.weights {
        Weights::Exact(v) => {
            let mut out = vec![BigRational::zero(); block];
            for (n, w) in v.iter().enumerate() {
                if !w.is_zero() {
                    out[n % block] += w;
                }
            }
            Weights::Exact(out)
        }
        Weights::Float(v) => {
            let mut out = vec![0.0; block];
            for (n, w) in v.iter().enumerate() {
                out[n % block] += w;
            }
            Weights::Float(out)
        }
    };
    MeasureTable::new(mu.q, d, weights)
}

/// The same cylinder measure tabulated at a finer level `d >= level`.
pub fn refine(mu: &MeasureTable, d: usize) -> Result<MeasureTable> {
    if d < mu.d {
        return Err(Error::param("d", format!("cannot refine level {} to {d}", mu.d)));
    }
    let block = mu.q.size(mu.d);
    let n = mu.q.size(d);
    let weights = match &mu.weights {
        Weights::Exact(v) => {
            let split = inv_pow(mu.q.get() as u64, d - mu.d);
            Weights::Exact((0..n).map(|i| &v[i % block] * &split).collect())
        }
        Weights::Float(v) => {
            let split = (mu.q.get() as f64).powi(-((d - mu.d) as i32));
            Weights::Float((0..n).map(|i| v[i % block] * split).collect())
        }
    };
    MeasureTable::new(mu.q, d, weights)
}

/// Restriction of `mu` to a set (the `mu'` of a subset `E'`).
pub fn restrict(mu: &MeasureTable, set: &PointSet) -> Result<MeasureTable> {
    if set.q != mu.q || set.d != mu.d {
        return Err(Error::LevelMismatch {
            left: mu.d,
            right: set.d,
        });
    }
    let weights = match &mu.weights {
        Weights::Exact(v) => Weights::Exact(
            v.iter()
                .zip(&set.members)
                .map(|(w, &keep)| if keep { w.clone() } else { BigRational::zero() })
                .collect(),
        ),
        Weights::Float(v) => Weights::Float(
            v.iter()
                .zip(&set.members)
                .map(|(w, &keep)| if keep { *w } else { 0.0 })
                .collect(),
        ),
    };
    MeasureTable::new(mu.q, mu.d, weights)
}

/// Zeroes every atom with `weight <= K q^{-d} / 2`; atoms strictly above the
/// cutoff are kept.
///
/// Whenever the input mass is at least `K`, the output keeps mass at least
/// `K/2`, since at most `q^d` atoms are dropped.
pub fn threshold_small_atoms(mu_d: &MeasureTable, k: &BigRational) -> Result<MeasureTable> {
    if !(k > &BigRational::zero()) {
        return Err(Error::param("K", "mass parameter must be positive"));
    }
    let cutoff = k * inv_pow(mu_d.q.get() as u64, mu_d.d) / BigRational::from_integer(2.into());
    let weights = match &mu_d.weights {
        Weights::Exact(v) => Weights::Exact(
            v.iter()
                .map(|w| if w > &cutoff { w.clone() } else { BigRational::zero() })
                .collect(),
        ),
        Weights::Float(v) => {
            let c = cutoff.to_f64().unwrap_or(f64::NAN);
            Weights::Float(v.iter().map(|&w| if w > c { w } else { 0.0 }).collect())
        }
    };
    let out = MeasureTable::new(mu_d.q, mu_d.d, weights)?;
    match (&mu_d.mass, &out.mass) {
        (Weight::Exact(before), Weight::Exact(after)) => {
            if before >= k {
                assert!(after * BigRational::from_integer(2.into()) >= *k, "pigeonhole bound violated");
            }
        }
        (Weight::Float(before), Weight::Float(after)) => {
            let kf = k.to_f64().unwrap_or(f64::NAN);
            if *before >= kf {
                assert!(*after >= kf / 2.0 * (1.0 - 1e-12), "pigeonhole bound violated");
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}
