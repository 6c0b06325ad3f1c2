//! Counting progressions by averaging over random affine planes.
//!
//! A fixed progression `{x, x+a, x+2a}` lies in exactly
//! `[d-1, d'-1]_q` of the `[d, d']_q q^{d-d'}` affine `d'`-planes. Dividing
//! the fraction of planes that contain some progression of `A` by that
//! per-progression fraction bounds the number of progressions from below.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::{count_subspaces_containing, enumerate_planes, gaussian_binomial, restrict, sample_plane_with, Plane};
use crate::arith::{format_rational, Modulus};
use crate::ap::count_aps_set;
use crate::error::{Error, Result};
use crate::measures::PointSet;

#[derive(Debug, Clone, PartialEq)]
pub struct VarnavidesReport {
    pub d: usize,
    pub d_prime: usize,
    /// Planes examined.
    pub samples: u64,
    pub exhaustive: bool,
    pub threshold: f64,
    /// Planes with `|A cap P| <= threshold`.
    pub sparse_planes: u64,
    /// Planes containing at least one progression of `A`.
    pub rich_planes: u64,
    pub w_hat: f64,
    pub ap_rich_fraction: f64,
    /// Fraction of all planes containing a fixed progression.
    pub per_ap_plane_fraction: BigRational,
    pub total_planes: BigInt,
    /// `ap_rich_fraction / per_ap_plane_fraction`.
    pub implied_lower_bound: f64,
    /// The same quotient in exact arithmetic, for exhaustive runs.
    pub implied_lower_bound_exact: Option<BigRational>,
    /// Mean of `|A cap P|` over the planes examined.
    pub mean_intersection: BigRational,
    /// `|A| q^{d'-d}`, the mean over all planes.
    pub expected_mean: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarnavidesJson {
    pub d: usize,
    pub d_prime: usize,
    pub samples: u64,
    pub exhaustive: bool,
    pub w_hat: f64,
    pub threshold: f64,
    pub ap_rich_fraction: f64,
    pub per_ap_plane_fraction: String,
    pub implied_lower_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implied_lower_bound_exact: Option<String>,
    pub total_planes: String,
    pub mean_intersection: f64,
    pub expected_mean: f64,
}

impl VarnavidesReport {
    pub fn to_json(&self) -> VarnavidesJson {
        VarnavidesJson {
            d: self.d,
            d_prime: self.d_prime,
            samples: self.samples,
            exhaustive: self.exhaustive,
            w_hat: self.w_hat,
            threshold: self.threshold,
            ap_rich_fraction: self.ap_rich_fraction,
            per_ap_plane_fraction: format_rational(&self.per_ap_plane_fraction),
            implied_lower_bound: self.implied_lower_bound,
            implied_lower_bound_exact: self.implied_lower_bound_exact.as_ref().map(format_rational),
            total_planes: format_rational(&BigRational::from_integer(self.total_planes.clone())),
            mean_intersection: self.mean_intersection.to_f64().unwrap_or(f64::NAN),
            expected_mean: self.expected_mean.to_f64().unwrap_or(f64::NAN),
        }
    }
}

struct Tally {
    planes: u64,
    sparse: u64,
    rich: u64,
    points: u64,
}

impl Tally {
    fn new() -> Self {
        Tally {
            planes: 0,
            sparse: 0,
            rich: 0,
            points: 0,
        }
    }

    fn add(&mut self, set: &PointSet, plane: &Plane, threshold: f64) -> Result<()> {
        let inside = restrict(set, plane)?;
        let size = inside.len() as u64;
        self.planes += 1;
        self.points += size;
        if size as f64 <= threshold {
            self.sparse += 1;
        }
        if size >= 3 && count_aps_set(&inside) > 0 {
            self.rich += 1;
        }
        Ok(())
    }
}

fn check(set: &PointSet, d_prime: usize) -> Result<()> {
    if d_prime == 0 || d_prime > set.level() {
        return Err(Error::param(
            "d_prime",
            format!("need 1 <= d' <= d = {}, got {d_prime}", set.level()),
        ));
    }
    Ok(())
}

fn plane_counts(q: Modulus, d: usize, d_prime: usize) -> Result<(BigInt, BigRational)> {
    let shift = BigInt::from(q.get()).pow((d - d_prime) as u32);
    let total = gaussian_binomial(d, d_prime, q)? * &shift;
    let per_ap = BigRational::new(count_subspaces_containing(d, d_prime, q)?, total.clone());
    Ok((total, per_ap))
}

fn report(set: &PointSet, d_prime: usize, threshold: f64, tally: Tally, exhaustive: bool) -> Result<VarnavidesReport> {
    let q = set.modulus();
    let d = set.level();
    let (total_planes, per_ap) = plane_counts(q, d, d_prime)?;
    let n = BigInt::from(tally.planes);
    let rich = BigRational::new(BigInt::from(tally.rich), n.clone());
    let implied = &rich / &per_ap;
    let expected_mean = BigRational::new(
        BigInt::from(set.len()),
        BigInt::from(q.get()).pow((d - d_prime) as u32),
    );
    Ok(VarnavidesReport {
        d,
        d_prime,
        samples: tally.planes,
        exhaustive,
        threshold,
        sparse_planes: tally.sparse,
        rich_planes: tally.rich,
        w_hat: tally.sparse as f64 / tally.planes as f64,
        ap_rich_fraction: rich.to_f64().unwrap_or(f64::NAN),
        per_ap_plane_fraction: per_ap,
        total_planes,
        implied_lower_bound: implied.to_f64().unwrap_or(f64::NAN),
        implied_lower_bound_exact: exhaustive.then_some(implied),
        mean_intersection: BigRational::new(BigInt::from(tally.points), n),
        expected_mean,
    })
}

/// Samples `samples` uniform affine `d'`-planes from one seeded stream.
pub fn varnavides_experiment(
    set: &PointSet,
    d_prime: usize,
    threshold: f64,
    samples: u64,
    seed: u64,
) -> Result<VarnavidesReport> {
    check(set, d_prime)?;
    if samples == 0 {
        return Err(Error::param("samples", "need at least one sample"));
    }
    let mut rng = crate::rng::substream(seed, "planes");
    let mut tally = Tally::new();
    for _ in 0..samples {
        let plane = sample_plane_with(set.modulus(), set.level(), d_prime, &mut rng)?;
        tally.add(set, &plane, threshold)?;
    }
    report(set, d_prime, threshold, tally, false)
}

/// Visits every affine `d'`-plane once; fractions become exact.
pub fn varnavides_exhaustive(set: &PointSet, d_prime: usize, threshold: f64) -> Result<VarnavidesReport> {
    check(set, d_prime)?;
    let mut tally = Tally::new();
    for plane in enumerate_planes(set.modulus(), set.level(), d_prime)? {
        tally.add(set, &plane, threshold)?;
    }
    report(set, d_prime, threshold, tally, true)
}

/// Upper bound on the fraction of planes holding at most `q^{alpha0 d'}`
/// points of a set with at least `q^{alpha d}` points:
/// `(1 - q^{(alpha-1)d}) / (1 - q^{(alpha0-1)d'})`.
pub fn w_bound(q: Modulus, d: usize, d_prime: usize, alpha: f64, alpha0: f64) -> f64 {
    let qf = q.get() as f64;
    (1.0 - qf.powf((alpha - 1.0) * d as f64)) / (1.0 - qf.powf((alpha0 - 1.0) * d_prime as f64))
}

/// `floor((10000 d / 9999) (1 - alpha) / (1 - alpha0))`, in exact arithmetic.
/// The result must satisfy `1 <= d' < d`.
pub fn choose_dprime_exact(d: usize, alpha: &BigRational, alpha0: &BigRational) -> Result<usize> {
    let one = BigRational::one();
    if !(alpha0 < alpha && alpha < &one) {
        return Err(Error::param(
            "alpha",
            format!("need alpha0 < alpha < 1, got alpha = {alpha}, alpha0 = {alpha0}"),
        ));
    }
    let factor = BigRational::new(BigInt::from(10000u64) * BigInt::from(d), BigInt::from(9999u64));
    let value = factor * (&one - alpha) / (&one - alpha0);
    let floor = value.numer().div_floor(value.denom());
    let dp = floor.to_usize().unwrap_or(usize::MAX);
    if dp >= d || dp == 0 {
        return Err(Error::param(
            "d_prime",
            format!("d' = {floor} is outside 1..{d} for d = {d}, alpha = {alpha}, alpha0 = {alpha0}"),
        ));
    }
    Ok(dp)
}

/// [`choose_dprime_exact`] with the exact binary values of `alpha, alpha0`.
pub fn choose_dprime(d: usize, alpha: f64, alpha0: f64) -> Result<usize> {
    let exact = |x: f64, name| {
        BigRational::from_float(x).ok_or_else(|| Error::param(name, format!("{x} is not finite")))
    };
    choose_dprime_exact(d, &exact(alpha, "alpha")?, &exact(alpha0, "alpha0")?)
}
