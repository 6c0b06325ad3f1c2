//! Both sides of the energy comparison for cylinder measures.
//!
//! With `P_j = sum over level-j cells c of mu(c)^2`, two distinct level-`d`
//! cells at distance `q^{-j}` share their level-`j` cell but not their
//! level-`(j+1)` cell, so
//!
//! ```text
//! I_t(mu) = sum_{j<d} q^{jt} (P_j - P_{j+1}) + P_d SelfE(q, d, t)
//! SelfE(q, d, t) = q^{dt} (1 - q^{-1}) / (1 - q^{t-1})
//! ```
//!
//! On the dual side `sum_{|xi| = q^j} |F(xi)|^2 = q^j P_j - q^{j-1} P_{j-1}`,
//! which gives
//!
//! ```text
//! I_t(mu) = lambda * sum_{xi != 0} |F(xi)|^2 |xi|^{t-1} + mass^2 B
//! lambda = (1 - q^{-t}) / (1 - q^{t-1}),  B = (1 - q^{-1}) / (1 - q^{t-1})
//! ```
//!
//! `B` is the energy of the uniform probability measure on the whole space.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{pushforward, MeasureTable, Weight, Weights};
use crate::arith::Modulus;
use crate::error::{Error, Result};
use crate::spectral::Values;

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::param("t", format!("need 0 < t < 1, got {t}")))
    }
}

/// Mean of `|u - v|^{-t}` for `u, v` independent and uniform on one ball of
/// radius `q^{-d}`.
pub fn self_energy(q: Modulus, d: usize, t: f64) -> f64 {
    let qf = q.get() as f64;
    qf.powf(d as f64 * t) * (1.0 - 1.0 / qf) / (1.0 - qf.powf(t - 1.0))
}

/// `t`-energy of the uniform probability measure on the whole space.
pub fn haar_energy(q: Modulus, t: f64) -> f64 {
    self_energy(q, 0, t)
}

fn square_sums(mu: &MeasureTable) -> Result<Vec<f64>> {
    (0..=mu.level())
        .map(|j| {
            let cells = pushforward(mu, j)?;
            Ok(match cells.weights() {
                Weights::Exact(v) => v
                    .iter()
                    .fold(BigRational::zero(), |acc, w| acc + w * w)
                    .to_f64()
                    .unwrap_or(f64::NAN),
                Weights::Float(v) => v.iter().map(|w| w * w).sum(),
            })
        })
        .collect()
}

/// `iint |x - y|^{-t} dmu(x) dmu(y)` for the cylinder measure.
pub fn energy_spatial(mu: &MeasureTable, t: f64) -> Result<f64> {
    check_t(t)?;
    let qf = mu.modulus().get() as f64;
    let p = square_sums(mu)?;
    let d = mu.level();
    let off = (0..d).fold(0.0, |acc, j| acc + qf.powf(j as f64 * t) * (p[j] - p[j + 1]));
    Ok(off + p[d] * self_energy(mu.modulus(), d, t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEnergy {
    /// `sum_{xi != 0} |F(xi)|^2 |xi|^{t-1}`.
    pub value: f64,
    /// The excluded `xi = 0` term `|F(0)|^2 = mass^2`.
    pub zero_term: Weight,
    /// `sum_{|xi| = q^j} |F(xi)|^2` for `j = 0..=d`; rational in exact mode.
    pub shell_sums: Vec<Weight>,
}

/// Dual side of the energy. Frequencies with `|xi| > q^d` contribute nothing
/// since the transform of a level-`d` cylinder measure vanishes there.
pub fn energy_spectral(mu: &MeasureTable, t: f64) -> Result<SpectralEnergy> {
    check_t(t)?;
    let spec = mu.transform();
    let shell_sums: Vec<Weight> = match spec.values() {
        Values::Exact(v) => spec
            .shells()
            .iter()
            .map(|r| {
                let sum = v[r.clone()]
                    .iter()
                    .fold(crate::arith::CycScalar::zero(mu.modulus()), |acc, f| acc + f * &f.conj());
                let exact = sum.to_rational().expect("sum of |F|^2 over a shell is rational");
                Weight::Exact(exact)
            })
            .collect(),
        Values::Float(v) => spec
            .shells()
            .iter()
            .map(|r| Weight::Float(v[r.clone()].iter().map(|z| z.norm_sqr()).sum()))
            .collect(),
    };
    let qf = mu.modulus().get() as f64;
    let value = shell_sums
        .iter()
        .enumerate()
        .skip(1)
        .fold(0.0, |acc, (j, s)| acc + qf.powf(j as f64 * (t - 1.0)) * s.to_f64());
    Ok(SpectralEnergy {
        value,
        zero_term: shell_sums[0].clone(),
        shell_sums,
    })
}

/// The two energies side by side with the constants relating them.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRelation {
    pub q: u32,
    pub t: f64,
    pub spatial: f64,
    pub spectral: f64,
    pub mass_squared: f64,
    /// `B(q, t)`, the per-unit-mass baseline.
    pub baseline: f64,
    /// `(spatial - mass^2 B) / spectral`; `None` when the spectral side is 0.
    pub measured_constant: Option<f64>,
    /// `(1 - q^{-t}) / (1 - q^{t-1})`.
    pub derived_constant: f64,
    /// `(1 - q^t) / (1 - q^{t-1})`, which equals `-q^t` times the derived one.
    pub paper_constant: f64,
}

pub fn energy_relation(mu: &MeasureTable, t: f64) -> Result<EnergyRelation> {
    let spatial = energy_spatial(mu, t)?;
    let spec = energy_spectral(mu, t)?;
    let q = mu.modulus();
    let qf = q.get() as f64;
    let mass_squared = spec.zero_term.to_f64();
    let baseline = haar_energy(q, t);
    let measured_constant = (spec.value != 0.0).then(|| (spatial - mass_squared * baseline) / spec.value);
    Ok(EnergyRelation {
        q: q.get(),
        t,
        spatial,
        spectral: spec.value,
        mass_squared,
        baseline,
        measured_constant,
        derived_constant: (1.0 - qf.powf(-t)) / (1.0 - qf.powf(t - 1.0)),
        paper_constant: (1.0 - qf.powf(t)) / (1.0 - qf.powf(t - 1.0)),
    })
}
