//! Measures on `F_q^d`, read as cylinder measures on `F_q^infinity`.
//!
//! A table at level `d` assigns `weight(x)` to the ball `{y : pi_d(y) = x}` of
//! radius `q^{-d}`, spread uniformly inside it.

mod construct;
mod energy;
mod io;
mod regularity;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{CycScalar, Mode, Modulus, PointVec};
use crate::error::{Error, Result};
use crate::spectral::{dft_forward, Algorithm, DenseTable, SpectralTable, Values};

pub use construct::{
    make_cascade_measure, make_capset_measure, make_haar_ball, make_random_measure, pushforward,
    refine, restrict, threshold_small_atoms,
};
pub use energy::{
    energy_relation, energy_spatial, energy_spectral, haar_energy, self_energy, EnergyRelation,
    SpectralEnergy,
};
pub use io::{read_measure, read_point_set, write_measure, write_point_set};
pub use regularity::{
    ball_condition_constant, hausdorff_content, hausdorff_content_exact, BallReport, HausdorffContent,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Weights {
    pub fn len(&self) -> usize {
        match self {
            Weights::Exact(v) => v.len(),
            Weights::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            Weights::Exact(_) => Mode::Exact,
            Weights::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Weights::Exact(v) => v.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect(),
            Weights::Float(v) => v.clone(),
        }
    }

    fn is_positive(&self, i: usize) -> bool {
        match self {
            Weights::Exact(v) => v[i].is_positive(),
            Weights::Float(v) => v[i] > 0.0,
        }
    }
}

/// A single weight or mass in the table's mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Exact(BigRational),
    Float(f64),
}

impl Weight {
    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Weight::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Weight::Exact(r) => Some(r),
            Weight::Float(_) => None,
        }
    }
}

/// Nonnegative weights on `F_q^d` with their cached total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureTable {
    q: Modulus,
    d: usize,
    weights: Weights,
    mass: Weight,
}

impl MeasureTable {
    pub fn new(q: Modulus, d: usize, weights: Weights) -> Result<Self> {
        let expected = q
            .checked_size(d)
            .ok_or_else(|| Error::param("d", "q^d overflows"))?;
        if weights.len() != expected {
            return Err(Error::param(
                "weights",
                format!("expected q^d = {expected} weights, got {}", weights.len()),
            ));
        }
        let mass = match &weights {
            Weights::Exact(v) => {
                if v.iter().any(Signed::is_negative) {
                    return Err(Error::param("weights", "negative weight"));
                }
                Weight::Exact(v.iter().fold(BigRational::zero(), |acc, w| acc + w))
            }
            Weights::Float(v) => {
                if v.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
                    return Err(Error::param("weights", "negative or non-finite weight"));
                }
                Weight::Float(v.iter().sum())
            }
        };
        Ok(MeasureTable { q, d, weights, mass })
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn level(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.weights.mode()
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn mass(&self) -> &Weight {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> Weight {
        match &self.weights {
            Weights::Exact(v) => Weight::Exact(v[i].clone()),
            Weights::Float(v) => Weight::Float(v[i]),
        }
    }

    pub fn support(&self) -> PointSet {
        let members = (0..self.len()).map(|i| self.weights.is_positive(i)).collect();
        PointSet {
            q: self.q,
            d: self.d,
            members,
        }
    }

    pub fn to_float(&self) -> MeasureTable {
        let weights = Weights::Float(self.weights.to_f64());
        MeasureTable::new(self.q, self.d, weights).expect("same shape")
    }

    /// The measure divided by its mass. Errors on the zero measure.
    pub fn normalized(&self) -> Result<MeasureTable> {
        let weights = match (&self.weights, &self.mass) {
            (Weights::Exact(v), Weight::Exact(m)) => {
                if m.is_zero() {
                    return Err(Error::param("mu", "zero measure cannot be normalized"));
                }
                Weights::Exact(v.iter().map(|w| w / m).collect())
            }
            (Weights::Float(v), Weight::Float(m)) => {
                if *m == 0.0 {
                    return Err(Error::param("mu", "zero measure cannot be normalized"));
                }
                Weights::Float(v.iter().map(|w| w / m).collect())
            }
            _ => unreachable!("mass mode follows weight mode"),
        };
        MeasureTable::new(self.q, self.d, weights)
    }

    /// `x -> weight(x + t)`.
    pub fn translate(&self, t: &PointVec) -> Result<MeasureTable> {
        if t.modulus() != self.q || t.level() != self.d {
            return Err(Error::LevelMismatch {
                left: self.d,
                right: t.level(),
            });
        }
        let perm: Vec<usize> = (0..self.len())
            .map(|i| {
                let x = PointVec::from_index(self.q, self.d, i).expect("in range");
                (&x + t).index()
            })
            .collect();
        let weights = match &self.weights {
            Weights::Exact(v) => Weights::Exact(perm.iter().map(|&j| v[j].clone()).collect()),
            Weights::Float(v) => Weights::Float(perm.iter().map(|&j| v[j]).collect()),
        };
        MeasureTable::new(self.q, self.d, weights)
    }

    pub fn to_dense(&self) -> DenseTable {
        let values = match &self.weights {
            Weights::Exact(v) => Values::Exact(
                v.iter()
                    .map(|w| CycScalar::from_rational(self.q, w))
                    .collect(),
            ),
            Weights::Float(v) => Values::Float(
                v.iter()
                    .map(|&w| num_complex::Complex64::new(w, 0.0))
                    .collect(),
            ),
        };
        DenseTable::new(self.q, self.d, values).expect("same shape")
    }

    /// Fourier transform of the measure at its own level.
    pub fn transform(&self) -> SpectralTable {
        dft_forward(&self.to_dense(), Algorithm::Fast)
    }

    /// Integer numerators over the least common denominator, exact mode only.
    pub(crate) fn common_denominator(&self) -> Option<(Vec<BigInt>, BigInt)> {
        use num_integer::Integer;
        match &self.weights {
            Weights::Exact(v) => {
                let den = v
                    .iter()
                    .fold(BigInt::from(1), |acc, w| acc.lcm(w.denom()));
                let nums = v.iter().map(|w| w.numer() * (&den / w.denom())).collect();
                Some((nums, den))
            }
            Weights::Float(_) => None,
        }
    }
}

/// A subset of `F_q^d`, stored as a membership mask in point encoding order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    q: Modulus,
    d: usize,
    members: Vec<bool>,
}

impl PointSet {
    pub fn empty(q: Modulus, d: usize) -> Self {
        PointSet {
            q,
            d,
            members: vec![false; q.size(d)],
        }
    }

    pub fn full(q: Modulus, d: usize) -> Self {
        PointSet {
            q,
            d,
            members: vec![true; q.size(d)],
        }
    }

    pub fn from_indices(q: Modulus, d: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(q, d);
        for i in indices {
            s.insert(i)?;
        }
        Ok(s)
    }

    pub fn from_points<'a>(q: Modulus, d: usize, points: impl IntoIterator<Item = &'a PointVec>) -> Result<Self> {
        let mut s = Self::empty(q, d);
        for p in points {
            if p.modulus() != q || p.level() != d {
                return Err(Error::LevelMismatch {
                    left: d,
                    right: p.level(),
                });
            }
            s.members[p.index()] = true;
        }
        Ok(s)
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        let size = self.members.len();
        let slot = self
            .members
            .get_mut(i)
            .ok_or(Error::IndexOutOfRange { index: i, size })?;
        *slot = true;
        Ok(())
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn level(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn contains_point(&self, x: &PointVec) -> bool {
        x.modulus() == self.q && x.level() == self.d && self.members[x.index()]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    /// Uniform probability measure on the set (exact). Errors on the empty set.
    pub fn uniform_measure(&self) -> Result<MeasureTable> {
        let n = self.len();
        if n == 0 {
            return Err(Error::param("set", "empty set carries no probability measure"));
        }
        let w = BigRational::new(1.into(), BigInt::from(n));
        let weights = self
            .members
            .iter()
            .map(|&b| if b { w.clone() } else { BigRational::zero() })
            .collect();
        MeasureTable::new(self.q, self.d, Weights::Exact(weights))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_weights() {
        let q = Modulus::new(3).unwrap();
        let w = vec![BigRational::from_integer((-1).into()), BigRational::zero(), BigRational::zero()];
        assert!(MeasureTable::new(q, 1, Weights::Exact(w)).is_err());
        assert!(MeasureTable::new(q, 1, Weights::Float(vec![0.5, f64::NAN, 0.0])).is_err());
        assert!(MeasureTable::new(q, 1, Weights::Float(vec![0.5, 0.5])).is_err());
    }

    #[test]
    fn mass_is_cached_sum() {
        let q = Modulus::new(3).unwrap();
        let w: Vec<BigRational> = [1, 2, 3].iter().map(|&n| BigRational::new(n.into(), 6.into())).collect();
        let mu = MeasureTable::new(q, 1, Weights::Exact(w)).unwrap();
        assert_eq!(mu.mass(), &Weight::Exact(BigRational::from_integer(1.into())));
        assert_eq!(mu.support().len(), 3);
    }

    #[test]
    fn point_set_basics() {
        let q = Modulus::new(3).unwrap();
        let s = PointSet::from_indices(q, 2, [0, 4, 8]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.indices(), vec![0, 4, 8]);
        assert!(PointSet::from_indices(q, 2, [9]).is_err());
        let mu = s.uniform_measure().unwrap();
        assert_eq!(mu.weight(4), Weight::Exact(BigRational::new(1.into(), 3.into())));
        assert!(PointSet::empty(q, 2).uniform_measure().is_err());
    }
}
