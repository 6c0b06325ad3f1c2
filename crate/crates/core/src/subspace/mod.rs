//! Subspaces and affine planes of `F_q^d`: exact counts, sampling,
//! enumeration, and the plane-averaging experiment for progressions.

mod linalg;
mod varnavides;

use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng as _;

use crate::arith::{Modulus, PointVec};
use crate::error::{Error, Result};
use crate::measures::PointSet;
use crate::rng::Rng;

pub use varnavides::{
    choose_dprime, choose_dprime_exact, varnavides_exhaustive, varnavides_experiment, w_bound, VarnavidesJson,
    VarnavidesReport,
};

/// Largest number of affine planes [`enumerate_planes`] will build.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// `[n, k]_q`, the number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: Modulus) -> Result<BigInt> {
    if k > n {
        return Err(Error::param("k", format!("need k <= n, got k = {k}, n = {n}")));
    }
    let qb = BigInt::from(q.get());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= qb.pow((n - i) as u32) - 1;
        den *= qb.pow((k - i) as u32) - 1;
    }
    Ok(num / den)
}

/// Number of `d'`-dimensional subspaces of `F_q^d` containing a fixed nonzero
/// vector, `[d-1, d'-1]_q`.
pub fn count_subspaces_containing(d: usize, d_prime: usize, q: Modulus) -> Result<BigInt> {
    if d_prime == 0 || d_prime > d {
        return Err(Error::param("d_prime", format!("need 1 <= d' <= d = {d}, got {d_prime}")));
    }
    gaussian_binomial(d - 1, d_prime - 1, q)
}

/// Probability that a fixed nonzero `a` and `d'-1` uniform vectors of
/// `F_q^d` are linearly dependent, summed term by term:
/// `q^{1-d} + (1 - q^{1-d}) q^{2-d} + ...` with `d'-1` terms.
pub fn dependence_probability(d: usize, d_prime: usize, q: Modulus) -> Result<BigRational> {
    if d_prime > d {
        return Err(Error::param("d_prime", format!("need d' <= d = {d}, got {d_prime}")));
    }
    let qb = BigInt::from(q.get());
    // q^{i-d} for 1 <= i < d' <= d
    let p = |i: usize| BigRational::new(BigInt::one(), qb.pow((d - i) as u32));
    let mut total = BigRational::zero();
    let mut alive = BigRational::one();
    for i in 1..d_prime {
        total += &alive * p(i);
        alive *= BigRational::one() - p(i);
    }
    Ok(total)
}

/// An affine plane `translate + span(basis)` in `F_q^d`.
///
/// Equality and hashing use the canonical form: the reduced echelon basis of
/// the direction space and the translate reduced against it.
#[derive(Debug, Clone)]
pub struct Plane {
    q: Modulus,
    d: usize,
    basis: Vec<PointVec>,
    translate: PointVec,
    echelon: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    // echelon = to_echelon * basis
    to_echelon: Vec<Vec<u8>>,
    offset: Vec<u8>,
}

impl Plane {
    /// Errors if the basis is dependent or the shapes differ.
    pub fn new(basis: Vec<PointVec>, translate: PointVec) -> Result<Self> {
        let q = translate.modulus();
        let d = translate.level();
        if let Some(b) = basis.iter().find(|b| b.modulus() != q || b.level() != d) {
            return Err(Error::LevelMismatch {
                left: d,
                right: b.level(),
            });
        }
        let mut echelon: Vec<Vec<u8>> = basis.iter().map(|b| b.digits().to_vec()).collect();
        let mut to_echelon = Vec::new();
        let pivots = linalg::rref(q, &mut echelon, &mut to_echelon);
        if pivots.len() != basis.len() {
            return Err(Error::param("basis", "vectors are linearly dependent"));
        }
        let mut offset = translate.digits().to_vec();
        linalg::reduce(q, &mut offset, &echelon, &pivots);
        Ok(Plane {
            q,
            d,
            basis,
            translate,
            echelon,
            pivots,
            to_echelon,
            offset,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PointVec] {
        &self.basis
    }

    pub fn translate(&self) -> &PointVec {
        &self.translate
    }

    /// Coordinates `c` with `x = translate + sum c_j basis_j`, as a point of
    /// `F_q^{d'}`; `None` if `x` is off the plane.
    pub fn coordinates(&self, x: &PointVec) -> Option<PointVec> {
        if x.modulus() != self.q || x.level() != self.d {
            return None;
        }
        let mut y = (x - &self.translate).digits().to_vec();
        let along = linalg::reduce(self.q, &mut y, &self.echelon, &self.pivots);
        if y.iter().any(|&c| c != 0) {
            return None;
        }
        let qq = self.q.get();
        let mut coords = vec![0u8; self.dim()];
        for (a, row) in along.iter().zip(&self.to_echelon) {
            linalg::axpy(&mut coords, *a as u32, row, qq);
        }
        Some(PointVec::new(self.q, coords.into_iter().map(u32::from).collect()).expect("digits < q"))
    }

    pub fn contains(&self, x: &PointVec) -> bool {
        self.coordinates(x).is_some()
    }

    /// `translate + sum c_j basis_j`.
    pub fn point(&self, coords: &PointVec) -> Result<PointVec> {
        if coords.level() != self.dim() || coords.modulus() != self.q {
            return Err(Error::LevelMismatch {
                left: self.dim(),
                right: coords.level(),
            });
        }
        let mut x = self.translate.clone();
        for (&c, b) in coords.digits().iter().zip(&self.basis) {
            if c != 0 {
                x = &x + &b.scale(c as u32);
            }
        }
        Ok(x)
    }

    /// All points of the plane, in order of their coordinate index.
    pub fn points(&self) -> Vec<PointVec> {
        (0..self.q.size(self.dim()))
            .map(|n| {
                let c = PointVec::from_index(self.q, self.dim(), n).expect("in range");
                self.point(&c).expect("same shape")
            })
            .collect()
    }

    fn key(&self) -> (&[Vec<u8>], &[u8]) {
        (&self.echelon, &self.offset)
    }
}

impl PartialEq for Plane {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.d == other.d && self.key() == other.key()
    }
}

impl Eq for Plane {}

impl Hash for Plane {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.q.hash(state);
        self.d.hash(state);
        self.key().hash(state);
    }
}

/// Uniform random affine `d'`-plane: draw `d'` uniform vectors until they
/// are independent, then a uniform translate.
pub fn sample_plane_with(q: Modulus, d: usize, d_prime: usize, rng: &mut Rng) -> Result<Plane> {
    if d_prime == 0 || d_prime > d {
        return Err(Error::param("d_prime", format!("need 1 <= d' <= d = {d}, got {d_prime}")));
    }
    let n = q.size(d);
    loop {
        let basis: Vec<PointVec> = (0..d_prime)
            .map(|_| PointVec::from_index(q, d, rng.gen_range(0..n)).expect("in range"))
            .collect();
        let rows: Vec<Vec<u8>> = basis.iter().map(|b| b.digits().to_vec()).collect();
        if linalg::rank(q, &rows) == d_prime {
            let translate = PointVec::from_index(q, d, rng.gen_range(0..n)).expect("in range");
            return Plane::new(basis, translate);
        }
    }
}

pub fn sample_plane(q: Modulus, d: usize, d_prime: usize, seed: u64) -> Result<Plane> {
    sample_plane_with(q, d, d_prime, &mut crate::rng::seeded(seed))
}

/// Every affine `d'`-plane exactly once: each subspace in reduced echelon
/// form, paired with its coset representatives that vanish on the pivots.
pub fn enumerate_planes(q: Modulus, d: usize, d_prime: usize) -> Result<Vec<Plane>> {
    if d_prime > d {
        return Err(Error::param("d_prime", format!("need d' <= d = {d}, got {d_prime}")));
    }
    let total = gaussian_binomial(d, d_prime, q)? * BigInt::from(q.get()).pow((d - d_prime) as u32);
    let needed = u128::try_from(&total).unwrap_or(u128::MAX);
    if needed > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: ENUMERATION_BUDGET,
        });
    }
    let qn = q.as_usize();
    let mut planes = Vec::with_capacity(needed as usize);
    for pivots in combinations(d, d_prime) {
        // free slots: (row, column) with column after the row's pivot and not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..d).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let cosets: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
        for fill in 0..q.size(free.len()) {
            let mut rows = vec![vec![0u32; d]; d_prime];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            let mut rest = fill;
            for &(r, c) in &free {
                rows[r][c] = (rest % qn) as u32;
                rest /= qn;
            }
            let basis: Vec<PointVec> = rows
                .into_iter()
                .map(|r| PointVec::new(q, r).expect("digits < q"))
                .collect();
            for t in 0..q.size(cosets.len()) {
                let mut digits = vec![0u32; d];
                let mut rest = t;
                for &c in &cosets {
                    digits[c] = (rest % qn) as u32;
                    rest /= qn;
                }
                let translate = PointVec::new(q, digits).expect("digits < q");
                planes.push(Plane::new(basis.clone(), translate)?);
            }
        }
    }
    debug_assert_eq!(planes.len() as u128, needed);
    Ok(planes)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `A` intersected with the plane, in the plane's coordinates.
pub fn restrict(set: &PointSet, plane: &Plane) -> Result<PointSet> {
    if set.modulus() != plane.q || set.level() != plane.d {
        return Err(Error::LevelMismatch {
            left: plane.d,
            right: set.level(),
        });
    }
    let mut out = PointSet::empty(plane.q, plane.dim());
    for (n, x) in plane.points().iter().enumerate() {
        if set.contains(x.index()) {
            out.insert(n)?;
        }
    }
    Ok(out)
}
