//! Fourier expansion of the separated trilinear form at level `d*` and its
//! split by the high part `xi1''` of the first frequency.
//!
//! With `F` the transform of `mu` at level `d*` and `c(theta)` the nonzero
//! character sum over `F_q^d`,
//!
//! ```text
//! S_0    = q^{-d*-d} sum_{xi1', xi2'} F(-xi1'-xi2') F(xi1') F(xi2') c(2 xi1' + xi2')
//! S_{!=0} = q^{-d*-d} sum_{xi1', xi2'} sum_{xi1'' != 0}
//!              F(-xi1'-xi2'+xi1'') F(xi1'+xi1'') F(xi2'-2 xi1'') c(2 xi1' + xi2')
//! ```
//!
//! where primed frequencies have all digits past `d` zero and `xi1''` has its
//! first `d` digits zero. In the index encoding the two parts occupy disjoint
//! digit ranges, so `xi' + xi''` is plain integer addition.
//!
//! Exact mode lifts every `F(xi)` to one common denominator and works on
//! integer vectors in `Z[x]/(x^q - 1)`, in `i128` when a worst-case bound
//! allows and in big integers otherwise.

use std::ops::AddAssign;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{trilinear_g, trilinear_g_separated, SeparationPredicate};
use crate::arith::index::IndexOps;
use crate::arith::{pair, CycScalar, DualVec, Mode, Modulus, PointVec, Scalar};
use crate::error::{Error, Result};
use crate::measures::{pushforward, MeasureTable};
use crate::spectral::{SpectralTable, Values};

/// Relative tolerance for the float-mode identities.
const FLOAT_REL_TOL: f64 = 1e-8;
/// Largest `q^{2(d*-d)}` for which the high-part character sums are checked.
const COLLAPSE_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBound {
    pub beta: f64,
    pub bound: f64,
    pub c2_measured: f64,
    pub s_neq0_abs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct APReport {
    pub q: u32,
    pub d: usize,
    pub d_star: usize,
    pub mode: Mode,
    /// `sum_x g_{d*}(x)` by direct summation.
    pub lhs: Scalar,
    pub s0: Scalar,
    pub s_neq0: Scalar,
    /// `sum_x g(x)` for the pushforward to level `d`.
    pub g_hat_base: Scalar,
    /// `lhs = s0 + s_neq0` (exactly, or to `1e-8` relative in float mode).
    pub identity_holds: bool,
    /// `s0 = q^{d-d*} g_hat_base`.
    pub base_identity_holds: bool,
    /// The character sum over high parts is `q^{d*-d}` at 0 and vanishes
    /// elsewhere. `None` when skipped for size.
    pub collapse_holds: Option<bool>,
    pub positivity: bool,
    pub bound: Option<ErrorBound>,
}

/// Flat JSON view of an [`APReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct APReportJson {
    pub q: u32,
    pub d: usize,
    pub d_star: usize,
    pub mode: Mode,
    pub lhs: f64,
    pub re_s0: f64,
    pub im_s0: f64,
    pub re_sneq0: f64,
    pub im_sneq0: f64,
    pub g_hat_base: f64,
    pub bound: Option<f64>,
    pub c2_measured: Option<f64>,
    pub positivity: bool,
    pub holds: Option<bool>,
    pub identity_holds: bool,
    pub base_identity_holds: bool,
    pub collapse_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_neq0_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_hat_base_exact: Option<String>,
}

impl APReport {
    pub fn to_json(&self) -> APReportJson {
        let exact = |s: &Scalar| s.as_exact().map(ToString::to_string);
        let s0 = self.s0.to_complex();
        let sn = self.s_neq0.to_complex();
        APReportJson {
            q: self.q,
            d: self.d,
            d_star: self.d_star,
            mode: self.mode,
            lhs: self.lhs.to_complex().re,
            re_s0: s0.re,
            im_s0: s0.im,
            re_sneq0: sn.re,
            im_sneq0: sn.im,
            g_hat_base: self.g_hat_base.to_complex().re,
            bound: self.bound.as_ref().map(|b| b.bound),
            c2_measured: self.bound.as_ref().map(|b| b.c2_measured),
            positivity: self.positivity,
            holds: self.bound.as_ref().map(|b| b.holds),
            identity_holds: self.identity_holds,
            base_identity_holds: self.base_identity_holds,
            collapse_holds: self.collapse_holds,
            lhs_exact: exact(&self.lhs),
            s0_exact: exact(&self.s0),
            s_neq0_exact: exact(&self.s_neq0),
            g_hat_base_exact: exact(&self.g_hat_base),
        }
    }

    /// Computes [`error_bound`] from this report's `S_{!=0}` and stores it.
    pub fn attach_bound(&mut self, mu: &MeasureTable, beta: f64) -> Result<&ErrorBound> {
        let b = bound_for(mu, self.d, beta, self.s_neq0.abs())?;
        Ok(self.bound.insert(b))
    }
}

/// Splits the separated trilinear form of `mu` (level `d*`) at level `d < d*`
/// and checks both identities.
pub fn spectral_decomposition(mu: &MeasureTable, d: usize) -> Result<APReport> {
    let d_star = mu.level();
    if d >= d_star {
        return Err(Error::param("d", format!("need d < d* = {d_star}, got {d}")));
    }
    let q = mu.modulus();
    let spec = mu.transform();
    let scale = BigInt::from(q.get()).pow((d_star + d) as u32);
    let (s0, s_neq0) = match spec.values() {
        Values::Exact(v) => {
            let (a, b, den) = exact_sums(q, d, d_star, v);
            let den = den * &scale;
            (
                Scalar::Exact(CycScalar::from_cyclic(q, a, den.clone())),
                Scalar::Exact(CycScalar::from_cyclic(q, b, den)),
            )
        }
        Values::Float(v) => {
            let (a, b) = float_sums(q, d, d_star, v);
            let s = scale.to_f64().unwrap_or(f64::INFINITY);
            (Scalar::Float(a / s), Scalar::Float(b / s))
        }
    };

    let lhs = trilinear_g_separated(mu, SeparationPredicate::new(d))?;
    let g_hat_base = trilinear_g(&pushforward(mu, d)?);
    let shrink = BigRational::new(BigInt::one(), BigInt::from(q.get()).pow((d_star - d) as u32));
    let base = Scalar::from_rational(q, &shrink, mu.mode()).try_mul(&g_hat_base)?;
    let sum = s0.try_add(&s_neq0)?;
    let mass3 = mu.mass().to_f64().powi(3);
    let identity_holds = agree(&lhs, &sum, mass3);
    let base_identity_holds = agree(&s0, &base, mass3);
    let positivity = match &lhs {
        Scalar::Exact(c) => c.to_rational().is_some_and(|r| r.is_positive()),
        Scalar::Float(z) => z.re > 0.0,
    };
    Ok(APReport {
        q: q.get(),
        d,
        d_star,
        mode: mu.mode(),
        lhs,
        s0,
        s_neq0,
        g_hat_base,
        identity_holds,
        base_identity_holds,
        collapse_holds: collapse_check(q, d, d_star)?,
        positivity,
        bound: None,
    })
}

fn agree(a: &Scalar, b: &Scalar, mass3: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
        _ => {
            let (x, y) = (a.to_complex(), b.to_complex());
            let scale = x.norm().max(y.norm());
            (x - y).norm() <= FLOAT_REL_TOL * scale + 1e-12 * mass3
        }
    }
}

/// `|S_{!=0}|` against the bound obtained by putting
/// `|F(xi)| <= mass C2 |xi|^{-beta/2}` into every factor, where `C2` is the
/// measured constant of the normalized measure and the series over `xi1''`
/// stops at `|xi1''| = q^{d*}`.
pub fn error_bound(mu: &MeasureTable, d: usize, beta: f64) -> Result<ErrorBound> {
    check_beta(beta)?;
    let report = spectral_decomposition(mu, d)?;
    bound_for(mu, d, beta, report.s_neq0.abs())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 2.0 / 3.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::param("beta", format!("need 2/3 < beta < 1, got {beta}")))
    }
}

fn bound_for(mu: &MeasureTable, d: usize, beta: f64, s_neq0_abs: f64) -> Result<ErrorBound> {
    check_beta(beta)?;
    let d_star = mu.level();
    if d >= d_star {
        return Err(Error::param("d", format!("need d < d* = {d_star}, got {d}")));
    }
    let mass = mu.mass().to_f64();
    if !(mass > 0.0) {
        return Err(Error::param("mu", "zero measure has no normalized transform"));
    }
    let q = mu.modulus();
    let qf = q.get() as f64;
    let c2_measured = measured_c2(&mu.transform(), beta) / mass;
    let shells = (d + 1..=d_star).fold(0.0, |acc, j| {
        acc + (qf - 1.0) * qf.powi((j - d - 1) as i32) * qf.powf(-1.5 * beta * j as f64)
    });
    let qd = qf.powi(d as i32);
    let bound = mass.powi(3) * c2_measured.powi(3) * qf.powi(-((d_star + d) as i32)) * shells * 2.0 * qd * (qd - 1.0);
    Ok(ErrorBound {
        beta,
        bound,
        c2_measured,
        s_neq0_abs,
        holds: s_neq0_abs <= bound * (1.0 + 1e-12),
    })
}

fn measured_c2(spec: &SpectralTable, beta: f64) -> f64 {
    let qf = spec.modulus().get() as f64;
    let values = spec.values().to_complex();
    spec.shells()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, r)| {
            let top = values[r.clone()].iter().map(|z| z.norm()).fold(0.0, f64::max);
            top * qf.powf(j as f64 * beta / 2.0)
        })
        .fold(0.0, f64::max)
}

/// Checks that `sum_{a''} e_q(theta'' . a'')` over points with first `d`
/// digits zero is `q^{d*-d}` for `theta'' = 0` and `0` for every other high
/// frequency.
fn collapse_check(q: Modulus, d: usize, d_star: usize) -> Result<Option<bool>> {
    let high = q.size(d_star - d);
    if high.saturating_mul(high) > COLLAPSE_BUDGET {
        return Ok(None);
    }
    let block = q.size(d);
    for t in 0..high {
        let theta = DualVec::from_index(q, d_star, t * block)?;
        let mut counts = vec![BigInt::zero(); q.as_usize()];
        for a in 0..high {
            let x = PointVec::from_index(q, d_star, a * block)?;
            counts[pair(&theta, &x)? as usize] += 1;
        }
        let sum = CycScalar::from_cyclic(q, counts, BigInt::one());
        let expect = if t == 0 { high } else { 0 };
        if sum != CycScalar::from_integer(q, expect) {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

struct Layout {
    q: usize,
    block: usize,
    high: usize,
    low: IndexOps,
    full: IndexOps,
}

impl Layout {
    fn new(q: Modulus, d: usize, d_star: usize) -> Self {
        Layout {
            q: q.as_usize(),
            block: q.size(d),
            high: q.size(d_star - d),
            low: IndexOps::new(q, d),
            full: IndexOps::new(q, d_star),
        }
    }

    /// Indices of `xi1''` and `-2 xi1''` for the `h`-th high part.
    fn frequencies(&self, h: usize) -> (usize, usize) {
        let hi = h * self.block;
        let neg2 = self.full.scale(self.q - 2, hi);
        (hi, neg2)
    }
}

trait Ring: Clone + Zero + for<'a> AddAssign<&'a Self> {
    fn mul_add(acc: &mut Self, a: &Self, b: &Self);
    fn scale(&mut self, k: &Self);
    fn neg_in_place(&mut self);
}

impl Ring for i128 {
    #[inline]
    fn mul_add(acc: &mut Self, a: &Self, b: &Self) {
        *acc += a * b;
    }
    fn scale(&mut self, k: &Self) {
        *self *= k;
    }
    fn neg_in_place(&mut self) {
        *self = -*self;
    }
}

impl Ring for BigInt {
    #[inline]
    fn mul_add(acc: &mut Self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn scale(&mut self, k: &Self) {
        *self *= k;
    }
    fn neg_in_place(&mut self) {
        *self = -std::mem::take(self);
    }
}

/// `out += a * b` in `Z[x]/(x^q - 1)`.
#[inline]
fn cyc_mul_add<T: Ring>(out: &mut [T], a: &[T], b: &[T]) {
    let q = out.len();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let k = if i + j >= q { i + j - q } else { i + j };
            T::mul_add(&mut out[k], x, y);
        }
    }
}

/// Returns the cyclic numerators of `q^{d*+d} den^3 S_0` and
/// `q^{d*+d} den^3 S_{!=0}` together with `den^3`.
fn exact_sums(q: Modulus, d: usize, d_star: usize, values: &[CycScalar]) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
    let qn = q.as_usize();
    let den = values
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denominator()));
    let mut flat: Vec<BigInt> = Vec::with_capacity(values.len() * qn);
    for c in values {
        let factor = &den / c.denominator();
        flat.extend(c.numerators().iter().map(|x| x * &factor));
        flat.push(BigInt::zero());
    }
    let max = flat.iter().map(|x| x.abs()).max().unwrap_or_default();
    let layout = Layout::new(q, d, d_star);
    // |term| <= 2 q^2 block max^3 per coefficient, summed over block * high terms
    let worst = BigInt::from(2 * qn * qn)
        * BigInt::from(layout.block).pow(2)
        * BigInt::from(layout.high)
        * max.pow(3);
    let (s0, sn) = if worst < (BigInt::one() << 120) {
        let small: Vec<i128> = flat.iter().map(|x| x.to_i128().expect("bounded")).collect();
        let (a, b) = integer_sums(&layout, &small, layout.block as i128);
        (
            a.into_iter().map(BigInt::from).collect(),
            b.into_iter().map(BigInt::from).collect(),
        )
    } else {
        integer_sums(&layout, &flat, BigInt::from(layout.block))
    };
    (s0, sn, den.pow(3))
}

fn integer_sums<T: Ring>(layout: &Layout, flat: &[T], block_t: T) -> (Vec<T>, Vec<T>) {
    let q = layout.q;
    let at = |i: usize| &flat[i * q..(i + 1) * q];
    let mut s0 = vec![T::zero(); q];
    let mut sn = vec![T::zero(); q];
    let mut all = vec![T::zero(); q];
    let mut zero = vec![T::zero(); q];
    for h in 0..layout.high {
        let (hi, neg2) = layout.frequencies(h);
        let out = if h == 0 { &mut s0 } else { &mut sn };
        for u in 0..layout.block {
            all.iter_mut().for_each(|c| *c = T::zero());
            zero.iter_mut().for_each(|c| *c = T::zero());
            let v0 = layout.low.scale(q - 2, u);
            for v in 0..layout.block {
                let i1 = layout.low.combine(q - 1, u, q - 1, v) + hi;
                let i3 = v + neg2;
                cyc_mul_add(&mut all, at(i1), at(i3));
                if v == v0 {
                    cyc_mul_add(&mut zero, at(i1), at(i3));
                }
            }
            // sum_v c(2u + v) P(u, v) = q^d P(u, v0) - sum_v P(u, v)
            for (z, a) in zero.iter_mut().zip(&all) {
                z.scale(&block_t);
                let mut minus = a.clone();
                minus.neg_in_place();
                *z += &minus;
            }
            cyc_mul_add(out, at(u + hi), &zero);
        }
    }
    (s0, sn)
}

fn float_sums(q: Modulus, d: usize, d_star: usize, values: &[Complex64]) -> (Complex64, Complex64) {
    let layout = Layout::new(q, d, d_star);
    let qn = layout.q;
    let block = layout.block as f64;
    let mut s0 = Complex64::zero();
    let mut sn = Complex64::zero();
    for h in 0..layout.high {
        let (hi, neg2) = layout.frequencies(h);
        let mut acc = Complex64::zero();
        for u in 0..layout.block {
            let v0 = layout.low.scale(qn - 2, u);
            let mut all = Complex64::zero();
            let mut zero = Complex64::zero();
            for v in 0..layout.block {
                let p = values[layout.low.combine(qn - 1, u, qn - 1, v) + hi] * values[v + neg2];
                all += p;
                if v == v0 {
                    zero = p;
                }
            }
            acc += values[u + hi] * (zero * block - all);
        }
        if h == 0 {
            s0 = acc;
        } else {
            sn += acc;
        }
    }
    (s0, sn)
}
