use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{DenseTable, SpectralTable, Values};
use crate::arith::cyclotomic::cyclic;
use crate::arith::{unit_root, CycScalar, Modulus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Direct `q^{2d}` double sum.
    Naive,
    /// `d` passes of length-`q` transforms, one per digit axis.
    Fast,
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "fast" => Ok(Algorithm::Fast),
            other => Err(Error::param(
                "algorithm",
                format!("expected naive|fast, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Plus,
    Minus,
}

/// `F(xi) = sum_x f(x) e_q(xi . x)`.
pub fn dft_forward(f: &DenseTable, algorithm: Algorithm) -> SpectralTable {
    let values = transform(f.q, f.d, &f.values, algorithm, Sign::Plus, BigInt::one());
    SpectralTable::new(f.q, f.d, values).expect("transform preserves table shape")
}

/// `f(x) = q^{-d} sum_xi F(xi) conj(e_q(xi . x))`, the exact inverse of
/// [`dft_forward`].
pub fn dft_inverse(spectrum: &SpectralTable) -> DenseTable {
    dft_inverse_with(spectrum, Algorithm::Fast)
}

pub fn dft_inverse_with(spectrum: &SpectralTable, algorithm: Algorithm) -> DenseTable {
    let q = spectrum.q;
    let d = spectrum.d;
    let scale = BigInt::from(q.get()).pow(d as u32);
    let values = transform(q, d, &spectrum.values, algorithm, Sign::Minus, scale);
    DenseTable::new(q, d, values).expect("transform preserves table shape")
}

/// Transform with kernel `zeta^{+-xi.x}`, dividing the result by `divisor`.
fn transform(q: Modulus, d: usize, values: &Values, algorithm: Algorithm, sign: Sign, divisor: BigInt) -> Values {
    match values {
        Values::Exact(v) => {
            let mut table = CyclicTable::lift(q, v);
            match algorithm {
                Algorithm::Fast => table.fast(d, sign),
                Algorithm::Naive => table = table.naive(d, sign),
            }
            table.den *= divisor;
            Values::Exact(table.lower())
        }
        Values::Float(v) => {
            let mut out = match algorithm {
                Algorithm::Fast => {
                    let mut data = v.clone();
                    fast_float(q, d, &mut data, sign);
                    data
                }
                Algorithm::Naive => naive_float(q, d, v, sign),
            };
            if !divisor.is_one() {
                let s = 1.0 / num_traits::ToPrimitive::to_f64(&divisor).unwrap_or(f64::INFINITY);
                out.iter_mut().for_each(|z| *z *= s);
            }
            Values::Float(out)
        }
    }
}

/// `zeta^{+-r}` as a rotation amount in `0..q`.
#[inline]
fn rotation(q: usize, r: usize, sign: Sign) -> usize {
    match sign {
        Sign::Plus => r % q,
        Sign::Minus => (q - r % q) % q,
    }
}

/// Pair values `xi . x` for one fixed `xi` and every point index `x`.
fn pair_row(q: usize, d: usize, xi: usize, row: &mut [u8]) {
    row[0] = 0;
    let mut block = 1;
    let mut rest = xi;
    for _ in 0..d {
        let digit = rest % q;
        rest /= q;
        for x in 1..q {
            let shift = (digit * x) % q;
            let (head, tail) = row.split_at_mut(x * block);
            for (dst, &src) in tail[..block].iter_mut().zip(&head[..block]) {
                *dst = ((src as usize + shift) % q) as u8;
            }
        }
        block *= q;
    }
}

/// Flat table of length-`q` cyclic integer vectors over a common denominator.
struct CyclicTable {
    q: usize,
    modulus: Modulus,
    data: Vec<BigInt>,
    den: BigInt,
}

impl CyclicTable {
    fn lift(modulus: Modulus, values: &[CycScalar]) -> Self {
        let q = modulus.as_usize();
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denominator()));
        let mut data = Vec::with_capacity(values.len() * q);
        for c in values {
            let factor = &den / c.denominator();
            if factor.is_one() {
                data.extend(c.numerators().iter().cloned());
            } else {
                data.extend(c.numerators().iter().map(|x| x * &factor));
            }
            data.push(BigInt::zero());
        }
        CyclicTable { q, modulus, data, den }
    }

    fn lower(self) -> Vec<CycScalar> {
        let q = self.q;
        let den = self.den;
        let modulus = self.modulus;
        let mut out = Vec::with_capacity(self.data.len() / q);
        let mut it = self.data.into_iter();
        loop {
            let chunk: Vec<BigInt> = it.by_ref().take(q).collect();
            if chunk.is_empty() {
                break;
            }
            out.push(CycScalar::from_cyclic(modulus, chunk, den.clone()));
        }
        out
    }

    fn fast(&mut self, d: usize, sign: Sign) {
        let q = self.q;
        let n = self.data.len() / q;
        let mut tmp = vec![BigInt::zero(); q * q];
        let mut stride = 1;
        for _ in 0..d {
            let span = stride * q;
            for hi in (0..n).step_by(span) {
                for lo in 0..stride {
                    let base = hi + lo;
                    for k in 0..q {
                        for j in 0..q {
                            let src = (base + j * stride) * q;
                            cyclic::add_rotated(
                                &mut tmp[k * q..(k + 1) * q],
                                &self.data[src..src + q],
                                rotation(q, j * k, sign),
                            );
                        }
                    }
                    for k in 0..q {
                        let dst = (base + k * stride) * q;
                        for c in 0..q {
                            std::mem::swap(&mut self.data[dst + c], &mut tmp[k * q + c]);
                            tmp[k * q + c].set_zero();
                        }
                    }
                }
            }
            stride = span;
        }
    }

    fn naive(&self, d: usize, sign: Sign) -> CyclicTable {
        let q = self.q;
        let n = self.data.len() / q;
        let mut row = vec![0u8; n];
        let mut buckets = vec![BigInt::zero(); q * q];
        let mut data = vec![BigInt::zero(); n * q];
        for xi in 0..n {
            pair_row(q, d, xi, &mut row);
            for (x, &r) in row.iter().enumerate() {
                let r = r as usize;
                let src = &self.data[x * q..(x + 1) * q];
                for (b, s) in buckets[r * q..(r + 1) * q].iter_mut().zip(src) {
                    if s.bits() != 0 {
                        *b += s;
                    }
                }
            }
            let out = &mut data[xi * q..(xi + 1) * q];
            for r in 0..q {
                cyclic::add_rotated(out, &buckets[r * q..(r + 1) * q], rotation(q, r, sign));
            }
            buckets.iter_mut().for_each(Zero::set_zero);
        }
        CyclicTable {
            q,
            modulus: self.modulus,
            data,
            den: self.den.clone(),
        }
    }
}

fn roots(q: Modulus, sign: Sign) -> Vec<Complex64> {
    (0..q.as_usize())
        .map(|r| unit_root(q, rotation(q.as_usize(), r, sign) as i64))
        .collect()
}

/// Pairwise summation of a short slice.
fn pairwise(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let (a, b) = terms.split_at(n / 2);
            pairwise(a) + pairwise(b)
        }
    }
}

fn fast_float(q: Modulus, d: usize, data: &mut [Complex64], sign: Sign) {
    let w = roots(q, sign);
    let q = q.as_usize();
    let n = data.len();
    let mut input = vec![Complex64::new(0.0, 0.0); q];
    let mut terms = vec![Complex64::new(0.0, 0.0); q];
    let mut stride = 1;
    for _ in 0..d {
        let span = stride * q;
        for hi in (0..n).step_by(span) {
            for lo in 0..stride {
                let base = hi + lo;
                for (j, slot) in input.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                for k in 0..q {
                    for (j, t) in terms.iter_mut().enumerate() {
                        *t = input[j] * w[(j * k) % q];
                    }
                    data[base + k * stride] = pairwise(&terms);
                }
            }
        }
        stride = span;
    }
}

fn naive_float(q: Modulus, d: usize, data: &[Complex64], sign: Sign) -> Vec<Complex64> {
    let w = roots(q, sign);
    let q = q.as_usize();
    let n = data.len();
    let mut row = vec![0u8; n];
    let mut out = Vec::with_capacity(n);
    for xi in 0..n {
        pair_row(q, d, xi, &mut row);
        let mut buckets = [Complex64::new(0.0, 0.0); 31];
        for (&r, &v) in row.iter().zip(data) {
            buckets[r as usize] += v;
        }
        let terms: Vec<Complex64> = (0..q).map(|r| buckets[r] * w[r]).collect();
        out.push(pairwise(&terms));
    }
    out
}
