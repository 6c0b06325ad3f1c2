//! Digit-wise arithmetic directly on encoded indices, for inner loops that
//! would otherwise build vectors.

use super::Modulus;

#[derive(Debug, Clone, Copy)]
pub(crate) struct IndexOps {
    q: usize,
    d: usize,
}

impl IndexOps {
    pub fn new(q: Modulus, d: usize) -> Self {
        IndexOps { q: q.as_usize(), d }
    }

    /// `a x + b y`, digit by digit; `a, b` are taken mod `q`.
    #[inline]
    pub fn combine(&self, a: usize, mut x: usize, b: usize, mut y: usize) -> usize {
        let q = self.q;
        let (a, b) = (a % q, b % q);
        let mut out = 0;
        let mut p = 1;
        for _ in 0..self.d {
            out += ((a * (x % q) + b * (y % q)) % q) * p;
            x /= q;
            y /= q;
            p *= q;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.combine(1, x, 1, y)
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.combine(1, x, self.q - 1, y)
    }

    #[inline]
    pub fn scale(&self, c: usize, x: usize) -> usize {
        self.combine(c, x, 0, 0)
    }
}
