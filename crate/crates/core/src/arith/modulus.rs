use std::fmt;

use crate::error::{Error, Result};

/// An odd prime `q` with `3 <= q <= 31`, the size of the digit field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u8);

impl Modulus {
    pub const MAX: u32 = 31;

    pub fn new(q: u32) -> Result<Self> {
        if !(3..=Self::MAX).contains(&q) || !is_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        Ok(Modulus(q as u8))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// `q^d` as a table size. Panics on overflow.
    pub fn size(self, d: usize) -> usize {
        let mut n: usize = 1;
        for _ in 0..d {
            n = n
                .checked_mul(self.as_usize())
                .expect("q^d overflows usize");
        }
        n
    }

    /// `q^d` when it fits, for parameter validation.
    pub fn checked_size(self, d: usize) -> Option<usize> {
        let mut n: usize = 1;
        for _ in 0..d {
            n = n.checked_mul(self.as_usize())?;
        }
        Some(n)
    }

    /// Multiplicative inverse in Z/q of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        let q = self.get();
        debug_assert!(a % q != 0);
        // Fermat: a^(q-2)
        let mut result = 1u32;
        let mut base = a % q;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        result
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.get() as i64) as u32
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|p| p * p <= n).all(|p| n % p != 0)
}
