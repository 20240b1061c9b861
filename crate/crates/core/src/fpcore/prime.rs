use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd prime `3 <= p < 2^16` together with the arithmetic of `Z/p`.
///
/// Residues are `u32` values in `[0, p)`. Because `p < 2^16`, a product of
/// two residues fits in a `u32` and sums of up to `2^32` such products fit
/// in a `u64`, which the hot loops rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u32);

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !(3..(1 << 16)).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    #[inline]
    pub fn reduce_signed(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.0
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// The residue `1/2 = (p + 1) / 2`.
    #[inline]
    pub fn half(self) -> u32 {
        self.0.div_ceil(2)
    }

    /// `p^k` as an exact integer, `None` on overflow.
    pub fn checked_pow(self, k: u32) -> Option<u128> {
        (self.0 as u128).checked_pow(k)
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0 as u64
    }
}

impl std::fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert_eq!(PrimeModulus::new(2), Err(Error::EvenPrime));
        assert_eq!(PrimeModulus::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeModulus::new(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(
            PrimeModulus::new(65537),
            Err(Error::ModulusOutOfRange(65537))
        );
        assert!(PrimeModulus::new(65521).is_ok());
    }

    #[test]
    fn half_and_inverse() {
        for p in [3u64, 5, 7, 11, 101, 65521] {
            let m = PrimeModulus::new(p).unwrap();
            assert_eq!(m.mul(m.half(), 2), 1);
            for a in 1..p.min(200) as u32 {
                assert_eq!(m.mul(a, m.inv(a).unwrap()), 1);
            }
            assert_eq!(m.inv(0), None);
        }
    }

    #[test]
    fn add_sub_neg_wrap() {
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(m.add(5, 4), 2);
        assert_eq!(m.sub(2, 5), 4);
        assert_eq!(m.neg(3), 4);
        assert_eq!(m.neg(0), 0);
        assert_eq!(m.reduce_signed(-1), 6);
    }
}
