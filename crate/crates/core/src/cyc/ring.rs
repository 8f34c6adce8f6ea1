use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{inv_mod, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest supported modulus; keeps sums of two residues inside `u64`.
const MAX_MODULUS: u128 = 1 << 62;

/// The residue ring `Z/p^m`, the coefficient ring of truncated p-adic values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Zpm {
    p: u64,
    m: u32,
    modulus: u64,
}

impl Zpm {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        match crate::arith::checked_pow(p, m) {
            Some(n) if n <= MAX_MODULUS => Ok(Zpm { p, m, modulus: n as u64 }),
            _ => Err(Error::PrecisionTooLarge { p, m }),
        }
    }

    /// Largest precision representable for `p`.
    pub fn max_precision(p: u64) -> u32 {
        let mut m = 0;
        let mut n: u128 = 1;
        while n * p as u128 <= MAX_MODULUS {
            n *= p as u128;
            m += 1;
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn with_precision(&self, m: u32) -> Result<Zpm> {
        Zpm::new(self.p, m)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        crate::arith::reduce_i64(x, self.modulus)
    }

    pub fn from_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus)).to_u64().expect("reduced residue fits")
    }

    /// Inverse of a unit (residue prime to `p`).
    pub fn inv(&self, a: u64) -> Result<u64> {
        inv_mod(a, self.modulus)
            .ok_or_else(|| Error::InvalidArgument(format!("{a} is not a unit mod {}^{}", self.p, self.m)))
    }

    /// `v_p(a)` for a nonzero residue; `None` when `a ≡ 0`.
    pub fn valuation(&self, a: u64) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(crate::arith::valuation(a, self.p))
        }
    }

    /// Exact division of a residue divisible by `p^k`; the result lives in
    /// `Z/p^{m-k}`.
    pub fn div_p_pow(&self, a: u64, k: u32) -> Result<(Zpm, u64)> {
        if k >= self.m {
            return Err(Error::precision(self.m, format!("dividing by p^{k}")));
        }
        let pk = self.p.pow(k);
        if !a.is_multiple_of(pk) {
            return Err(Error::InvalidArgument(format!("{a} is not divisible by {}^{k}", self.p)));
        }
        let lower = self.with_precision(self.m - k)?;
        Ok((lower, (a / pk) % lower.modulus))
    }

    /// Reduction to a lower precision.
    pub fn reduce_to(&self, a: u64, lower: &Zpm) -> u64 {
        debug_assert!(lower.p == self.p && lower.m <= self.m);
        a % lower.modulus
    }

    /// Symmetric representative in `(-p^m/2, p^m/2]`.
    pub fn signed(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_limits() {
        assert!(Zpm::new(5, 26).is_ok());
        assert!(matches!(Zpm::new(5, 40), Err(Error::PrecisionTooLarge { .. })));
        let m = Zpm::max_precision(337);
        assert!(Zpm::new(337, m).is_ok());
        assert!(Zpm::new(337, m + 1).is_err());
    }

    #[test]
    fn division_by_p() {
        let r = Zpm::new(5, 3).unwrap();
        let (lower, q) = r.div_p_pow(50, 2).unwrap();
        assert_eq!(lower.precision(), 1);
        assert_eq!(q, 2);
        assert!(r.div_p_pow(51, 1).is_err());
        assert_eq!(r.valuation(50), Some(2));
        assert_eq!(r.valuation(0), None);
    }
}
