use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::padic::PadicCyc;
use super::ring::Zpm;
use crate::error::{Error, Result};

/// Exact element of `Z[ζ_p]` in the power basis `ζ^0, ..., ζ^{p-2}`.
///
/// The canonical form is unique because `1, ζ, ..., ζ^{p-2}` is a
/// `Z`-basis; `ζ^{p-1}` is rewritten as `-(1 + ζ + ... + ζ^{p-2})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(p={}, ", self.p)?;
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()?;
        write!(f, ")")
    }
}

/// Folds a length-`p` vector (coefficients of `ζ^0..ζ^{p-1}`) into canonical form.
pub(crate) fn reduce_big(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let top = v.pop().expect("length p");
    if !top.is_zero() {
        for c in v.iter_mut() {
            *c -= &top;
        }
    }
    v
}

impl CycInt {
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() as u64 != p - 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for p = {p}, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { p, coeffs })
    }

    /// From coefficients of `ζ^0, ..., ζ^{p-1}` (length `p`, not yet reduced).
    pub fn from_exponent_counts(p: u64, counts: Vec<BigInt>) -> Self {
        assert_eq!(counts.len() as u64, p);
        CycInt { p, coeffs: reduce_big(counts) }
    }

    pub fn zero(p: u64) -> Self {
        CycInt { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = n.into();
        x
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// `ζ^e` for any integer exponent.
    pub fn zeta_pow(p: u64, e: i64) -> Self {
        let mut v = vec![BigInt::zero(); p as usize];
        v[e.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_exponent_counts(p, v)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Mismatch(format!("p = {} vs p = {}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Product reduced mod `Φ_p`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p as usize;
        let mut v = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[(i + j) % p] += a * b;
                }
            }
        }
        Ok(CycInt { p: self.p, coeffs: reduce_big(v) })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        result
    }

    /// `σ_t`, the automorphism `ζ ↦ ζ^t`.
    pub fn galois(&self, t: i64) -> Result<Self> {
        let p = self.p as i64;
        let t = t.rem_euclid(p);
        if t == 0 {
            return Err(Error::InvalidArgument(format!("galois index {t} is divisible by p = {p}")));
        }
        let mut v = vec![BigInt::zero(); p as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(i as i64 * t % p) as usize] += c;
        }
        Ok(CycInt { p: self.p, coeffs: reduce_big(v) })
    }

    /// Complex conjugation `σ_{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1).unwrap()
    }

    /// Field norm `N_{Q(ζ)/Q}`, the product of all Galois conjugates.
    pub fn norm(&self) -> BigInt {
        let mut acc = self.clone();
        for t in 2..self.p as i64 {
            acc = acc.mul(&self.galois(t).unwrap()).unwrap();
        }
        acc.as_integer().cloned().expect("a norm is a rational integer")
    }

    /// Trace `Σ_t σ_t(x)`: `(p-1) c_0 - Σ_{i≥1} c_i`.
    pub fn trace(&self) -> BigInt {
        let rest: BigInt = self.coeffs[1..].iter().sum();
        &self.coeffs[0] * BigInt::from(self.p - 1) - rest
    }

    pub fn to_padic(&self, ring: Zpm) -> Result<PadicCyc> {
        if ring.p() != self.p {
            return Err(Error::Mismatch(format!("ring prime {} vs element prime {}", ring.p(), self.p)));
        }
        PadicCyc::new(ring, self.coeffs.iter().map(|c| ring.from_bigint(c)).collect())
    }

    /// Evaluates the representing polynomial at `x` modulo `m`.
    pub fn eval_mod(&self, x: &BigInt, m: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(m);
        }
        acc
    }

    /// Matrix of multiplication by `self` on the basis `ζ^0..ζ^{p-2}`
    /// (column `j` is `self · ζ^j`).
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigInt>> {
        let n = (self.p - 1) as usize;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n {
            let col = self.mul(&Self::zeta_pow(self.p, j as i64)).unwrap();
            for i in 0..n {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m
    }

    /// Largest absolute coefficient, handy for sanity bounds.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Decimal strings, the serialised form.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(p: u64, s: &[String]) -> Result<Self> {
        let coeffs = s
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(|e| Error::InvalidArgument(format!("{t}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, coeffs)
    }
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            p: u64,
            coeffs: &'a [String],
        }
        Repr { p: self.p, coeffs: &self.to_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            p: u64,
            coeffs: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        CycInt::from_strings(r.p, &r.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_relation() {
        for p in [5u64, 7, 11] {
            let z = CycInt::zeta_pow(p, 1);
            let prod = z.mul(&CycInt::zeta_pow(p, p as i64 - 2)).unwrap();
            let expected = CycInt::new(p, vec![BigInt::from(-1); (p - 1) as usize]).unwrap();
            assert_eq!(prod, expected);
            assert_eq!(z.mul(&CycInt::one(p)).unwrap(), z);
            // ∏ (1 - ζ^i) = Φ_p(1) = p
            let mut acc = CycInt::one(p);
            for i in 1..p as i64 {
                acc = acc.mul(&CycInt::one(p).sub(&CycInt::zeta_pow(p, i)).unwrap()).unwrap();
            }
            assert_eq!(acc, CycInt::from_int(p, p));
        }
    }

    #[test]
    fn galois_action() {
        let p = 7;
        let x = CycInt::new(p, (1..7).map(BigInt::from).collect()).unwrap();
        assert_eq!(x.galois(1).unwrap(), x);
        assert_eq!(CycInt::zeta_pow(p, 1).galois(6).unwrap(), CycInt::zeta_pow(p, 6));
        for a in 1..7 {
            for b in 1..7 {
                assert_eq!(x.galois(a).unwrap().galois(b).unwrap(), x.galois(a * b % 7).unwrap());
            }
        }
        assert!(x.galois(14).is_err());
    }

    #[test]
    fn norms() {
        for p in [5u64, 7, 13] {
            assert_eq!(CycInt::zeta_pow(p, 1).norm(), BigInt::one());
            let pi = CycInt::one(p).sub(&CycInt::zeta_pow(p, 1)).unwrap();
            assert_eq!(pi.norm(), BigInt::from(p));
            assert_eq!(CycInt::from_int(p, 3).norm(), BigInt::from(3).pow((p - 1) as u32));
        }
    }

    #[test]
    fn trace_matches_sum_of_conjugates() {
        let p = 7;
        let x = CycInt::new(p, [3, -1, 4, 1, -5, 9].iter().map(|&c| BigInt::from(c)).collect()).unwrap();
        let mut sum = CycInt::zero(p);
        for t in 1..p as i64 {
            sum = sum.add(&x.galois(t).unwrap()).unwrap();
        }
        assert_eq!(sum.as_integer().unwrap(), &x.trace());
    }

    #[test]
    fn serde_roundtrip() {
        let x = CycInt::new(5, vec![BigInt::from(-9), BigInt::from(12345678901234567890u64), BigInt::zero(), BigInt::one()]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"12345678901234567890\""));
        let back: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
