use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::padic::PadicCyc;
use super::ring::Zpm;
use super::teich::{Character, PadicScalar};
use crate::arith::inv_mod;
use crate::error::{Error, Result};

fn unit_index(p: u64, a: i64) -> Result<usize> {
    let a = a.rem_euclid(p as i64) as usize;
    if a == 0 {
        return Err(Error::InvalidArgument(format!("σ_a needs a prime to {p}")));
    }
    Ok(a - 1)
}

/// Element `Σ_a c_a σ_a` of `(Z/p^M)[Δ]`; `coeffs[a-1]` is the coefficient of `σ_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    ring: Zpm,
    coeffs: Vec<u64>,
}

impl GroupRingElt {
    pub fn new(ring: Zpm, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() as u64 != ring.p() - 1 {
            return Err(Error::InvalidArgument(format!("expected {} coefficients", ring.p() - 1)));
        }
        Ok(GroupRingElt { ring, coeffs: coeffs.into_iter().map(|c| c % ring.modulus()).collect() })
    }

    pub fn zero(ring: Zpm) -> Self {
        GroupRingElt { ring, coeffs: vec![0; (ring.p() - 1) as usize] }
    }

    pub fn sigma(ring: Zpm, a: i64) -> Result<Self> {
        let mut x = Self::zero(ring);
        x.coeffs[unit_index(ring.p(), a)?] = 1;
        Ok(x)
    }

    /// `N = Σ_δ δ`.
    pub fn norm_element(ring: Zpm) -> Self {
        GroupRingElt { ring, coeffs: vec![1; (ring.p() - 1) as usize] }
    }

    /// `e_ρ = (p-1)^{-1} Σ_a ρ^{-1}(a) σ_a`.
    pub fn idempotent(ring: Zpm, chi: Character) -> Self {
        let vals = chi.inverse().values(ring);
        let s = ring.inv(ring.from_u64(ring.p() - 1)).unwrap();
        GroupRingElt { ring, coeffs: (1..ring.p() as usize).map(|a| ring.mul(s, vals[a])).collect() }
    }

    pub fn ring(&self) -> Zpm {
        self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: i64) -> u64 {
        self.coeffs[unit_index(self.ring.p(), a).expect("unit index")]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.ring;
        Ok(GroupRingElt { ring: r, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| r.add(a, b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.ring;
        Ok(GroupRingElt { ring: r, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| r.sub(a, b)).collect() })
    }

    pub fn scale(&self, k: u64) -> Self {
        let r = self.ring;
        GroupRingElt { ring: r, coeffs: self.coeffs.iter().map(|&a| r.mul(a, k % r.modulus())).collect() }
    }

    /// Convolution, `σ_a σ_b = σ_{ab}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.ring;
        let p = r.p() as usize;
        let mut out = vec![0u64; p - 1];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in other.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                let k = (i + 1) * (j + 1) % p - 1;
                out[k] = r.add(out[k], r.mul(a, b));
            }
        }
        Ok(GroupRingElt { ring: r, coeffs: out })
    }

    /// `Σ_a c_a σ_a(x)`.
    pub fn apply(&self, x: &PadicCyc) -> Result<PadicCyc> {
        if x.ring() != self.ring {
            return Err(Error::Mismatch("group ring and element precision differ".into()));
        }
        let mut acc = PadicCyc::zero(self.ring);
        for (i, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            acc = acc.add(&x.galois(i as i64 + 1)?.scale(c))?;
        }
        Ok(acc)
    }

    /// `ψ(Σ c_a σ_a) = Σ c_a ψ(a)`.
    pub fn character_value(&self, chi: Character) -> u64 {
        let r = self.ring;
        let vals = chi.values(r);
        self.coeffs.iter().enumerate().fold(0, |acc, (i, &c)| r.add(acc, r.mul(c, vals[i + 1])))
    }
}

/// Element of `Q[Δ]`, for `θ` and the products built from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalGroupRingElt {
    p: u64,
    coeffs: Vec<BigRational>,
}

impl RationalGroupRingElt {
    pub fn zero(p: u64) -> Self {
        RationalGroupRingElt { p, coeffs: vec![BigRational::zero(); (p - 1) as usize] }
    }

    pub fn from_integers(p: u64, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() as u64 != p - 1 {
            return Err(Error::InvalidArgument(format!("expected {} coefficients", p - 1)));
        }
        Ok(RationalGroupRingElt { p, coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect() })
    }

    pub fn sigma(p: u64, a: i64) -> Result<Self> {
        let mut x = Self::zero(p);
        x.coeffs[unit_index(p, a)?] = BigRational::one();
        Ok(x)
    }

    /// `θ = p^{-1} Σ_a a σ_a^{-1}`: the coefficient of `σ_b` is `(b^{-1} mod p)/p`.
    pub fn theta(p: u64) -> Self {
        let coeffs = (1..p)
            .map(|b| BigRational::new(BigInt::from(inv_mod(b, p).unwrap()), BigInt::from(p)))
            .collect();
        RationalGroupRingElt { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, a: i64) -> &BigRational {
        &self.coeffs[unit_index(self.p, a).expect("unit index")]
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalGroupRingElt { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalGroupRingElt { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RationalGroupRingElt { p: self.p, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p as usize;
        let mut out = vec![BigRational::zero(); p - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[(i + 1) * (j + 1) % p - 1] += a * b;
            }
        }
        RationalGroupRingElt { p: self.p, coeffs: out }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Reduction into `(Z/p^M)[Δ]` of a p-integral element.
    pub fn to_modular(&self, ring: Zpm) -> Result<GroupRingElt> {
        let m = BigInt::from(ring.modulus());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let den = c.denom();
                if den.is_multiple_of(&BigInt::from(self.p)) {
                    return Err(Error::InvalidArgument("coefficient is not p-integral".into()));
                }
                let inv = den.extended_gcd(&m).x;
                Ok(ring.from_bigint(&(c.numer() * inv)))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupRingElt::new(ring, coeffs)
    }

    /// `ψ(x)` as a p-adic number; fails if the value is not p-integral.
    pub fn character_value(&self, chi: Character, ring: Zpm) -> Result<PadicScalar> {
        let p = BigInt::from(self.p);
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut s = 0u32;
        let mut unit = den.clone();
        while unit.is_multiple_of(&p) {
            unit /= &p;
            s += 1;
        }
        let wide = ring.with_precision(ring.precision() + s)?;
        let vals = chi.values(wide);
        let mut acc = 0u64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let scaled = (c * BigRational::from_integer(den.clone())).to_integer();
            acc = wide.add(acc, wide.mul(wide.from_bigint(&scaled), vals[i + 1]));
        }
        let acc = wide.mul(acc, wide.inv(wide.from_bigint(&unit))?);
        let (lower, v) = wide
            .div_p_pow(acc, s)
            .map_err(|_| Error::InvalidArgument("character value is not p-integral".into()))?;
        Ok(PadicScalar::new(lower, v))
    }
}
