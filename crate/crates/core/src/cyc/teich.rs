use serde::{Deserialize, Serialize};

use super::padic::PadicCyc;
use super::ring::Zpm;
use crate::arith::pow_mod;
use crate::error::{Error, Result};

/// Teichmüller lift `ω(a)`: the `(p-1)`-th root of unity congruent to `a`.
pub fn teichmuller(ring: Zpm, a: u64) -> Result<u64> {
    let p = ring.p();
    if a.is_multiple_of(p) {
        return Err(Error::ZeroArgument);
    }
    // x -> x^p gains one digit per step
    let mut x = ring.from_u64(a % p);
    for _ in 0..ring.precision() {
        x = ring.pow(x, p);
    }
    Ok(x)
}

/// `ω(a)` for `a = 0..p-1`, with `0` stored at index 0.
pub fn teichmuller_table(ring: Zpm) -> Vec<u64> {
    let p = ring.p();
    let mut t = vec![0u64; p as usize];
    for a in 1..p {
        t[a as usize] = teichmuller(ring, a).unwrap();
    }
    t
}

/// The character `ω^k` of `(Z/p)^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    p: u64,
    k: u64,
}

impl Character {
    pub fn new(p: u64, k: i64) -> Self {
        Character { p, k: k.rem_euclid(p as i64 - 1) as u64 }
    }

    pub fn trivial(p: u64) -> Self {
        Self::new(p, 0)
    }

    pub fn omega(p: u64) -> Self {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn is_odd(&self) -> bool {
        self.k % 2 == 1
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.p, -(self.k as i64))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.p, (self.k + other.k) as i64)
    }

    /// `ω^k(a)` mod `p^M`; zero when `p | a`.
    pub fn eval(&self, ring: Zpm, a: i64) -> u64 {
        let a = a.rem_euclid(self.p as i64) as u64;
        if a == 0 {
            return 0;
        }
        ring.pow(teichmuller(ring, a).unwrap(), self.k)
    }

    /// Values at `a = 0..p-1`.
    pub fn values(&self, ring: Zpm) -> Vec<u64> {
        teichmuller_table(ring).into_iter().map(|w| if w == 0 { 0 } else { ring.pow(w, self.k) }).collect()
    }

    /// `ω^k(a) mod p = a^k mod p`.
    pub fn eval_mod_p(&self, a: i64) -> u64 {
        let a = a.rem_euclid(self.p as i64) as u64;
        if a == 0 {
            0
        } else {
            pow_mod(a, self.k, self.p)
        }
    }
}

/// Gauss sum `τ(ρ) = Σ_a ρ(a) ζ^a`.
pub fn tau_character(chi: Character, ring: Zpm) -> PadicCyc {
    let vals = chi.values(ring);
    let mut acc = PadicCyc::zero(ring);
    for a in 1..chi.p() as i64 {
        acc = acc.add(&PadicCyc::zeta_pow(ring, a).scale(vals[a as usize])).unwrap();
    }
    acc
}

/// `e_ρ x = (p-1)^{-1} Σ_a ρ^{-1}(a) σ_a(x)`.
pub fn idempotent_apply(chi: Character, x: &PadicCyc) -> PadicCyc {
    let ring = x.ring();
    let p = ring.p();
    let vals = chi.inverse().values(ring);
    let mut acc = PadicCyc::zero(ring);
    for a in 1..p {
        acc = acc.add(&x.galois(a as i64).unwrap().scale(vals[a as usize])).unwrap();
    }
    acc.scale(ring.inv(ring.from_u64(p - 1)).unwrap())
}

/// A p-adic integer known mod `p^precision`. `valuation` is `None` when the
/// residue vanishes, i.e. the valuation is at least `precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicScalar {
    pub p: u64,
    pub value: u64,
    pub precision: u32,
    pub valuation: Option<u32>,
}

impl PadicScalar {
    pub fn new(ring: Zpm, value: u64) -> Self {
        PadicScalar { p: ring.p(), value, precision: ring.precision(), valuation: ring.valuation(value) }
    }

    pub fn is_zero_mod_p(&self) -> bool {
        self.value.is_multiple_of(self.p)
    }

    pub fn mod_p(&self) -> u64 {
        self.value % self.p
    }
}

/// `B_{1,ω^k} = p^{-1} Σ_a a ω^k(a)`, known mod `p^{M-1}`.
pub fn bernoulli_b1(chi: Character, ring: Zpm) -> Result<PadicScalar> {
    let p = ring.p();
    if !chi.is_odd() || chi.k() == p - 2 {
        return Err(Error::InvalidArgument(format!("B_1 needs odd k != p-2, got k = {}", chi.k())));
    }
    let vals = chi.values(ring);
    let sum = (1..p).fold(0, |acc, a| ring.add(acc, ring.mul(a, vals[a as usize])));
    let (lower, v) = ring.div_p_pow(sum, 1)?;
    Ok(PadicScalar::new(lower, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_values() {
        let r = Zpm::new(5, 2).unwrap();
        assert_eq!(teichmuller(r, 2).unwrap(), 7);
        assert_eq!(teichmuller(r, 1).unwrap(), 1);
        assert_eq!(teichmuller(r, 4).unwrap(), 24);
        for p in [5u64, 7, 13] {
            let r = Zpm::new(p, 6).unwrap();
            for a in 1..p {
                let w = teichmuller(r, a).unwrap();
                assert_eq!(w % p, a);
                assert_eq!(r.pow(w, p - 1), 1);
            }
        }
    }

    #[test]
    fn trivial_tau_is_minus_one() {
        let r = Zpm::new(7, 4).unwrap();
        assert_eq!(tau_character(Character::trivial(7), r), PadicCyc::from_int(r, -1));
    }

    #[test]
    fn idempotent_of_zeta_under_trivial_character() {
        let r = Zpm::new(5, 4).unwrap();
        let e = idempotent_apply(Character::trivial(5), &PadicCyc::zeta_pow(r, 1));
        // -1/4 mod 625
        let expected = r.neg(r.inv(4).unwrap());
        assert_eq!(e, PadicCyc::from_residue(r, expected));
    }

    #[test]
    fn b1_rejects_bad_index() {
        let r = Zpm::new(7, 4).unwrap();
        assert!(bernoulli_b1(Character::new(7, 2), r).is_err());
        assert!(bernoulli_b1(Character::new(7, 5), r).is_err());
        assert!(bernoulli_b1(Character::new(7, 3), r).is_ok());
    }
}
