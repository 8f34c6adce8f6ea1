use serde::{Deserialize, Serialize};

use super::ring::Zpm;
use crate::error::{Error, Result};

/// `v_π` of a truncated element. `AtLeast(b)` means the element is zero at the
/// working precision and only the bound `b = (p-1)·M` is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PiValuation {
    Exact(u64),
    AtLeast(u64),
}

impl PiValuation {
    pub fn exact(self) -> Option<u64> {
        match self {
            PiValuation::Exact(v) => Some(v),
            PiValuation::AtLeast(_) => None,
        }
    }

    /// Lower bound valid in both cases.
    pub fn lower_bound(self) -> u64 {
        match self {
            PiValuation::Exact(v) | PiValuation::AtLeast(v) => v,
        }
    }
}

/// Element of `Z_p[ζ_p]` modulo `p^M`, power basis `ζ^0..ζ^{p-2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicCyc {
    ring: Zpm,
    coeffs: Vec<u64>,
}

impl PadicCyc {
    pub fn new(ring: Zpm, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() as u64 != ring.p() - 1 {
            return Err(Error::InvalidArgument(format!("expected {} coefficients", ring.p() - 1)));
        }
        if coeffs.iter().any(|&c| c >= ring.modulus()) {
            return Err(Error::InvalidArgument("unreduced residue".into()));
        }
        Ok(PadicCyc { ring, coeffs })
    }

    fn from_full(ring: Zpm, mut v: Vec<u64>) -> Self {
        let top = v.pop().expect("length p");
        if top != 0 {
            for c in v.iter_mut() {
                *c = ring.sub(*c, top);
            }
        }
        PadicCyc { ring, coeffs: v }
    }

    pub fn zero(ring: Zpm) -> Self {
        PadicCyc { ring, coeffs: vec![0; (ring.p() - 1) as usize] }
    }

    pub fn from_int(ring: Zpm, n: i64) -> Self {
        let mut x = Self::zero(ring);
        x.coeffs[0] = ring.from_i64(n);
        x
    }

    pub fn one(ring: Zpm) -> Self {
        Self::from_int(ring, 1)
    }

    /// Rational residue `c` placed in the constant coefficient.
    pub fn from_residue(ring: Zpm, c: u64) -> Self {
        let mut x = Self::zero(ring);
        x.coeffs[0] = ring.from_u64(c);
        x
    }

    pub fn zeta_pow(ring: Zpm, e: i64) -> Self {
        let p = ring.p();
        let mut v = vec![0; p as usize];
        v[e.rem_euclid(p as i64) as usize] = 1;
        Self::from_full(ring, v)
    }

    pub fn ring(&self) -> Zpm {
        self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
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
        Ok(PadicCyc { ring: r, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| r.add(a, b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.ring;
        Ok(PadicCyc { ring: r, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| r.sub(a, b)).collect() })
    }

    pub fn neg(&self) -> Self {
        let r = self.ring;
        PadicCyc { ring: r, coeffs: self.coeffs.iter().map(|&a| r.neg(a)).collect() }
    }

    pub fn scale(&self, k: u64) -> Self {
        let r = self.ring;
        let k = r.from_u64(k);
        PadicCyc { ring: r, coeffs: self.coeffs.iter().map(|&a| r.mul(a, k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.ring;
        let p = r.p() as usize;
        let m = r.modulus() as u128;
        // accumulate in u128 and reduce lazily; each product is < 2^124
        let mut acc = vec![0u128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = if i + j >= p { i + j - p } else { i + j };
                    acc[k] = (acc[k] + a as u128 * b as u128) % m;
                }
            }
        }
        Ok(Self::from_full(r, acc.into_iter().map(|c| c as u64).collect()))
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut result = Self::one(self.ring);
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

    pub fn galois(&self, t: i64) -> Result<Self> {
        let p = self.p() as i64;
        let t = t.rem_euclid(p);
        if t == 0 {
            return Err(Error::InvalidArgument(format!("galois index divisible by p = {p}")));
        }
        let mut v = vec![0u64; p as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i as i64 * t % p) as usize;
            v[k] = self.ring.add(v[k], c);
        }
        Ok(Self::from_full(self.ring, v))
    }

    /// Norm mod `p^M`, as the product of the conjugates.
    pub fn norm(&self) -> u64 {
        let mut acc = self.clone();
        for t in 2..self.p() as i64 {
            acc = acc.mul(&self.galois(t).unwrap()).unwrap();
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Coefficients in the basis `π^0..π^{p-2}`, `π = ζ - 1`:
    /// `d_i = Σ_{j ≥ i} C(j, i) c_j`.
    pub fn pi_basis(&self) -> Vec<u64> {
        let r = self.ring;
        let n = self.coeffs.len();
        let mut d = vec![0u64; n];
        let mut row = vec![0u64; n];
        row[0] = 1;
        for j in 0..n {
            if j > 0 {
                for i in (1..=j).rev() {
                    row[i] = r.add(row[i], row[i - 1]);
                }
            }
            let c = self.coeffs[j];
            if c != 0 {
                for i in 0..=j {
                    d[i] = r.add(d[i], r.mul(row[i], c));
                }
            }
        }
        d
    }

    /// `v_π`. Since `v_π(d_i π^i) = (p-1) v_p(d_i) + i` and these are
    /// distinct mod `p-1`, the valuation is the minimum over the π-basis.
    pub fn pi_valuation(&self) -> PiValuation {
        let r = self.ring;
        let p1 = self.p() - 1;
        let best = self
            .pi_basis()
            .iter()
            .enumerate()
            .filter_map(|(i, &d)| r.valuation(d).map(|v| p1 * v as u64 + i as u64))
            .min();
        match best {
            Some(v) => PiValuation::Exact(v),
            None => PiValuation::AtLeast(p1 * r.precision() as u64),
        }
    }

    /// Image in `O/π = F_p` (the value at `ζ = 1`), as a residue mod `p^M`.
    pub fn eval_at_one(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, &c| self.ring.add(acc, c))
    }

    pub fn is_unit(&self) -> bool {
        !self.eval_at_one().is_multiple_of(self.p())
    }

    /// Inverse of a unit by Newton iteration on `x ≡ 1 (mod π)`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::InvalidArgument("element is not a unit".into()));
        }
        let r = self.ring;
        let s = r.inv(self.eval_at_one())?;
        let x1 = self.scale(s);
        let two = Self::from_int(r, 2);
        let target = (self.p() - 1) * r.precision() as u64;
        let mut y = Self::one(r);
        let mut reached = 1u64;
        while reached < target {
            y = y.mul(&two.sub(&x1.mul(&y)?)?)?;
            reached *= 2;
        }
        let inv = y.scale(s);
        debug_assert_eq!(inv.mul(self).unwrap(), Self::one(r));
        Ok(inv)
    }

    /// Reinterprets at a lower precision.
    pub fn truncate(&self, m: u32) -> Result<Self> {
        if m > self.precision() {
            return Err(Error::precision(self.precision(), format!("cannot raise precision to {m}")));
        }
        let lower = self.ring.with_precision(m)?;
        Ok(PadicCyc { ring: lower, coeffs: self.coeffs.iter().map(|&c| self.ring.reduce_to(c, &lower)).collect() })
    }

    /// Same integer representatives in a higher-precision ring. The extra
    /// digits are arbitrary; callers must account for that.
    pub(crate) fn lift_representatives(&self, ring: Zpm) -> Self {
        debug_assert!(ring.p() == self.p() && ring.precision() >= self.precision());
        PadicCyc { ring, coeffs: self.coeffs.clone() }
    }

    /// Exact division by `p^k` of an element all of whose coefficients are
    /// divisible by `p^k`.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        let mut lower = None;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            let (ring, q) = self.ring.div_p_pow(c, k)?;
            lower = Some(ring);
            coeffs.push(q);
        }
        Ok(PadicCyc { ring: lower.unwrap(), coeffs })
    }

    /// Signed representatives, for display.
    pub fn signed_coeffs(&self) -> Vec<i128> {
        self.coeffs.iter().map(|&c| self.ring.signed(c)).collect()
    }
}
