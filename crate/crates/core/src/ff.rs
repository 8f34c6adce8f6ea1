//! Finite fields `F_l ⊆ F_{l^f}` in a polynomial basis, deterministic
//! modulus/generator selection, and full discrete-log tables.
//!
//! Elements are coefficient vectors `c_0 + c_1 X + ... + c_{f-1} X^{f-1}`.
//! The canonical ordering of elements (and of candidate moduli) reads the
//! coefficient vector as a base-`l` integer with `c_{f-1}` most significant;
//! that integer is also the element's *code*, used to index tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, inv_mod, is_prime};
use crate::error::{Error, Result};

/// Element of an [`ExtField`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub Vec<u64>);

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// `F_{l^f}` presented as `F_l[X]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    ell: u64,
    f: usize,
    /// Monic, lowest coefficient first, length `f + 1`.
    modulus: Vec<u64>,
    q: u64,
}

impl ExtField {
    /// Field of size `l^f` with the canonical (smallest) irreducible modulus.
    pub fn new(ell: u64, f: usize) -> Result<Self> {
        let modulus = find_irreducible(ell, f)?;
        Self::with_modulus(ell, modulus)
    }

    pub fn with_modulus(ell: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(ell) || ell >= 1 << 31 {
            return Err(Error::InvalidArgument(format!("characteristic {ell} is not a supported prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= ell) {
            return Err(Error::InvalidArgument("modulus must be monic with reduced coefficients".into()));
        }
        let f = modulus.len() - 1;
        let q = crate::arith::checked_pow(ell, f as u32)
            .filter(|&q| q <= u64::MAX as u128)
            .ok_or(Error::QLimitExceeded { q: u128::MAX, limit: u64::MAX })? as u64;
        if !is_irreducible(ell, &modulus) {
            return Err(Error::InvalidArgument(format!("{modulus:?} is reducible over F_{ell}")));
        }
        Ok(ExtField { ell, f, modulus, q })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.f])
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// Image of the integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let mut v = vec![0; self.f];
        v[0] = crate::arith::reduce_i64(n, self.ell);
        FieldElem(v)
    }

    pub fn encode(&self, x: &FieldElem) -> u64 {
        x.0.iter().rev().fold(0u64, |acc, &c| acc * self.ell + c)
    }

    pub fn decode(&self, mut code: u64) -> FieldElem {
        let mut v = vec![0; self.f];
        for c in v.iter_mut() {
            *c = code % self.ell;
            code /= self.ell;
        }
        FieldElem(v)
    }

    /// Code of `1 - x` given the code of `x`.
    pub fn one_minus_code(&self, code: u64) -> u64 {
        let ell = self.ell;
        let mut rest = code;
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.f {
            let c = rest % ell;
            rest /= ell;
            let d = if i == 0 { (1 + ell - c) % ell } else { (ell - c) % ell };
            out += d * place;
            place = place.wrapping_mul(ell);
        }
        out
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.ell).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + self.ell - y) % self.ell).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|&x| (self.ell - x) % self.ell).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut out = vec![0; self.f];
        let mut scratch = Vec::with_capacity(2 * self.f);
        self.mul_into(&a.0, &b.0, &mut out, &mut scratch);
        FieldElem(out)
    }

    /// `out = a * b`; `scratch` is reused between calls to avoid allocation.
    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut Vec<u64>) {
        let ell = self.ell;
        let f = self.f;
        if f == 1 {
            out[0] = a[0] * b[0] % ell;
            return;
        }
        scratch.clear();
        scratch.resize(2 * f - 1, 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    scratch[i + j] = (scratch[i + j] + x * y) % ell;
                }
            }
        }
        for top in (f..2 * f - 1).rev() {
            let c = scratch[top];
            if c == 0 {
                continue;
            }
            scratch[top] = 0;
            for k in 0..f {
                let m = self.modulus[k];
                if m != 0 {
                    let idx = top - f + k;
                    scratch[idx] = (scratch[idx] + (ell - c) * m) % ell;
                }
            }
        }
        out.copy_from_slice(&scratch[..f]);
    }

    pub fn pow(&self, x: &FieldElem, mut e: u64) -> FieldElem {
        let mut result = self.one().0;
        let mut base = x.0.clone();
        let mut tmp = vec![0; self.f];
        let mut scratch = Vec::with_capacity(2 * self.f);
        while e > 0 {
            if e & 1 == 1 {
                self.mul_into(&result, &base, &mut tmp, &mut scratch);
                std::mem::swap(&mut result, &mut tmp);
            }
            e >>= 1;
            if e > 0 {
                self.mul_into(&base, &base, &mut tmp, &mut scratch);
                std::mem::swap(&mut base, &mut tmp);
            }
        }
        FieldElem(result)
    }

    pub fn inv(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(self.pow(x, self.q - 2))
    }

    pub fn frobenius(&self, x: &FieldElem) -> FieldElem {
        self.pow(x, self.ell)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: &FieldElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut ord = self.q - 1;
        for (r, _) in factorize(self.q - 1) {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

// --- polynomials over F_l, lowest coefficient first, no trailing zeros ---

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], ell: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], ell).expect("nonzero leading coefficient");
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % ell;
        for k in 0..=dm {
            let idx = top - dm + k;
            r[idx] = (r[idx] + (ell - c) * m[k] % ell) % ell;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], ell: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % ell;
        }
    }
    poly_rem(&prod, m, ell)
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], ell: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, m, ell);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, m, ell);
        }
        b = poly_mulmod(&b, &b, m, ell);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, ell);
        a = b;
        b = r;
    }
    a
}

fn is_irreducible(ell: u64, g: &[u64]) -> bool {
    let f = g.len() - 1;
    if f == 1 {
        return true;
    }
    if g[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..=f / 2 {
        // X^{l^i} mod g
        xp = poly_powmod(&xp, ell as u128, g, ell);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + ell - 1) % ell;
        let h = poly_gcd(g, &diff, ell);
        if h.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `f` over `F_l` in the
/// canonical ordering (coefficients as a base-`l` integer, high degree most
/// significant). Returned lowest coefficient first, including the leading 1.
pub fn find_irreducible(ell: u64, f: usize) -> Result<Vec<u64>> {
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not prime")));
    }
    if f == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let count = crate::arith::checked_pow(ell, f as u32).ok_or_else(|| Error::InvalidArgument("degree too large".into()))?;
    let mut code: u128 = 0;
    while code < count {
        let mut g = Vec::with_capacity(f + 1);
        let mut rest = code;
        for _ in 0..f {
            g.push((rest % ell as u128) as u64);
            rest /= ell as u128;
        }
        g.push(1);
        if is_irreducible(ell, &g) {
            return Ok(g);
        }
        code += 1;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Smallest element (by code) of multiplicative order `q - 1`.
pub fn find_generator(field: &ExtField) -> FieldElem {
    let q = field.q();
    let primes: Vec<u64> = factorize(q - 1).into_iter().map(|(r, _)| r).collect();
    let one = field.one();
    for code in 1..q {
        let x = field.decode(code);
        if primes.iter().all(|&r| field.pow(&x, (q - 1) / r) != one) {
            return x;
        }
    }
    unreachable!("finite fields have cyclic multiplicative groups")
}

/// Discrete logarithms to a fixed generator `r`, stored mod `q - 1`.
#[derive(Clone, Debug)]
pub struct DLogTable {
    field: ExtField,
    r: FieldElem,
    logs: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

/// One multiplicative sweep `r^0, r^1, ..., r^{q-2}`.
pub fn build_dlog_table(field: &ExtField, r: &FieldElem) -> Result<DLogTable> {
    let q = field.q();
    if q > UNSET as u64 {
        return Err(Error::QLimitExceeded { q: q as u128, limit: UNSET as u64 });
    }
    let mut logs = vec![UNSET; q as usize];
    let mut x = field.one().0;
    let mut next = vec![0; field.degree()];
    let mut scratch = Vec::with_capacity(2 * field.degree());
    for k in 0..(q - 1) as u32 {
        let code = field.encode(&FieldElem(x.clone())) as usize;
        if logs[code] != UNSET {
            return Err(Error::NotAGenerator(format!("{:?} (repeat after {k} steps)", r)));
        }
        logs[code] = k;
        field.mul_into(&x, &r.0, &mut next, &mut scratch);
        std::mem::swap(&mut x, &mut next);
    }
    Ok(DLogTable {
        field: field.clone(),
        r: r.clone(),
        logs,
    })
}

impl DLogTable {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn generator(&self) -> &FieldElem {
        &self.r
    }

    /// `log_r(x)` in `[0, q-2]`.
    pub fn log(&self, x: &FieldElem) -> Result<u64> {
        self.log_code(self.field.encode(x))
    }

    pub fn log_code(&self, code: u64) -> Result<u64> {
        match self.logs.get(code as usize) {
            Some(&l) if l != UNSET => Ok(l as u64),
            _ => Err(Error::ZeroArgument),
        }
    }

    /// Raw table indexed by element code; entry 0 (the zero element) is unset.
    pub(crate) fn raw(&self) -> &[u32] {
        &self.logs
    }
}

/// `log_r(x) mod p`, the exponent underlying the order-`p` character.
pub fn ind_mod_p(table: &DLogTable, p: u64, x: &FieldElem) -> Result<u64> {
    if !(table.field.q() - 1).is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("{p} does not divide q - 1 = {}", table.field.q() - 1)));
    }
    Ok(table.log(x)? % p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive: does any monic polynomial of degree 1..=f/2 divide g?
    fn brute_irreducible(ell: u64, g: &[u64]) -> bool {
        let f = g.len() - 1;
        for d in 1..=f / 2 {
            for code in 0..ell.pow(d as u32) {
                let mut h: Vec<u64> = (0..d).map(|i| code / ell.pow(i as u32) % ell).collect();
                h.push(1);
                if poly_rem(g, &h, ell).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducible_selection() {
        assert_eq!(find_irreducible(11, 1).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(2, 3).unwrap(), vec![1, 1, 0, 1]);
        // brute-force the smallest monic irreducible quadratic over F_3
        let brute = (0..9u64)
            .map(|c| vec![c % 3, c / 3, 1])
            .find(|g| brute_irreducible(3, g))
            .unwrap();
        assert_eq!(find_irreducible(3, 2).unwrap(), brute);
        assert_eq!(brute, vec![1, 0, 1]);
    }

    #[test]
    fn irreducibility_matches_brute_force() {
        for (ell, f) in [(2u64, 4usize), (3, 3), (5, 2), (2, 5), (3, 4)] {
            for code in 0..ell.pow(f as u32) {
                let mut g: Vec<u64> = (0..f).map(|i| code / ell.pow(i as u32) % ell).collect();
                g.push(1);
                assert_eq!(is_irreducible(ell, &g), brute_irreducible(ell, &g), "{g:?} over F_{ell}");
            }
        }
    }

    #[test]
    fn generators() {
        let f11 = ExtField::new(11, 1).unwrap();
        assert_eq!(find_generator(&f11), f11.from_int(2));
        let f7 = ExtField::new(7, 1).unwrap();
        assert_eq!(find_generator(&f7), f7.from_int(3));
        let f2 = ExtField::new(2, 1).unwrap();
        assert_eq!(find_generator(&f2), f2.one());
        // exhaustive powering confirms 2 has order 10 mod 11
        let mut x = 1u64;
        let mut seen = std::collections::HashSet::new();
        for _ in 0..10 {
            seen.insert(x);
            x = x * 2 % 11;
        }
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn dlog_f11() {
        let f = ExtField::new(11, 1).unwrap();
        let r = find_generator(&f);
        let t = build_dlog_table(&f, &r).unwrap();
        assert_eq!(t.log(&f.from_int(1)).unwrap(), 0);
        assert_eq!(t.log(&f.from_int(2)).unwrap(), 1);
        assert_eq!(t.log(&f.from_int(4)).unwrap(), 2);
        assert_eq!(t.log(&f.from_int(10)).unwrap(), 5);
        assert_eq!(ind_mod_p(&t, 5, &f.from_int(10)).unwrap(), 0);
        assert_eq!(ind_mod_p(&t, 5, &r).unwrap(), 1);
        assert_eq!(ind_mod_p(&t, 5, &f.zero()), Err(Error::ZeroArgument));
        assert!(ind_mod_p(&t, 3, &r).is_err());
    }

    #[test]
    fn non_generator_rejected() {
        let f = ExtField::new(11, 1).unwrap();
        assert!(matches!(build_dlog_table(&f, &f.from_int(3)), Err(Error::NotAGenerator(_))));
    }

    #[test]
    fn extension_field_tables() {
        for (ell, deg) in [(2u64, 4usize), (3, 3), (5, 2), (7, 2)] {
            let field = ExtField::new(ell, deg).unwrap();
            let r = find_generator(&field);
            assert_eq!(field.order(&r).unwrap(), field.q() - 1);
            let t = build_dlog_table(&field, &r).unwrap();
            let q = field.q();
            for code in 1..q {
                let x = field.decode(code);
                assert_eq!(field.pow(&r, t.log(&x).unwrap()), x);
                assert_eq!(field.encode(&x), code);
                let om = field.decode(field.one_minus_code(code));
                assert_eq!(field.add(&om, &x), field.one());
            }
            // logs are additive
            for (a, b) in [(1u64, 2u64), (q - 1, q - 2), (3.min(q - 1), q / 2)] {
                let (x, y) = (field.decode(a), field.decode(b));
                let lhs = t.log(&field.mul(&x, &y)).unwrap();
                assert_eq!(lhs, (t.log(&x).unwrap() + t.log(&y).unwrap()) % (q - 1));
            }
            // Frobenius permutes the field and fixes exactly the prime field
            let mut images = std::collections::HashSet::new();
            let mut fixed = 0;
            for code in 0..q {
                let x = field.decode(code);
                let fx = field.frobenius(&x);
                if fx == x {
                    fixed += 1;
                }
                images.insert(field.encode(&fx));
            }
            assert_eq!(images.len() as u64, q);
            assert_eq!(fixed, ell);
        }
    }
}
