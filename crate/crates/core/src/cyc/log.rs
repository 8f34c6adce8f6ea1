use super::cycint::CycInt;
use super::group_ring::GroupRingElt;
use super::padic::{PadicCyc, PiValuation};
use super::ring::Zpm;
use crate::arith::{inv_mod, valuation};
use crate::error::{Error, Result};

fn ilog(p: u64, k: u64) -> u32 {
    let mut s = 0;
    let mut n = k;
    while n >= p {
        n /= p;
        s += 1;
    }
    s
}

/// `Σ_{k≥1} (-1)^{k+1} (w-1)^k / k` for `v_π(w-1) ≥ p-1`, correct mod `p^M`
/// where `M` is the precision of `w`.
///
/// With `d = v_π(w-1)` the k-th term has `v_π ≥ kd - (p-1) log_p k`, which is
/// nondecreasing in `k` once `d ≥ p-1`; summation stops when it reaches `(p-1)M`.
/// Terms are computed with `max v_p(k)` guard digits.
pub(crate) fn log_series(w: &PadicCyc) -> Result<PadicCyc> {
    let ring = w.ring();
    let p = ring.p();
    let m = ring.precision();
    let u = w.sub(&PadicCyc::one(ring))?;
    let d = match u.pi_valuation() {
        PiValuation::AtLeast(_) => return Ok(PadicCyc::zero(ring)),
        PiValuation::Exact(d) => d,
    };
    if d < p - 1 {
        return Err(Error::InvalidArgument(format!("series needs v_π(w-1) ≥ p-1, got {d}")));
    }
    let target = (p - 1) * m as u64;
    let bound = |k: u64| (k * d).saturating_sub((p - 1) * ilog(p, k) as u64);
    let mut kmax = 1;
    while bound(kmax + 1) < target {
        kmax += 1;
    }
    let guard = ilog(p, kmax);
    let wide = Zpm::new(p, m + guard)?;
    let uw = u.lift_representatives(wide);
    let mut power = PadicCyc::one(wide);
    let mut acc = PadicCyc::zero(ring);
    for k in 1..=kmax {
        power = power.mul(&uw)?;
        let s = valuation(k, p);
        let unit = k / p.pow(s);
        let term = power.div_p_pow(s)?.truncate(m)?;
        let mut c = inv_mod(unit % ring.modulus(), ring.modulus()).expect("unit");
        if k % 2 == 0 {
            c = ring.neg(c);
        }
        acc = acc.add(&term.scale(c))?;
    }
    Ok(acc)
}

/// Iwasawa logarithm with `Log_p(p) = 0`.
///
/// The result is known mod `p^{M - v - 1}` where `v = v_π(x)`: dividing by
/// `(-p)^v` costs `v` digits and the final division by `p` one more.
pub fn padic_log(x: &PadicCyc) -> Result<PadicCyc> {
    let ring = x.ring();
    let p = ring.p();
    let m = ring.precision();
    let v = match x.pi_valuation() {
        PiValuation::Exact(v) => v,
        PiValuation::AtLeast(_) => return Err(Error::precision(m, "logarithm of an element that vanishes")),
    };
    if v + 1 >= m as u64 {
        return Err(Error::precision(m, format!("logarithm of element with v_π = {v}")));
    }
    // x^{p-1} has v_π = (p-1) v, so its coefficients are divisible by p^v
    let mut y = x.pow((p - 1) as u128).div_p_pow(v as u32)?;
    if v % 2 == 1 {
        y = y.neg();
    }
    // y^{p-1} ≡ 1 (mod π); raising further to the p-th power lands in U
    let w = y.pow(((p - 1) * p) as u128);
    let s = log_series(&w)?;
    let s = s.div_p_pow(1).map_err(|_| Error::IdentityViolation("series not divisible by p".into()))?;
    let k = s.ring();
    let scale = k.inv(k.from_u64((p - 1) * (p - 1)))?;
    Ok(s.scale(scale))
}

/// Logarithm of an exact element, known mod `p^m`.
pub fn padic_log_exact(x: &CycInt, m: u32) -> Result<PadicCyc> {
    let p = x.p();
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    // v_π fixes how many digits the log will lose; an exact value below the
    // sentinel is reliable at any precision
    let top = Zpm::max_precision(p);
    let v = [m.min(top), top]
        .iter()
        .find_map(|&k| x.to_padic(Zpm::new(p, k).ok()?).ok()?.pi_valuation().exact())
        .ok_or_else(|| Error::precision(top, "element vanishes at the largest precision"))?;
    let work = m + v as u32 + 1;
    let l = padic_log(&x.to_padic(Zpm::new(p, work)?)?)?;
    debug_assert_eq!(l.precision(), m);
    Ok(l)
}

/// `φ(x)`: the group-ring element with `φ(x) ζ = Log_p(x)`.
///
/// In the basis `ζ^1..ζ^{p-1}`, `Σ_i y_i ζ^i` (power basis, `i = 0..p-2`)
/// becomes `Σ_{a=1}^{p-2} (y_a - y_0) ζ^a - y_0 ζ^{p-1}`.
pub fn phi_map(x: &PadicCyc) -> Result<GroupRingElt> {
    phi_of_log(&padic_log(x)?)
}

/// The coordinate change behind [`phi_map`], applied to a precomputed log.
pub fn phi_of_log(l: &PadicCyc) -> Result<GroupRingElt> {
    let ring = l.ring();
    let y = l.coeffs();
    let p = ring.p() as usize;
    let mut c = vec![0u64; p - 1];
    for a in 1..p - 1 {
        c[a - 1] = ring.sub(y[a], y[0]);
    }
    c[p - 2] = ring.neg(y[0]);
    GroupRingElt::new(ring, c)
}
