//! Congruence criteria relating Jacobi sums to Bernoulli numbers, and scans
//! over primes for prescribed Jacobian structures.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, order_mod_prime, pow_mod, primes_in};
use crate::curve::{jacobian_structure, l1_valuation_from_counts, JacobianReport};
use crate::cyc::{bernoulli_b1, phi_map, Character, Zpm};
use crate::error::{Error, Result};
use crate::jacobi::{eta, eta_valuations, z_theta, PrimeSetup};

/// Both sides of the congruence between `e_ψ φ(η(P))` and the index of a
/// cyclotomic unit modulo `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UeharaReport {
    pub p: u64,
    pub ell: u64,
    pub k: u64,
    /// `ψ(φ(η(P))) mod p`, `ψ = ω^k`.
    pub lhs: u64,
    /// `2k · Ind(P, u) mod p`.
    pub rhs: u64,
}

impl UeharaReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Ind(P, ∏_a ((1 - c^{-a})/(1 - c))^{a^{k-1}}) mod p`, with `c` the image of `ζ`.
pub fn cyclotomic_unit_index(setup: &PrimeSetup, k: u64) -> Result<u64> {
    let field = setup.field();
    let (p, n) = (setup.p(), setup.q() - 1);
    let c = setup.zeta_image();
    let one = field.one();
    let denom = field.inv(&field.sub(&one, c))?;
    let mut u = field.one();
    for a in 1..p {
        let num = field.sub(&one, &field.pow(c, p - a));
        let e = pow_mod(a, k - 1, n);
        u = field.mul(&u, &field.pow(&field.mul(&num, &denom), e));
    }
    if u.is_zero() {
        return Err(Error::IdentityViolation("cyclotomic unit vanishes mod P".into()));
    }
    Ok(setup.ind(&u)? % p)
}

pub fn uehara_check(setup: &PrimeSetup, k: u64, precision: u32) -> Result<UeharaReport> {
    let p = setup.p();
    if k.is_multiple_of(2) || k < 3 || k > p - 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be odd in [3, p-2]")));
    }
    let ring = Zpm::new(p, precision)?;
    let phi = phi_map(&eta(setup, ring)?)?;
    let lhs = phi.character_value(Character::new(p, k as i64)) % p;
    let rhs = 2 * k % p * cyclotomic_unit_index(setup, k)? % p;
    Ok(UeharaReport { p, ell: setup.ell(), k, lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularPair {
    pub k: u64,
    /// The Bernoulli index `k + 1`.
    pub even_index: u64,
    /// `v_p(B_{1,ω^k})`, `None` when it reaches the working precision.
    pub valuation: Option<u32>,
}

/// Odd `k ∈ [1, p-4]` with `B_{1,ω^k} ≡ 0 (mod p)`.
pub fn irregular_pairs(p: u64, precision: u32) -> Result<Vec<IrregularPair>> {
    let ring = Zpm::new(p, precision)?;
    let mut out = Vec::new();
    for k in (1..=p.saturating_sub(4)).step_by(2) {
        let b = bernoulli_b1(Character::new(p, k as i64), ring)?;
        if b.is_zero_mod_p() {
            out.push(IrregularPair { k, even_index: k + 1, valuation: b.valuation });
        }
    }
    Ok(out)
}

/// Whether the `ψ`-part of the ideal `η(P)O` is trivial in `I/I^p`, set
/// against `ψ(ℓ) ≠ 1 or B_{1,ψ^{-1}} ≡ 0 (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealClassReport {
    pub p: u64,
    pub ell: u64,
    pub f: u32,
    pub k: u64,
    /// `ψ` applied to the exponent vector of `η(P)O` (pushed to `Δ/D`), mod p.
    pub projection: u64,
    pub psi_of_ell_is_one: bool,
    pub bernoulli_vanishes: bool,
    /// Exponents came from ℓ-adic valuations (`f = 1`) rather than from `zθ`.
    pub measured: bool,
}

impl IdealClassReport {
    pub fn lhs(&self) -> bool {
        self.projection == 0
    }

    pub fn rhs(&self) -> bool {
        !self.psi_of_ell_is_one || self.bernoulli_vanishes
    }

    pub fn holds(&self) -> bool {
        self.lhs() == self.rhs()
    }
}

pub fn ideal_class_check(setup: &PrimeSetup, k: u64, precision: u32, ell_precision: u32) -> Result<IdealClassReport> {
    let p = setup.p();
    if k.is_multiple_of(2) || k < 3 || k > p - 2 {
        return Err(Error::InvalidArgument(format!("ψ = ω^{k} must be odd and different from ω")));
    }
    let psi = |b: u64| pow_mod(b, k, p);
    // β = Σ_b β_b σ_b with (η) = β·P
    let (beta, measured): (Vec<i64>, bool) = if setup.f() == 1 {
        let v = eta_valuations(setup, ell_precision)?;
        // exponent at P_t is β_{t^{-1}}
        ((1..p).map(|b| v[(inv_mod(b, p).unwrap() - 1) as usize]).collect(), true)
    } else {
        let zt = z_theta(p).to_integers().ok_or_else(|| Error::IdentityViolation("zθ not integral".into()))?;
        (zt.iter().map(|c| i64::try_from(c).expect("small coefficients")).collect(), false)
    };
    // the decomposition group D = <σ_ℓ> fixes P; push β to Δ/D and evaluate ψ·N_D
    let ell = setup.ell() % p;
    let d: Vec<u64> = (0..setup.f()).map(|i| pow_mod(ell, i as u64, p)).collect();
    let mut seen = BTreeSet::new();
    let mut projection = 0i128;
    for rep in 1..p {
        if seen.contains(&rep) {
            continue;
        }
        let coset: Vec<u64> = d.iter().map(|&x| x * rep % p).collect();
        let total: i64 = coset.iter().map(|&b| beta[(b - 1) as usize]).sum();
        seen.extend(coset);
        projection += total as i128 * psi(rep) as i128;
    }
    let norm_d: u64 = d.iter().map(|&x| psi(x)).sum::<u64>() % p;
    let projection = (projection.rem_euclid(p as i128) as u64) * norm_d % p;
    let ring = Zpm::new(p, precision)?;
    let b = bernoulli_b1(Character::new(p, k as i64).inverse(), ring)?;
    Ok(IdealClassReport {
        p,
        ell: setup.ell(),
        f: setup.f(),
        k,
        projection,
        psi_of_ell_is_one: psi(ell) == 1,
        bernoulli_vanishes: b.is_zero_mod_p(),
        measured,
    })
}

/// Candidate primes for a scan and how far to go.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScanJob {
    /// Fixed `p`, `n`, `a`; scan `ℓ ≤ max_ell`.
    FixP { p: u64, n: u64, a: u64, max_ell: u64, stop_at_first: bool },
    /// Fixed `ℓ` and `a = 1`; scan `p ≤ max_p`, optionally for a fixed `n`.
    FixEll { ell: u64, n: Option<u64>, max_p: u64, spot_check_seed: Option<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanStatus {
    Hit,
    Miss,
    Filtered { reason: String },
    Undecided { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub p: u64,
    pub ell: u64,
    pub f: u32,
    #[serde(flatten)]
    pub status: ScanStatus,
    pub t: Option<u64>,
    pub n_star: Option<u64>,
    pub structure: Option<Vec<u32>>,
    /// `v_p(L(1))` from point counts agrees with `t`; set for the first
    /// `COUNT_CHECKED_HITS` hits of a fix-p scan within the q-limit.
    pub counts_agree: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanStats {
    pub candidates: usize,
    pub tested: usize,
    pub filtered: usize,
    pub undecided: usize,
    pub hits: usize,
    /// Filtered primes among all candidates, as `filtered / candidates`.
    pub filtered_ratio: String,
    pub spot_checked: usize,
    pub spot_check_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub job: ScanJob,
    pub entries: Vec<ScanEntry>,
    pub stats: ScanStats,
}

impl ScanResult {
    pub fn hits(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| e.status == ScanStatus::Hit)
    }
}

/// Hits per fix-p scan that are cross-checked by point counting, smallest ℓ first.
pub const COUNT_CHECKED_HITS: usize = 3;

/// Scan limits shared by both modes.
#[derive(Clone, Copy, Debug)]
pub struct ScanLimits {
    pub precision: u32,
    pub q_limit: u64,
}

fn structure_for(p: u64, ell: u64, a: u64, limits: ScanLimits) -> Result<JacobianReport> {
    let setup = PrimeSetup::new(p, ell, limits.q_limit)?;
    // the log needs one digit beyond M
    let precision = limits.precision.min(Zpm::max_precision(p) - 1);
    jacobian_structure(&setup, a, precision)
}

fn entry_from(p: u64, ell: u64, f: u32, report: Result<JacobianReport>, is_hit: impl Fn(&JacobianReport) -> bool) -> Result<ScanEntry> {
    match report {
        Ok(r) => Ok(ScanEntry {
            p,
            ell,
            f,
            status: if is_hit(&r) { ScanStatus::Hit } else { ScanStatus::Miss },
            t: Some(r.t),
            n_star: r.n_star,
            structure: Some(r.structure),
            counts_agree: None,
        }),
        Err(e) if e.is_resource_limit() => Ok(ScanEntry {
            p,
            ell,
            f,
            status: ScanStatus::Undecided { reason: e.to_string() },
            t: None,
            n_star: None,
            structure: None,
            counts_agree: None,
        }),
        Err(e) => Err(e),
    }
}

fn ratio(a: usize, b: usize) -> String {
    format!("{a}/{b}")
}

/// Why `(p, ℓ)` cannot give a hit, if it cannot: for even `f` the Jacobi sum
/// is `±ℓ^{f/2}`, and a hit for `n` needs `ℓ^n ≡ 1 (mod p)`.
fn filter_reason(p: u64, ell: u64, n: Option<u64>) -> Option<String> {
    let f = order_mod_prime(ell % p, p);
    if f.is_multiple_of(2) {
        Some(format!("order {f} of ℓ mod p is even"))
    } else {
        n.filter(|&n| pow_mod(ell % p, n, p) != 1).map(|n| format!("ℓ^{n} ≢ 1 (mod p)"))
    }
}

fn filtered_entry(p: u64, ell: u64, f: u32, reason: String) -> ScanEntry {
    ScanEntry { p, ell, f, status: ScanStatus::Filtered { reason }, t: None, n_star: None, structure: None, counts_agree: None }
}

/// `1 + a^n - (1+a)^n ≢ 0 (mod p)`.
pub fn fix_p_hypothesis(p: u64, n: u64, a: u64) -> bool {
    !(1 + pow_mod(a, n, p) + p - pow_mod(a + 1, n, p)).is_multiple_of(p)
}

pub fn scan_fix_p(job: &ScanJob, limits: ScanLimits) -> Result<ScanResult> {
    let &ScanJob::FixP { p, n, a, max_ell, stop_at_first } = job else {
        return Err(Error::InvalidArgument("expected a fix-p job".into()));
    };
    if !is_prime(p) || p < 5 || n % 2 == 0 || n < 3 || n > p - 2 || a == 0 || a > p - 2 {
        return Err(Error::InvalidArgument(format!("invalid job p = {p}, n = {n}, a = {a}")));
    }
    if !fix_p_hypothesis(p, n, a) {
        return Err(Error::InvalidArgument(format!("1 + a^n - (1+a)^n ≡ 0 (mod {p})")));
    }
    // split primes first, then by field size
    let mut candidates: Vec<(u64, u32, u128)> = primes_in(2, max_ell)
        .into_iter()
        .filter(|&l| l != p)
        .map(|l| {
            let f = order_mod_prime(l % p, p) as u32;
            (l, f, crate::arith::checked_pow(l, f).unwrap_or(u128::MAX))
        })
        .collect();
    candidates.sort_by_key(|&(l, f, q)| (f != 1, q, l));

    let is_hit = |r: &JacobianReport| r.n_star == Some(n);
    let test = |ell: u64, f: u32| match filter_reason(p, ell, Some(n)) {
        Some(reason) => Ok(filtered_entry(p, ell, f, reason)),
        None => entry_from(p, ell, f, structure_for(p, ell, a, limits), is_hit),
    };
    let mut entries = Vec::new();
    if stop_at_first {
        for &(ell, f, _) in &candidates {
            let e = test(ell, f)?;
            let hit = e.status == ScanStatus::Hit;
            entries.push(e);
            if hit {
                break;
            }
        }
    } else {
        entries = candidates
            .par_iter()
            .map(|&(ell, f, _)| test(ell, f))
            .collect::<Result<Vec<_>>>()?;
    }
    for e in entries.iter_mut().filter(|e| e.status == ScanStatus::Hit).take(COUNT_CHECKED_HITS) {
        e.counts_agree = match l1_valuation_from_counts(p, e.ell, e.f, a, limits.q_limit) {
            Ok(v) => Some(u64::from(v) == n),
            Err(Error::QLimitExceeded { .. }) => None,
            Err(err) => return Err(err),
        };
    }
    let filtered = entries.iter().filter(|e| matches!(e.status, ScanStatus::Filtered { .. })).count();
    let stats = ScanStats {
        candidates: candidates.len(),
        tested: entries.iter().filter(|e| matches!(e.status, ScanStatus::Hit | ScanStatus::Miss)).count(),
        filtered,
        undecided: entries.iter().filter(|e| matches!(e.status, ScanStatus::Undecided { .. })).count(),
        hits: entries.iter().filter(|e| e.status == ScanStatus::Hit).count(),
        filtered_ratio: ratio(filtered, candidates.len()),
        spot_checked: 0,
        spot_check_failures: 0,
    };
    Ok(ScanResult { job: job.clone(), entries, stats })
}

/// Primes `p` with `ℓ` fixed and the quotient `a = 1`, i.e. the curve
/// `X² - X + T^p = 0` over `F_ℓ`.
pub fn scan_fix_ell(job: &ScanJob, limits: ScanLimits) -> Result<ScanResult> {
    let &ScanJob::FixEll { ell, n, max_p, spot_check_seed } = job else {
        return Err(Error::InvalidArgument("expected a fix-ell job".into()));
    };
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("ℓ = {ell} is not prime")));
    }
    if n.is_some_and(|n| n % 2 == 0 || n < 3) {
        return Err(Error::InvalidArgument("n must be odd and at least 3".into()));
    }
    let candidates: Vec<u64> = primes_in(5, max_p).into_iter().filter(|&p| p != ell).collect();
    let is_hit = |r: &JacobianReport| match n {
        Some(n) => r.n_star == Some(n),
        None => r.n_star.is_some(),
    };
    let entries = candidates
        .par_iter()
        .map(|&p| {
            let f = order_mod_prime(ell % p, p) as u32;
            match filter_reason(p, ell, n) {
                Some(reason) => Ok(filtered_entry(p, ell, f, reason)),
                None => entry_from(p, ell, f, structure_for(p, ell, 1, limits), is_hit),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    // heavy path on a seeded 5% sample of filtered primes: none may be a hit
    let mut spot_checked = 0;
    let mut spot_check_failures = 0;
    if let Some(seed) = spot_check_seed {
        let mut filtered: Vec<&ScanEntry> = entries
            .iter()
            .filter(|e| matches!(e.status, ScanStatus::Filtered { .. }))
            .filter(|e| crate::arith::checked_pow(ell, e.f).is_some_and(|q| q <= limits.q_limit as u128))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        filtered.shuffle(&mut rng);
        let take = filtered.len().div_ceil(20);
        let sample: Vec<u64> = filtered[..take].iter().map(|e| e.p).collect();
        let outcomes = sample
            .par_iter()
            .map(|&p| structure_for(p, ell, 1, limits).map(|r| is_hit(&r)))
            .collect::<Vec<_>>();
        for o in outcomes {
            match o {
                Ok(hit) => {
                    spot_checked += 1;
                    spot_check_failures += usize::from(hit);
                }
                Err(e) if e.is_resource_limit() => {}
                Err(e) => return Err(e),
            }
        }
    }

    let filtered = entries.iter().filter(|e| matches!(e.status, ScanStatus::Filtered { .. })).count();
    let stats = ScanStats {
        candidates: candidates.len(),
        tested: entries.iter().filter(|e| matches!(e.status, ScanStatus::Hit | ScanStatus::Miss)).count(),
        filtered,
        undecided: entries.iter().filter(|e| matches!(e.status, ScanStatus::Undecided { .. })).count(),
        hits: entries.iter().filter(|e| e.status == ScanStatus::Hit).count(),
        filtered_ratio: ratio(filtered, candidates.len()),
        spot_checked,
        spot_check_failures,
    };
    Ok(ScanResult { job: job.clone(), entries, stats })
}

pub fn run_scan(job: &ScanJob, limits: ScanLimits) -> Result<ScanResult> {
    match job {
        ScanJob::FixP { .. } => scan_fix_p(job, limits),
        ScanJob::FixEll { .. } => scan_fix_ell(job, limits),
    }
}
