use fermat_jacobi::arith::{is_prime, order_mod_prime};
use fermat_jacobi::criteria::{irregular_pairs, run_scan, uehara_check, ScanJob, ScanLimits, ScanStatus};
use fermat_jacobi::cyc::{tau_character, Character, PadicCyc, PiValuation, Zpm};
use fermat_jacobi::jacobi::PrimeSetup;

const LIMITS: ScanLimits = ScanLimits { precision: 8, q_limit: 10_000_000 };

#[test]
fn uehara_congruence_for_split_primes() {
    for p in [5u64, 7, 11] {
        for ell in (2..=500).filter(|&l| is_prime(l) && l % p == 1) {
            let s = PrimeSetup::new(p, ell, 10_000_000).unwrap();
            for k in (3..=p - 2).step_by(2) {
                let r = uehara_check(&s, k, 8).unwrap();
                assert!(r.holds(), "p = {p}, ℓ = {ell}, k = {k}: {r:?}");
            }
        }
    }
}

#[test]
fn scans_are_deterministic() {
    let jobs = [
        ScanJob::FixP { p: 7, n: 3, a: 1, max_ell: 400, stop_at_first: false },
        ScanJob::FixEll { ell: 3, n: None, max_p: 120, spot_check_seed: Some(7) },
    ];
    for job in &jobs {
        let a = run_scan(job, LIMITS).unwrap();
        let b = run_scan(job, LIMITS).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.entries.windows(2).all(|w| (w[0].f != 1, w[0].p, w[0].ell) <= (w[1].f != 1, w[1].p, w[1].ell)
            || matches!(job, ScanJob::FixP { .. })));
    }
}

#[test]
fn filters_are_sound() {
    for ell in [2u64, 3, 5] {
        let job = ScanJob::FixEll { ell, n: None, max_p: 200, spot_check_seed: Some(ell) };
        let r = run_scan(&job, LIMITS).unwrap();
        assert!(r.stats.spot_checked > 0, "ℓ = {ell}: nothing spot-checked");
        assert_eq!(r.stats.spot_check_failures, 0);
    }
    // heavy path on every filtered prime of a small window
    let job = ScanJob::FixEll { ell: 2, n: None, max_p: 60, spot_check_seed: None };
    let r = run_scan(&job, LIMITS).unwrap();
    for e in r.entries.iter().filter(|e| matches!(e.status, ScanStatus::Filtered { .. })) {
        let s = match PrimeSetup::new(e.p, e.ell, 10_000_000) {
            Ok(s) => s,
            Err(err) if err.is_resource_limit() => continue,
            Err(err) => panic!("{err}"),
        };
        let precision = 8.min(Zpm::max_precision(e.p) - 1);
        let report = fermat_jacobi::curve::jacobian_structure(&s, 1, precision).unwrap();
        assert_eq!(report.n_star, None, "p = {} was filtered but has n* = {:?}", e.p, report.n_star);
    }
}

#[test]
fn fix_ell_hits_have_odd_order() {
    let job = ScanJob::FixEll { ell: 2, n: None, max_p: 200, spot_check_seed: None };
    for e in run_scan(&job, LIMITS).unwrap().hits() {
        assert_eq!(order_mod_prime(2, e.p) % 2, 1);
        assert_eq!(e.n_star, e.t);
    }
}

#[test]
fn irregular_pairs_survive_higher_precision() {
    for p in [37u64, 59, 67, 101, 103] {
        let m = 8.min(Zpm::max_precision(p) - 2);
        let low = irregular_pairs(p, m).unwrap();
        let high = irregular_pairs(p, m + 2).unwrap();
        assert!(!low.is_empty());
        assert_eq!(low.iter().map(|x| x.k).collect::<Vec<_>>(), high.iter().map(|x| x.k).collect::<Vec<_>>());
        for (a, b) in low.iter().zip(&high) {
            assert!(a.valuation.unwrap_or(m) >= 1);
            if let Some(v) = a.valuation {
                assert_eq!(Some(v), b.valuation);
            }
        }
    }
    assert_eq!(irregular_pairs(59, 6).unwrap().iter().map(|x| x.even_index).collect::<Vec<_>>(), vec![44]);
    assert_eq!(irregular_pairs(67, 6).unwrap().iter().map(|x| x.even_index).collect::<Vec<_>>(), vec![58]);
    assert_eq!(irregular_pairs(101, 5).unwrap().iter().map(|x| x.even_index).collect::<Vec<_>>(), vec![68]);
    assert_eq!(irregular_pairs(103, 5).unwrap().iter().map(|x| x.even_index).collect::<Vec<_>>(), vec![24]);
}

#[test]
fn gauss_sum_valuations() {
    for p in [5u64, 7, 11, 13] {
        let r = Zpm::new(p, 6).unwrap();
        for k in 0..p - 1 {
            let tau = tau_character(Character::new(p, -(k as i64)), r);
            let expected = if k == 0 { PiValuation::Exact(0) } else { PiValuation::Exact(k) };
            assert_eq!(tau.pi_valuation(), expected, "p = {p}, k = {k}");
        }
    }
}

#[test]
fn gauss_sum_times_inverse_character_sum() {
    for p in [5u64, 7, 11] {
        let r = Zpm::new(p, 6).unwrap();
        for k in 1..p - 1 {
            let chi = Character::new(p, k as i64);
            let tau = tau_character(chi, r);
            let product = tau.mul(&tau_character(chi.inverse(), r)).unwrap();
            // σ_{-1} moves ζ only, so it scales τ(χ) by χ(-1)
            assert_eq!(tau.galois(-1).unwrap(), if chi.is_odd() { tau.neg() } else { tau.clone() });
            let sign = if chi.is_odd() { -1 } else { 1 };
            assert_eq!(product, PadicCyc::from_int(r, sign * p as i64), "p = {p}, k = {k}");
        }
    }
}
