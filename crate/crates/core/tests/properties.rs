use fermat_jacobi::curve::{count_points_table, jacobian_structure, lpoly_from_counts, lpoly_of_weil_number, p_valuation};
use fermat_jacobi::cyc::{idempotent_apply, padic_log, phi_map, teichmuller, Character, CycInt, PadicCyc, PiValuation, Zpm};
use fermat_jacobi::ff::{build_dlog_table, find_generator, ExtField};
use fermat_jacobi::jacobi::{jacobi_sum, PrimeSetup};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const PRIMES: [u64; 4] = [5, 7, 11, 13];

/// Fixed seed so every run samples the same cases.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() }
}

fn ring(p: u64, m: u32) -> Zpm {
    Zpm::new(p, m).unwrap()
}

/// A unit `u` times `(1 - ζ)^v`.
fn element(p: u64, m: u32, coeffs: &[u64], v: u64) -> PadicCyc {
    let r = ring(p, m);
    let mut c: Vec<u64> = coeffs.iter().take(p as usize - 1).map(|&x| x % r.modulus()).collect();
    c.resize(p as usize - 1, 0);
    let mut u = PadicCyc::new(r, c).unwrap();
    if u.eval_at_one().is_multiple_of(p) {
        u = u.add(&PadicCyc::one(r)).unwrap();
    }
    let pi = PadicCyc::one(r).sub(&PadicCyc::zeta_pow(r, 1)).unwrap();
    u.mul(&pi.pow(v as u128)).unwrap()
}

/// `1 + π² y`, an element of `U`.
fn principal_unit(p: u64, m: u32, coeffs: &[u64]) -> PadicCyc {
    let r = ring(p, m);
    let mut c: Vec<u64> = coeffs.iter().take(p as usize - 1).map(|&x| x % r.modulus()).collect();
    c.resize(p as usize - 1, 0);
    let pi = PadicCyc::one(r).sub(&PadicCyc::zeta_pow(r, 1)).unwrap();
    PadicCyc::one(r).add(&pi.pow(2).mul(&PadicCyc::new(r, c).unwrap()).unwrap()).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(any::<u64>(), 12)
}

fn setups() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(vec![(5u64, 11u64), (5, 31), (5, 2), (7, 29), (7, 43), (7, 2), (11, 23), (13, 3), (5, 19)])
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn dlog_is_a_homomorphism(idx in 0usize..4, x in 1u64.., y in 1u64..) {
        let (ell, f) = [(11u64, 1usize), (7, 2), (2, 5), (3, 3)][idx];
        let field = ExtField::new(ell, f).unwrap();
        let table = build_dlog_table(&field, &find_generator(&field)).unwrap();
        let n = field.q() - 1;
        let a = field.decode(1 + x % n);
        let b = field.decode(1 + y % n);
        let lhs = table.log(&field.mul(&a, &b)).unwrap();
        prop_assert_eq!(lhs, (table.log(&a).unwrap() + table.log(&b).unwrap()) % n);
    }

    #[test]
    fn character_matches_power_residue((p, ell) in setups(), x in 1u64..) {
        let s = PrimeSetup::new(p, ell, 10_000_000).unwrap();
        let field = s.field();
        let c = s.zeta_image();
        prop_assert!(field.pow(c, p) == field.one() && *c != field.one());
        let q = s.q();
        let a = field.decode(1 + x % (q - 1));
        let e = s.chi_exponent(&a).unwrap();
        // c^e = x^{(1-q)/p}
        let lhs = field.pow(c, e);
        let rhs = field.inv(&field.pow(&a, (q - 1) / p)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pi_valuation_is_galois_invariant(pi in 0usize..4, c in coeffs(), v in 0u64..20, t in 1u64..) {
        let p = PRIMES[pi];
        let x = element(p, 6, &c, v);
        let t = 1 + t % (p - 1);
        prop_assert_eq!(x.galois(t as i64).unwrap().pi_valuation(), x.pi_valuation());
    }

    #[test]
    fn pi_valuation_is_additive(pi in 0usize..4, c1 in coeffs(), c2 in coeffs(), v1 in 0u64..12, v2 in 0u64..12) {
        let p = PRIMES[pi];
        let (x, y) = (element(p, 6, &c1, v1), element(p, 6, &c2, v2));
        prop_assert_eq!(x.pi_valuation(), PiValuation::Exact(v1));
        prop_assert_eq!(x.mul(&y).unwrap().pi_valuation(), PiValuation::Exact(v1 + v2));
    }

    #[test]
    fn teichmuller_lifts(pi in 0usize..4, a in 1u64..) {
        let p = PRIMES[pi];
        let r = ring(p, 6);
        let a = 1 + a % (p - 1);
        let t = teichmuller(r, a).unwrap();
        prop_assert_eq!(r.pow(t, p - 1), 1);
        prop_assert_eq!(t % p, a);
    }

    #[test]
    fn log_of_principal_units(pi in 0usize..3, c in coeffs()) {
        let p = PRIMES[pi];
        let u = principal_unit(p, 6, &c);
        let l = padic_log(&u).unwrap();
        prop_assert!(l.pi_valuation().lower_bound() >= 2);
    }

    #[test]
    fn log_is_a_homomorphism(pi in 0usize..3, c1 in coeffs(), c2 in coeffs(), v1 in 0u64..3, v2 in 0u64..3) {
        let p = PRIMES[pi];
        let (x, y) = (element(p, 8, &c1, v1), element(p, 8, &c2, v2));
        let lxy = padic_log(&x.mul(&y).unwrap()).unwrap();
        let sum_ring = lxy.ring();
        let lx = padic_log(&x).unwrap().truncate(sum_ring.precision()).unwrap();
        let ly = padic_log(&y).unwrap().truncate(sum_ring.precision()).unwrap();
        prop_assert_eq!(lxy, lx.add(&ly).unwrap());
    }

    #[test]
    fn idempotents_sum_to_identity(pi in 0usize..4, c in coeffs(), v in 0u64..6) {
        let p = PRIMES[pi];
        let x = element(p, 6, &c, v);
        let mut acc = PadicCyc::zero(x.ring());
        for k in 0..p - 1 {
            acc = acc.add(&idempotent_apply(Character::new(p, k as i64), &x)).unwrap();
        }
        prop_assert_eq!(acc, x);
    }

    #[test]
    fn phi_is_a_homomorphism(pi in 0usize..3, c1 in coeffs(), c2 in coeffs()) {
        let p = PRIMES[pi];
        let (x, y) = (element(p, 6, &c1, 0), element(p, 6, &c2, 0));
        let lhs = phi_map(&x.mul(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, phi_map(&x).unwrap().add(&phi_map(&y).unwrap()).unwrap());
    }

    #[test]
    fn phi_of_principal_units_is_divisible_by_p_at_one_and_omega(pi in 0usize..3, c in coeffs()) {
        let p = PRIMES[pi];
        let phi = phi_map(&principal_unit(p, 6, &c)).unwrap();
        for k in [0i64, 1] {
            prop_assert_eq!(phi.character_value(Character::new(p, k)) % p, 0);
        }
    }

    #[test]
    fn jacobi_conjugation((p, ell) in setups(), a in 1u64.., t in 1u64..) {
        let s = PrimeSetup::new(p, ell, 10_000_000).unwrap();
        let a = (1 + a % (p - 2)) as i64;
        let t = (1 + t % (p - 1)) as i64;
        prop_assert_eq!(jacobi_sum(&s, 1, a).galois(t).unwrap(), jacobi_sum(&s, t, t * a));
    }

    #[test]
    fn jacobi_reflection_and_magnitude((p, ell) in setups(), n in 0u64..) {
        let s = PrimeSetup::new(p, ell, 10_000_000).unwrap();
        let n = (2 + n % (p - 3)) as i64;
        let pi = p as i64;
        prop_assert_eq!(jacobi_sum(&s, 1, pi - n), jacobi_sum(&s, 1, n - 1));
        let j = jacobi_sum(&s, 1, n);
        if (1 + n) % pi != 0 {
            prop_assert_eq!(j.mul(&j.conj()).unwrap(), CycInt::from_int(p, s.q()));
        }
    }

    #[test]
    fn jacobi_is_a_principal_unit((p, ell) in setups(), a in 0i64.., b in 0i64..) {
        let s = PrimeSetup::new(p, ell, 10_000_000).unwrap();
        let r = ring(p, 6);
        let j = jacobi_sum(&s, a % p as i64, b % p as i64);
        let v = j.to_padic(r).unwrap().sub(&PadicCyc::one(r)).unwrap().pi_valuation();
        prop_assert!(v.lower_bound() >= 2, "{:?}", v);
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn lpoly_round_trip_and_l1((p, ell) in prop::sample::select(vec![(5u64, 11u64), (5, 31), (5, 2), (7, 29), (7, 2), (5, 19), (5, 41)]), a in 1u64..) {
        let s = PrimeSetup::new(p, ell, 10_000_000).unwrap();
        let a = 1 + a % (p - 2);
        let counts = &count_points_table(p, ell, s.f(), 10_000_000).unwrap()[a as usize - 1];
        let l = lpoly_from_counts(s.q(), counts).unwrap();
        prop_assert!(l.satisfies_functional_equation());
        let predicted: Vec<BigInt> = l.predicted_counts(counts.len());
        let expected: Vec<BigInt> = counts.iter().map(|&n| BigInt::from(n)).collect();
        prop_assert_eq!(predicted, expected);
        prop_assert_eq!(&l, &lpoly_of_weil_number(s.q(), &jacobi_sum(&s, 1, a as i64)));
        let report = jacobian_structure(&s, a, 8).unwrap();
        prop_assert_eq!(u64::from(p_valuation(&l.at_one(), p)), report.t);
        prop_assert_eq!(report.structure.iter().map(|&e| u64::from(e)).sum::<u64>(), report.t);
    }
}

#[test]
fn frobenius_permutes_and_fixes_the_prime_field() {
    for (ell, f) in [(2u64, 4usize), (3, 3), (5, 2), (7, 2), (11, 1)] {
        let field = ExtField::new(ell, f).unwrap();
        let q = field.q();
        let mut seen = vec![false; q as usize];
        let mut fixed = 0;
        for code in 0..q {
            let x = field.decode(code);
            let y = field.frobenius(&x);
            seen[field.encode(&y) as usize] = true;
            if y == x {
                fixed += 1;
                assert!(x.coeffs().iter().skip(1).all(|&c| c == 0), "{x:?} fixed but not in the prime field");
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(fixed, ell);
    }
}

#[test]
fn log_of_one_minus_zeta_is_even_and_nontrivial() {
    for p in [5u64, 7, 11, 13] {
        let r = ring(p, 8);
        let pi = PadicCyc::one(r).sub(&PadicCyc::zeta_pow(r, 1)).unwrap();
        let phi = phi_map(&pi).unwrap();
        let k = phi.ring();
        for n in (1..p - 1).step_by(2).chain([0]) {
            assert_eq!(phi.character_value(Character::new(p, n as i64)), 0, "p = {p}, ρ = ω^{n}");
        }
        let even_nonzero = (2..p - 1).step_by(2).any(|n| phi.character_value(Character::new(p, n as i64)) != 0);
        assert!(even_nonzero && k.precision() >= 6);
    }
}
