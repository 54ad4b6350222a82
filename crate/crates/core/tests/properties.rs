use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use twoprim::ffield::{build_field, ExtensionField, FieldElement, Fq, PrimePower};
use twoprim::fqpoly::{divisors_of, poly_phi, FqPolynomial};
use twoprim::intarith::{big_w_int, divisors_u64, euler_phi_u64, factorize_u64};
use twoprim::sieve::{base_inequality, delta_after, run_sieve, SieveMode, SieveOutcome};
use twoprim::structure::{fq_order, k_normality_gcd};

fn f125() -> ExtensionField {
    build_field(5, 1, 3).unwrap()
}

fn f81_over_9() -> ExtensionField {
    build_field(3, 2, 2).unwrap()
}

fn poly(base: &Arc<Fq>, coeffs: Vec<u32>) -> FqPolynomial {
    FqPolynomial::new(base, coeffs).unwrap()
}

fn trial_distinct_primes(mut n: u64) -> u32 {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            count += 1;
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    count + (n > 1) as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frobenius_is_a_field_automorphism(a in 0u64..125, b in 0u64..125) {
        let f = f125();
        let (a, b) = (f.from_index(a), f.from_index(b));
        let fr = |w: &FieldElement| f.frobenius(w, 1);
        let (sum, prod) = (f.add(&a, &b), f.mul(&a, &b));
        prop_assert_eq!(fr(&sum), f.add(&fr(&a), &fr(&b)));
        prop_assert_eq!(fr(&prod), f.mul(&fr(&a), &fr(&b)));
        prop_assert_eq!(fr(&a), f.pow(&a, 5));
        prop_assert_eq!(f.frobenius(&a, 3), a);
    }

    #[test]
    fn frobenius_over_nonprime_base(a in 0u64..81) {
        let f = f81_over_9();
        let a = f.from_index(a);
        prop_assert_eq!(f.frobenius(&a, 1), f.pow(&a, 9));
        prop_assert_eq!(f.frobenius(&a, 2), a);
    }

    #[test]
    fn order_and_normality_are_consistent(a in 1u64..125) {
        let f = f125();
        let w = f.from_index(a);
        let e = f.mult_order(&w).unwrap();
        prop_assert_eq!(f.order() % e, 0);
        prop_assert_eq!(f.pow(&w, e), f.one());
        let k = k_normality_gcd(&f, &w);
        prop_assert_eq!(k, f.n() - fq_order(&f, &w).degree().unwrap());
        prop_assert_eq!(k, f.normality_defect(&w));
    }

    #[test]
    fn poly_gcd_divides_and_scales(
        a in prop::collection::vec(0u32..3, 1..7),
        b in prop::collection::vec(0u32..3, 1..7),
        c in prop::collection::vec(0u32..3, 1..5),
    ) {
        let base = Arc::new(Fq::prime(3).unwrap());
        let (a, b, c) = (poly(&base, a), poly(&base, b), poly(&base, c));
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(g.divides(&a).unwrap());
        prop_assert!(g.divides(&b).unwrap());
        prop_assume!(!c.is_zero());
        let scaled = a.mul(&c).unwrap().gcd(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(scaled, g.mul(&c.monic()).unwrap());
    }

    #[test]
    fn poly_factorization_multiplies_back(coeffs in prop::collection::vec(0u32..9, 2..9)) {
        let base = Arc::new(Fq::new(&PrimePower::new(3, 2).unwrap()).unwrap());
        let f = poly(&base, coeffs);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let fact = f.factor().unwrap();
        let mut product = FqPolynomial::constant(&base, fact.unit());
        for (g, e) in fact.factors() {
            prop_assert!(g.is_monic() && g.is_irreducible());
            product = product.mul(&g.pow(*e)).unwrap();
        }
        prop_assert_eq!(product, f);
    }

    #[test]
    fn w_matches_trial_division(n in 1u64..2_000_000) {
        let w = big_w_int(&factorize_u64(n).unwrap());
        prop_assert_eq!(w, BigUint::from(1u64 << trial_distinct_primes(n)));
    }

    #[test]
    fn totient_sums_over_divisors(t in 1u64..100_000) {
        let sum: u64 = divisors_u64(t).into_iter().map(euler_phi_u64).sum();
        prop_assert_eq!(sum, t);
    }

    #[test]
    fn poly_totient_sums_over_divisors(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
        n in 1usize..13,
    ) {
        let qq = PrimePower::from_q(q).unwrap();
        let base = Arc::new(Fq::new(&qq).unwrap());
        let xn1 = FqPolynomial::x_pow_minus_one(&base, n);
        let sum: BigUint = divisors_of(&xn1)
            .unwrap()
            .iter()
            .map(|d| poly_phi(d).unwrap())
            .sum();
        prop_assert_eq!(sum, BigUint::from(q).pow(n as u32));
    }

    #[test]
    fn sieve_bookkeeping(
        q in prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 25, 27, 49, 121]),
        n in 3u64..25,
        mode in prop::sample::select(vec![SieveMode::Normal0, SieveMode::OneNormal, SieveMode::TraceCoverage]),
    ) {
        let qq = PrimePower::from_q(q).unwrap();
        let report = run_sieve(&qq, n, mode).unwrap();
        let primes: Vec<BigUint> = report
            .sieving_primes
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let order = BigUint::from(q).pow(n as u32) - 1u32;
        prop_assert_eq!(report.s, primes.len());
        prop_assert!(report.s <= report.m);
        prop_assert!(primes.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(primes.iter().all(|p| (&order % p).is_zero()));
        prop_assert_eq!(&report.delta, &delta_after(&primes));
        // δ strictly decreases as primes are peeled.
        let mut last = BigRational::one();
        for i in 1..=primes.len() {
            let d = delta_after(&primes[..i]);
            prop_assert!(d < last);
            last = d;
        }
        match report.outcome {
            SieveOutcome::FailDeltaNonpositive => prop_assert!(!report.delta.is_positive()),
            _ => prop_assert!(report.delta > BigRational::zero()),
        }
        // Peeling never loses a pair the unsieved inequality already settles.
        if base_inequality(&qq, n, mode).unwrap().is_success() {
            prop_assert!(report.is_success());
            prop_assert_eq!(report.s, 0);
        }
    }
}
