use std::path::Path;

use twoprim::ffield::{ExtensionField, PrimePower};
use twoprim::search::{
    count_qualifying_exponents, find_in_field, reproduce_table, Fixtures, SearchConfig,
    SearchOutcome, TableId,
};
use twoprim::sieve::{run_sieve, SieveMode};
use twoprim::structure::k_normality_gcd;

const SMALL: [(u64, usize); 17] = [
    (3, 2),
    (3, 3),
    (3, 4),
    (3, 5),
    (3, 6),
    (5, 2),
    (5, 3),
    (5, 4),
    (7, 2),
    (7, 3),
    (9, 2),
    (9, 3),
    (11, 2),
    (13, 2),
    (17, 2),
    (25, 2),
    (27, 2),
];

fn field(q: u64, n: usize) -> ExtensionField {
    ExtensionField::new(&PrimePower::from_q(q).unwrap(), n).unwrap()
}

/// 2-primitive k-normal elements, counted element by element.
fn brute_count(f: &ExtensionField, k: usize) -> u64 {
    let half = f.order() / 2;
    f.elements()
        .filter(|w| !w.is_zero())
        .filter(|w| f.mult_order(w).unwrap() == half && k_normality_gcd(f, w) == k)
        .count() as u64
}

#[test]
fn exponent_scan_counts_every_element_once() {
    for (q, n) in SMALL {
        let f = field(q, n);
        for k in 0..n {
            let scanned = count_qualifying_exponents(&f, k, u64::MAX).unwrap();
            assert_eq!(scanned, brute_count(&f, k), "q={q} n={n} k={k}");
        }
    }
}

#[test]
fn witness_is_the_least_exponent() {
    let cfg = SearchConfig::default();
    for (q, n) in SMALL {
        let f = field(q, n);
        let g = f.generator().unwrap().clone();
        let half = f.order() / 2;
        for k in 0..n {
            let least = (1..f.order()).find(|&i| {
                let w = f.pow(&g, i);
                f.mult_order(&w).unwrap() == half && k_normality_gcd(&f, &w) == k
            });
            match find_in_field(&f, k, &cfg).unwrap() {
                SearchOutcome::WitnessFound { witness } => {
                    assert!(witness.verified.all());
                    assert_eq!(Some(witness.exponent), least, "q={q} n={n} k={k}");
                }
                SearchOutcome::ExhaustedNoWitness { .. } => assert_eq!(least, None),
                SearchOutcome::CapReached { .. } => panic!("cap reached on a small field"),
            }
        }
    }
}

#[test]
fn search_is_independent_of_worker_count() {
    let f = field(5, 6);
    let one = SearchConfig {
        workers: 1,
        ..SearchConfig::default()
    };
    let many = SearchConfig {
        workers: 4,
        ..SearchConfig::default()
    };
    for k in 0..3 {
        let a = find_in_field(&f, k, &one)
            .unwrap()
            .witness()
            .map(|w| w.exponent);
        let b = find_in_field(&f, k, &many)
            .unwrap()
            .witness()
            .map(|w| w.exponent);
        assert_eq!(a, b);
    }
}

#[test]
fn cap_is_reported_not_exceeded() {
    let cfg = SearchConfig {
        max_exhaustive: 10,
        ..SearchConfig::default()
    };
    // F_{3^4} has no 2-primitive normal element, so the scan would need all 39 exponents.
    match find_in_field(&field(3, 4), 0, &cfg).unwrap() {
        SearchOutcome::CapReached { scanned } => assert!(scanned <= 10),
        other => panic!("expected CapReached, got {other:?}"),
    }
}

#[test]
fn table2_sieve_fails_everywhere() {
    let fixtures = Fixtures::embedded();
    for (q, n) in fixtures.table2.pairs() {
        let r = run_sieve(&PrimePower::from_q(q).unwrap(), n, SieveMode::OneNormal).unwrap();
        assert!(!r.is_success(), "({q},{n}) settled by the sieve");
    }
}

#[test]
fn fixtures_on_disk_match_embedded() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let disk = Fixtures::from_dir(&dir).unwrap();
    let embedded = Fixtures::embedded();
    assert_eq!(disk.s0.pairs, embedded.s0.pairs);
    assert_eq!(disk.table2.pairs(), embedded.table2.pairs());
    assert_eq!(disk.table2.pairs().len(), disk.table2.total);
    assert!(Fixtures::from_dir(&dir.join("missing")).is_err());
}

#[test]
fn small_tables_reproduce() {
    let fixtures = Fixtures::embedded();
    let cfg = SearchConfig::default();
    for table in [TableId::Table1, TableId::N2, TableId::S0] {
        let report = reproduce_table(table, &fixtures, &cfg).unwrap();
        assert!(report.passed(), "{table:?}: {:?}", report.notes);
    }
}
