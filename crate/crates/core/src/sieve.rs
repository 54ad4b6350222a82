//! Existence inequalities and the prime sieve.
//!
//! Every inequality here has the shape
//!
//! ```text
//! q^e > c · W(q₀) · [W(x^u - 1)] · Δ,    Δ = (s - 1)/δ + 2
//! ```
//!
//! and is compared in the logarithmic domain. A comparison succeeds only when the left
//! side clears the right side by [`ROUNDING_MARGIN`] (relative to the larger log, and at
//! least that much in absolute terms).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::PrimePower;
use crate::fqpoly::{count_irreducible_factors_cyclotomic, w_poly_bound, WPolyBound};
use crate::intarith::{
    exceeds_with_margin, ln_big, rational_to_f64, theta_of, universal_w_bound_constant,
    w_bound_constant, Factorizer, IntFactorization, ROUNDING_MARGIN,
};

/// Rounded value of the universal constant for `W(t) <= c · t^{1/4}`.
pub const ROUNDED_C4: f64 = 4.9;
/// Rounded value of the universal constant for `W(t) <= c · t^{1/8}`.
pub const ROUNDED_C8: f64 = 4514.7;

/// Which inequality family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SieveMode {
    /// 2-primitive normal elements: `q^{n/2} > 2 W(q₀) W(x^u-1) Δ`.
    Normal0,
    /// 2-primitive 1-normal elements: `q^{p^k(u/2-1)} > W(q₀) W(x^u-1) Δ`.
    OneNormal,
    /// 1-normal elements for `n = 3`: `q^{1/2} > 2 W(q₀) Δ`.
    CubicOneNormal,
    /// 2-primitive elements of every prescribed trace: `q^{n/2-1} > 2 W(q₀) Δ`.
    TraceCoverage,
}

impl SieveMode {
    pub const ALL: [SieveMode; 4] = [
        SieveMode::Normal0,
        SieveMode::OneNormal,
        SieveMode::CubicOneNormal,
        SieveMode::TraceCoverage,
    ];
}

impl fmt::Display for SieveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SieveMode::Normal0 => "Normal0",
            SieveMode::OneNormal => "OneNormal",
            SieveMode::CubicOneNormal => "CubicOneNormal",
            SieveMode::TraceCoverage => "TraceCoverage",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SieveOutcome {
    Success,
    FailDeltaNonpositive,
    FailNoMorePrimes,
}

impl SieveOutcome {
    pub fn is_success(self) -> bool {
        self == SieveOutcome::Success
    }
}

impl fmt::Display for SieveOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SieveOutcome::Success => "Success",
            SieveOutcome::FailDeltaNonpositive => "FailDeltaNonpositive",
            SieveOutcome::FailNoMorePrimes => "FailNoMorePrimes",
        };
        f.write_str(s)
    }
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Result of an inequality evaluation or a sieve run.
///
/// `lhs` and `rhs` are natural logarithms of the two sides at the last tested step.
/// `big_delta` is `(s-1)/δ + 2`; `big_delta_floor2` is `max(Δ, 2)` and
/// `holds_with_floor2` records whether the final step would also pass with it.
#[derive(Debug, Clone, Serialize)]
pub struct SieveReport {
    pub q: u64,
    pub n: u64,
    pub mode: SieveMode,
    pub outcome: SieveOutcome,
    pub sieving_primes: Vec<String>,
    #[serde(serialize_with = "ser_rational")]
    pub delta: BigRational,
    pub s: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub big_delta: f64,
    pub big_delta_floor2: f64,
    pub holds_with_floor2: bool,
    /// Number of distinct primes of `q^n - 1`.
    pub m: usize,
}

impl SieveReport {
    pub fn is_success(&self) -> bool {
        self.outcome.is_success()
    }

    /// Header matching [`SieveReport::csv_row`].
    pub const CSV_HEADER: &'static str = "q,n,mode,outcome,s,delta_num,delta_den,lhs,rhs";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.q,
            self.n,
            self.mode,
            self.outcome,
            self.s,
            self.delta.numer(),
            self.delta.denom(),
            self.lhs,
            self.rhs
        )
    }
}

/// `ln a > ln b` with the directed margin.
fn log_exceeds(lhs: f64, rhs: f64) -> bool {
    lhs > rhs + ROUNDING_MARGIN * lhs.abs().max(rhs.abs()).max(1.0)
}

/// The three slots that distinguish the mode inequalities.
struct Shape {
    /// Exponent of `q` on the left.
    lhs_exponent: f64,
    /// Constant factor on the right.
    constant: f64,
    /// `u` when `W(x^u - 1)` appears on the right.
    poly_u: Option<u64>,
}

fn shape(q: &PrimePower, n: u64, mode: SieveMode) -> Result<Shape> {
    if !q.is_odd() {
        return Err(Error::PreconditionViolated(format!(
            "q = {} must be odd",
            q.q()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let (k, u) = q.split_degree(n);
    let nf = n as f64;
    Ok(match mode {
        SieveMode::Normal0 => Shape {
            lhs_exponent: nf / 2.0,
            constant: 2.0,
            poly_u: Some(u),
        },
        SieveMode::OneNormal => Shape {
            lhs_exponent: (q.p() as f64).powi(k as i32) * (u as f64 / 2.0 - 1.0),
            constant: 1.0,
            poly_u: Some(u),
        },
        SieveMode::CubicOneNormal => {
            if n != 3 {
                return Err(Error::PreconditionViolated(format!(
                    "CubicOneNormal needs n = 3, got {n}"
                )));
            }
            Shape {
                lhs_exponent: 0.5,
                constant: 2.0,
                poly_u: None,
            }
        }
        SieveMode::TraceCoverage => Shape {
            lhs_exponent: nf / 2.0 - 1.0,
            constant: 2.0,
            poly_u: None,
        },
    })
}

fn ln_w_poly_exact(q: u64, u: u64) -> Result<f64> {
    Ok(count_irreducible_factors_cyclotomic(q, u)? as f64 * std::f64::consts::LN_2)
}

/// Factorization of `q^n - 1` through its cyclotomic pieces.
pub fn order_factorization(
    q: &PrimePower,
    n: u64,
    factorizer: &Factorizer,
) -> Result<IntFactorization> {
    factorizer.factorize_power_minus_one(q.p(), q.t() as u64 * n)
}

fn sorted_primes(f: &IntFactorization) -> Vec<BigUint> {
    let mut primes: Vec<BigUint> = f.primes().cloned().collect();
    primes.sort();
    primes
}

/// The mode inequality with `s = 0`, `δ = 1` and exact `W` values.
pub fn base_inequality(q: &PrimePower, n: u64, mode: SieveMode) -> Result<SieveReport> {
    base_inequality_with(q, n, mode, &Factorizer::default())
}

pub fn base_inequality_with(
    q: &PrimePower,
    n: u64,
    mode: SieveMode,
    factorizer: &Factorizer,
) -> Result<SieveReport> {
    sieve_impl(q, n, mode, factorizer, false)
}

/// Peeling sieve: test, and on failure move the largest unsieved prime of `q^n - 1`
/// into the sieving set (`δ ← δ - 1/p`), until success, `δ <= 0`, or no primes remain.
pub fn run_sieve(q: &PrimePower, n: u64, mode: SieveMode) -> Result<SieveReport> {
    run_sieve_with(q, n, mode, &Factorizer::default())
}

pub fn run_sieve_with(
    q: &PrimePower,
    n: u64,
    mode: SieveMode,
    factorizer: &Factorizer,
) -> Result<SieveReport> {
    sieve_impl(q, n, mode, factorizer, true)
}

fn sieve_impl(
    q: &PrimePower,
    n: u64,
    mode: SieveMode,
    factorizer: &Factorizer,
    peel: bool,
) -> Result<SieveReport> {
    let shape = shape(q, n, mode)?;
    let fact = order_factorization(q, n, factorizer)?;
    let primes = sorted_primes(&fact);
    let m = primes.len();

    let ln_q = (q.q() as f64).ln();
    let lhs = shape.lhs_exponent * ln_q;
    let mut rhs_fixed = shape.constant.ln();
    if let Some(u) = shape.poly_u {
        rhs_fixed += ln_w_poly_exact(q.q(), u)?;
    }

    let mut delta = BigRational::one();
    let mut sieving: Vec<BigUint> = Vec::new();
    loop {
        let s = sieving.len();
        let big_delta = BigRational::from_integer(BigInt::from(s as i64 - 1)) / &delta
            + BigRational::from_integer(BigInt::from(2));
        let big_delta_f = rational_to_f64(&big_delta);
        let floor2 = big_delta_f.max(2.0);
        let rhs_base = rhs_fixed + (m - s) as f64 * std::f64::consts::LN_2;
        let rhs = rhs_base + big_delta_f.ln();
        let report = |outcome| SieveReport {
            q: q.q(),
            n,
            mode,
            outcome,
            sieving_primes: sieving.iter().map(|p| p.to_string()).collect(),
            delta: delta.clone(),
            s,
            lhs,
            rhs,
            big_delta: big_delta_f,
            big_delta_floor2: floor2,
            holds_with_floor2: log_exceeds(lhs, rhs_base + floor2.ln()),
            m,
        };
        if log_exceeds(lhs, rhs) {
            return Ok(report(SieveOutcome::Success));
        }
        if !peel || s == m {
            return Ok(report(SieveOutcome::FailNoMorePrimes));
        }
        let p = primes[m - 1 - s].clone();
        delta -= BigRational::new(BigInt::one(), BigInt::from(p.clone()));
        sieving.push(p);
        if !delta.is_positive() {
            let s = sieving.len();
            return Ok(SieveReport {
                q: q.q(),
                n,
                mode,
                outcome: SieveOutcome::FailDeltaNonpositive,
                sieving_primes: sieving.iter().map(|p| p.to_string()).collect(),
                delta,
                s,
                lhs,
                rhs: f64::INFINITY,
                big_delta: f64::INFINITY,
                big_delta_floor2: f64::INFINITY,
                holds_with_floor2: false,
                m,
            });
        }
    }
}

/// Estimates for `W(q^n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WIntEstimate {
    /// Exact, from the factorization.
    Exact,
    /// `c_{t,4} t^{1/4}` with `c` computed from the small primes of `t`.
    C4,
    /// `c_{t,8} t^{1/8}` with `c` computed from the small primes of `t`.
    C8,
    /// `4.9 · t^{1/4}`.
    C4Universal,
    /// `4514.7 · t^{1/8}`.
    C8Universal,
    /// Smaller of [`WIntEstimate::C4`] and [`WIntEstimate::C8`].
    BestComputed,
}

/// `ln` of the chosen estimate of `W(t)`, `t = q^n - 1`.
pub fn ln_w_int_estimate(
    q: &PrimePower,
    n: u64,
    which: WIntEstimate,
    factorizer: &Factorizer,
) -> Result<f64> {
    let t = BigUint::from(q.q()).pow(n as u32) - 1u32;
    let ln_t = ln_big(&t);
    Ok(match which {
        WIntEstimate::Exact => {
            order_factorization(q, n, factorizer)?.distinct_primes() as f64 * std::f64::consts::LN_2
        }
        WIntEstimate::C4 => w_bound_constant(&t, 4)?.ln() + ln_t / 4.0,
        WIntEstimate::C8 => w_bound_constant(&t, 8)?.ln() + ln_t / 8.0,
        WIntEstimate::C4Universal => ROUNDED_C4.ln() + ln_t / 4.0,
        WIntEstimate::C8Universal => ROUNDED_C8.ln() + ln_t / 8.0,
        WIntEstimate::BestComputed => {
            let c4 = w_bound_constant(&t, 4)?.ln() + ln_t / 4.0;
            let c8 = w_bound_constant(&t, 8)?.ln() + ln_t / 8.0;
            c4.min(c8)
        }
    })
}

/// `ln` of an estimate of `W(x^u - 1)`; [`WPolyBound::Exact`] is the cyclotomic count.
pub fn ln_w_poly_estimate(q: u64, u: u64, which: WPolyBound) -> Result<f64> {
    match which {
        WPolyBound::Exact => ln_w_poly_exact(q, u),
        other => w_poly_bound(q, u, other)?.map(f64::ln).ok_or_else(|| {
            Error::PreconditionViolated(format!(
                "{other:?} bound does not apply to q = {q}, u = {u}"
            ))
        }),
    }
}

/// The mode inequality at `s = 0` with estimated `W` values.
///
/// With [`WIntEstimate::C8Universal`] and [`SieveMode::OneNormal`] at `k = 0` this is
/// `q^{3n/8-1} > 4514.7 · W(x^u - 1)`, up to `t^{1/8} <= q^{n/8}`.
pub fn evaluate_bound_based_condition(
    q: &PrimePower,
    n: u64,
    mode: SieveMode,
    w_int: WIntEstimate,
    w_poly: WPolyBound,
) -> Result<bool> {
    evaluate_bound_based_condition_with(q, n, mode, w_int, w_poly, &Factorizer::default())
}

pub fn evaluate_bound_based_condition_with(
    q: &PrimePower,
    n: u64,
    mode: SieveMode,
    w_int: WIntEstimate,
    w_poly: WPolyBound,
    factorizer: &Factorizer,
) -> Result<bool> {
    let shape = shape(q, n, mode)?;
    let lhs = shape.lhs_exponent * (q.q() as f64).ln();
    let mut rhs = shape.constant.ln() + ln_w_int_estimate(q, n, w_int, factorizer)?;
    if let Some(u) = shape.poly_u {
        rhs += ln_w_poly_estimate(q.q(), u, w_poly)?;
    }
    Ok(log_exceeds(lhs, rhs))
}

/// One column of the `(q, n)` region where the normal-element inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Table1Column {
    /// Smallest `q` in the column (or the only one when `exact_q`).
    pub q_min: u64,
    pub exact_q: bool,
    pub n_min: u64,
}

/// Smallest integer `q` with `q^{n/4} > 2 · 4.9 · 2^n`, the threshold obtained from
/// `W(q^n - 1) <= 4.9 q^{n/4}` and `W(x^u - 1) <= 2^n`.
pub fn universal_c4_threshold(n: u64) -> u64 {
    let nf = n as f64;
    let real = (2.0 * ROUNDED_C4 * 2f64.powf(nf)).powf(4.0 / nf);
    let mut q = real.floor() as u64;
    while !exceeds_with_margin(
        (nf / 4.0) * (q as f64).ln(),
        (2.0 * ROUNDED_C4).ln() + nf * std::f64::consts::LN_2,
    ) {
        q += 1;
    }
    q
}

/// Computed universal constants `c_a` for `a = 4, 8`.
pub fn universal_constants() -> (f64, f64) {
    (
        universal_w_bound_constant(4, &[]),
        universal_w_bound_constant(8, &[]),
    )
}

/// Which alternative a `n = p` or `n = 2p` analysis covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NpMode {
    NEqualsP,
    NEquals2P,
}

#[derive(Debug, Clone, Serialize)]
pub struct NpReport {
    pub q: u64,
    pub n: u64,
    pub mode: NpMode,
    pub lhs: f64,
    pub rhs: f64,
    /// The necessary condition for non-existence fails, so an element exists.
    pub violated: bool,
}

/// Necessary conditions for the absence of 2-primitive 1-normal elements when `n = p`
/// or `n = 2p`:
///
/// * `n = p`: `1/θ(q^p - 1) > q - 2 q^{2-p/2} W(q^p - 1)`
/// * `n = 2p`: `q/((q-1) θ(q^{2p} - 1)) > q - 4 q^{2-p} W(q^{2p} - 1)`
///
/// `violated` is set only when the right side exceeds the left with margin.
pub fn case_np_analysis(q: &PrimePower, mode: NpMode) -> Result<NpReport> {
    case_np_analysis_with(q, mode, &Factorizer::default())
}

pub fn case_np_analysis_with(
    q: &PrimePower,
    mode: NpMode,
    factorizer: &Factorizer,
) -> Result<NpReport> {
    let p = q.p();
    if p < 5 {
        return Err(Error::PreconditionViolated(format!(
            "characteristic {p} must be at least 5"
        )));
    }
    let n = match mode {
        NpMode::NEqualsP => p,
        NpMode::NEquals2P => 2 * p,
    };
    let fact = order_factorization(q, n, factorizer)?;
    let inv_theta = rational_to_f64(&theta_of(&fact).recip());
    let w = 2f64.powi(fact.distinct_primes() as i32);
    let qf = q.q() as f64;
    let pf = p as f64;
    let (lhs, rhs) = match mode {
        NpMode::NEqualsP => (inv_theta, qf - 2.0 * qf.powf(2.0 - pf / 2.0) * w),
        NpMode::NEquals2P => (
            qf / (qf - 1.0) * inv_theta,
            qf - 4.0 * qf.powf(2.0 - pf) * w,
        ),
    };
    Ok(NpReport {
        q: q.q(),
        n,
        mode,
        lhs,
        rhs,
        violated: exceeds_with_margin(rhs, lhs),
    })
}

/// `q^{n - n/p} > 2 q^{n/2} W(q^n - 1)` for `n = p^k u` with `k >= 2` and `p >= 5`.
pub fn cor_2trace_condition(q: &PrimePower, n: u64) -> Result<bool> {
    cor_2trace_condition_with(q, n, &Factorizer::default())
}

pub fn cor_2trace_condition_with(q: &PrimePower, n: u64, factorizer: &Factorizer) -> Result<bool> {
    let p = q.p();
    let (k, _) = q.split_degree(n.max(1));
    if p < 5 || k < 2 || n == 0 {
        return Err(Error::PreconditionViolated(format!(
            "need p >= 5 and p^2 | n; got p = {p}, n = {n}"
        )));
    }
    let fact = order_factorization(q, n, factorizer)?;
    let ln_q = (q.q() as f64).ln();
    let nf = n as f64;
    let lhs = (nf - nf / p as f64) * ln_q;
    let rhs = 2f64.ln() + nf / 2.0 * ln_q + fact.distinct_primes() as f64 * std::f64::consts::LN_2;
    Ok(log_exceeds(lhs, rhs))
}

/// Odd prime powers in `lo..=hi`.
pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<PrimePower> {
    (lo.max(3)..=hi)
        .filter(|q| q % 2 == 1)
        .filter_map(|q| PrimePower::from_q(q).ok())
        .collect()
}

/// Sieve over a grid; reports come back in `(q, n)` order whatever the thread count.
pub fn sweep(
    qs: &[PrimePower],
    ns: &[u64],
    mode: SieveMode,
    factorizer: &Factorizer,
) -> Vec<(u64, u64, Result<SieveReport>)> {
    let grid: Vec<(&PrimePower, u64)> = qs
        .iter()
        .flat_map(|q| ns.iter().map(move |&n| (q, n)))
        .filter(|(_, n)| mode != SieveMode::CubicOneNormal || *n == 3)
        .collect();
    grid.par_iter()
        .map(|&(q, n)| (q.q(), n, run_sieve_with(q, n, mode, factorizer)))
        .collect()
}

/// δ after peeling the given primes, as an exact rational.
pub fn delta_after(primes: &[BigUint]) -> BigRational {
    primes.iter().fold(BigRational::one(), |acc, p| {
        acc - BigRational::new(BigInt::one(), BigInt::from(p.clone()))
    })
}

/// Sieving primes of a report as integers.
pub fn sieving_primes_u64(report: &SieveReport) -> Vec<u64> {
    report
        .sieving_primes
        .iter()
        .filter_map(|s| s.parse::<BigUint>().ok()?.to_u64())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_q(q).unwrap()
    }

    #[test]
    fn base_normal_examples() {
        assert!(base_inequality(&pp(337), 3, SieveMode::Normal0)
            .unwrap()
            .is_success());
        assert!(!base_inequality(&pp(3), 4, SieveMode::Normal0)
            .unwrap()
            .is_success());
        assert!(!run_sieve(&pp(3), 4, SieveMode::Normal0)
            .unwrap()
            .is_success());
    }

    #[test]
    fn persistent_one_normal_pairs_sieve() {
        let cases: [(u64, u64, &[u64]); 3] = [
            (5, 15, &[1741, 181, 71, 31, 11]),
            (5, 20, &[9161, 521]),
            (25, 15, &[7621, 1741, 521, 181, 71]),
        ];
        for (q, n, primes) in cases {
            let base = base_inequality(&pp(q), n, SieveMode::OneNormal).unwrap();
            assert!(!base.is_success(), "({q},{n}) base");
            let r = run_sieve(&pp(q), n, SieveMode::OneNormal).unwrap();
            assert!(r.is_success(), "({q},{n})");
            assert_eq!(sieving_primes_u64(&r), primes);
            let big: Vec<BigUint> = primes.iter().map(|&p| BigUint::from(p)).collect();
            assert_eq!(r.delta, delta_after(&big));
            assert!(r.delta.is_positive());
        }
    }

    #[test]
    fn monotone_when_base_succeeds() {
        for (q, n) in [(337, 3), (7, 12), (9, 30)] {
            for mode in [
                SieveMode::Normal0,
                SieveMode::OneNormal,
                SieveMode::TraceCoverage,
            ] {
                let b = base_inequality(&pp(q), n, mode).unwrap();
                if b.is_success() {
                    let r = run_sieve(&pp(q), n, mode).unwrap();
                    assert!(r.is_success() && r.sieving_primes.is_empty());
                    assert_eq!((r.lhs, r.rhs), (b.lhs, b.rhs));
                }
            }
        }
    }

    #[test]
    fn cubic_mode_needs_n_three() {
        assert!(matches!(
            run_sieve(&pp(5), 4, SieveMode::CubicOneNormal),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(run_sieve(&pp(5), 3, SieveMode::CubicOneNormal).is_ok());
    }

    #[test]
    fn bound_based_examples() {
        let eq6 = |q: u64, n: u64| {
            evaluate_bound_based_condition(
                &pp(q),
                n,
                SieveMode::OneNormal,
                WIntEstimate::C8Universal,
                WPolyBound::Trivial,
            )
            .unwrap()
        };
        // 5217924120 is not a prime power; use nearby ones on both sides.
        let above = (5_217_924_120u64..)
            .find(|&q| q % 2 == 1 && PrimePower::from_q(q).is_ok())
            .unwrap();
        assert!(eq6(above, 4));
        let below = (1..5_217_924_000u64)
            .rev()
            .find(|&q| q % 2 == 1 && PrimePower::from_q(q).is_ok())
            .unwrap();
        assert!(!eq6(below, 4));
        for n in 11..20 {
            let q = (170u64..)
                .find(|&q| q % 2 == 1 && PrimePower::from_q(q).is_ok())
                .unwrap();
            assert!(eq6(q, n), "n = {n}");
        }
        assert!(!base_inequality(&pp(5), 4, SieveMode::OneNormal)
            .unwrap()
            .is_success());
        assert!(!evaluate_bound_based_condition(
            &pp(5),
            4,
            SieveMode::OneNormal,
            WIntEstimate::Exact,
            WPolyBound::Exact
        )
        .unwrap());
    }

    #[test]
    fn rounded_thresholds_for_small_n() {
        let expected = [(3, 336), (4, 157), (5, 100), (6, 74), (8, 51)];
        for (n, q) in expected {
            assert_eq!(universal_c4_threshold(n), q, "n = {n}");
        }
        let (c4, c8) = universal_constants();
        assert!(c4 < ROUNDED_C4 && c8 < ROUNDED_C8);
    }

    #[test]
    fn np_cases() {
        assert!(!case_np_analysis(&pp(5), NpMode::NEqualsP).unwrap().violated);
        assert!(case_np_analysis(&pp(7), NpMode::NEqualsP).unwrap().violated);
        // With exact quantities the n = 2p condition still holds at q = 5:
        // lhs = 5/(4 θ(5^10 - 1)) ≈ 4.192 against rhs = 5 - 4·5^{-3}·32 = 3.976.
        let r = case_np_analysis(&pp(5), NpMode::NEquals2P).unwrap();
        assert!(!r.violated);
        assert!((r.rhs - 3.976).abs() < 1e-12);
        for q in [7, 11, 13, 17] {
            assert!(
                case_np_analysis(&pp(q), NpMode::NEquals2P)
                    .unwrap()
                    .violated,
                "q = {q}"
            );
        }
        assert!(matches!(
            case_np_analysis(&pp(3), NpMode::NEqualsP),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn two_trace_condition() {
        assert!(cor_2trace_condition(&pp(5), 25).unwrap());
        assert!(cor_2trace_condition(&pp(5), 50).unwrap());
        assert!(matches!(
            cor_2trace_condition(&pp(5), 5),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn csv_row_shape() {
        let r = run_sieve(&pp(5), 15, SieveMode::OneNormal).unwrap();
        let row = r.csv_row();
        assert_eq!(
            row.split(',').count(),
            SieveReport::CSV_HEADER.split(',').count()
        );
        assert!(row.starts_with("5,15,OneNormal,Success,5,"));
    }
}
