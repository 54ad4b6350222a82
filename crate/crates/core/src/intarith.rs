//! Integer multiplicative number theory.
//!
//! Factorization (trial division, Miller-Rabin, Brent's variant of Pollard rho),
//! Euler's function, `W(t) = 2^{d(t)}`, `θ(t) = φ(t)/t`, square-free parts, and the
//! numeric constants used when `W(t)` has to be estimated instead of computed.
//!
//! All randomness (rho polynomials, Miller-Rabin bases above 2^64) is drawn from a
//! ChaCha stream seeded by the input itself, so every result is reproducible.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Trial division bound used before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

/// Relative safety margin applied to every strict inequality test on floats.
pub const ROUNDING_MARGIN: f64 = 1.0 / (1u64 << 40) as f64;

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_ROUNDS_BIG: usize = 40;

/// `lhs > rhs`, but only when the gap survives a relative perturbation of
/// [`ROUNDING_MARGIN`] on the larger magnitude.
pub fn exceeds_with_margin(lhs: f64, rhs: f64) -> bool {
    lhs > rhs + ROUNDING_MARGIN * lhs.abs().max(rhs.abs())
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Primes `p <= limit`, `limit` at most [`TRIAL_DIVISION_LIMIT`].
pub fn primes_up_to(limit: u32) -> impl Iterator<Item = u32> {
    assert!(
        limit <= TRIAL_DIVISION_LIMIT,
        "prime table only reaches {TRIAL_DIVISION_LIMIT}"
    );
    small_primes()
        .iter()
        .copied()
        .take_while(move |&p| p <= limit)
}

/// Multiset of `(prime, multiplicity)` pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntFactorization {
    factors: Vec<(BigUint, u32)>,
}

impl IntFactorization {
    /// The empty factorization of 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from arbitrary pairs, checking primality of every entry
    /// and merging repeated primes.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut out = Self::one();
        for (p, e) in pairs {
            if !is_prime(&p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            out.push(p, e);
        }
        Ok(out)
    }

    fn push(&mut self, p: BigUint, e: u32) {
        if e == 0 {
            return;
        }
        match self.factors.binary_search_by(|(q, _)| q.cmp(&p)) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (p, e)),
        }
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Number of distinct primes, `d(t)`.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Primes as machine integers, if they all fit.
    pub fn primes_u64(&self) -> Option<Vec<u64>> {
        self.factors.iter().map(|(p, _)| p.to_u64()).collect()
    }

    /// Factorization of the product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            out.push(p.clone(), *e);
        }
        out
    }

    /// All divisors, ascending. Only for values below 2^64.
    pub fn divisors_u64(&self) -> Option<Vec<u64>> {
        let pairs: Vec<(u64, u32)> = self
            .factors
            .iter()
            .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
            .collect::<Option<_>>()?;
        self.value().to_u64()?;
        let mut divs = vec![1u64];
        for (p, e) in pairs {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Some(divs)
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = powmod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    MR_BASES_U64.iter().all(|&a| miller_rabin_u64(n, a))
}

fn seeded_rng(n: &BigUint) -> ChaCha8Rng {
    seeded_rng_with(n, 0)
}

fn seeded_rng_with(n: &BigUint, seed: u64) -> ChaCha8Rng {
    let low = n.iter_u64_digits().next().unwrap_or(0);
    ChaCha8Rng::seed_from_u64(low ^ 0x9e37_79b9_7f4a_7c15 ^ seed.rotate_left(17))
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    // Rejection sampling on the bit length of `bound`.
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
        let excess = (words as u64) * 32 - bits;
        if let Some(top) = digits.last_mut() {
            *top &= u32::MAX >> excess;
        }
        let candidate = BigUint::from_slice(&digits);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Primality: deterministic below 2^64, 40 seeded Miller-Rabin rounds above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = seeded_rng(n);
    let span = n - BigUint::from(3u32);
    'rounds: for _ in 0..MR_ROUNDS_BIG {
        let a = random_below(&mut rng, &span) + 2u32;
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

fn brent_u64(n: u64, rng: &mut ChaCha8Rng, budget: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    let mut spent = 0u64;
    while spent < budget {
        let c = rng.gen_range(1..n);
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let mut y = rng.gen_range(0..n);
        let (mut x, mut ys) = (0u64, 0u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mulmod_u64(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += steps;
            }
            spent += r;
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn brent_big(n: &BigUint, rng: &mut ChaCha8Rng, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let mut spent = 0u64;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while spent < budget {
        let c = random_below(rng, n);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = random_below(rng, n);
        let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = (&q * abs_diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            spent += r;
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Integer factorizer with a size cap.
///
/// Cofactors below the cap get a generous rho budget; above it the budget is small
/// and exhausting it yields [`Error::CapExceeded`].
#[derive(Debug, Clone)]
pub struct Factorizer {
    cap: BigUint,
    rho_budget: u64,
    capped_rho_budget: u64,
    seed: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Self::with_cap_bits(128)
    }
}

impl Factorizer {
    pub fn with_cap_bits(bits: u32) -> Self {
        Self {
            cap: BigUint::one() << bits,
            rho_budget: 1 << 30,
            capped_rho_budget: 1 << 20,
            seed: 0,
        }
    }

    /// Mixes `seed` into the Pollard rho starting points. Factorizations do not depend
    /// on it; only the path taken to find them does.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn cap(&self) -> &BigUint {
        &self.cap
    }

    pub fn factorize_u64(&self, n: u64) -> Result<IntFactorization> {
        self.factorize(&BigUint::from(n))
    }

    pub fn factorize(&self, n: &BigUint) -> Result<IntFactorization> {
        if n.is_zero() {
            return Err(Error::InvalidInput("cannot factor 0".into()));
        }
        let mut out = IntFactorization::one();
        let mut rest = n.clone();
        if let Some(small) = rest.to_u64() {
            let mut m = small;
            for &p in small_primes() {
                let p = p as u64;
                if p * p > m {
                    break;
                }
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                if e > 0 {
                    out.push(BigUint::from(p), e);
                }
            }
            rest = BigUint::from(m);
        } else {
            for &p in small_primes() {
                if BigUint::from(p).pow(2) > rest {
                    break;
                }
                let mut e = 0;
                while (&rest % p).is_zero() {
                    rest /= p;
                    e += 1;
                }
                if e > 0 {
                    out.push(BigUint::from(p), e);
                }
            }
        }
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_prime(&m) {
                out.push(m, 1);
                continue;
            }
            let budget = if m >= self.cap {
                self.capped_rho_budget
            } else {
                self.rho_budget
            };
            let mut rng = seeded_rng_with(&m, self.seed);
            let split = match m.to_u64() {
                Some(small) => brent_u64(small, &mut rng, budget).map(BigUint::from),
                None => brent_big(&m, &mut rng, budget),
            };
            match split {
                Some(d) => {
                    let other = &m / &d;
                    stack.push(d);
                    stack.push(other);
                }
                None => {
                    return Err(Error::CapExceeded(format!(
                        "could not factor {m} (cap 2^{})",
                        self.cap.bits() - 1
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Factorization of `base^exp - 1`, split first along cyclotomic values
    /// `Φ_d(base)` for `d | exp`; the cap applies to each piece.
    pub fn factorize_power_minus_one(&self, base: u64, exp: u64) -> Result<IntFactorization> {
        if base < 2 || exp == 0 {
            return Err(Error::InvalidInput(format!("{base}^{exp} - 1 is not >= 1")));
        }
        let mut out = IntFactorization::one();
        for d in divisors_u64(exp) {
            let piece = cyclotomic_value(d, base);
            out = out.mul(&self.factorize(&piece)?);
        }
        Ok(out)
    }
}

/// Factorization with the default cap of 2^128.
pub fn factorize(n: &BigUint) -> Result<IntFactorization> {
    Factorizer::default().factorize(n)
}

pub fn factorize_u64(n: u64) -> Result<IntFactorization> {
    Factorizer::default().factorize_u64(n)
}

/// `Φ_d(b)`, the d-th cyclotomic polynomial evaluated at `b`.
pub fn cyclotomic_value(d: u64, b: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let b = BigUint::from(b);
    for k in divisors_u64(d) {
        let term = b.pow(k as u32) - 1u32;
        match mobius_u64(d / k) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

/// Divisors of a small integer by trial division, ascending.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization of a 64-bit integer as machine pairs.
pub fn factor_pairs_u64(n: u64) -> Vec<(u64, u32)> {
    factorize_u64(n)
        .expect("64-bit inputs always factor")
        .factors()
        .iter()
        .map(|(p, e)| (p.to_u64().unwrap(), *e))
        .collect()
}

pub fn mobius_u64(n: u64) -> i32 {
    let pairs = factor_pairs_u64(n.max(1));
    if pairs.iter().any(|&(_, e)| e > 1) {
        0
    } else if pairs.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi_u64(n: u64) -> u64 {
    factor_pairs_u64(n.max(1))
        .iter()
        .fold(1, |acc, &(p, e)| acc * p.pow(e - 1) * (p - 1))
}

/// Multiplicative order of `a` modulo `m`, `None` when `gcd(a, m) != 1`.
pub fn multiplicative_order_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut order = euler_phi_u64(m);
    for (r, _) in factor_pairs_u64(order) {
        while order.is_multiple_of(r) && powmod_u64(a, order / r, m) == 1 {
            order /= r;
        }
    }
    Some(order)
}

/// `φ(n)` from a factorization.
pub fn euler_phi(f: &IntFactorization) -> BigUint {
    f.factors().iter().fold(BigUint::one(), |acc, (p, e)| {
        acc * p.pow(e - 1) * (p - 1u32)
    })
}

/// `W(t) = 2^{d(t)}`, the number of square-free divisors.
pub fn big_w_int(f: &IntFactorization) -> BigUint {
    BigUint::one() << f.distinct_primes()
}

/// `θ(t) = φ(t)/t` in lowest terms.
pub fn theta(t: &BigUint) -> Result<BigRational> {
    Ok(theta_of(&factorize(t)?))
}

pub fn theta_of(f: &IntFactorization) -> BigRational {
    let num = euler_phi(f);
    BigRational::new(num.into(), f.value().into())
}

/// Product of the distinct primes of `t`.
pub fn squarefree_part(t: &BigUint) -> Result<BigUint> {
    Ok(squarefree_part_of(&factorize(t)?))
}

pub fn squarefree_part_of(f: &IntFactorization) -> BigUint {
    f.primes().fold(BigUint::one(), |acc, p| acc * p)
}

/// `c_{t,a} = 2^s / (p_1 ⋯ p_s)^{1/a}` over the primes `p_i <= 2^a` dividing `t`,
/// so that `W(t) <= c_{t,a} t^{1/a}`.
pub fn w_bound_constant(t: &BigUint, a: u32) -> Result<f64> {
    if a == 0 || a > 19 {
        return Err(Error::InvalidInput(format!(
            "exponent a = {a} outside 1..=19"
        )));
    }
    let primes: Vec<u32> = primes_up_to(1 << a)
        .filter(|&p| (t % p).is_zero())
        .collect();
    Ok(bound_constant_from_primes(&primes, a))
}

fn bound_constant_from_primes(primes: &[u32], a: u32) -> f64 {
    let log2 = primes.len() as f64 * std::f64::consts::LN_2;
    let log_prod: f64 = primes.iter().map(|&p| (p as f64).ln()).sum();
    (log2 - log_prod / a as f64).exp()
}

/// Largest possible `c_{t,a}` over all `t` not divisible by any prime in `excluded`:
/// every prime below `2^a` contributes a factor `2/p^{1/a} > 1`.
pub fn universal_w_bound_constant(a: u32, excluded: &[u64]) -> f64 {
    assert!((1..=19).contains(&a));
    let primes: Vec<u32> = primes_up_to((1 << a) - 1)
        .filter(|&p| !excluded.contains(&(p as u64)))
        .collect();
    bound_constant_from_primes(&primes, a)
}

/// `3.6 ln q + 1.8 ln u`, an upper bound for `1/θ(q^{pu} - 1)` when `p >= 5`.
pub fn ramanujan_bound(q: u64, u: u64) -> f64 {
    3.6 * (q as f64).ln() + 1.8 * (u as f64).ln()
}

/// Natural logarithm of a big integer, finite for any size.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn pairs(f: &IntFactorization) -> Vec<(u64, u32)> {
        f.factors()
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(pairs(&factorize_u64(80).unwrap()), vec![(2, 4), (5, 1)]);
        assert_eq!(pairs(&factorize_u64(2).unwrap()), vec![(2, 1)]);
        assert_eq!(
            pairs(&factorize_u64(3124).unwrap()),
            vec![(2, 2), (11, 1), (71, 1)]
        );
    }

    #[test]
    fn factorize_semiprime_needs_rho() {
        // Both factors above the trial-division bound.
        let (a, b) = (1_000_003u64, 998_244_353u64);
        let f = factorize_u64(a * b).unwrap();
        assert_eq!(pairs(&f), vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn factorize_above_u64() {
        let a = BigUint::from(18_446_744_073_709_551_557u64); // largest prime < 2^64
        let b = big(4_294_967_311);
        let f = factorize(&(&a * &b)).unwrap();
        assert_eq!(f.factors(), &[(b, 1), (a, 1)]);
    }

    #[test]
    fn power_minus_one_matches_direct() {
        let f = Factorizer::default();
        let split = f.factorize_power_minus_one(5, 12).unwrap();
        let direct = f.factorize_u64(5u64.pow(12) - 1).unwrap();
        assert_eq!(split, direct);
        // 5^60 - 1 does not fit in 128 bits but its cyclotomic pieces are small.
        let huge = f.factorize_power_minus_one(5, 60).unwrap();
        assert_eq!(huge.value(), BigUint::from(5u32).pow(60) - 1u32);
        assert!(huge.primes().all(is_prime));
    }

    #[test]
    fn cap_exceeded_when_rho_budget_runs_out() {
        let mut f = Factorizer::with_cap_bits(40);
        f.capped_rho_budget = 16;
        let n = big(1_000_003) * big(1_000_033) * big(1_000_037);
        assert!(matches!(f.factorize(&n), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(&factorize_u64(8).unwrap()), big(4));
        assert_eq!(euler_phi(&factorize_u64(62).unwrap()), big(30));
        assert_eq!(euler_phi(&factorize_u64(80).unwrap()), big(32));
    }

    #[test]
    fn big_w_examples() {
        assert_eq!(big_w_int(&factorize_u64(80).unwrap()), big(4));
        assert_eq!(big_w_int(&factorize_u64(2).unwrap()), big(2));
        // (5^5 - 1)/(5 - 1) = 781 = 11 * 71.
        assert_eq!(big_w_int(&factorize_u64(781).unwrap()), big(4));
    }

    #[test]
    fn theta_examples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(theta(&big(8)).unwrap(), r(1, 2));
        assert_eq!(theta(&big(26)).unwrap(), r(6, 13));
        assert_eq!(theta(&big(124)).unwrap(), r(15, 31));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&big(80)).unwrap(), big(10));
        assert_eq!(squarefree_part(&big(26)).unwrap(), big(26));
        assert_eq!(squarefree_part(&big(124)).unwrap(), big(62));
    }

    #[test]
    fn universal_constants() {
        assert!(universal_w_bound_constant(4, &[]) < 4.9);
        assert!(universal_w_bound_constant(8, &[]) < 4514.7);
        assert!(universal_w_bound_constant(8, &[5]) < 2760.39);
        // No prime below 2^a divides t: empty product.
        assert_eq!(w_bound_constant(&big(17 * 19), 4).unwrap(), 1.0);
        let c = w_bound_constant(&big(6), 4).unwrap();
        assert!((c - 4.0 / 6f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_examples() {
        assert!((ramanujan_bound(5, 1) - 5.794).abs() < 1e-3);
        assert_eq!(ramanujan_bound(7, 1), 3.6 * 7f64.ln());
        // θ(5^5 - 1)^{-1} = 3124/φ(3124).
        let inv = 3124.0 / euler_phi_u64(3124) as f64;
        assert!(inv < ramanujan_bound(5, 1));
    }

    #[test]
    fn multiplicative_orders() {
        assert_eq!(multiplicative_order_mod(3, 4), Some(2));
        assert_eq!(multiplicative_order_mod(2, 7), Some(3));
        assert_eq!(multiplicative_order_mod(3, 13), Some(3));
        assert_eq!(multiplicative_order_mod(2, 4), None);
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic_value(1, 5), big(4));
        assert_eq!(cyclotomic_value(5, 5), big(781));
        assert_eq!(cyclotomic_value(6, 2), big(3));
    }

    #[test]
    fn margin_rejects_ties() {
        assert!(!exceeds_with_margin(1.0, 1.0));
        assert!(!exceeds_with_margin(1.0 + 1e-14, 1.0));
        assert!(exceeds_with_margin(1.0 + 1e-9, 1.0));
        assert!(exceeds_with_margin(1.0, -3.0));
    }
}
