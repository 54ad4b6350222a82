//! Arithmetic in `F_q`, `q = p^t`.
//!
//! An element is stored as its canonical integer `Σ c_i p^i`, where `c_0 + c_1 y + …`
//! is its residue modulo the base modulus. Prime fields multiply directly mod `p`;
//! proper extensions up to [`LOG_TABLE_LIMIT`] elements multiply through
//! exponential/logarithm tables, larger ones through polynomial arithmetic.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ffield::PrimePower;
use crate::fqpoly::FqPolynomial;
use crate::intarith::{factorize_u64, powmod_u64};

/// Largest `q` for which `Fq` builds log tables.
pub const LOG_TABLE_LIMIT: u64 = 1 << 22;
/// Largest supported `q`; elements must fit in a `u32`.
pub const MAX_BASE_ORDER: u64 = 1 << 31;

#[derive(Debug)]
struct LogTables {
    /// `exp[i] = γ^i` for `0 <= i < 2(q-1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The finite field `F_q`.
#[derive(Debug)]
pub struct Fq {
    prime_power: PrimePower,
    /// Monic irreducible of degree `t` over `F_p`, lowest degree first.
    modulus: Vec<u32>,
    tables: Option<LogTables>,
    abs_traces: OnceLock<Vec<u32>>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.prime_power == other.prime_power && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

impl Fq {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        let prime_power = PrimePower::new(p, 1)?;
        if p >= MAX_BASE_ORDER {
            return Err(Error::CapExceeded(format!("base field order {p} >= 2^31")));
        }
        Ok(Self {
            prime_power,
            modulus: vec![0, 1],
            tables: None,
            abs_traces: OnceLock::new(),
        })
    }

    /// `F_{p^t}` with the first irreducible degree-`t` polynomial over `F_p` as modulus.
    pub fn new(prime_power: &PrimePower) -> Result<Self> {
        let (p, t, q) = (prime_power.p(), prime_power.t(), prime_power.q());
        if q >= MAX_BASE_ORDER {
            return Err(Error::CapExceeded(format!("base field order {q} >= 2^31")));
        }
        if t == 1 {
            return Self::prime(p);
        }
        let fp = std::sync::Arc::new(Self::prime(p)?);
        let modulus = FqPolynomial::first_irreducible(&fp, t as usize)?;
        let mut field = Self {
            prime_power: prime_power.clone(),
            modulus: modulus.coeffs().to_vec(),
            tables: None,
            abs_traces: OnceLock::new(),
        };
        if q <= LOG_TABLE_LIMIT {
            field.tables = Some(field.build_tables()?);
        }
        Ok(field)
    }

    fn build_tables(&self) -> Result<LogTables> {
        let q = self.q();
        let order = q - 1;
        let primes: Vec<u64> = factorize_u64(order)?.primes_u64().expect("q - 1 < 2^31");
        let gamma = (2..q as u32)
            .find(|&a| primes.iter().all(|&r| self.pow_slow(a, order / r) != 1))
            .expect("F_q^* is cyclic");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp.push(acc);
            log[acc as usize] = i as u32;
            acc = self.mul_slow(acc, gamma);
        }
        let doubled = exp.clone();
        exp.extend(doubled);
        Ok(LogTables { exp, log })
    }

    pub fn prime_power(&self) -> &PrimePower {
        &self.prime_power
    }

    pub fn p(&self) -> u64 {
        self.prime_power.p()
    }

    pub fn t(&self) -> u32 {
        self.prime_power.t()
    }

    pub fn q(&self) -> u64 {
        self.prime_power.q()
    }

    /// Base modulus over `F_p`, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_valid(&self, a: u32) -> bool {
        (a as u64) < self.q()
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.p() as u32;
        (0..self.t())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    fn digits_to_int(&self, digits: &[u32]) -> u32 {
        let p = self.p() as u32;
        digits.iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    /// Coefficients over `F_p`, lowest degree first (length `t`).
    pub fn to_digits(&self, a: u32) -> Vec<u32> {
        self.digits(a)
    }

    pub fn from_prime_digits(&self, digits: &[u32]) -> Result<u32> {
        let p = self.p() as u32;
        if digits.len() != self.t() as usize || digits.iter().any(|&d| d >= p) {
            return Err(Error::InvalidInput(format!(
                "expected {} digits in [0, {p})",
                self.t()
            )));
        }
        Ok(self.digits_to_int(digits))
    }

    /// Image of an integer under `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p() as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        if self.t() == 1 {
            let s = a as u64 + b as u64;
            return if s >= p { (s - p) as u32 } else { s as u32 };
        }
        let p = p as u32;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.t() {
            let d = (a % p + b % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p() as u32;
        if self.t() == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut digits = self.digits(a);
        for d in &mut digits {
            *d = (p - *d) % p;
        }
        self.digits_to_int(&digits)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.t() == 1 {
            return ((a as u64 * b as u64) % self.p()) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(tables) => tables.exp[(tables.log[a as usize] + tables.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        let t = self.t() as usize;
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * t - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        for k in (t..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..t {
                let sub = c * self.modulus[j] as u64 % p;
                prod[k - t + j] = (prod[k - t + j] + p - sub) % p;
            }
            prod[k] = 0;
        }
        let digits: Vec<u32> = prod[..t].iter().map(|&d| d as u32).collect();
        self.digits_to_int(&digits)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if self.t() == 1 {
            return powmod_u64(a as u64, e, self.p()) as u32;
        }
        if let Some(tables) = &self.tables {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let idx = (tables.log[a as usize] as u128 * e as u128) % (self.q() - 1) as u128;
            return tables.exp[idx as usize];
        }
        self.pow_slow(a, e)
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    /// Absolute trace `Tr_{q/p}(a)`, as an integer in `[0, p)`.
    pub fn abs_trace(&self, a: u32) -> u32 {
        if self.t() == 1 {
            return a;
        }
        if self.q() <= LOG_TABLE_LIMIT {
            let table = self.abs_traces.get_or_init(|| {
                (0..self.q() as u32)
                    .map(|x| self.abs_trace_direct(x))
                    .collect()
            });
            return table[a as usize];
        }
        self.abs_trace_direct(a)
    }

    fn abs_trace_direct(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut conj = a;
        for _ in 0..self.t() {
            acc = self.add(acc, conj);
            conj = self.pow(conj, self.p());
        }
        debug_assert!((acc as u64) < self.p());
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_arithmetic_is_a_field() {
        let f = Fq::new(&PrimePower::new(3, 2).unwrap()).unwrap();
        // First irreducible monic quadratic over F_3 in canonical order: y^2 + 1.
        assert_eq!(f.modulus(), &[1, 0, 1]);
        for a in 1..9 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
        // y * y = -1 = 2.
        assert_eq!(f.mul(3, 3), 2);
        assert_eq!(f.mul(3, 3), f.mul_slow(3, 3));
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = Fq::new(&PrimePower::new(5, 3).unwrap()).unwrap();
        for a in 0..125 {
            for b in (0..125).step_by(7) {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
            assert_eq!(f.pow(a, 37), f.pow_slow(a, 37));
        }
    }

    #[test]
    fn absolute_trace_lands_in_prime_field() {
        let f = Fq::new(&PrimePower::new(3, 3).unwrap()).unwrap();
        let mut counts = [0; 3];
        for a in 0..27 {
            counts[f.abs_trace(a) as usize] += 1;
        }
        assert_eq!(counts, [9, 9, 9]);
    }
}
