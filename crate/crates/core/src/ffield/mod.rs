//! The tower `F_p ⊂ F_q ⊂ F_{q^n}`.
//!
//! `F_q` is [`Fq`]; `F_{q^n}` is [`ExtensionField`], whose elements are coordinate
//! vectors over `F_q` modulo a monic irreducible of degree `n`. Elements do not carry a
//! reference to their field; all arithmetic goes through the field value.

mod base;

pub use base::{Fq, LOG_TABLE_LIMIT, MAX_BASE_ORDER};

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fqpoly::{divisors_from, FqPolynomial, PolyFactorization};
use crate::intarith::{is_prime_u64, Factorizer, IntFactorization};

/// Largest `q^n` accepted by [`ExtensionField::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 62;

/// `q = p^t`.
#[derive(Clone)]
pub struct PrimePower {
    p: u64,
    t: u32,
    q: u64,
    q_minus_one: OnceLock<IntFactorization>,
}

impl PartialEq for PrimePower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t
    }
}

impl Eq for PrimePower {}

impl fmt::Debug for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimePower({}^{} = {})", self.p, self.t, self.q)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl PrimePower {
    pub fn new(p: u64, t: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if t == 0 {
            return Err(Error::InvalidInput("exponent t must be positive".into()));
        }
        let q = p
            .checked_pow(t)
            .ok_or_else(|| Error::CapExceeded(format!("{p}^{t} overflows 64 bits")))?;
        Ok(Self {
            p,
            t,
            q,
            q_minus_one: OnceLock::new(),
        })
    }

    /// Decomposes `q` as `p^t`; errors if `q` is not a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        let p = crate::intarith::factorize_u64(q)?
            .primes_u64()
            .filter(|ps| ps.len() == 1)
            .map(|ps| ps[0])
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        let mut t = 0;
        let mut r = q;
        while r > 1 {
            r /= p;
            t += 1;
        }
        Self::new(p, t)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Factorization of `q - 1`, computed once.
    pub fn q_minus_one_factorization(&self) -> Result<&IntFactorization> {
        if let Some(f) = self.q_minus_one.get() {
            return Ok(f);
        }
        let f = if self.q == 2 {
            IntFactorization::one()
        } else {
            crate::intarith::factorize_u64(self.q - 1)?
        };
        Ok(self.q_minus_one.get_or_init(|| f))
    }

    /// `(k, u)` with `n = p^k u` and `p ∤ u`.
    pub fn split_degree(&self, n: u64) -> (u32, u64) {
        let (mut k, mut u) = (0, n);
        while u % self.p == 0 {
            u /= self.p;
            k += 1;
        }
        (k, u)
    }
}

/// An element of `F_{q^n}`: `n` coordinates in `F_q`, lowest power of `x` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coords: Vec<u32>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl FieldElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// `F_{q^n}` as `F_q[x] / (f)` with `f` the first monic irreducible of degree `n`.
pub struct ExtensionField {
    base: Arc<Fq>,
    n: usize,
    modulus: FqPolynomial,
    /// Row `i` holds the coordinates of `x^{iq}`.
    frobenius: Vec<Vec<u32>>,
    size: u64,
    factorizer: Factorizer,
    order_factored: OnceLock<IntFactorization>,
    generator: OnceLock<FieldElement>,
    xn_minus_one: OnceLock<(PolyFactorization, Vec<FqPolynomial>)>,
}

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionField")
            .field("q", &self.q())
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Builds `F_{q^n}` for `q = p^t`.
pub fn build_field(p: u64, t: u32, n: usize) -> Result<ExtensionField> {
    ExtensionField::new(&PrimePower::new(p, t)?, n)
}

impl ExtensionField {
    pub fn new(q: &PrimePower, n: usize) -> Result<Self> {
        Self::with_factorizer(q, n, Factorizer::default())
    }

    pub fn with_factorizer(q: &PrimePower, n: usize, factorizer: Factorizer) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "extension degree must be positive".into(),
            ));
        }
        let size = u32::try_from(n)
            .ok()
            .and_then(|e| q.q().checked_pow(e))
            .filter(|&s| s <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::CapExceeded(format!("{}^{n} exceeds the field size cap 2^62", q.q()))
            })?;
        let base = Arc::new(Fq::new(q)?);
        Self::over(base, n, size, factorizer)
    }

    /// `F_{q^n}` over an already constructed base field.
    pub fn from_base(base: &Arc<Fq>, n: usize) -> Result<Self> {
        let size = u32::try_from(n)
            .ok()
            .and_then(|e| base.q().checked_pow(e))
            .filter(|&s| s <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::CapExceeded(format!("{}^{n} exceeds the field size cap 2^62", base.q()))
            })?;
        Self::over(Arc::clone(base), n, size, Factorizer::default())
    }

    fn over(base: Arc<Fq>, n: usize, size: u64, factorizer: Factorizer) -> Result<Self> {
        let modulus = FqPolynomial::first_irreducible(&base, n)?;
        let mut field = Self {
            base,
            n,
            modulus,
            frobenius: Vec::new(),
            size,
            factorizer,
            order_factored: OnceLock::new(),
            generator: OnceLock::new(),
            xn_minus_one: OnceLock::new(),
        };
        let xq = field.pow(&field.x(), field.q());
        let mut rows = Vec::with_capacity(n);
        let mut acc = field.one();
        for _ in 0..n {
            rows.push(acc.coords.clone());
            acc = field.mul(&acc, &xq);
        }
        field.frobenius = rows;
        Ok(field)
    }

    pub fn base(&self) -> &Arc<Fq> {
        &self.base
    }

    pub fn prime_power(&self) -> &PrimePower {
        self.base.prime_power()
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `q^n - 1`.
    pub fn order(&self) -> u64 {
        self.size - 1
    }

    pub fn modulus(&self) -> &FqPolynomial {
        &self.modulus
    }

    /// Factorization of `q^n - 1`, computed once.
    pub fn order_factorization(&self) -> Result<&IntFactorization> {
        if let Some(f) = self.order_factored.get() {
            return Ok(f);
        }
        let f = if self.order() == 1 {
            IntFactorization::one()
        } else {
            self.factorizer.factorize_power_minus_one(
                self.p(),
                self.prime_power().t() as u64 * self.n as u64,
            )?
        };
        Ok(self.order_factored.get_or_init(|| f))
    }

    /// Prime divisors of `q^n - 1`, ascending.
    pub fn order_primes(&self) -> Result<Vec<u64>> {
        Ok(self
            .order_factorization()?
            .primes_u64()
            .expect("q^n - 1 < 2^62"))
    }

    /// Factorization of `x^n - 1` over `F_q` and its monic divisors in canonical order.
    pub fn xn_minus_one(&self) -> &(PolyFactorization, Vec<FqPolynomial>) {
        self.xn_minus_one.get_or_init(|| {
            let f = FqPolynomial::x_pow_minus_one(&self.base, self.n);
            let fact = f.factor().expect("x^n - 1 is nonzero");
            let divs = divisors_from(&fact, &self.base);
            (fact, divs)
        })
    }

    /// Monic divisors of `x^n - 1`, canonical order.
    pub fn xn_minus_one_divisors(&self) -> &[FqPolynomial] {
        &self.xn_minus_one().1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_base_elem(1)
    }

    /// Embeds `c ∈ F_q`.
    pub fn from_base_elem(&self, c: u32) -> FieldElement {
        let mut coords = vec![0; self.n];
        coords[0] = c;
        FieldElement { coords }
    }

    /// The class of `x`.
    pub fn x(&self) -> FieldElement {
        if self.n == 1 {
            // The degree-1 modulus is `x` itself.
            let root = self.base.neg(self.modulus.coeff(0));
            return self.from_base_elem(root);
        }
        let mut coords = vec![0; self.n];
        coords[1] = 1;
        FieldElement { coords }
    }

    pub fn from_coords(&self, coords: Vec<u32>) -> Result<FieldElement> {
        if coords.len() != self.n || coords.iter().any(|&c| !self.base.is_valid(c)) {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates in F_{}",
                self.n,
                self.q()
            )));
        }
        Ok(FieldElement { coords })
    }

    /// Reduces a polynomial over `F_q` modulo the field modulus.
    pub fn from_poly(&self, f: &FqPolynomial) -> Result<FieldElement> {
        let r = f.rem(&self.modulus)?;
        let mut coords = r.coeffs().to_vec();
        coords.resize(self.n, 0);
        Ok(FieldElement { coords })
    }

    pub fn to_poly(&self, w: &FieldElement) -> FqPolynomial {
        FqPolynomial::new(&self.base, w.coords.clone()).expect("valid coordinates")
    }

    /// Enumeration index `Σ c_i q^i`.
    pub fn index(&self, w: &FieldElement) -> u64 {
        let q = self.q();
        w.coords.iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn from_index(&self, mut k: u64) -> FieldElement {
        let q = self.q();
        let coords = (0..self.n)
            .map(|_| {
                let c = (k % q) as u32;
                k /= q;
                c
            })
            .collect();
        FieldElement { coords }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(move |k| self.from_index(k))
    }

    /// Nested coefficient lists: `n` coordinates, each as `t` digits in `[0, p)`.
    pub fn to_nested(&self, w: &FieldElement) -> Vec<Vec<u32>> {
        w.coords.iter().map(|&c| self.base.to_digits(c)).collect()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.base;
        FieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| f.add(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|&x| self.base.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    /// Multiplication by a scalar from `F_q`.
    pub fn scale(&self, a: &FieldElement, c: u32) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|&x| self.base.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.base;
        let n = self.n;
        if n == 1 {
            return FieldElement {
                coords: vec![f.mul(a.coords[0], b.coords[0])],
            };
        }
        let mut prod = vec![0u32; 2 * n - 1];
        if f.t() == 1 {
            let p = f.p();
            let mut acc = vec![0u64; 2 * n - 1];
            for (i, &x) in a.coords.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.coords.iter().enumerate() {
                    acc[i + j] = (acc[i + j] + x as u64 * y as u64) % p;
                }
            }
            for (d, s) in prod.iter_mut().zip(acc) {
                *d = s as u32;
            }
        } else {
            for (i, &x) in a.coords.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.coords.iter().enumerate() {
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                }
            }
        }
        // The modulus is monic: x^n = -Σ m_j x^j.
        let m = self.modulus.coeffs();
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                if m[j] != 0 {
                    prod[k - n + j] = f.sub(prod[k - n + j], f.mul(c, m[j]));
                }
            }
        }
        prod.truncate(n);
        FieldElement { coords: prod }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.order() - 1))
    }

    fn frobenius_once(&self, w: &FieldElement) -> FieldElement {
        let f = &self.base;
        let mut out = vec![0u32; self.n];
        for (row, &c) in self.frobenius.iter().zip(&w.coords) {
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(c, r));
            }
        }
        FieldElement { coords: out }
    }

    /// `w^{q^i}`.
    pub fn frobenius(&self, w: &FieldElement, i: usize) -> FieldElement {
        let mut out = w.clone();
        for _ in 0..(i % self.n) {
            out = self.frobenius_once(&out);
        }
        out
    }

    /// `w, w^q, …, w^{q^{n-1}}`.
    pub fn conjugates(&self, w: &FieldElement) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.n);
        out.push(w.clone());
        for i in 1..self.n {
            let next = self.frobenius_once(&out[i - 1]);
            out.push(next);
        }
        out
    }

    fn check_divisor(&self, m: usize) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotADivisor(format!(
                "{m} does not divide n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// `Tr_{q^n / q^m}(w)`.
    pub fn trace(&self, w: &FieldElement, m: usize) -> Result<FieldElement> {
        self.check_divisor(m)?;
        let mut acc = self.zero();
        let mut conj = w.clone();
        for _ in 0..self.n / m {
            acc = self.add(&acc, &conj);
            conj = self.frobenius(&conj, m);
        }
        debug_assert!(self.is_in_subfield(&acc, m).unwrap_or(false));
        Ok(acc)
    }

    /// `Tr_{q^n / q}(w)` as an element of `F_q`.
    pub fn trace_to_base(&self, w: &FieldElement) -> u32 {
        let t = self.trace(w, 1).expect("1 divides n");
        t.coords[0]
    }

    /// `Tr_{q^n / p}(w)` as an integer in `[0, p)`.
    pub fn absolute_trace(&self, w: &FieldElement) -> u32 {
        self.base.abs_trace(self.trace_to_base(w))
    }

    /// Whether `w` lies in `F_{q^m}` (fixed by `x ↦ x^{q^m}`).
    pub fn is_in_subfield(&self, w: &FieldElement, m: usize) -> Result<bool> {
        self.check_divisor(m)?;
        Ok(self.frobenius(w, m) == *w)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, w: &FieldElement) -> Result<u64> {
        if w.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut order = self.order();
        for (r, e) in self.order_factorization()?.factors() {
            let r = u64::try_from(r).expect("q^n - 1 < 2^62");
            for _ in 0..*e {
                if self.pow(w, order / r) == self.one() {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    pub fn is_primitive(&self, w: &FieldElement) -> Result<bool> {
        if w.is_zero() {
            return Err(Error::ZeroElement);
        }
        let order = self.order();
        let one = self.one();
        Ok(self
            .order_primes()?
            .iter()
            .all(|&r| self.pow(w, order / r) != one))
    }

    /// Whether `ord(w) = (q^n - 1) / r`.
    pub fn is_r_primitive(&self, w: &FieldElement, r: u64) -> Result<bool> {
        if r == 0 || !self.order().is_multiple_of(r) {
            return Err(Error::NotADivisor(format!(
                "{r} does not divide q^n - 1 = {}",
                self.order()
            )));
        }
        Ok(self.mult_order(w)? * r == self.order())
    }

    /// First primitive element in index order, computed once.
    pub fn generator(&self) -> Result<&FieldElement> {
        if let Some(g) = self.generator.get() {
            return Ok(g);
        }
        self.order_factorization()?;
        // Constants lie in F_q^* and cannot generate when n > 1.
        let start = if self.n > 1 { self.q() } else { 1 };
        let g = (start..self.size)
            .map(|k| self.from_index(k))
            .find(|w| self.is_primitive(w).expect("nonzero, factorization cached"))
            .expect("F_{q^n}^* is cyclic");
        Ok(self.generator.get_or_init(|| g))
    }

    /// Dimension over `F_q` of the span of the given elements.
    pub fn rank(&self, rows: &[FieldElement]) -> usize {
        let f = &self.base;
        let mut m: Vec<Vec<u32>> = rows.iter().map(|r| r.coords.clone()).collect();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = f.inv(m[rank][col]).expect("nonzero pivot");
            for v in &mut m[rank][col..] {
                *v = f.mul(*v, inv);
            }
            let pivot_row = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    let factor = row[col];
                    for (v, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *v = f.sub(*v, f.mul(factor, pv));
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// `k` such that `w` is `k`-normal: the codimension of the span of its conjugates.
    pub fn normality_defect(&self, w: &FieldElement) -> usize {
        self.n - self.rank(&self.conjugates(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_basics() {
        let q = PrimePower::from_q(125).unwrap();
        assert_eq!((q.p(), q.t(), q.q()), (5, 3, 125));
        assert_eq!(q.split_degree(50), (2, 2));
        assert_eq!(PrimePower::new(4, 1), Err(Error::NotPrime(4)));
        assert!(PrimePower::from_q(12).is_err());
        let f = q.q_minus_one_factorization().unwrap();
        assert_eq!(f.primes_u64().unwrap(), vec![2, 31]);
    }

    #[test]
    fn build_is_deterministic() {
        let a = build_field(7, 1, 4).unwrap();
        let b = build_field(7, 1, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert!(a.modulus().is_irreducible());
        let f = build_field(5, 2, 3).unwrap();
        assert_eq!(f.q(), 25);
        assert_eq!(f.size(), 15625);
        assert!(f.modulus().is_irreducible());
        assert!(matches!(build_field(3, 1, 40), Err(Error::CapExceeded(_))));
        assert_eq!(build_field(6, 1, 2).unwrap_err(), Error::NotPrime(6));
    }

    #[test]
    fn frobenius_basics() {
        let f = build_field(3, 1, 2).unwrap();
        let x = f.x();
        assert_eq!(f.frobenius(&x, 1), f.pow(&x, 3));
        for w in f.elements() {
            assert_eq!(f.frobenius(&w, 0), w);
            assert_eq!(f.frobenius(&w, 2), w);
        }
    }

    #[test]
    fn trace_basics() {
        let f = build_field(3, 1, 6).unwrap();
        assert!(f.trace(&f.zero(), 2).unwrap().is_zero());
        assert!(matches!(f.trace(&f.one(), 4), Err(Error::NotADivisor(_))));
        // Tr(c) = n c for c ∈ F_q; n = 6 ≡ 0 mod 3.
        assert!(f.trace(&f.from_base_elem(2), 1).unwrap().is_zero());
        let g = build_field(5, 1, 3).unwrap();
        assert_eq!(g.trace_to_base(&g.from_base_elem(2)), 1);
    }

    #[test]
    fn orders_and_generators() {
        let f9 = build_field(3, 1, 2).unwrap();
        assert_eq!(f9.mult_order(&f9.one()).unwrap(), 1);
        let g = f9.generator().unwrap().clone();
        assert_eq!(f9.mult_order(&g).unwrap(), 8);
        assert_eq!(f9.generator().unwrap(), &g);
        let order4: Vec<_> = f9
            .elements()
            .skip(1)
            .filter(|w| f9.mult_order(w).unwrap() == 4)
            .collect();
        assert_eq!(order4.len(), 2);
        for w in f9.elements().skip(1) {
            assert_eq!(f9.is_r_primitive(&w, 2).unwrap(), order4.contains(&w));
        }
        assert_eq!(f9.mult_order(&f9.zero()), Err(Error::ZeroElement));
        assert!(matches!(
            f9.is_r_primitive(&g, 3),
            Err(Error::NotADivisor(_))
        ));

        let f27 = build_field(3, 1, 3).unwrap();
        let g = f27.generator().unwrap();
        assert_ne!(f27.pow(g, 13), f27.one());
        assert_eq!(f27.pow(g, 26), f27.one());
        // 3^3 - 1 = 26 ≡ 2 mod 4.
        assert!(f27.is_r_primitive(&f27.square(g), 2).unwrap());
    }

    #[test]
    fn field_over_extension_base() {
        let f = build_field(3, 2, 2).unwrap();
        assert_eq!(f.size(), 81);
        let g = f.generator().unwrap();
        assert_eq!(f.mult_order(g).unwrap(), 80);
        for w in f.elements().skip(1) {
            assert_eq!(f.mul(&w, &f.inv(&w).unwrap()), f.one());
        }
        assert_eq!(f.to_nested(&f.x()), vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn index_round_trip() {
        let f = build_field(5, 1, 3).unwrap();
        for k in [0, 1, 7, 124] {
            assert_eq!(f.index(&f.from_index(k)), k);
        }
    }
}
