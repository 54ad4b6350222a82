//! Univariate polynomials over `F_q`.
//!
//! Besides ring arithmetic this module factors polynomials (square-free, distinct-degree,
//! then equal-degree splitting), and provides the polynomial analogues of Euler's function,
//! the Möbius function and `W`, along with the divisor lattice of `x^n - 1`.
//!
//! Canonical order: by degree, then by the integer `Σ c_i q^i` (the leading coefficient is
//! the most significant digit). Divisor lists and factorizations are always returned in it.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::Fq;
use crate::intarith::{divisors_u64, euler_phi_u64, factor_pairs_u64, multiplicative_order_mod};

const FACTOR_SEED: u64 = 0x5eed_f00d;

/// Polynomial over `F_q`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone)]
pub struct FqPolynomial {
    field: Arc<Fq>,
    coeffs: Vec<u32>,
}

impl PartialEq for FqPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Eq for FqPolynomial {}

impl PartialOrd for FqPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for FqPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl FqPolynomial {
    /// Builds a polynomial from canonical coefficient integers, lowest degree first.
    pub fn new(field: &Arc<Fq>, coeffs: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&c| !field.is_valid(c)) {
            return Err(Error::InvalidInput(format!(
                "coefficient {bad} is not an element of F_{}",
                field.q()
            )));
        }
        Ok(Self::from_raw(field, coeffs))
    }

    fn from_raw(field: &Arc<Fq>, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self {
            field: Arc::clone(field),
            coeffs,
        }
    }

    /// Coefficients given as integers, reduced into the prime field.
    pub fn from_ints(field: &Arc<Fq>, ints: &[i64]) -> Self {
        Self::from_raw(field, ints.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Arc<Fq>) -> Self {
        Self::from_raw(field, Vec::new())
    }

    pub fn one(field: &Arc<Fq>) -> Self {
        Self::from_raw(field, vec![1])
    }

    pub fn constant(field: &Arc<Fq>, c: u32) -> Self {
        Self::from_raw(field, vec![c])
    }

    /// `x^k`.
    pub fn monomial(field: &Arc<Fq>, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self::from_raw(field, coeffs)
    }

    pub fn x(field: &Arc<Fq>) -> Self {
        Self::monomial(field, 1)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(field: &Arc<Fq>, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = field.add(coeffs[0], field.neg(1));
        Self::from_raw(field, coeffs)
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Self::from_raw(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut coeffs = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Self::from_raw(f, coeffs)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = &self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Euclidean division; `Err` on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_same_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::InvalidInput(
                "division by the zero polynomial".into(),
            ));
        }
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] = f.sub(rem[k - dd + j], f.mul(c, dj));
            }
        }
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::NotADivisor(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// `self^e mod modulus` for an arbitrary-size exponent.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Result<Self> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(&self.field).rem(modulus)?;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul_unchecked(&base).rem(modulus)?;
            }
            base = base.mul_unchecked(&base).rem(modulus)?;
        }
        Ok(acc)
    }

    pub fn pow_mod_u64(&self, e: u64, modulus: &Self) -> Result<Self> {
        self.pow_mod(&BigUint::from(e), modulus)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::from_raw(f, coeffs)
    }

    /// Evaluates at a point of `F_q`.
    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidInput("gcd(0, 0) is undefined".into()));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Inverse `p`-th root of a polynomial whose derivative vanishes, i.e. `g` with `g^p = self`.
    fn pth_root(&self) -> Self {
        let f = &self.field;
        let p = f.p() as usize;
        // c^{1/p} = c^{q/p} in F_q.
        let root_exp = f.q() / f.p();
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pow(c, root_exp))
            .collect();
        Self::from_raw(f, coeffs)
    }

    /// Canonical integer `Σ c_i q^i` (used for enumeration), if it fits.
    pub fn canonical_index(&self) -> Option<u128> {
        let q = self.field.q() as u128;
        self.coeffs
            .iter()
            .rev()
            .try_fold(0u128, |acc, &c| acc.checked_mul(q)?.checked_add(c as u128))
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field.q();
        let x = Self::x(&self.field);
        // x^{q^k} mod f for k = 0..=d.
        let mut frob = vec![x.clone()];
        for k in 1..=d {
            let next = frob[k - 1].pow_mod_u64(q, &f).expect("nonzero modulus");
            frob.push(next);
        }
        if frob[d] != x.rem(&f).unwrap() {
            return false;
        }
        for (r, _) in factor_pairs_u64(d as u64) {
            let k = d / r as usize;
            let h = frob[k].sub(&x).unwrap();
            if !f.gcd(&h).unwrap().is_one() {
                return false;
            }
        }
        true
    }

    /// First monic irreducible of the given degree in canonical order.
    pub fn first_irreducible(field: &Arc<Fq>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput(
                "irreducibles have positive degree".into(),
            ));
        }
        let q = field.q();
        let mut digits = vec![0u32; degree];
        loop {
            let mut coeffs = digits.clone();
            coeffs.push(1);
            let candidate = Self::from_raw(field, coeffs);
            if candidate.is_irreducible() {
                return Ok(candidate);
            }
            // Increment with the top non-leading coefficient most significant.
            let mut i = 0;
            loop {
                if i == degree {
                    return Err(Error::InvalidInput(format!(
                        "no irreducible of degree {degree} found over F_{q}"
                    )));
                }
                digits[i] += 1;
                if (digits[i] as u64) < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Complete factorization into monic irreducibles.
    pub fn factor(&self) -> Result<PolyFactorization> {
        let Some(d) = self.degree() else {
            return Err(Error::InvalidInput(
                "cannot factor the zero polynomial".into(),
            ));
        };
        let unit = self.lead();
        let mut factors: Vec<(FqPolynomial, u32)> = Vec::new();
        if d > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
            for (part, mult) in square_free_decomposition(&self.monic()) {
                for (block, deg) in distinct_degree(&part) {
                    for irreducible in equal_degree(&block, deg, &mut rng) {
                        factors.push((irreducible, mult));
                    }
                }
            }
        }
        factors.sort();
        let mut merged: Vec<(FqPolynomial, u32)> = Vec::with_capacity(factors.len());
        for (g, e) in factors {
            match merged.last_mut() {
                Some((h, m)) if *h == g => *m += e,
                _ => merged.push((g, e)),
            }
        }
        Ok(PolyFactorization {
            unit,
            factors: merged,
        })
    }
}

/// Square-free decomposition of a monic polynomial: pairs `(g_i, i)` with `f = Π g_i^i`.
fn square_free_decomposition(f: &FqPolynomial) -> Vec<(FqPolynomial, u32)> {
    let field = f.field();
    let p = field.p() as u32;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in square_free_decomposition(&f.pth_root()) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d).unwrap();
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).unwrap();
        let fac = w.exact_div(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).unwrap();
    }
    if !c.is_one() {
        for (g, m) in square_free_decomposition(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &FqPolynomial) -> Vec<(FqPolynomial, usize)> {
    let field = f.field();
    let q = field.q();
    let x = FqPolynomial::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest).unwrap();
    let mut deg = 0;
    while let Some(rd) = rest.degree() {
        if rd == 0 {
            break;
        }
        deg += 1;
        if 2 * deg > rd {
            out.push((rest.clone(), rd));
            break;
        }
        h = h.pow_mod_u64(q, &rest).unwrap();
        let g = rest.gcd(&h.sub(&x).unwrap()).unwrap();
        if !g.is_one() {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, deg));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting (trace map in characteristic 2).
fn equal_degree(f: &FqPolynomial, deg: usize, rng: &mut ChaCha8Rng) -> Vec<FqPolynomial> {
    let n = f.degree().unwrap();
    if n == deg {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.q();
    let odd_exp = (BigUint::from(q).pow(deg as u32) - 1u32) / 2u32;
    loop {
        let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q as u32)).collect();
        let a = FqPolynomial::from_raw(field, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if field.p() == 2 {
            let mut acc = a.clone();
            let mut term = a.clone();
            for _ in 1..(field.t() as usize * deg) {
                term = term.mul_unchecked(&term).rem(f).unwrap();
                acc = acc.add_unchecked(&term);
            }
            acc
        } else {
            a.pow_mod(&odd_exp, f)
                .unwrap()
                .sub(&FqPolynomial::one(field))
                .unwrap()
        };
        if b.is_zero() {
            continue;
        }
        let g = f.gcd(&b).unwrap();
        if g.is_one() || g.degree() == f.degree() {
            continue;
        }
        let other = f.exact_div(&g).unwrap();
        let mut out = equal_degree(&g, deg, rng);
        out.extend(equal_degree(&other, deg, rng));
        return out;
    }
}

/// `(irreducible, multiplicity)` pairs, canonical order, plus the leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactorization {
    unit: u32,
    factors: Vec<(FqPolynomial, u32)>,
}

impl PolyFactorization {
    pub fn unit(&self) -> u32 {
        self.unit
    }

    pub fn factors(&self) -> &[(FqPolynomial, u32)] {
        &self.factors
    }

    pub fn distinct_factors(&self) -> usize {
        self.factors.len()
    }
}

fn require_monic(f: &FqPolynomial) -> Result<()> {
    if f.is_monic() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{f} is not monic")))
    }
}

/// `gcd` of two polynomials.
pub fn poly_gcd(a: &FqPolynomial, b: &FqPolynomial) -> Result<FqPolynomial> {
    a.gcd(b)
}

pub fn factor_poly(f: &FqPolynomial) -> Result<PolyFactorization> {
    f.factor()
}

/// `Φ(f) = |(F_q[x]/(f))^*|`.
pub fn poly_phi(f: &FqPolynomial) -> Result<BigUint> {
    require_monic(f)?;
    Ok(poly_phi_of(&f.factor()?, f.field().q()))
}

pub(crate) fn poly_phi_of(fact: &PolyFactorization, q: u64) -> BigUint {
    let q = BigUint::from(q);
    fact.factors().iter().fold(BigUint::one(), |acc, (g, e)| {
        let d = g.degree().unwrap() as u32;
        acc * (q.pow(e * d) - q.pow((e - 1) * d))
    })
}

/// Polynomial Möbius function.
pub fn poly_mobius(f: &FqPolynomial) -> Result<i32> {
    require_monic(f)?;
    let fact = f.factor()?;
    Ok(mobius_of(&fact))
}

pub(crate) fn mobius_of(fact: &PolyFactorization) -> i32 {
    if fact.factors().iter().any(|&(_, e)| e > 1) {
        0
    } else if fact.distinct_factors().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of square-free monic divisors, `2^{#distinct irreducible factors}`.
pub fn big_w_poly(f: &FqPolynomial) -> Result<BigUint> {
    require_monic(f)?;
    Ok(BigUint::one() << f.factor()?.distinct_factors())
}

/// All monic divisors, canonical order.
pub fn divisors_of(f: &FqPolynomial) -> Result<Vec<FqPolynomial>> {
    require_monic(f)?;
    Ok(divisors_from(&f.factor()?, f.field()))
}

pub(crate) fn divisors_from(fact: &PolyFactorization, field: &Arc<Fq>) -> Vec<FqPolynomial> {
    let mut divs = vec![FqPolynomial::one(field)];
    for (g, e) in fact.factors() {
        let len = divs.len();
        let mut power = FqPolynomial::one(field);
        for _ in 0..*e {
            power = power.mul_unchecked(g);
            for i in 0..len {
                let next = divs[i].mul_unchecked(&power);
                divs.push(next);
            }
        }
    }
    divs.sort();
    divs
}

/// Number of distinct irreducible factors of `x^u - 1` over `F_q`, `gcd(u, q) = 1`:
/// `Σ_{d | u} φ(d) / ord_d(q)`.
pub fn count_irreducible_factors_cyclotomic(q: u64, u: u64) -> Result<u64> {
    if u == 0 || u.gcd(&q) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "u = {u} must be positive and coprime to q = {q}"
        )));
    }
    Ok(divisors_u64(u)
        .into_iter()
        .map(|d| euler_phi_u64(d) / multiplicative_order_mod(q % d, d).unwrap_or(1))
        .sum())
}

/// `u` for which the `q = 3` estimate `W(x^u - 1) <= 2^{(u+1)/3}` fails; checked against
/// exact counts for every `u < 3000`.
pub const Q3_BOUND_EXCEPTIONS: [u64; 8] = [1, 2, 4, 8, 10, 13, 16, 26];

/// Individual estimates for `W(x^u - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WPolyBound {
    /// The exact value.
    Exact,
    /// `2^{(u + gcd(u, q-1))/2}`.
    Generic,
    /// `2^{(u + min(u, q-1))/2}`.
    Min,
    /// `2^{u/3 + 6}`, only for `q = 5`.
    Q5,
    /// `2^{(u+1)/3}`, only for `q = 3` outside [`Q3_BOUND_EXCEPTIONS`].
    Q3,
    /// `2^u`.
    Trivial,
}

/// Value of one estimate, `None` where it does not apply.
pub fn w_poly_bound(q: u64, u: u64, which: WPolyBound) -> Result<Option<f64>> {
    if u == 0 || u.gcd(&q) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "u = {u} must be positive and coprime to q = {q}"
        )));
    }
    let u_f = u as f64;
    Ok(match which {
        WPolyBound::Exact => Some(2f64.powi(count_irreducible_factors_cyclotomic(q, u)? as i32)),
        WPolyBound::Generic => Some(2f64.powf((u + u.gcd(&(q - 1))) as f64 / 2.0)),
        WPolyBound::Min => Some(2f64.powf((u + u.min(q - 1)) as f64 / 2.0)),
        WPolyBound::Q5 => (q == 5).then(|| 2f64.powf(u_f / 3.0 + 6.0)),
        WPolyBound::Q3 => {
            (q == 3 && !Q3_BOUND_EXCEPTIONS.contains(&u)).then(|| 2f64.powf((u_f + 1.0) / 3.0))
        }
        WPolyBound::Trivial => Some(2f64.powf(u_f)),
    })
}

/// Smallest applicable estimate for `W(x^u - 1)`.
pub fn w_poly_bounds(q: u64, u: u64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for which in [
        WPolyBound::Generic,
        WPolyBound::Min,
        WPolyBound::Q5,
        WPolyBound::Q3,
    ] {
        if let Some(b) = w_poly_bound(q, u, which)? {
            best = best.min(b);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimePower;

    fn fp(p: u64) -> Arc<Fq> {
        Arc::new(Fq::prime(p).unwrap())
    }

    fn poly(field: &Arc<Fq>, c: &[i64]) -> FqPolynomial {
        FqPolynomial::from_ints(field, c)
    }

    #[test]
    fn gcd_examples() {
        let f3 = fp(3);
        let f5 = fp(5);
        assert_eq!(
            poly_gcd(&poly(&f3, &[-1, 0, 1]), &poly(&f3, &[1, 1])).unwrap(),
            poly(&f3, &[1, 1])
        );
        assert_eq!(
            poly_gcd(&poly(&f5, &[-1, 0, 0, 1]), &poly(&f5, &[-1, 1])).unwrap(),
            poly(&f5, &[-1, 1])
        );
        assert_eq!(
            poly_gcd(&poly(&f3, &[-1, 0, 0, 0, 1]), &poly(&f3, &[1, 0, 1])).unwrap(),
            poly(&f3, &[1, 0, 1])
        );
    }

    #[test]
    fn gcd_rejects_mixed_fields() {
        let a = poly(&fp(3), &[1, 1]);
        let b = poly(&fp(5), &[1, 1]);
        assert_eq!(poly_gcd(&a, &b), Err(Error::FieldMismatch));
    }

    #[test]
    fn factor_examples() {
        let f3 = fp(3);
        let fact = factor_poly(&FqPolynomial::x_pow_minus_one(&f3, 4)).unwrap();
        let expect = vec![
            (poly(&f3, &[1, 1]), 1),
            (poly(&f3, &[2, 1]), 1),
            (poly(&f3, &[1, 0, 1]), 1),
        ];
        assert_eq!(fact.factors(), expect.as_slice());

        let f5 = fp(5);
        let lin = poly(&f5, &[-1, 1]);
        assert_eq!(factor_poly(&lin).unwrap().factors(), &[(lin.clone(), 1)]);
        let fact = factor_poly(&FqPolynomial::x_pow_minus_one(&f5, 5)).unwrap();
        assert_eq!(fact.factors(), &[(lin, 5)]);
    }

    #[test]
    fn factor_over_extension_field() {
        let f9 = Arc::new(Fq::new(&PrimePower::new(3, 2).unwrap()).unwrap());
        // x^8 - 1 splits completely over F_9.
        let fact = factor_poly(&FqPolynomial::x_pow_minus_one(&f9, 8)).unwrap();
        assert_eq!(fact.distinct_factors(), 8);
        assert!(fact
            .factors()
            .iter()
            .all(|(g, e)| g.degree() == Some(1) && *e == 1));
    }

    #[test]
    fn factor_with_nonmonic_input_and_repeated_factors() {
        let f7 = fp(7);
        let a = poly(&f7, &[1, 0, 1]); // irreducible: -1 is not a square mod 7
        let b = poly(&f7, &[3, 1]);
        let g = a.pow(2).mul(&b.pow(7)).unwrap().scale(4);
        let fact = g.factor().unwrap();
        assert_eq!(fact.unit(), 4);
        assert_eq!(fact.factors(), &[(b, 7), (a, 2)]);
    }

    #[test]
    fn phi_mobius_w_examples() {
        let f3 = fp(3);
        let f5 = fp(5);
        assert_eq!(poly_phi(&poly(&f5, &[-1, 1])).unwrap(), BigUint::from(4u32));
        assert_eq!(
            poly_phi(&poly(&f3, &[-1, 0, 1])).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(
            poly_phi(&FqPolynomial::x_pow_minus_one(&f3, 4)).unwrap(),
            BigUint::from(32u32)
        );
        assert_eq!(poly_phi(&FqPolynomial::one(&f3)).unwrap(), BigUint::one());

        assert_eq!(poly_mobius(&poly(&f3, &[-1, 1]).pow(2)).unwrap(), 0);
        assert_eq!(poly_mobius(&poly(&f3, &[-1, 0, 1])).unwrap(), 1);
        assert_eq!(poly_mobius(&poly(&f3, &[-1, 1])).unwrap(), -1);
        assert_eq!(poly_mobius(&FqPolynomial::one(&f3)).unwrap(), 1);

        assert_eq!(
            big_w_poly(&FqPolynomial::x_pow_minus_one(&f3, 4)).unwrap(),
            BigUint::from(8u32)
        );
        assert_eq!(
            big_w_poly(&FqPolynomial::x_pow_minus_one(&f5, 5)).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(big_w_poly(&FqPolynomial::one(&f5)).unwrap(), BigUint::one());
        assert!(matches!(
            big_w_poly(&poly(&f5, &[1, 2])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn divisor_examples() {
        let f3 = fp(3);
        let divs = divisors_of(&poly(&f3, &[-1, 0, 1])).unwrap();
        // x + 1 = [1, 1] precedes x - 1 = [2, 1] canonically.
        assert_eq!(
            divs,
            vec![
                FqPolynomial::one(&f3),
                poly(&f3, &[1, 1]),
                poly(&f3, &[-1, 1]),
                poly(&f3, &[-1, 0, 1]),
            ]
        );
        let lin = poly(&f3, &[-1, 1]);
        assert_eq!(
            divisors_of(&lin).unwrap(),
            vec![FqPolynomial::one(&f3), lin]
        );
        let f5 = fp(5);
        let divs = divisors_of(&FqPolynomial::x_pow_minus_one(&f5, 5)).unwrap();
        let lin = poly(&f5, &[-1, 1]);
        assert_eq!(divs, (0..=5).map(|d| lin.pow(d)).collect::<Vec<_>>());
    }

    #[test]
    fn cyclotomic_factor_counts() {
        assert_eq!(count_irreducible_factors_cyclotomic(3, 4).unwrap(), 3);
        assert_eq!(count_irreducible_factors_cyclotomic(9, 1).unwrap(), 1);
        assert_eq!(count_irreducible_factors_cyclotomic(5, 2).unwrap(), 2);
        assert!(count_irreducible_factors_cyclotomic(5, 10).is_err());
    }

    #[test]
    fn w_poly_bound_examples() {
        assert_eq!(w_poly_bounds(3, 5).unwrap(), 4.0);
        // x^3 - 1 = (x - 1)(x^2 + x + 1) over F_5; generic 2^{(3+1)/2} is tight.
        assert_eq!(w_poly_bounds(5, 3).unwrap(), 4.0);
        assert_eq!(w_poly_bound(7, 3, WPolyBound::Q5).unwrap(), None);
    }

    #[test]
    fn first_irreducibles_are_canonical() {
        let f3 = fp(3);
        assert_eq!(
            FqPolynomial::first_irreducible(&f3, 1).unwrap(),
            poly(&f3, &[0, 1])
        );
        assert_eq!(
            FqPolynomial::first_irreducible(&f3, 2).unwrap(),
            poly(&f3, &[1, 0, 1])
        );
        // Every x^3 + c and x^3 + x + c has a root in F_3, as does x^3 + 2x.
        assert_eq!(
            FqPolynomial::first_irreducible(&f3, 3).unwrap(),
            poly(&f3, &[1, 2, 0, 1])
        );
    }

    #[test]
    fn serializes_as_coefficient_list() {
        let f3 = fp(3);
        let json = serde_json::to_string(&poly(&f3, &[2, 0, 1])).unwrap();
        assert_eq!(json, "[2,0,1]");
    }

    #[test]
    fn q3_exceptions_match_exact_counts() {
        let failing: Vec<u64> = (1..3000u64)
            .filter(|u| u % 3 != 0)
            .filter(|&u| {
                let exact = count_irreducible_factors_cyclotomic(3, u).unwrap() as f64;
                exact > (u as f64 + 1.0) / 3.0
            })
            .collect();
        assert_eq!(failing, Q3_BOUND_EXCEPTIONS);
    }
}
