//! Additive and multiplicative structure of elements of `F_{q^n}`: q-associates, the
//! `F_q`-order, `k`-normality, freeness, and exact (non-character) indicator functions.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{ExtensionField, FieldElement};
use crate::fqpoly::FqPolynomial;
use crate::intarith::{big_w_int, theta_of};

/// Default cap on `q^n` for scans over every element.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 100_000_000;

/// `f ∘ w = Σ a_i w^{q^i}`.
pub fn q_associate_apply(
    field: &ExtensionField,
    f: &FqPolynomial,
    w: &FieldElement,
) -> Result<FieldElement> {
    if **f.field() != **field.base() {
        return Err(Error::FieldMismatch);
    }
    Ok(apply_with_conjugates(field, f, &field.conjugates(w)))
}

fn apply_with_conjugates(
    field: &ExtensionField,
    f: &FqPolynomial,
    conjugates: &[FieldElement],
) -> FieldElement {
    let n = field.n();
    let mut acc = field.zero();
    for (i, &a) in f.coeffs().iter().enumerate() {
        if a != 0 {
            acc = field.add(&acc, &field.scale(&conjugates[i % n], a));
        }
    }
    acc
}

/// `m_w`: the lowest-degree monic divisor of `x^n - 1` annihilating `w`.
pub fn fq_order(field: &ExtensionField, w: &FieldElement) -> FqPolynomial {
    let conj = field.conjugates(w);
    field
        .xn_minus_one_divisors()
        .iter()
        .find(|d| apply_with_conjugates(field, d, &conj).is_zero())
        .cloned()
        .expect("x^n - 1 annihilates every element")
}

/// `(x^n - 1) / (x - 1)`, the `F_q`-order of the 1-normal elements considered here.
pub fn one_normal_order(field: &ExtensionField) -> FqPolynomial {
    let base = field.base();
    FqPolynomial::x_pow_minus_one(base, field.n())
        .exact_div(&FqPolynomial::x_pow_minus_one(base, 1))
        .expect("x - 1 divides x^n - 1")
}

/// An element together with its `F_q`-order and normality defect.
#[derive(Debug, Clone, Serialize)]
pub struct NormalityProfile {
    pub element: Vec<Vec<u32>>,
    pub fq_order: FqPolynomial,
    pub k: usize,
}

pub fn normality_profile(field: &ExtensionField, w: &FieldElement) -> NormalityProfile {
    let order = fq_order(field, w);
    NormalityProfile {
        element: field.to_nested(w),
        k: field.n() - order.degree().expect("nonzero divisor"),
        fq_order: order,
    }
}

/// `k` from the degree of `gcd(x^n - 1, Σ w^{q^i} x^{n-1-i})`, computed over `F_{q^n}`.
pub fn k_normality_gcd(field: &ExtensionField, w: &FieldElement) -> usize {
    let n = field.n();
    let conj = field.conjugates(w);
    // Lowest degree first: the coefficient of x^j is w^{q^{n-1-j}}.
    let g: Vec<FieldElement> = (0..n).map(|j| conj[n - 1 - j].clone()).collect();
    let mut xn1 = vec![field.zero(); n + 1];
    xn1[0] = field.neg(&field.one());
    xn1[n] = field.one();
    ext_gcd_degree(field, xn1, g)
}

fn trim(mut a: Vec<FieldElement>) -> Vec<FieldElement> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Degree of the gcd of two polynomials over `F_{q^n}`, the first one nonzero.
fn ext_gcd_degree(field: &ExtensionField, a: Vec<FieldElement>, b: Vec<FieldElement>) -> usize {
    let mut a = trim(a);
    let mut b = trim(b);
    while !b.is_empty() {
        let lead_inv = field.inv(b.last().unwrap()).expect("nonzero lead");
        let db = b.len() - 1;
        while a.len() > db {
            let top = a.len() - 1;
            let c = field.mul(&a[top], &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                let sub = field.mul(&c, bj);
                a[top - db + j] = field.sub(&a[top - db + j], &sub);
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

fn check_order_divisor(field: &ExtensionField, t: u64) -> Result<()> {
    if t == 0 || !field.order().is_multiple_of(t) {
        return Err(Error::NotADivisor(format!(
            "{t} does not divide q^n - 1 = {}",
            field.order()
        )));
    }
    Ok(())
}

/// Whether `w` is `t`-free: not a `d`-th power for any divisor `d > 1` of `t`.
pub fn is_t_free(field: &ExtensionField, w: &FieldElement, t: u64) -> Result<bool> {
    check_order_divisor(field, t)?;
    if w.is_zero() {
        return Err(Error::ZeroElement);
    }
    let order = field.order();
    let one = field.one();
    Ok(field
        .order_primes()?
        .into_iter()
        .filter(|r| t.is_multiple_of(*r))
        .all(|r| field.pow(w, order / r) != one))
}

/// Literal freeness test by searching for `β` with `β^d = w`; for tiny fields only.
pub fn is_t_free_brute_force(field: &ExtensionField, w: &FieldElement, t: u64) -> Result<bool> {
    check_order_divisor(field, t)?;
    if w.is_zero() {
        return Err(Error::ZeroElement);
    }
    for d in (2..=t).filter(|d| t.is_multiple_of(*d)) {
        if field.elements().skip(1).any(|b| field.pow(&b, d) == *w) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_xn1_divisor(field: &ExtensionField, d: &FqPolynomial) -> Result<()> {
    if **d.field() != **field.base() {
        return Err(Error::FieldMismatch);
    }
    if !d.is_monic() || !field.xn_minus_one_divisors().contains(d) {
        return Err(Error::NotADivisor(format!(
            "{d} is not a monic divisor of x^n - 1"
        )));
    }
    Ok(())
}

/// Whether `w` is `D`-free: `gcd(D, (x^n - 1) / m_w) = 1`.
pub fn is_poly_free(field: &ExtensionField, w: &FieldElement, d: &FqPolynomial) -> Result<bool> {
    check_xn1_divisor(field, d)?;
    let cofactor =
        FqPolynomial::x_pow_minus_one(field.base(), field.n()).exact_div(&fq_order(field, w))?;
    Ok(d.gcd(&cofactor)?.is_one())
}

/// Literal test: no divisor `h != 1` of `D` and `β` with `w = h ∘ β`; tiny fields only.
pub fn is_poly_free_brute_force(
    field: &ExtensionField,
    w: &FieldElement,
    d: &FqPolynomial,
) -> Result<bool> {
    check_xn1_divisor(field, d)?;
    let all: Vec<FieldElement> = field.elements().collect();
    for h in field.xn_minus_one_divisors() {
        if h.is_one() || !h.divides(d)? {
            continue;
        }
        if all
            .iter()
            .any(|b| apply_with_conjugates(field, h, &field.conjugates(b)) == *w)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `w` is primitive and `w^2` has `F_q`-order `x^n - 1` (`k = 0`) or
/// `(x^n - 1)/(x - 1)` (`k = 1`).
pub fn indicator_2primitive_knormal(
    field: &ExtensionField,
    w: &FieldElement,
    k: usize,
) -> Result<bool> {
    if !field.prime_power().is_odd() {
        return Err(Error::PreconditionViolated("q must be odd".into()));
    }
    let target = match k {
        0 => FqPolynomial::x_pow_minus_one(field.base(), field.n()),
        1 => one_normal_order(field),
        _ => {
            return Err(Error::PreconditionViolated(format!(
                "k must be 0 or 1, got {k}"
            )))
        }
    };
    if !field.is_primitive(w)? {
        return Ok(false);
    }
    Ok(fq_order(field, &field.square(w)) == target)
}

/// Evaluates the trace decomposition of the 1-normal condition: with `n = p^k u` and
/// `T = (x^u - 1)/(x - 1)`, `w` is `T`-free and `Tr_{q^n/q^{p^k}}(w)` has `F_q`-order
/// `(x^{p^k} - 1)/(x - 1)`.
pub fn decompose_1normal_check(field: &ExtensionField, w: &FieldElement) -> Result<bool> {
    let base = field.base();
    let (k, u) = field.prime_power().split_degree(field.n() as u64);
    let pk = (field.n() as u64 / u) as usize;
    debug_assert_eq!(field.p().pow(k), pk as u64);
    let x_minus_one = FqPolynomial::x_pow_minus_one(base, 1);
    let t_poly = FqPolynomial::x_pow_minus_one(base, u as usize).exact_div(&x_minus_one)?;
    if !is_poly_free(field, w, &t_poly)? {
        return Ok(false);
    }
    let beta = field.trace(w, pk)?;
    let target = FqPolynomial::x_pow_minus_one(base, pk).exact_div(&x_minus_one)?;
    Ok(fq_order(field, &beta) == target)
}

/// For `n = p^2 s`: whether `Tr_{q^n/q^{ps}}(w)` has `F_q`-order `(x^{ps} - 1)/(x - 1)`.
pub fn p2_trace_reduction_check(field: &ExtensionField, w: &FieldElement) -> Result<bool> {
    let p = field.p() as usize;
    let n = field.n();
    if !n.is_multiple_of(p * p) {
        return Err(Error::PreconditionViolated(format!(
            "p^2 = {} must divide n = {n}",
            p * p
        )));
    }
    let m = n / p;
    let base = field.base();
    let beta = field.trace(w, m)?;
    let target = FqPolynomial::x_pow_minus_one(base, m)
        .exact_div(&FqPolynomial::x_pow_minus_one(base, 1))?;
    Ok(fq_order(field, &beta) == target)
}

fn check_exhaustive_cap(field: &ExtensionField, cap: u64) -> Result<()> {
    if field.size() > cap {
        return Err(Error::CapExceeded(format!(
            "exhaustive scan of {} elements exceeds cap {cap}",
            field.size()
        )));
    }
    Ok(())
}

/// Validates the `(f, m, β)` triple used by [`count_n`].
fn check_count_inputs(
    field: &ExtensionField,
    f: &FqPolynomial,
    m: usize,
    beta: &FieldElement,
) -> Result<()> {
    if **f.field() != **field.base() {
        return Err(Error::FieldMismatch);
    }
    let (_, u) = field.prime_power().split_degree(field.n() as u64);
    let xu1 = FqPolynomial::x_pow_minus_one(field.base(), u as usize);
    if !f.is_monic() || !f.divides(&xu1)? {
        return Err(Error::PreconditionViolated(format!(
            "{f} must be a monic divisor of x^u - 1"
        )));
    }
    if FqPolynomial::x_pow_minus_one(field.base(), 1).divides(f)? {
        return Err(Error::PreconditionViolated(format!("x - 1 divides {f}")));
    }
    if !field.is_in_subfield(beta, m)? {
        return Err(Error::PreconditionViolated(format!(
            "β does not lie in F_{{q^{m}}}"
        )));
    }
    Ok(())
}

/// Number of primitive `w` with `w^2` `f`-free and `Tr_{q^n/q^m}(w^2) = β`, by enumeration.
pub fn count_n(
    field: &ExtensionField,
    f: &FqPolynomial,
    m: usize,
    beta: &FieldElement,
    cap: u64,
) -> Result<u64> {
    check_count_inputs(field, f, m, beta)?;
    check_exhaustive_cap(field, cap)?;
    let order = field.order();
    let g = field.generator()?.clone();
    let cofactor_check = |w2: &FieldElement| -> Result<bool> {
        if f.is_one() {
            return Ok(true);
        }
        let cofactor = FqPolynomial::x_pow_minus_one(field.base(), field.n())
            .exact_div(&fq_order(field, w2))?;
        Ok(f.gcd(&cofactor)?.is_one())
    };
    let mut count = 0;
    let mut w = field.one();
    for j in 1..order {
        w = field.mul(&w, &g);
        if j.gcd(&order) != 1 {
            continue;
        }
        let w2 = field.square(&w);
        if field.trace(&w2, m)? == *beta && cofactor_check(&w2)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Right side of the counting inequality,
/// `θ(q^n-1) Θ(f) (q^{n-m} - 2 q^{n/2} W(q^n-1) W(f))`, together with whether the
/// hypotheses on `(f, m)` under which it bounds [`count_n`] hold (`m < n`, and `m` a
/// power of `p` when `f != 1`).
pub fn count_n_lower_bound(
    field: &ExtensionField,
    f: &FqPolynomial,
    m: usize,
) -> Result<(f64, bool)> {
    let fact = field.order_factorization()?;
    let theta = crate::intarith::rational_to_f64(&theta_of(fact));
    let q = field.q() as f64;
    let n = field.n() as f64;
    let f_fact = if f.is_one() { None } else { Some(f.factor()?) };
    let (big_theta, w_f) = match &f_fact {
        None => (1.0, 1.0),
        Some(ff) => {
            let phi = crate::fqpoly::poly_phi(f)?;
            let deg = f.degree().unwrap() as i32;
            (
                crate::intarith::ln_big(&phi).exp() / q.powi(deg),
                2f64.powi(ff.distinct_factors() as i32),
            )
        }
    };
    let w_order = crate::intarith::ln_big(&big_w_int(fact)).exp();
    let rhs = theta * big_theta * (q.powf(n - m as f64) - 2.0 * q.powf(n / 2.0) * w_order * w_f);
    let m_power_of_p = {
        let mut r = m as u64;
        while r.is_multiple_of(field.p()) {
            r /= field.p();
        }
        r == 1
    };
    let hypotheses = m < field.n() && (f.is_one() || m_power_of_p);
    Ok((rhs, hypotheses))
}

/// Number of elements for each `F_q`-order, by enumeration.
pub fn fq_order_census(field: &ExtensionField, cap: u64) -> Result<BTreeMap<FqPolynomial, u64>> {
    check_exhaustive_cap(field, cap)?;
    let mut census = BTreeMap::new();
    for w in field.elements() {
        *census.entry(fq_order(field, &w)).or_insert(0) += 1;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;
    use crate::fqpoly::poly_phi;

    fn poly(field: &ExtensionField, c: &[i64]) -> FqPolynomial {
        FqPolynomial::from_ints(field.base(), c)
    }

    #[test]
    fn q_associates() {
        let f = build_field(3, 1, 4).unwrap();
        let xn1 = FqPolynomial::x_pow_minus_one(f.base(), 4);
        let one = FqPolynomial::one(f.base());
        let a = poly(&f, &[1, 2, 0, 1]);
        let b = poly(&f, &[2, 1]);
        for w in f.elements().step_by(7) {
            assert!(q_associate_apply(&f, &xn1, &w).unwrap().is_zero());
            assert_eq!(q_associate_apply(&f, &one, &w).unwrap(), w);
            let inner = q_associate_apply(&f, &b, &w).unwrap();
            assert_eq!(
                q_associate_apply(&f, &a.mul(&b).unwrap(), &w).unwrap(),
                q_associate_apply(&f, &a, &inner).unwrap()
            );
        }
        let other = build_field(5, 1, 2).unwrap();
        assert_eq!(
            q_associate_apply(&f, &FqPolynomial::one(other.base()), &f.one()),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn fq_order_examples() {
        let f = build_field(5, 1, 3).unwrap();
        assert!(fq_order(&f, &f.zero()).is_one());
        assert_eq!(fq_order(&f, &f.from_base_elem(3)), poly(&f, &[-1, 1]));
        let normal = f.elements().find(|w| f.normality_defect(w) == 0).unwrap();
        assert_eq!(
            fq_order(&f, &normal),
            FqPolynomial::x_pow_minus_one(f.base(), 3)
        );
    }

    #[test]
    fn gcd_criterion_on_f9() {
        let f = build_field(3, 1, 2).unwrap();
        assert_eq!(k_normality_gcd(&f, &f.zero()), 2);
        assert_eq!(k_normality_gcd(&f, &f.one()), 1);
        for w in f.elements() {
            let k = f.n() - fq_order(&f, &w).degree().unwrap();
            assert_eq!(k_normality_gcd(&f, &w), k);
            assert_eq!(f.normality_defect(&w), k);
        }
    }

    #[test]
    fn census_on_f27() {
        let f = build_field(3, 1, 3).unwrap();
        let census = fq_order_census(&f, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert_eq!(census.len(), f.xn_minus_one_divisors().len());
        for (g, count) in census {
            assert_eq!(poly_phi(&g).unwrap(), (count as u32).into());
        }
    }

    #[test]
    fn t_freeness() {
        let f = build_field(3, 1, 2).unwrap();
        let g = f.generator().unwrap().clone();
        assert!(is_t_free(&f, &g, 8).unwrap());
        assert!(!is_t_free(&f, &f.square(&g), 2).unwrap());
        for w in f.elements().skip(1) {
            assert!(is_t_free(&f, &w, 1).unwrap());
            for t in [2, 4, 8] {
                assert_eq!(
                    is_t_free(&f, &w, t).unwrap(),
                    is_t_free_brute_force(&f, &w, t).unwrap()
                );
            }
        }
        assert!(matches!(is_t_free(&f, &g, 3), Err(Error::NotADivisor(_))));
        assert_eq!(is_t_free(&f, &f.zero(), 2), Err(Error::ZeroElement));
    }

    #[test]
    fn polynomial_freeness() {
        let f = build_field(3, 1, 2).unwrap();
        let xn1 = FqPolynomial::x_pow_minus_one(f.base(), 2);
        let one = FqPolynomial::one(f.base());
        for w in f.elements() {
            assert!(is_poly_free(&f, &w, &one).unwrap());
            assert_eq!(
                is_poly_free(&f, &w, &xn1).unwrap(),
                f.normality_defect(&w) == 0
            );
            for d in f.xn_minus_one_divisors() {
                assert_eq!(
                    is_poly_free(&f, &w, d).unwrap(),
                    is_poly_free_brute_force(&f, &w, d).unwrap()
                );
            }
        }
        // m_w = (x^n - 1)/(x - 1) leaves x + 1 free for even n.
        let f = build_field(5, 1, 4).unwrap();
        let target = one_normal_order(&f);
        let w = f.elements().find(|w| fq_order(&f, w) == target).unwrap();
        assert!(is_poly_free(&f, &w, &poly(&f, &[1, 1])).unwrap());
        assert!(matches!(
            is_poly_free(&f, &w, &poly(&f, &[1, 0, 0, 1])),
            Err(Error::NotADivisor(_))
        ));
    }

    #[test]
    fn square_indicators_small_fields() {
        let f9 = build_field(3, 1, 2).unwrap();
        for w in f9.elements().skip(1) {
            let prim = f9.is_primitive(&w).unwrap();
            assert_eq!(indicator_2primitive_knormal(&f9, &w, 1).unwrap(), prim);
            assert!(!indicator_2primitive_knormal(&f9, &w, 0).unwrap());
        }
        let f81 = build_field(3, 1, 4).unwrap();
        assert!(f81
            .elements()
            .skip(1)
            .all(|w| !indicator_2primitive_knormal(&f81, &w, 0).unwrap()));
    }

    #[test]
    fn decomposition_on_small_field() {
        let f = build_field(3, 1, 3).unwrap();
        let target = one_normal_order(&f);
        for w in f.elements() {
            assert_eq!(
                decompose_1normal_check(&f, &w).unwrap(),
                fq_order(&f, &w) == target
            );
        }
        // p ∤ n: T-freeness plus vanishing trace.
        let f = build_field(5, 1, 2).unwrap();
        let target = one_normal_order(&f);
        for w in f.elements() {
            assert_eq!(
                decompose_1normal_check(&f, &w).unwrap(),
                fq_order(&f, &w) == target
            );
        }
    }

    #[test]
    fn count_partitions_primitive_elements() {
        let f = build_field(5, 1, 3).unwrap();
        let one = FqPolynomial::one(f.base());
        let total: u64 = (0..5)
            .map(|b| count_n(&f, &one, 1, &f.from_base_elem(b), DEFAULT_EXHAUSTIVE_CAP).unwrap())
            .sum();
        let phi = crate::intarith::euler_phi(f.order_factorization().unwrap());
        assert_eq!(phi, total.into());
        assert!(matches!(
            count_n(
                &f,
                &poly(&f, &[-1, 1]),
                1,
                &f.zero(),
                DEFAULT_EXHAUSTIVE_CAP
            ),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            count_n(&f, &one, 1, &f.x(), DEFAULT_EXHAUSTIVE_CAP),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            count_n(&f, &one, 1, &f.zero(), 10),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn two_normal_cubic_orders_divide_square_of_q_minus_one() {
        let f = build_field(3, 1, 3).unwrap();
        for w in f.elements().skip(1) {
            if f.normality_defect(&w) == 2 {
                assert_eq!(4 % f.mult_order(&w).unwrap(), 0);
            }
        }
    }
}
