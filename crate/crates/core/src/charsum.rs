//! Complex characters of `F_{q^n}` and numerical checks of character-sum identities.
//!
//! Everything here enumerates the field, so [`CharacterTables`] refuses fields above a
//! cap. Phases are reduced as exact integer residues before any floating-point step.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{ExtensionField, FieldElement};
use crate::fqpoly::{mobius_of, poly_phi_of, FqPolynomial};
use crate::intarith::{euler_phi_u64, mobius_u64, rational_to_f64, theta_of};
use crate::structure::{is_poly_free, is_t_free};

/// Default cap on `q^n` for character computations.
pub const DEFAULT_CHAR_CAP: u64 = 1_000_000;
/// Tolerance for comparing character sums with exact integers.
pub const CHAR_TOLERANCE: f64 = 1e-6;

/// The multiplicative character `g^j ↦ exp(2πi · index · j / order)` for the canonical
/// generator `g`; `gcd(index, order) = 1`, so it has exact order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultCharacter {
    pub order: u64,
    pub index: u64,
}

impl MultCharacter {
    pub fn trivial() -> Self {
        Self { order: 1, index: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

/// The additive character `w ↦ exp(2πi · Tr_{q^n/p}(δ w) / p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddCharacter {
    pub delta: FieldElement,
}

/// Discrete logarithms, absolute traces and roots of unity for one field.
pub struct CharacterTables<'a> {
    field: &'a ExtensionField,
    order: u64,
    /// `exp[j]` is the index of `g^j`.
    exp: Vec<u64>,
    /// `log[k]` is the discrete logarithm of the element with index `k > 0`.
    log: Vec<u64>,
    /// Absolute trace of the element with index `k`.
    abs_trace: Vec<u32>,
    roots_p: Vec<Complex64>,
    delta_classes: OnceLock<BTreeMap<FqPolynomial, Vec<u64>>>,
}

fn unit_root(k: u64, d: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % d) as f64 / d as f64)
}

impl<'a> CharacterTables<'a> {
    pub fn new(field: &'a ExtensionField, cap: u64) -> Result<Self> {
        if field.size() > cap {
            return Err(Error::CapExceeded(format!(
                "character tables for {} elements exceed cap {cap}",
                field.size()
            )));
        }
        let order = field.order();
        let g = field.generator()?.clone();
        let size = field.size() as usize;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u64; size];
        let mut acc = field.one();
        for j in 0..order {
            let k = field.index(&acc);
            exp.push(k);
            log[k as usize] = j;
            acc = field.mul(&acc, &g);
        }
        let abs_trace = field.elements().map(|w| field.absolute_trace(&w)).collect();
        let p = field.p();
        let roots_p = (0..p).map(|k| unit_root(k, p)).collect();
        Ok(Self {
            field,
            order,
            exp,
            log,
            abs_trace,
            roots_p,
            delta_classes: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &ExtensionField {
        self.field
    }

    /// All characters of exact order `d`.
    pub fn characters_of_order(&self, d: u64) -> Result<Vec<MultCharacter>> {
        if d == 0 || !self.order.is_multiple_of(d) {
            return Err(Error::NotADivisor(format!(
                "{d} does not divide q^n - 1 = {}",
                self.order
            )));
        }
        Ok((0..d)
            .filter(|a| a.gcd(&d) == 1)
            .map(|index| MultCharacter { order: d, index })
            .collect())
    }

    fn log_of(&self, w: &FieldElement) -> Option<u64> {
        let k = self.field.index(w);
        (k != 0).then(|| self.log[k as usize])
    }

    fn eta_at_log(eta: MultCharacter, j: u64) -> Complex64 {
        let k = (eta.index as u128 * (j % eta.order) as u128 % eta.order as u128) as u64;
        unit_root(k, eta.order)
    }

    pub fn eval_mult_char(&self, eta: MultCharacter, w: &FieldElement) -> Complex64 {
        match self.log_of(w) {
            Some(j) => Self::eta_at_log(eta, j),
            None if eta.is_trivial() => Complex64::new(1.0, 0.0),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ_δ` at the element with index `k`.
    fn chi_at_index(&self, delta_log: Option<u64>, k: u64) -> Complex64 {
        match delta_log {
            None => Complex64::new(1.0, 0.0),
            Some(_) if k == 0 => Complex64::new(1.0, 0.0),
            Some(ld) => {
                let prod = self.exp[((ld + self.log[k as usize]) % self.order) as usize];
                self.roots_p[self.abs_trace[prod as usize] as usize]
            }
        }
    }

    pub fn eval_add_char(&self, chi: &AddCharacter, w: &FieldElement) -> Complex64 {
        self.chi_at_index(self.log_of(&chi.delta), self.field.index(w))
    }

    /// `G_2(η, χ_δ) = Σ_w η(w) χ_δ(w^2)`, with `η_1(0) = 1`.
    pub fn gauss_sum_g2(&self, eta: MultCharacter, chi: &AddCharacter) -> Complex64 {
        self.g2_with_delta_log(eta, self.log_of(&chi.delta))
    }

    fn g2_with_delta_log(&self, eta: MultCharacter, delta_log: Option<u64>) -> Complex64 {
        let mut sum = if eta.is_trivial() {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for j in 0..self.order {
            let sq = self.exp[((2 * j) % self.order) as usize];
            sum += Self::eta_at_log(eta, j) * self.chi_at_index(delta_log, sq);
        }
        sum
    }

    /// Classes `Δ_E`: for each monic `E | x^n - 1`, the indices of the `δ` for which
    /// `χ_δ(E ∘ ·)` is trivial and `E` is minimal with this property.
    pub fn delta_classes(&self) -> &BTreeMap<FqPolynomial, Vec<u64>> {
        self.delta_classes.get_or_init(|| self.classify_deltas())
    }

    fn classify_deltas(&self) -> BTreeMap<FqPolynomial, Vec<u64>> {
        let field = self.field;
        let base = field.base();
        let p = field.p() as u32;
        // F_p-basis of F_{q^n}: p^j in coordinate i.
        let basis: Vec<FieldElement> = (0..field.n())
            .flat_map(|i| {
                (0..base.t()).map(move |j| {
                    let mut coords = vec![0u32; field.n()];
                    coords[i] = p.pow(j);
                    coords
                })
            })
            .map(|c| field.from_coords(c).expect("valid basis coordinates"))
            .collect();
        let images: Vec<(FqPolynomial, Vec<FieldElement>)> = field
            .xn_minus_one_divisors()
            .iter()
            .map(|e| {
                let imgs = basis
                    .iter()
                    .map(|b| crate::structure::q_associate_apply(field, e, b).expect("same base"))
                    .collect();
                (e.clone(), imgs)
            })
            .collect();
        let mut classes: BTreeMap<FqPolynomial, Vec<u64>> = BTreeMap::new();
        for (k, delta) in field.elements().enumerate() {
            let (e, _) = images
                .iter()
                .find(|(_, imgs)| {
                    imgs.iter()
                        .all(|img| field.absolute_trace(&field.mul(&delta, img)) == 0)
                })
                .expect("x^n - 1 kills every character");
            classes.entry(e.clone()).or_default().push(k as u64);
        }
        classes
    }

    /// `ω_t(w) = θ(t) Σ_{d | t} μ(d)/φ(d) Σ_{ord η = d} η(w)`.
    pub fn omega_t(&self, t: u64, w: &FieldElement) -> Result<Complex64> {
        let theta = euler_phi_u64(t) as f64 / t as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for d in crate::intarith::divisors_u64(t) {
            let mu = mobius_u64(d);
            if mu == 0 {
                continue;
            }
            let inner: Complex64 = self
                .characters_of_order(d)?
                .into_iter()
                .map(|eta| self.eval_mult_char(eta, w))
                .sum();
            acc += inner * (mu as f64 / euler_phi_u64(d) as f64);
        }
        Ok(acc * theta)
    }

    /// `Ω_D(w) = Θ(D) Σ_{E | D} μ_q(E)/Φ(E) Σ_{δ ∈ Δ_E} χ_δ(w)`.
    pub fn big_omega_d(&self, d: &FqPolynomial, w: &FieldElement) -> Result<Complex64> {
        let q = self.field.q();
        let d_fact = d.factor()?;
        let big_theta = ratio_to_power(&poly_phi_of(&d_fact, q), q, d.degree().unwrap_or(0));
        let k = self.field.index(w);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, deltas) in self.delta_classes() {
            if !e.divides(d)? {
                continue;
            }
            let e_fact = e.factor()?;
            let mu = mobius_of(&e_fact);
            if mu == 0 {
                continue;
            }
            let phi = crate::intarith::ln_big(&poly_phi_of(&e_fact, q)).exp();
            let inner: Complex64 = deltas
                .iter()
                .map(|&dk| self.chi_at_index((dk != 0).then(|| self.log[dk as usize]), k))
                .sum();
            acc += inner * (mu as f64 / phi);
        }
        Ok(acc * big_theta)
    }

    /// Elements of `F_{q^m}` inside `F_{q^n}`, as indices.
    fn subfield_indices(&self, m: usize) -> Result<Vec<u64>> {
        let field = self.field;
        let mut out = Vec::new();
        for (k, w) in field.elements().enumerate() {
            if field.is_in_subfield(&w, m)? {
                out.push(k as u64);
            }
        }
        Ok(out)
    }

    /// `T_{m,β}(w) = q^{-m} Σ_{d ∈ F_{q^m}} χ_d(w) χ_d(α)^{-1}` with `Tr_{q^n/q^m}(α) = β`.
    pub fn trace_indicator(
        &self,
        m: usize,
        beta: &FieldElement,
        w: &FieldElement,
    ) -> Result<Complex64> {
        let sub = self.subfield_indices(m)?;
        let alpha = self.trace_preimage(m, beta)?;
        let (kw, ka) = (self.field.index(w), self.field.index(&alpha));
        let sum: Complex64 = sub
            .iter()
            .map(|&d| {
                let dl = (d != 0).then(|| self.log[d as usize]);
                self.chi_at_index(dl, kw) * self.chi_at_index(dl, ka).conj()
            })
            .sum();
        Ok(sum / sub.len() as f64)
    }

    fn trace_preimage(&self, m: usize, beta: &FieldElement) -> Result<FieldElement> {
        let field = self.field;
        if !field.is_in_subfield(beta, m)? {
            return Err(Error::PreconditionViolated(format!(
                "β does not lie in F_{{q^{m}}}"
            )));
        }
        for w in field.elements() {
            if field.trace(&w, m)? == *beta {
                return Ok(w);
            }
        }
        unreachable!("the trace is surjective")
    }
}

fn ratio_to_power(num: &num_bigint::BigUint, q: u64, deg: usize) -> f64 {
    (crate::intarith::ln_big(num) - deg as f64 * (q as f64).ln()).exp()
}

/// Largest deviation found by a cross-check, and whether it is within tolerance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CrossCheck {
    pub max_error: f64,
    pub passed: bool,
}

impl CrossCheck {
    fn from_error(max_error: f64) -> Self {
        Self {
            max_error,
            passed: max_error <= CHAR_TOLERANCE,
        }
    }
}

fn indicator_error(value: Complex64, expected: bool) -> f64 {
    (value - Complex64::new(if expected { 1.0 } else { 0.0 }, 0.0)).norm()
}

/// Compares `ω_t` and `Ω_D` with the freeness predicates at every element.
pub fn char_indicator_cross_check(
    tables: &CharacterTables,
    t: u64,
    d: &FqPolynomial,
) -> Result<CrossCheck> {
    let field = tables.field();
    let mut max_error: f64 = 0.0;
    for w in field.elements() {
        if !w.is_zero() {
            let value = tables.omega_t(t, &w)?;
            max_error = max_error.max(indicator_error(value, is_t_free(field, &w, t)?));
        }
        let value = tables.big_omega_d(d, &w)?;
        max_error = max_error.max(indicator_error(value, is_poly_free(field, &w, d)?));
    }
    Ok(CrossCheck::from_error(max_error))
}

/// Compares the character form of `T_{m,β}` with the trace test at every element.
pub fn trace_indicator_cross_check(
    tables: &CharacterTables,
    m: usize,
    beta: &FieldElement,
) -> Result<CrossCheck> {
    let field = tables.field();
    let mut max_error: f64 = 0.0;
    for w in field.elements() {
        let value = tables.trace_indicator(m, beta, &w)?;
        let expected = field.trace(&w, m)? == *beta;
        max_error = max_error.max(indicator_error(value, expected));
    }
    Ok(CrossCheck::from_error(max_error))
}

/// Character-sum evaluations of the count of primitive `w` with `w^2` `f`-free and
/// `Tr_{q^n/q^m}(w^2) = β`.
#[derive(Debug, Clone, Serialize)]
pub struct CountExpansion {
    /// Enumerated count.
    pub count: u64,
    /// `Σ_w ω(w) Ω_f(w^2) T_{m,β}(w^2)` over all of `F_{q^n}`, expanded into `G_2` sums.
    pub full_expansion: f64,
    /// The expansion minus the contribution of `w = 0`; equals `count`.
    pub corrected_expansion: f64,
    /// The reduced form keeping only `q^n`, the `(d != 1, D != 1)` terms and the
    /// `(d != 1, D = 1, c != 0)` terms.
    pub reduced_expression: f64,
    /// Imaginary part left over in the full expansion.
    pub imaginary_residue: f64,
}

/// Evaluates [`CountExpansion`] for one `(f, m, β)`.
pub fn count_n_expansion(
    tables: &CharacterTables,
    f: &FqPolynomial,
    m: usize,
    beta: &FieldElement,
) -> Result<CountExpansion> {
    let field = tables.field();
    let count = crate::structure::count_n(field, f, m, beta, u64::MAX)?;
    let q = field.q();
    let order = field.order();
    let theta = rational_to_f64(&theta_of(field.order_factorization()?));
    let f_fact = f.factor()?;
    let big_theta = ratio_to_power(&poly_phi_of(&f_fact, q), q, f.degree().unwrap_or(0));
    let alpha = tables.trace_preimage(m, beta)?;
    let alpha_index = field.index(&alpha);
    let sub = tables.subfield_indices(m)?;
    let qm = sub.len() as f64;

    // (log of δ or None for 0, F_q-order class) for each δ ∈ Δ_D with D | f.
    let mut deltas: Vec<(FieldElement, i32, f64, bool)> = Vec::new();
    for (e, members) in tables.delta_classes() {
        if !e.divides(f)? {
            continue;
        }
        let e_fact = e.factor()?;
        let mu = mobius_of(&e_fact);
        if mu == 0 {
            continue;
        }
        let phi = crate::intarith::ln_big(&poly_phi_of(&e_fact, q)).exp();
        for &k in members {
            deltas.push((field.from_index(k), mu, phi, e.is_one()));
        }
    }

    let mut full = Complex64::new(0.0, 0.0);
    let mut reduced = Complex64::new(field.size() as f64, 0.0);
    for &c in &sub {
        let c_elem = field.from_index(c);
        let c_log = (c != 0).then(|| tables.log[c as usize]);
        let a_c = tables.chi_at_index(c_log, alpha_index).conj();
        for d in crate::intarith::divisors_u64(order) {
            let mu_d = mobius_u64(d);
            if mu_d == 0 {
                continue;
            }
            let weight_d = mu_d as f64 / euler_phi_u64(d) as f64;
            for eta in tables.characters_of_order(d)? {
                for (delta, mu_e, phi_e, e_trivial) in &deltas {
                    let shift = field.add(delta, &c_elem);
                    let g2 = tables.gauss_sum_g2(eta, &AddCharacter { delta: shift });
                    let term = a_c * g2 * (weight_d * *mu_e as f64 / phi_e);
                    full += term;
                    let keep = d != 1 && (!e_trivial || c != 0);
                    if keep {
                        reduced += term;
                    }
                }
            }
        }
    }
    let scale = theta * big_theta / qm;
    let full = full * scale;
    let reduced = reduced * scale;
    // The w = 0 term: ω(0) = θ, Ω_f(0) = [f = 1], T_{m,β}(0) = [β = 0].
    let zero_term = if f.is_one() && beta.is_zero() {
        theta
    } else {
        0.0
    };
    Ok(CountExpansion {
        count,
        full_expansion: full.re,
        corrected_expansion: full.re - zero_term,
        reduced_expression: reduced.re,
        imaginary_residue: full.im,
    })
}

/// One family of identity checks with its worst deviation.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub passed: bool,
}

/// Every character identity for one field.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub q: u64,
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

fn identity_check(name: &str, cases: usize, max_error: f64) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        cases,
        max_error,
        passed: max_error <= CHAR_TOLERANCE,
    }
}

/// Runs the indicator cross-checks over every `(t, D)` with `t | q^n - 1` and
/// `D | x^n - 1`, every `(m, β)` with `m | n` and `β ∈ F_{q^m}`, the class sizes
/// `|Δ_D| = Φ(D)`, and the `G_2` values: `G_2(η_1, χ_0) = q^n` and
/// `|G_2(η, χ)| <= 2 q^{n/2}` for every other pair.
pub fn verify_identities(tables: &CharacterTables) -> Result<IdentityReport> {
    let field = tables.field();
    let n = field.n();
    let order = field.order();
    let mut checks = Vec::new();

    let ts = crate::intarith::divisors_u64(order);
    let ds = field.xn_minus_one_divisors();
    let mut err: f64 = 0.0;
    for &t in &ts {
        for d in ds {
            err = err.max(char_indicator_cross_check(tables, t, d)?.max_error);
        }
    }
    checks.push(identity_check(
        "freeness indicators",
        ts.len() * ds.len(),
        err,
    ));

    let mut err: f64 = 0.0;
    let mut cases = 0;
    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        for beta in field.elements() {
            if field.is_in_subfield(&beta, m)? {
                err = err.max(trace_indicator_cross_check(tables, m, &beta)?.max_error);
                cases += 1;
            }
        }
    }
    checks.push(identity_check("trace indicators", cases, err));

    let q = field.q();
    let mut err: f64 = 0.0;
    for d in ds {
        let size = tables.delta_classes().get(d).map_or(0, Vec::len) as f64;
        let phi = crate::intarith::ln_big(&poly_phi_of(&d.factor()?, q)).exp();
        err = err.max((size - phi).abs());
    }
    checks.push(identity_check("class sizes", ds.len(), err));

    let qn = field.size() as f64;
    let bound = 2.0 * qn.sqrt();
    let trivial = tables.g2_with_delta_log(MultCharacter::trivial(), None);
    checks.push(identity_check(
        "G2 trivial pair",
        1,
        (trivial - Complex64::new(qn, 0.0)).norm(),
    ));
    let mut excess: f64 = 0.0;
    let mut cases = 0;
    for &d in &ts {
        for eta in tables.characters_of_order(d)? {
            for k in 0..field.size() {
                if eta.is_trivial() && k == 0 {
                    continue;
                }
                let dl = (k != 0).then(|| tables.log[k as usize]);
                excess = excess.max(tables.g2_with_delta_log(eta, dl).norm() - bound);
                cases += 1;
            }
        }
    }
    checks.push(identity_check("G2 bound", cases, excess.max(0.0)));

    let passed = checks.iter().all(|c| c.passed);
    Ok(IdentityReport {
        q,
        n,
        checks,
        passed,
    })
}
