//! Multiplicative characters, incomplete character sums over a subfield,
//! the hypothesis check for the `(mD - 1) sqrt(q)` bound, and the
//! character-sum indicators for r-free and primitive elements.
//!
//! Character values are double-precision complex numbers. A character of
//! `F_Q` is `chi_j(g^l) = exp(2 pi i j l / (Q - 1))` for the field's fixed
//! generator `g`, with `chi_j(0) = 0`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement, FieldOptions};
use crate::nt;
use crate::poly::{self, Polynomial};

/// Polynomials above this degree get an `Unknown` applicability verdict.
pub const MAX_APPLICABILITY_DEGREE: usize = 64;

#[derive(Clone, Copy)]
pub struct Character<'f> {
    field: &'f Field,
    index: u64,
}

impl<'f> Character<'f> {
    /// `chi_index`; needs the field's discrete-log table.
    pub fn new(field: &'f Field, index: u64) -> Result<Self> {
        if !field.has_log_table() {
            return Err(Error::MissingLogTable(field.label()));
        }
        let n = field.order() - 1;
        if index >= n.max(1) {
            return Err(Error::InvalidArgument(format!(
                "character index {index} out of range [0, {n})"
            )));
        }
        Ok(Character { field, index })
    }

    pub fn trivial(field: &'f Field) -> Result<Self> {
        Character::new(field, 0)
    }

    /// The quadratic character (odd characteristic only).
    pub fn quadratic(field: &'f Field) -> Result<Self> {
        let n = field.order() - 1;
        if n % 2 != 0 {
            return Err(Error::InvalidArgument(
                "no quadratic character in characteristic 2".into(),
            ));
        }
        Character::new(field, n / 2)
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    fn modulus(&self) -> u64 {
        self.field.order() - 1
    }

    /// `(Q - 1) / gcd(index, Q - 1)`.
    pub fn order(&self) -> u64 {
        let n = self.modulus();
        n / self.index.gcd(&n)
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// `chi^t`.
    pub fn pow(&self, t: u64) -> Self {
        let n = self.modulus();
        Character {
            field: self.field,
            index: (self.index as u128 * t as u128 % n as u128) as u64,
        }
    }

    /// `index * log(beta) mod (Q - 1)`, the exponent of the root of unity.
    fn phase(&self, beta: FieldElement<'f>) -> Option<u64> {
        let n = self.modulus() as u128;
        beta.discrete_log()
            .ok()
            .map(|l| (l as u128 * self.index as u128 % n) as u64)
    }

    pub fn eval(&self, beta: FieldElement<'f>) -> Complex64 {
        assert!(beta.field().same_as(self.field), "character of a different field");
        match self.phase(beta) {
            None => Complex64::new(0.0, 0.0),
            Some(0) => Complex64::new(1.0, 0.0),
            Some(k) => Complex64::from_polar(1.0, TAU * k as f64 / self.modulus() as f64),
        }
    }

    /// Is `chi(beta) = 1` exactly (for nonzero `beta`)?
    pub fn is_one_at(&self, beta: FieldElement<'f>) -> bool {
        self.phase(beta) == Some(0)
    }
}

impl std::fmt::Debug for Character<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "chi_{}(F_{})", self.index, self.field.label())
    }
}

/// All characters of exact order `d`, as indices `j (Q-1)/d` with
/// `gcd(j, d) = 1`, `j` ascending.
pub fn characters_of_order(field: &Field, d: u64) -> Result<Vec<Character<'_>>> {
    let n = field.order() - 1;
    if d == 0 || n % d != 0 {
        return Err(Error::NotADivisor { divisor: d, n });
    }
    let step = n / d;
    (0..d)
        .filter(|j| j.gcd(&d) == 1)
        .map(|j| Character::new(field, j * step))
        .collect()
}

/// Sum `sum_{a in F_q} chi(f(a))` with `a` running over the embedded base
/// field and the hypothesis check for the associated bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharSumResult {
    pub re: f64,
    pub im: f64,
    pub terms: u64,
    pub bound: f64,
    /// `null` when applicability could not be decided.
    pub applicable: Option<bool>,
}

impl CharSumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }
}

pub fn incomplete_char_sum<'s, 'b>(
    chi: &Character<'b>,
    f: &Polynomial<'b>,
    emb: &Embedding<'s, 'b>,
) -> Result<CharSumResult> {
    check_setting(chi, f, emb)?;
    let value: Complex64 = emb.image().map(|a| chi.eval(f.eval(a))).sum();
    let weil = weil_applicability(chi, f, emb)?;
    Ok(CharSumResult {
        re: value.re,
        im: value.im,
        terms: emb.small().order(),
        bound: weil.bound,
        applicable: weil.status.as_option(),
    })
}

fn check_setting(chi: &Character<'_>, f: &Polynomial<'_>, emb: &Embedding<'_, '_>) -> Result<()> {
    if !chi.field().same_as(emb.big()) {
        return Err(Error::MixedFields(chi.field().label(), emb.big().label()));
    }
    if !f.field().same_as(emb.big()) {
        return Err(Error::MixedFields(f.field().label(), emb.big().label()));
    }
    if f.is_constant() && f.is_zero() {
        return Err(Error::ConstantPolynomial);
    }
    Ok(())
}

/// Three-valued outcome of the hypothesis check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Applicable,
    NotApplicable,
    Unknown,
}

impl Applicability {
    pub fn as_option(self) -> Option<bool> {
        match self {
            Applicability::Applicable => Some(true),
            Applicability::NotApplicable => Some(false),
            Applicability::Unknown => None,
        }
    }
}

/// Roots of `f` sharing a multiplicity and the fields they generate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootClass {
    /// Multiplicity `t` of each root in `f`.
    pub multiplicity: u32,
    /// `[F_{q^m}[zeta] : F_q]`.
    pub ext_degree: u64,
    /// `[F_q[zeta] : F_q]`.
    pub base_degree: u64,
    /// Number of roots in the class.
    pub count: usize,
    /// Is `chi^t` non-trivial on `Norm(F_q[zeta]^*)`?
    pub nontrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilApplicability {
    pub status: Applicability,
    /// `[F_{q^m} : F_q]`.
    pub m: u32,
    /// Degree of the radical of `f`.
    pub d: usize,
    /// `(m D - 1) sqrt(q)`.
    pub bound: f64,
    /// A simple root with `F_{q^m}[zeta] = F_q[zeta]` exists and `chi` is
    /// non-trivial.
    pub shortcut: bool,
    pub classes: Vec<RootClass>,
}

/// Decide whether some root `zeta` of `f`, of multiplicity `t`, makes
/// `chi^t` non-trivial on `Norm_{F_{q^m}[zeta]/F_{q^m}}(F_q[zeta]^*)`.
///
/// No extension field is built. Roots are grouped by multiplicity
/// (squarefree decomposition), by degree over `F_{q^m}` (distinct-degree
/// factorization) and by the exact subfield `F_{q^d}` they generate over
/// `F_q` (successive gcds with `x^{q^d} - x`). For a root with
/// `F_q[zeta] = F_{q^d}` and `F_{q^m}[zeta] = F_{q^L}`, the norm image of
/// `F_{q^d}^*` is the subgroup of `F_{q^m}^*` of index
/// `gcd(q^m - 1, (q^L - 1)/(q^d - 1))`, and `chi^t` is trivial on it iff
/// the order of `chi^t` divides that index.
pub fn weil_applicability<'s, 'b>(
    chi: &Character<'b>,
    f: &Polynomial<'b>,
    emb: &Embedding<'s, 'b>,
) -> Result<WeilApplicability> {
    check_setting(chi, f, emb)?;
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let m = emb.degree();
    let q = emb.small().order();
    let d = poly::squarefree_part_degree(f)?;
    let bound = (m as f64 * d as f64 - 1.0) * (q as f64).sqrt();
    let mut result = WeilApplicability {
        status: Applicability::NotApplicable,
        m,
        d,
        bound,
        shortcut: false,
        classes: Vec::new(),
    };
    if f.degree().unwrap_or(0) > MAX_APPLICABILITY_DEGREE {
        result.status = Applicability::Unknown;
        return Ok(result);
    }
    let n_units = emb.big().order() - 1;
    let x = Polynomial::x(f.field());
    for (g, mult) in poly::squarefree_decomposition(f)? {
        let chi_t = chi.pow(mult as u64);
        let chi_t_order = chi_t.order();
        for (j, part) in poly::distinct_degree_factorization(&g)? {
            let ext_degree = m as u64 * j as u64;
            let mut rest = part;
            let divisors = nt::factorize(ext_degree)?.divisors();
            for base_degree in divisors {
                if rest.is_constant() {
                    break;
                }
                // x^{q^base_degree} mod rest
                let mut frob = x.rem(&rest);
                for _ in 0..base_degree {
                    frob = frob.pow_mod(q, &rest);
                }
                let found = (&frob - &x).gcd(&rest);
                if found.is_constant() {
                    continue;
                }
                rest = rest.div_exact(&found);
                let index = norm_image_index(q, m as u64, ext_degree, base_degree, n_units);
                let nontrivial = !chi_t.is_trivial() && index % chi_t_order != 0;
                if mult == 1 && base_degree == ext_degree && !chi.is_trivial() {
                    result.shortcut = true;
                }
                result.classes.push(RootClass {
                    multiplicity: mult,
                    ext_degree,
                    base_degree,
                    count: found.degree().unwrap_or(0),
                    nontrivial,
                });
            }
        }
    }
    if result.classes.iter().any(|c| c.nontrivial) {
        result.status = Applicability::Applicable;
    }
    Ok(result)
}

/// `gcd(q^m - 1, (q^L - 1)/(q^d - 1))` with `d | L`, computed modulo
/// `q^m - 1` via `(q^L - 1)/(q^d - 1) = sum_{i < L/d} q^{d i}`.
fn norm_image_index(q: u64, m: u64, ext_degree: u64, base_degree: u64, n_units: u64) -> u64 {
    debug_assert_eq!(q.pow(m as u32) - 1, n_units);
    let n = n_units as u128;
    let step = (0..base_degree).fold(1u128, |acc, _| acc * q as u128 % n);
    let mut term = 1u128 % n;
    let mut sum = 0u128;
    for _ in 0..ext_degree / base_degree {
        sum = (sum + term) % n;
        term = term * step % n;
    }
    (sum as u64).gcd(&n_units)
}

/// `gcd(r, (Q - 1)/ord(alpha)) = 1`.
pub fn is_r_free(alpha: FieldElement<'_>, r: u64) -> Result<bool> {
    let n = alpha.field().order() - 1;
    if r == 0 || n % r != 0 {
        return Err(Error::NotADivisor { divisor: r, n });
    }
    let ord = alpha.mult_order()?;
    Ok(r.gcd(&(n / ord)) == 1)
}

/// `sum_{d | r} mu(d)/phi(d) sum_{ord(chi) = d} chi(alpha)` by enumerating
/// characters; equals `r/phi(r)` for r-free `alpha` and 0 otherwise.
pub fn r_free_indicator_sum(alpha: FieldElement<'_>, r: u64) -> Result<Complex64> {
    let field = alpha.field();
    let n = field.order() - 1;
    if r == 0 || n % r != 0 {
        return Err(Error::NotADivisor { divisor: r, n });
    }
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    let fr = nt::factorize(r)?;
    indicator_sum(field, alpha, &fr)
}

fn indicator_sum(field: &Field, alpha: FieldElement<'_>, fr: &nt::Factorization) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (d, mu) in fr.squarefree_divisors() {
        let inner: Complex64 = characters_of_order(field, d)?
            .iter()
            .map(|chi| chi.eval(alpha))
            .sum();
        total += inner * (mu as f64 / nt::phi(d)? as f64);
    }
    Ok(total)
}

/// `phi(Q-1)/(Q-1) sum_{d | Q-1} mu(d)/phi(d) sum_{ord(chi) = d} chi(alpha)`,
/// which is 1 for primitive `alpha` and 0 otherwise.
pub fn primitive_indicator(alpha: FieldElement<'_>) -> Result<f64> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = alpha.field();
    let group = field.unit_group();
    if group.n() == 1 {
        return Ok(1.0);
    }
    let s = indicator_sum(field, alpha, group)?;
    Ok(group.phi() as f64 / group.n() as f64 * s.re)
}

/// Sampling plan for [`weil_audit`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilAuditConfig {
    /// Base field sizes, visited round-robin.
    pub qs: Vec<u64>,
    pub m: u32,
    pub max_degree: usize,
    /// Number of applicable instances to collect.
    pub samples: usize,
    pub seed: u64,
}

impl Default for WeilAuditConfig {
    fn default() -> Self {
        WeilAuditConfig {
            qs: vec![101, 103, 121],
            m: 2,
            max_degree: 3,
            samples: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilAuditRow {
    pub q: u64,
    pub m: u32,
    /// `toy` for `x^2 - alpha` with `alpha` a non-square, `random` otherwise.
    pub kind: String,
    /// Coefficient indices, constant term first, space separated.
    pub f: String,
    pub chi: u64,
    pub abs: f64,
    pub bound: f64,
    pub applicable: Option<bool>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilAudit {
    pub rows: Vec<WeilAuditRow>,
    pub applicable: usize,
    /// Applicable rows whose bound is below the trivial bound `q`.
    pub nontrivial: usize,
    pub failures: usize,
}

impl WeilAudit {
    pub fn passes(&self) -> bool {
        self.failures == 0
    }
}

/// Draw random `(f, chi)` pairs with a seeded generator until `samples`
/// instances satisfy the hypothesis, recording every draw. A row fails only
/// when the hypothesis holds and `|sum| > bound + 1e-6`.
pub fn weil_audit(cfg: &WeilAuditConfig, opts: &FieldOptions) -> Result<WeilAudit> {
    if cfg.qs.is_empty() || cfg.m == 0 || cfg.max_degree == 0 {
        return Err(Error::InvalidArgument("empty sampling plan".into()));
    }
    let mut fields = Vec::with_capacity(cfg.qs.len());
    for &q in &cfg.qs {
        let (p, k) = nt::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let p = p as u32;
        let big_degree = k
            .checked_mul(cfg.m)
            .ok_or_else(|| Error::InvalidArgument("extension degree overflows".into()))?;
        fields.push((Field::with_options(p, k, opts)?, Field::with_options(p, big_degree, opts)?));
    }
    let embeddings = fields
        .iter()
        .map(|(s, b)| Embedding::new(s, b))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut audit = WeilAudit {
        rows: Vec::new(),
        applicable: 0,
        nontrivial: 0,
        failures: 0,
    };
    let max_attempts = cfg.samples.saturating_mul(20).max(100);
    for attempt in 0..max_attempts {
        if audit.applicable >= cfg.samples {
            break;
        }
        let emb = &embeddings[attempt % embeddings.len()];
        let big = emb.big();
        let q = emb.small().order();
        let big_q = big.order();
        let toy = cfg.m == 2 && q % 2 == 1 && rng.gen_bool(0.25);
        let f = if toy {
            let alpha = loop {
                let a = big.element(rng.gen_range(1..big_q))?;
                if !a.is_dth_power(2)? {
                    break a;
                }
            };
            Polynomial::new(big, vec![-alpha, big.zero(), big.one()])
        } else {
            let deg = rng.gen_range(1..=cfg.max_degree);
            let mut coeffs = (0..deg)
                .map(|_| big.element(rng.gen_range(0..big_q)))
                .collect::<Result<Vec<_>>>()?;
            coeffs.push(big.element(rng.gen_range(1..big_q))?);
            Polynomial::new(big, coeffs)
        };
        let chi = Character::new(big, rng.gen_range(1..big_q - 1))?;
        let s = incomplete_char_sum(&chi, &f, emb)?;
        let ok = s.applicable != Some(true) || s.abs() <= s.bound + 1e-6;
        if s.applicable == Some(true) {
            audit.applicable += 1;
            if s.bound < q as f64 {
                audit.nontrivial += 1;
            }
        }
        if !ok {
            audit.failures += 1;
        }
        audit.rows.push(WeilAuditRow {
            q,
            m: cfg.m,
            kind: if toy { "toy" } else { "random" }.to_string(),
            f: f.indices().iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
            chi: chi.index(),
            abs: s.abs(),
            bound: s.bound,
            applicable: s.applicable,
            ok,
        });
    }
    Ok(audit)
}
