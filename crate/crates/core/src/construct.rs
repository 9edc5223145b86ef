//! The small-set constructions `S = {alpha - x^t : x in F_q}` inside
//! `F_{q^h}` and their brute-force certification, plus exhaustive
//! reproductions of the earlier square/non-square results.
//!
//! Every public entry point builds its own fields and returns plain data,
//! so reports can be serialized, compared and re-verified later.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsum::{self, Character};
use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldDescriptor, FieldElement, FieldOptions};
use crate::nt;
use crate::poly::{self, Polynomial, PolynomialRecord};

/// Default enumeration budget for [`mn_conjecture_search`].
pub const MN_SEARCH_BUDGET: u64 = 10_000_000;

/// The base field `F_q`, `q = p^k`, and its degree-`h` extension.
pub struct Tower {
    pub base: Field,
    pub big: Field,
}

impl Tower {
    pub fn new(p: u32, k: u32, h: u32, opts: &FieldOptions) -> Result<Tower> {
        if h == 0 || k == 0 {
            return Err(Error::ZeroArgument);
        }
        let kh = k
            .checked_mul(h)
            .ok_or_else(|| Error::InvalidArgument("extension degree overflows".into()))?;
        let big = Field::with_options(p, kh, opts)?;
        let base = Field::with_options(p, k, opts)?;
        Ok(Tower { base, big })
    }

    pub fn embedding(&self) -> Result<Embedding<'_, '_>> {
        Embedding::new(&self.base, &self.big)
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }
}

fn split_prime_power(q: u64) -> Result<(u32, u32)> {
    let (p, k) = nt::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let p = u32::try_from(p).map_err(|_| Error::InvalidArgument(format!("characteristic of {q} too large")))?;
    Ok((p, k))
}

/// `S = {alpha - x^t : x in F_q}` as a sorted, deduplicated list.
pub fn build_set<'b>(
    alpha: FieldElement<'b>,
    t: u64,
    emb: &Embedding<'_, 'b>,
) -> Result<Vec<FieldElement<'b>>> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if !alpha.field().same_as(emb.big()) {
        return Err(Error::MixedFields(alpha.field().label(), emb.big().label()));
    }
    if emb.contains(alpha) {
        return Err(Error::ElementInBaseField);
    }
    let mut s: Vec<FieldElement<'b>> = emb.image().map(|x| alpha - x.pow(t)).collect();
    s.sort();
    s.dedup();
    Ok(s)
}

/// First element of `set` in index order that is not a `d`-th power.
pub fn find_non_dth_power<'f>(set: &[FieldElement<'f>], d: u64) -> Result<Option<FieldElement<'f>>> {
    if set.iter().any(|s| s.is_zero()) {
        return Err(Error::ZeroInSet);
    }
    let mut sorted = set.to_vec();
    sorted.sort();
    for s in sorted {
        if !s.is_dth_power(d)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn find_primitive<'f>(set: &[FieldElement<'f>]) -> Result<Option<FieldElement<'f>>> {
    for &s in set {
        if s.is_primitive()? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub p: u32,
    pub k: u32,
    pub q: u64,
    pub h: u32,
    pub d: u64,
    pub t: u64,
    /// Prime whose power `t` is, when `t` is a prime power.
    pub r: Option<u64>,
    pub alpha: u64,
    /// Multiplicative order of `alpha`.
    pub e: u64,
}

/// The four sufficient conditions on `(h, t, alpha)`:
/// `gcd(t, (q^h-1)/e) = 1`, primes of `t` divide `e`,
/// `q^h = 1 (mod 4)` when `4 | t`, and `t h <= sqrt(q)`.
pub fn theorem_conditions_check(spec: &ConstructionSpec) -> Result<[bool; 4]> {
    let big_q = spec
        .q
        .checked_pow(spec.h)
        .ok_or_else(|| Error::InvalidArgument("q^h overflows".into()))?;
    let [c1, c2, c3] = nt::irreducibility_conditions(spec.t, big_q, spec.e)?;
    let c4 = nt::within_sqrt_bound(spec.t, spec.h as u64, spec.q);
    Ok([c1, c2, c3, c4])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Certificate is a non-`d`-th power.
    NonDthPower,
    /// Certificate is a primitive element.
    Primitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaPolicy {
    /// Smallest-index primitive element outside `F_q`.
    PrimitiveMinimal,
    Given(u64),
}

/// Primitive-element statistics for [`Mode::Primitive`] reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveStats {
    /// Primitive elements in the set `S`.
    pub n_actual: u64,
    /// `#{x in F_q : alpha - x^t primitive}`, the count the character-sum
    /// argument estimates.
    pub n_weighted: u64,
    pub n_lower: f64,
    pub tau_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub mode: Mode,
    pub spec: ConstructionSpec,
    pub base_field: FieldDescriptor,
    pub field: FieldDescriptor,
    pub conditions: [bool; 4],
    /// Condition 4 in the strict form `t h < sqrt(q)`.
    pub condition4_strict: bool,
    /// All sufficient conditions hold, so a certificate must exist.
    pub guaranteed: bool,
    /// `q` odd and `(q^h - 1)/e` odd.
    pub odd_cofactor: bool,
    pub m_of_h: u64,
    /// `gcd(t, q - 1)`.
    pub gcd_t: u64,
    pub set_indices: Vec<u64>,
    pub cardinality: u64,
    pub certificate: Option<u64>,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitive: Option<PrimitiveStats>,
}

/// Inputs to [`construct_pipeline`] and [`primitive_set_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineParams {
    pub p: u32,
    pub k: u32,
    pub h: u32,
    pub d: u64,
    /// Overrides the automatic choice of `t`.
    pub t: Option<u64>,
    pub alpha: AlphaPolicy,
}

impl PipelineParams {
    pub fn new(p: u32, k: u32, h: u32, d: u64) -> Self {
        PipelineParams {
            p,
            k,
            h,
            d,
            t: None,
            alpha: AlphaPolicy::PrimitiveMinimal,
        }
    }
}

fn select_alpha<'b>(policy: AlphaPolicy, emb: &Embedding<'_, 'b>) -> Result<FieldElement<'b>> {
    let big = emb.big();
    match policy {
        AlphaPolicy::PrimitiveMinimal => {
            for a in big.nonzero_elements() {
                if !emb.contains(a) && a.is_primitive()? {
                    return Ok(a);
                }
            }
            Err(Error::Internal("no primitive element outside the base field".into()))
        }
        AlphaPolicy::Given(idx) => {
            let a = big.element(idx)?;
            if emb.contains(a) {
                return Err(Error::ElementInBaseField);
            }
            Ok(a)
        }
    }
}

fn prime_of_power(t: u64) -> Option<u64> {
    let (r, _) = nt::prime_power(t)?;
    Some(r)
}

fn build_report(mode: Mode, params: &PipelineParams, opts: &FieldOptions) -> Result<ConstructionReport> {
    if params.h < 2 {
        return Err(Error::InvalidArgument("h must be at least 2".into()));
    }
    let tower = Tower::new(params.p, params.k, params.h, opts)?;
    let emb = tower.embedding()?;
    let q = tower.q();
    let n_units = tower.big.order() - 1;
    if params.d == 0 || n_units % params.d != 0 {
        return Err(Error::NotADivisor {
            divisor: params.d,
            n: n_units,
        });
    }
    let (r, t) = match params.t {
        Some(0) => return Err(Error::InvalidArgument("t must be at least 1".into())),
        Some(t) => (prime_of_power(t), t),
        None => {
            let c = nt::choose_t(q, params.h as u64)?;
            (c.r, c.t)
        }
    };
    let alpha = select_alpha(params.alpha, &emb)?;
    let e = alpha.mult_order()?;
    let spec = ConstructionSpec {
        p: params.p,
        k: params.k,
        q,
        h: params.h,
        d: params.d,
        t,
        r,
        alpha: alpha.index() as u64,
        e,
    };
    let conditions = theorem_conditions_check(&spec)?;
    let set = build_set(alpha, t, &emb)?;
    let (certificate, primitive) = match mode {
        Mode::NonDthPower => (find_non_dth_power(&set, params.d)?, None),
        Mode::Primitive => {
            let n_actual = set.iter().filter(|s| s.is_primitive().unwrap_or(false)).count() as u64;
            let n_weighted = emb
                .image()
                .filter(|&x| (alpha - x.pow(t)).is_primitive().unwrap_or(false))
                .count() as u64;
            let bound = primitive_lower_bound(q, params.h, t)?;
            let stats = PrimitiveStats {
                n_actual,
                n_weighted,
                n_lower: bound.n_lower,
                tau_condition: bound.tau_condition,
            };
            (find_primitive(&set)?, Some(stats))
        }
    };
    let all_conditions = conditions.iter().all(|&c| c);
    let guaranteed = match &primitive {
        None => all_conditions,
        Some(stats) => all_conditions && stats.tau_condition,
    };
    Ok(ConstructionReport {
        mode,
        conditions,
        condition4_strict: nt::within_sqrt_bound_strict(t, params.h as u64, q),
        guaranteed,
        odd_cofactor: q % 2 == 1 && (n_units / e) % 2 == 1,
        m_of_h: nt::m_of_h(q, params.h as u64)?,
        gcd_t: t.gcd(&(q - 1)),
        set_indices: set.iter().map(|s| s.index() as u64).collect(),
        cardinality: set.len() as u64,
        certificate: certificate.map(|c| c.index() as u64),
        verified: certificate.is_some(),
        base_field: tower.base.descriptor(),
        field: tower.big.descriptor(),
        spec,
        primitive,
    })
}

/// Choose `t` (unless given) and `alpha`, check the sufficient conditions,
/// build `S` and search it for a non-`d`-th power.
pub fn construct_pipeline(params: &PipelineParams, opts: &FieldOptions) -> Result<ConstructionReport> {
    build_report(Mode::NonDthPower, params, opts)
}

/// Same set, certified by a primitive element; the exponent defaults to
/// `t = 1` rather than the automatic choice when `params.t` is `None`.
pub fn primitive_set_search(params: &PipelineParams, opts: &FieldOptions) -> Result<ConstructionReport> {
    let params = PipelineParams {
        t: Some(params.t.unwrap_or(1)),
        ..*params
    };
    build_report(Mode::Primitive, &params, opts)
}

/// Outcome of re-checking a saved report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub ok: bool,
    pub problems: Vec<String>,
}

/// Rebuild the fields from the report's descriptors, recompute the set and
/// the certificate, and list every disagreement.
pub fn verify(report: &ConstructionReport, opts: &FieldOptions) -> Result<VerifyOutcome> {
    let base = Field::from_descriptor(&report.base_field, opts)?;
    let big = Field::from_descriptor(&report.field, opts)?;
    let spec = &report.spec;
    let mut problems = Vec::new();
    if base.characteristic() != spec.p || base.degree() != spec.k || base.order() != spec.q {
        problems.push("base field does not match spec".to_string());
    }
    if big.degree() != spec.k * spec.h {
        problems.push("extension degree does not match spec".to_string());
    }
    if !problems.is_empty() {
        return Ok(VerifyOutcome { ok: false, problems });
    }
    let emb = Embedding::new(&base, &big)?;
    let alpha = big.element(spec.alpha)?;
    let e = alpha.mult_order()?;
    if e != spec.e {
        problems.push(format!("order of alpha is {e}, report says {}", spec.e));
    }
    let conditions = theorem_conditions_check(&ConstructionSpec { e, ..spec.clone() })?;
    if conditions != report.conditions {
        problems.push(format!("conditions recomputed as {conditions:?}"));
    }
    let set = build_set(alpha, spec.t, &emb)?;
    let indices: Vec<u64> = set.iter().map(|s| s.index() as u64).collect();
    if indices != report.set_indices {
        problems.push("set differs from recomputation".to_string());
    }
    if report.cardinality != set.len() as u64 {
        problems.push(format!("cardinality is {}, report says {}", set.len(), report.cardinality));
    }
    let certificate = match report.mode {
        Mode::NonDthPower => find_non_dth_power(&set, spec.d)?,
        Mode::Primitive => find_primitive(&set)?,
    }
    .map(|c| c.index() as u64);
    if certificate != report.certificate {
        problems.push(format!("certificate recomputed as {certificate:?}"));
    }
    if report.verified != certificate.is_some() {
        problems.push("verified flag disagrees with certificate".to_string());
    }
    Ok(VerifyOutcome {
        ok: problems.is_empty(),
        problems,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityScan {
    pub q: u64,
    pub h: u32,
    pub t: u64,
    pub d: u64,
    /// `q^h - q`.
    pub total: u64,
    /// `alpha` meeting all four sufficient conditions.
    pub valid: u64,
    /// `alpha` whose set actually contains a non-`d`-th power.
    pub certified: u64,
    /// Valid and certified; equals `valid` when the guarantee holds.
    pub valid_certified: u64,
}

/// Run the conditions and the brute-force certificate for every
/// `alpha in F_{q^h} \ F_q`.
pub fn alpha_density_scan(p: u32, k: u32, h: u32, t: u64, d: u64, opts: &FieldOptions) -> Result<DensityScan> {
    if h < 2 || t == 0 {
        return Err(Error::InvalidArgument("need h >= 2 and t >= 1".into()));
    }
    let tower = Tower::new(p, k, h, opts)?;
    let emb = tower.embedding()?;
    let q = tower.q();
    let n_units = tower.big.order() - 1;
    if d == 0 || n_units % d != 0 {
        return Err(Error::NotADivisor { divisor: d, n: n_units });
    }
    let mut powers: Vec<FieldElement<'_>> = emb.image().map(|x| x.pow(t)).collect();
    powers.sort();
    powers.dedup();
    let candidates: Vec<u64> = tower
        .big
        .elements()
        .filter(|&a| !emb.contains(a))
        .map(|a| a.index() as u64)
        .collect();
    let spec0 = ConstructionSpec {
        p,
        k,
        q,
        h,
        d,
        t,
        r: prime_of_power(t),
        alpha: 0,
        e: 1,
    };
    let per_alpha = candidates
        .par_iter()
        .map(|&idx| -> Result<(u64, u64, u64)> {
            let alpha = tower.big.element(idx)?;
            let e = alpha.mult_order()?;
            let spec = ConstructionSpec {
                alpha: idx,
                e,
                ..spec0.clone()
            };
            let valid = theorem_conditions_check(&spec)?.iter().all(|&c| c);
            let mut certified = false;
            for &xt in &powers {
                if !(alpha - xt).is_dth_power(d)? {
                    certified = true;
                    break;
                }
            }
            Ok((valid as u64, certified as u64, (valid && certified) as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let (valid, certified, valid_certified) = per_alpha
        .iter()
        .fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
    Ok(DensityScan {
        q,
        h,
        t,
        d,
        total: candidates.len() as u64,
        valid,
        certified,
        valid_certified,
    })
}

/// Exhaustive check that every coset `alpha - F_q` (`alpha` outside `F_q`)
/// contains a non-`d`-th power for every `d > 1` dividing `q^h - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetCheck {
    pub q: u64,
    pub h: u32,
    pub alphas: u64,
    /// Divisors `d > 1` of `q^h - 1` checked per coset.
    pub divisors: u64,
    /// `(alpha, d)` pairs with no certificate; `d` is the largest failing one.
    pub failures: Vec<(u64, u64)>,
    /// Failures whose `alpha` lies in a proper subfield `F_{q^j}`, `j < h`.
    /// Such a coset sits inside `F_{q^j}^*`, which consists of
    /// `(q^h-1)/(q^j-1)`-th powers.
    pub subfield_failures: u64,
}

impl CosetCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    /// Holds once `alpha` is restricted to generators of `F_{q^h}` over `F_q`.
    pub fn holds_for_generators(&self) -> bool {
        self.subfield_failures == self.failures.len() as u64
    }
}

/// A coset consists only of `d`-th powers exactly when `d` divides the gcd
/// `G` of `q^h - 1` and the discrete logs of its elements, so each coset is
/// settled for all `d` at once: it passes iff `G = 1`.
pub fn linear_coset_check(p: u32, k: u32, h: u32, opts: &FieldOptions) -> Result<CosetCheck> {
    if h < 2 {
        return Err(Error::InvalidArgument("h must be at least 2".into()));
    }
    let tower = Tower::new(p, k, h, opts)?;
    if !tower.big.has_log_table() {
        return Err(Error::MissingLogTable(tower.big.label()));
    }
    let emb = tower.embedding()?;
    let base: Vec<FieldElement<'_>> = emb.image().collect();
    let n_units = tower.big.order() - 1;
    let candidates: Vec<u64> = tower
        .big
        .elements()
        .filter(|&a| !emb.contains(a))
        .map(|a| a.index() as u64)
        .collect();
    let failures: Vec<(u64, u64)> = candidates
        .par_iter()
        .map(|&idx| -> Result<Option<(u64, u64)>> {
            let alpha = tower.big.element(idx)?;
            let mut g = n_units;
            for &x in &base {
                g = g.gcd(&(alpha - x).discrete_log()?);
                if g == 1 {
                    return Ok(None);
                }
            }
            Ok(Some((idx, g)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let q = tower.q();
    let mut subfield_failures = 0;
    for &(idx, _) in &failures {
        if degree_over_base(tower.big.element(idx)?, q) < h {
            subfield_failures += 1;
        }
    }
    Ok(CosetCheck {
        q,
        h,
        alphas: candidates.len() as u64,
        divisors: nt::tau(n_units)? - 1,
        failures,
        subfield_failures,
    })
}

/// Least `j >= 1` with `a^(q^j) = a`.
fn degree_over_base(a: FieldElement<'_>, q: u64) -> u32 {
    let mut cur = a.pow(q);
    let mut j = 1;
    while cur != a {
        cur = cur.pow(q);
        j += 1;
    }
    j
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareMixCheck {
    pub q: u64,
    pub alphas: u64,
    /// `|{a^2 : a in F_q^*}|`.
    pub set_size: u64,
    pub holds: bool,
    pub first_failure: Option<u64>,
    /// Same check with `a = 0` admitted, i.e. `alpha` itself added to the set.
    pub holds_with_zero: bool,
    pub first_failure_with_zero: Option<u64>,
}

/// For every `alpha in F_{q^2} \ F_q`, does `{alpha - a^2 : a in F_q^*}`
/// contain both a square and a non-square of `F_{q^2}`? The variant with
/// `a` ranging over all of `F_q` is reported alongside.
pub fn coulter_kosick_check(p: u32, k: u32, opts: &FieldOptions) -> Result<SquareMixCheck> {
    if p == 2 {
        return Err(Error::InvalidArgument("q must be odd".into()));
    }
    let tower = Tower::new(p, k, 2, opts)?;
    let emb = tower.embedding()?;
    let mut squares: Vec<FieldElement<'_>> = emb
        .image()
        .filter(|a| !a.is_zero())
        .map(|a| a * a)
        .collect();
    squares.sort();
    squares.dedup();
    let mut alphas = 0;
    let mut first_failure = None;
    let mut first_failure_with_zero = None;
    for alpha in tower.big.elements().filter(|&a| !emb.contains(a)) {
        alphas += 1;
        let mut has_square = false;
        let mut has_nonsquare = false;
        for &s in &squares {
            if (alpha - s).is_dth_power(2)? {
                has_square = true;
            } else {
                has_nonsquare = true;
            }
            if has_square && has_nonsquare {
                break;
            }
        }
        if !(has_square && has_nonsquare) {
            first_failure.get_or_insert(alpha.index() as u64);
            let alpha_square = alpha.is_dth_power(2)?;
            if alpha_square == has_square {
                first_failure_with_zero.get_or_insert(alpha.index() as u64);
            }
        }
    }
    Ok(SquareMixCheck {
        q: tower.q(),
        alphas,
        set_size: squares.len() as u64,
        holds: first_failure.is_none(),
        first_failure,
        holds_with_zero: first_failure_with_zero.is_none(),
        first_failure_with_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinSchreierCheck {
    pub p: u32,
    /// Smallest non-square of `F_p`.
    pub a: u64,
    /// Smallest-index root of `x^p - x - a` in `F_{p^p}`.
    pub alpha: u64,
    pub roots: u64,
    /// The roots are exactly `alpha + F_p`.
    pub roots_form_coset: bool,
    pub all_nonsquare: bool,
    pub holds: bool,
}

/// With `a` a non-square of `F_p` and `alpha` a root of `x^p - x - a`,
/// are all of `alpha + F_p` non-squares in `F_{p^p}`?
pub fn hm_artin_schreier_check(p: u32, opts: &FieldOptions) -> Result<ArtinSchreierCheck> {
    if p == 2 || !nt::is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let fp = Field::with_options(p, 1, opts)?;
    let big = Field::with_options(p, p, opts)?;
    let a = fp
        .nonzero_elements()
        .find(|x| !x.is_dth_power(2).unwrap_or(true))
        .ok_or_else(|| Error::Internal("no non-square in F_p".into()))?;
    let a_big = big.from_int(a.index() as i64);
    let roots: Vec<FieldElement<'_>> = big
        .elements()
        .filter(|&z| (z.pow(p as u64) - z - a_big).is_zero())
        .collect();
    let alpha = *roots
        .first()
        .ok_or_else(|| Error::Internal("Artin-Schreier polynomial has no root".into()))?;
    let mut coset: Vec<FieldElement<'_>> = (0..p as i64).map(|c| alpha + big.from_int(c)).collect();
    coset.sort();
    let roots_form_coset = coset == roots;
    let mut all_nonsquare = true;
    for &z in &coset {
        if z.is_zero() || z.is_dth_power(2)? {
            all_nonsquare = false;
        }
    }
    Ok(ArtinSchreierCheck {
        p,
        a: a.index() as u64,
        alpha: alpha.index() as u64,
        roots: roots.len() as u64,
        roots_form_coset,
        all_nonsquare,
        holds: roots.len() as u64 == p as u64 && roots_form_coset && all_nonsquare,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonsquareCosetSearch {
    pub p: u32,
    pub k: u32,
    pub candidates: u64,
    pub found: u64,
    pub first: Option<u64>,
}

/// Exhaustive search for `alpha in F_{p^k} \ F_p` with every element of
/// `alpha + F_p` a non-square.
pub fn nonsquare_coset_search(p: u32, k: u32, opts: &FieldOptions) -> Result<NonsquareCosetSearch> {
    if p == 2 {
        return Err(Error::InvalidArgument("p must be odd".into()));
    }
    let fp = Field::with_options(p, 1, opts)?;
    let big = Field::with_options(p, k, opts)?;
    let emb = Embedding::new(&fp, &big)?;
    let base: Vec<FieldElement<'_>> = emb.image().collect();
    let mut candidates = 0;
    let mut found = 0;
    let mut first = None;
    for alpha in big.elements().filter(|&a| !emb.contains(a)) {
        candidates += 1;
        let mut ok = true;
        for &c in &base {
            if (alpha + c).is_dth_power(2)? {
                ok = false;
                break;
            }
        }
        if ok {
            found += 1;
            first.get_or_insert(alpha.index() as u64);
        }
    }
    Ok(NonsquareCosetSearch {
        p,
        k,
        candidates,
        found,
        first,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveBound {
    pub q: u64,
    pub n: u32,
    pub t: u64,
    /// `tau(q^n - 1)`.
    pub tau: u64,
    /// `phi(q^n - 1)`.
    pub phi: u64,
    pub n_lower: f64,
    pub tau_condition: bool,
}

/// `phi(Q-1)/(Q-1) * (q - (tau(Q-1) - 1)(n t - 1) sqrt(q))` with `Q = q^n`,
/// and whether `tau(Q-1) < sqrt(q)/(n t - 1) + 1`. When `n t = 1` the
/// estimate degenerates to `q phi/(Q-1)`, capped at `phi`, and the
/// condition holds trivially.
pub fn primitive_lower_bound(q: u64, n: u32, t: u64) -> Result<PrimitiveBound> {
    if n == 0 || t == 0 {
        return Err(Error::ZeroArgument);
    }
    if !nt::is_prime_power(q) {
        return Err(Error::NotPrimePower(q));
    }
    let big_q = q
        .checked_pow(n)
        .filter(|&v| v <= nt::FACTORIZE_MAX)
        .ok_or_else(|| Error::InvalidArgument(format!("{q}^{n} too large")))?;
    let f = nt::factorize(big_q - 1)?;
    let (tau, phi) = (f.tau(), f.phi());
    let density = phi as f64 / (big_q - 1) as f64;
    let nt1 = (n as u64 * t).saturating_sub(1);
    let (n_lower, tau_condition) = if nt1 == 0 {
        ((q as f64 * density).min(phi as f64), true)
    } else {
        let lhs = (tau - 1) as u128 * nt1 as u128;
        (
            density * (q as f64 - (tau - 1) as f64 * nt1 as f64 * (q as f64).sqrt()),
            lhs * lhs < q as u128,
        )
    };
    Ok(PrimitiveBound {
        q,
        n,
        t,
        tau,
        phi,
        n_lower,
        tau_condition,
    })
}

/// Character-sum check behind the primitive-element count for one `alpha`:
/// every non-trivial character of squarefree order, applied to
/// `alpha - x^t`, must satisfy the `(n t - 1) sqrt(q)` bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveSumAudit {
    pub characters: u64,
    pub all_applicable: bool,
    pub all_within_bound: bool,
    /// Largest `|sum| / bound` seen.
    pub worst_ratio: f64,
}

impl PrimitiveSumAudit {
    pub fn passes(&self) -> bool {
        self.all_applicable && self.all_within_bound
    }
}

pub fn primitive_sum_audit<'b>(
    alpha: FieldElement<'b>,
    t: u64,
    emb: &Embedding<'_, 'b>,
) -> Result<PrimitiveSumAudit> {
    let big = emb.big();
    let t_usize = usize::try_from(t).map_err(|_| Error::InvalidArgument("t too large".into()))?;
    let f = Polynomial::constant(alpha) - Polynomial::monomial(big.one(), t_usize);
    let mut audit = PrimitiveSumAudit {
        characters: 0,
        all_applicable: true,
        all_within_bound: true,
        worst_ratio: 0.0,
    };
    for chi in squarefree_order_characters(big)? {
        let s = charsum::incomplete_char_sum(&chi, &f, emb)?;
        audit.characters += 1;
        if s.applicable != Some(true) {
            audit.all_applicable = false;
        }
        if s.abs() > s.bound + 1e-6 {
            audit.all_within_bound = false;
        }
        if s.bound > 0.0 {
            audit.worst_ratio = audit.worst_ratio.max(s.abs() / s.bound);
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MnSearch {
    pub q: u64,
    pub kk: u32,
    pub l: u32,
    /// Size of the candidate space.
    pub candidates: u64,
    /// Candidates tested before stopping.
    pub examined: u64,
    pub witness: Option<PolynomialRecord>,
}

/// Search monic degree-`l` polynomials over `F_{q^kk}` whose middle
/// coefficients lie in `F_q` and whose constant term lies in no proper
/// subfield, for an irreducible one. Constants are scanned by index, then
/// the middle coefficients as base-`q` digits (the `x` coefficient least
/// significant).
pub fn mn_conjecture_search(q: u64, kk: u32, l: u32, budget: u64, opts: &FieldOptions) -> Result<MnSearch> {
    if kk == 0 || l == 0 {
        return Err(Error::ZeroArgument);
    }
    let (p, k) = split_prime_power(q)?;
    let tower = Tower::new(p, k, kk, opts)?;
    let emb = tower.embedding()?;
    let big = &tower.big;
    let total_degree = big.degree() as u64;
    let maximal_subfields: Vec<u64> = nt::factorize(total_degree)?
        .primes()
        .map(|r| total_degree / r)
        .collect();
    let generates = |c: FieldElement<'_>| {
        maximal_subfields
            .iter()
            .all(|&j| c.pow(nt_pow(p as u64, j)) != c)
    };
    let constants: Vec<FieldElement<'_>> = big.elements().filter(|&c| generates(c)).collect();
    let middles = q
        .checked_pow(l - 1)
        .ok_or_else(|| Error::InvalidArgument("search space overflows".into()))?;
    let candidates = (constants.len() as u128 * middles as u128).min(u128::from(u64::MAX)) as u64;
    if candidates > budget {
        return Err(Error::BudgetExceeded {
            needed: constants.len() as u128 * middles as u128,
            budget,
        });
    }
    let base: Vec<FieldElement<'_>> = emb.image().collect();
    let mut examined = 0;
    for &c in &constants {
        for m in 0..middles {
            examined += 1;
            let mut coeffs = Vec::with_capacity(l as usize + 1);
            coeffs.push(c);
            let mut rest = m;
            for _ in 1..l {
                coeffs.push(base[(rest % q) as usize]);
                rest /= q;
            }
            coeffs.push(big.one());
            let f = Polynomial::new(big, coeffs);
            if poly::is_irreducible(&f)? {
                return Ok(MnSearch {
                    q,
                    kk,
                    l,
                    candidates,
                    examined,
                    witness: Some(f.to_record()),
                });
            }
        }
    }
    Ok(MnSearch {
        q,
        kk,
        l,
        candidates,
        examined,
        witness: None,
    })
}

/// `p^j` as an exponent for the Frobenius; only its residue mod `Q - 1`
/// matters, but fields here are small enough that it never overflows.
fn nt_pow(p: u64, j: u64) -> u64 {
    p.pow(j as u32)
}

/// One row of a parameter survey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub q: u64,
    pub h: u32,
    pub d: u64,
    pub r: Option<u64>,
    pub t: u64,
    #[serde(rename = "|S|")]
    pub set_size: Option<u64>,
    #[serde(rename = "M(h)")]
    pub m_of_h: u64,
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub cond4: bool,
    pub certified: bool,
    pub floor_log2_q_minus_1: u32,
    pub sqrt_q: f64,
    /// `floor(log2(q - 1)) <= M(h)`.
    pub log2_claim_holds: bool,
    pub status: String,
}

impl SurveyRow {
    /// Conditions all held but no certificate was found, or the row errored.
    pub fn is_hard_failure(&self) -> bool {
        self.status.starts_with("error") || self.status == "guarantee-violated"
    }
}

pub fn survey_row(q: u64, h: u32, d: u64, opts: &FieldOptions) -> SurveyRow {
    let floor_log2_q_minus_1 = nt::floor_log2(q.saturating_sub(1).max(1));
    let mut row = SurveyRow {
        q,
        h,
        d,
        r: None,
        t: 1,
        set_size: None,
        m_of_h: 1,
        cond1: false,
        cond2: false,
        cond3: false,
        cond4: false,
        certified: false,
        floor_log2_q_minus_1,
        sqrt_q: (q as f64).sqrt(),
        log2_claim_holds: false,
        status: String::new(),
    };
    if let Ok(m) = nt::m_of_h(q, h as u64) {
        row.m_of_h = m;
        row.log2_claim_holds = floor_log2_q_minus_1 as u64 <= m;
    }
    if let Ok(c) = nt::choose_t(q, h as u64) {
        row.r = c.r;
        row.t = c.t;
    }
    let report = split_prime_power(q).and_then(|(p, k)| construct_pipeline(&PipelineParams::new(p, k, h, d), opts));
    match report {
        Ok(rep) => {
            row.set_size = Some(rep.cardinality);
            [row.cond1, row.cond2, row.cond3, row.cond4] = rep.conditions;
            row.certified = rep.verified;
            row.status = if rep.verified {
                "ok".into()
            } else if rep.guaranteed {
                "guarantee-violated".into()
            } else {
                "uncertified".into()
            };
        }
        Err(Error::NotADivisor { .. }) => row.status = "skipped: d does not divide q^h-1".into(),
        Err(e) if e.is_resource_limit() => row.status = format!("skipped: {e}"),
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// Survey rows for every prime power `q` in `[q_min, q_max]`, in ascending
/// order, computed in parallel.
pub fn survey(q_min: u64, q_max: u64, h: u32, d: u64, opts: &FieldOptions) -> Vec<SurveyRow> {
    nt::prime_powers_in(q_min.max(2), q_max)
        .par_iter()
        .map(|&q| survey_row(q, h, d, opts))
        .collect()
}

/// Non-trivial characters of squarefree order, the ones entering the
/// primitive-element indicator.
pub fn squarefree_order_characters(field: &Field) -> Result<Vec<Character<'_>>> {
    let mut out = Vec::new();
    for (d, _) in field.unit_group().squarefree_divisors() {
        if d > 1 {
            out.extend(charsum::characters_of_order(field, d)?);
        }
    }
    Ok(out)
}
