//! Univariate polynomials over a constructed field: irreducibility, the
//! binomial and composition criteria, value sets, radicals and roots.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldDescriptor, FieldElement};
use crate::nt;

/// Polynomial with coefficients in `field`, constant term first. The zero
/// polynomial has no coefficients.
#[derive(Clone)]
pub struct Polynomial<'f> {
    field: &'f Field,
    coeffs: Vec<FieldElement<'f>>,
}

/// Serialized polynomial: `{"field": descriptor, "coeffs": [index, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub field: FieldDescriptor,
    pub coeffs: Vec<u32>,
}

impl<'f> Polynomial<'f> {
    pub fn new(field: &'f Field, coeffs: Vec<FieldElement<'f>>) -> Self {
        for c in &coeffs {
            assert!(
                c.field().same_as(field),
                "coefficient from F_{} in a polynomial over F_{}",
                c.field().label(),
                field.label()
            );
        }
        let mut f = Polynomial { field, coeffs };
        f.normalize();
        f
    }

    pub fn from_indices(field: &'f Field, coeffs: &[u64]) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|&i| field.element(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(field, coeffs))
    }

    pub fn from_record(field: &'f Field, rec: &PolynomialRecord) -> Result<Self> {
        if field.descriptor() != rec.field {
            return Err(Error::DescriptorMismatch(format!(
                "polynomial over {:?}, field is {:?}",
                rec.field,
                field.descriptor()
            )));
        }
        let idx: Vec<u64> = rec.coeffs.iter().map(|&c| c as u64).collect();
        Polynomial::from_indices(field, &idx)
    }

    pub fn to_record(&self) -> PolynomialRecord {
        PolynomialRecord {
            field: self.field.descriptor(),
            coeffs: self.indices(),
        }
    }

    pub fn zero(field: &'f Field) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement<'f>) -> Self {
        Polynomial::new(c.field(), vec![c])
    }

    pub fn one(field: &'f Field) -> Self {
        Polynomial::constant(field.one())
    }

    /// The polynomial `x`.
    pub fn x(field: &'f Field) -> Self {
        Polynomial::monomial(field.one(), 1)
    }

    /// `c x^n`.
    pub fn monomial(c: FieldElement<'f>, n: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Polynomial::new(field, coeffs)
    }

    /// `x^t - a`.
    pub fn binomial(t: usize, a: FieldElement<'f>) -> Self {
        Polynomial::monomial(a.field().one(), t) - Polynomial::constant(a)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement<'f>] {
        &self.coeffs
    }

    pub fn indices(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.index()).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn coeff(&self, i: usize) -> FieldElement<'f> {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn leading(&self) -> Option<FieldElement<'f>> {
        self.coeffs.last().copied()
    }

    pub fn scale(&self, c: FieldElement<'f>) -> Self {
        Polynomial::new(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Divide by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(l.inv().expect("leading coefficient is nonzero")),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, x: FieldElement<'f>) -> FieldElement<'f> {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * self.field.from_int((i as u64 % self.field.characteristic() as u64) as i64))
            .collect();
        Polynomial::new(self.field, coeffs)
    }

    /// `f(x^t)`.
    pub fn compose_power(&self, t: usize) -> Self {
        assert!(t >= 1);
        let Some(deg) = self.degree() else {
            return self.clone();
        };
        let mut coeffs = vec![self.field.zero(); deg * t + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * t] = c;
        }
        Polynomial::new(self.field, coeffs)
    }

    /// Quotient and remainder. Panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.coeffs[dd].inv().expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = rem[i - dd + j] - c * dj;
            }
        }
        rem.truncate(dd);
        (
            Polynomial::new(self.field, quot),
            Polynomial::new(self.field, rem),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "division is not exact");
        q
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        (self * other).rem(m)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = Polynomial::one(self.field).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Image under a field embedding.
    pub fn embed<'b>(&self, emb: &Embedding<'f, 'b>) -> Polynomial<'b> {
        Polynomial::new(
            emb.big(),
            self.coeffs.iter().map(|&c| emb.embed(c)).collect(),
        )
    }

    /// Replace every coefficient by its `p`-th root; only valid when all
    /// exponents with nonzero coefficients are multiples of `p`.
    fn pth_root(&self) -> Self {
        let p = self.field.characteristic() as usize;
        let root_exp = self.field.order() / p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|c| c.pow(root_exp))
            .collect();
        Polynomial::new(self.field, coeffs)
    }
}

impl PartialEq for Polynomial<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for Polynomial<'_> {}

impl fmt::Debug for Polynomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial(F_{}, {:?})", self.field.label(), self.indices())
    }
}

impl<'f> Add for &Polynomial<'f> {
    type Output = Polynomial<'f>;

    fn add(self, rhs: &Polynomial<'f>) -> Polynomial<'f> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(self.field, (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'f> Sub for &Polynomial<'f> {
    type Output = Polynomial<'f>;

    fn sub(self, rhs: &Polynomial<'f>) -> Polynomial<'f> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(self.field, (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'f> Mul for &Polynomial<'f> {
    type Output = Polynomial<'f>;

    fn mul(self, rhs: &Polynomial<'f>) -> Polynomial<'f> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::new(self.field, out)
    }
}

impl<'f> Neg for &Polynomial<'f> {
    type Output = Polynomial<'f>;

    fn neg(self) -> Polynomial<'f> {
        Polynomial::new(self.field, self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl<'f> $trait for Polynomial<'f> {
            type Output = Polynomial<'f>;

            fn $method(self, rhs: Polynomial<'f>) -> Polynomial<'f> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn require_nonconstant(f: &Polynomial<'_>) -> Result<()> {
    if f.is_constant() {
        Err(Error::ConstantPolynomial)
    } else {
        Ok(())
    }
}

/// Distinct-degree irreducibility test: `f` of degree `n` is irreducible iff
/// `gcd(f, x^{Q^i} - x) = 1` for every `1 <= i <= n/2`.
pub fn is_irreducible(f: &Polynomial<'_>) -> Result<bool> {
    require_nonconstant(f)?;
    let f = f.monic();
    let n = f.degree().unwrap_or(0);
    if n == 1 {
        return Ok(true);
    }
    let q = f.field().order();
    let x = Polynomial::x(f.field());
    let mut h = x.rem(&f);
    for _ in 1..=n / 2 {
        h = h.pow_mod(q, &f);
        if !(&h - &x).gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict of one of the `x^t`-composition criteria, with the individual
/// conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCriterion {
    pub verdict: bool,
    pub conditions: [bool; 3],
    /// Multiplicative order of the root the conditions were evaluated for.
    pub root_order: u64,
}

/// Is `x^t - a` irreducible over the field of `a`? Evaluated through the
/// order-based criterion with the coefficient field's own cardinality.
pub fn binomial_irreducible_check(t: u64, a: FieldElement<'_>) -> Result<IrreducibilityCriterion> {
    if t < 2 {
        return Err(Error::InvalidArgument(format!("binomial exponent must be >= 2, got {t}")));
    }
    let e = a.mult_order()?;
    let conditions = nt::irreducibility_conditions(t, a.field().order(), e)?;
    Ok(IrreducibilityCriterion {
        verdict: conditions.iter().all(|&c| c),
        conditions,
        root_order: e,
    })
}

/// Multiplicative order of the class of `x` in `F_Q[x]/(f)`, i.e. of a root
/// of the irreducible `f`, without constructing the extension field.
pub fn root_order(f: &Polynomial<'_>) -> Result<u64> {
    let f = f.monic();
    let n = f.degree().ok_or(Error::ConstantPolynomial)? as u32;
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroElement);
    }
    let group = f
        .field()
        .order()
        .checked_pow(n)
        .filter(|&v| v <= nt::FACTORIZE_MAX)
        .ok_or_else(|| Error::InvalidArgument("root field too large".into()))?
        - 1;
    let x = Polynomial::x(f.field());
    let mut e = group;
    for &(r, v) in nt::factorize(group)?.factors() {
        for _ in 0..v {
            if x.pow_mod(e / r, &f).is_one() {
                e /= r;
            } else {
                break;
            }
        }
    }
    Ok(e)
}

/// Sufficient criterion for `f(x^t)` to stay irreducible, for irreducible
/// `f` of degree `n` whose roots have order `e` in `F_{Q^n}`.
pub fn composed_irreducible_check(f: &Polynomial<'_>, t: u64) -> Result<IrreducibilityCriterion> {
    require_nonconstant(f)?;
    if !is_irreducible(f)? {
        return Err(Error::ReduciblePolynomial);
    }
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let n = f.degree().unwrap_or(0) as u32;
    let e = root_order(f)?;
    let big_q = f.field().order().pow(n);
    let conditions = nt::irreducibility_conditions(t, big_q, e)?;
    Ok(IrreducibilityCriterion {
        verdict: conditions.iter().all(|&c| c),
        conditions,
        root_order: e,
    })
}

/// `V(f) = {f(x) : x in F_Q}`, by exhaustive evaluation.
pub fn value_set<'f>(f: &Polynomial<'f>) -> BTreeSet<FieldElement<'f>> {
    f.field().elements().map(|x| f.eval(x)).collect()
}

/// Squarefree decomposition `f = lc * prod g_i^{m_i}` with each `g_i`
/// monic, squarefree and pairwise coprime. Handles vanishing derivatives by
/// descending through `p`-th roots.
pub fn squarefree_decomposition<'f>(f: &Polynomial<'f>) -> Result<Vec<(Polynomial<'f>, u32)>> {
    require_nonconstant(f)?;
    let mut out = Vec::new();
    sff(&f.monic(), 1, &mut out);
    out.sort_by_key(|(g, m)| (*m, g.indices()));
    Ok(out)
}

fn sff<'f>(f: &Polynomial<'f>, scale: u32, out: &mut Vec<(Polynomial<'f>, u32)>) {
    let p = f.field().characteristic();
    let df = f.derivative();
    if df.is_zero() {
        if !f.is_constant() {
            sff(&f.pth_root(), scale * p, out);
        }
        return;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_constant() {
            out.push((fac, i * scale));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_constant() {
        sff(&c.pth_root(), scale * p, out);
    }
}

/// Degree of the largest squarefree divisor (the radical) of `f`.
pub fn squarefree_part_degree(f: &Polynomial<'_>) -> Result<usize> {
    Ok(squarefree_decomposition(f)?
        .iter()
        .map(|(g, _)| g.degree().unwrap_or(0))
        .sum())
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(j, P_j)` where `P_j` is the product of the irreducible factors of
/// degree `j`.
pub fn distinct_degree_factorization<'f>(f: &Polynomial<'f>) -> Result<Vec<(usize, Polynomial<'f>)>> {
    require_nonconstant(f)?;
    let q = f.field().order();
    let x = Polynomial::x(f.field());
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut j = 0;
    while rest.degree().unwrap_or(0) > 0 {
        j += 1;
        if 2 * j > rest.degree().unwrap_or(0) {
            out.push((rest.degree().unwrap_or(0), rest.clone()));
            break;
        }
        h = h.pow_mod(q, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((j, g));
        }
    }
    Ok(out)
}

/// Roots of `f` (over the small field of `emb`) inside the big field, with
/// multiplicities, in index order. Multiplicity is counted by repeated exact
/// division by `x - root`.
pub fn roots_in_extension<'s, 'b>(
    f: &Polynomial<'s>,
    emb: &Embedding<'s, 'b>,
) -> Result<Vec<(FieldElement<'b>, u32)>> {
    require_nonconstant(f)?;
    if !f.field().same_as(emb.small()) {
        return Err(Error::MixedFields(f.field().label(), emb.small().label()));
    }
    let g = f.embed(emb);
    let big = emb.big();
    let mut out = Vec::new();
    for z in big.elements() {
        if !g.eval(z).is_zero() {
            continue;
        }
        let linear = Polynomial::new(big, vec![-z, big.one()]);
        let mut h = g.clone();
        let mut mult = 0;
        while !h.is_zero() && h.eval(z).is_zero() {
            h = h.div_exact(&linear);
            mult += 1;
        }
        out.push((z, mult));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<'f>(field: &'f Field, c: &[u64]) -> Polynomial<'f> {
        Polynomial::from_indices(field, c).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let f7 = Field::new(7, 1).unwrap();
        let a = poly(&f7, &[1, 2, 3]);
        let b = poly(&f7, &[6, 1]);
        let (q, r) = (&a * &b).div_rem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(poly(&f7, &[1, 1, 1]).derivative(), poly(&f7, &[1, 2]));
        assert_eq!(poly(&f7, &[3, 1]).compose_power(2), poly(&f7, &[3, 0, 1]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.gcd(&Polynomial::zero(&f7)), a.monic());
    }

    #[test]
    fn irreducibility_examples() {
        let f3 = Field::new(3, 1).unwrap();
        assert!(is_irreducible(&poly(&f3, &[1, 0, 1])).unwrap());
        let f7 = Field::new(7, 1).unwrap();
        assert!(!is_irreducible(&Polynomial::binomial(2, f7.from_int(2))).unwrap());
        for c in 0..7 {
            assert!(is_irreducible(&poly(&f7, &[c, 1])).unwrap());
        }
        assert_eq!(
            is_irreducible(&poly(&f7, &[3])),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn irreducibility_matches_rabin_over_prime_fields() {
        use crate::field::fp_poly;
        for (p, n) in [(2u32, 6usize), (3, 4), (5, 3)] {
            let f = Field::new(p, 1).unwrap();
            let total = (p as u64).pow(n as u32);
            for idx in 0..total {
                let mut c: Vec<u64> = (0..n).map(|i| idx / (p as u64).pow(i as u32) % p as u64).collect();
                c.push(1);
                let ours = is_irreducible(&poly(&f, &c)).unwrap();
                assert_eq!(ours, fp_poly::is_irreducible(&c, p as u64), "p={p} {c:?}");
            }
        }
    }

    #[test]
    fn binomial_criterion_examples() {
        let f7 = Field::new(7, 1).unwrap();
        let c = binomial_irreducible_check(2, f7.from_int(3)).unwrap();
        assert!(c.verdict);
        assert_eq!(c.root_order, 6);
        let c = binomial_irreducible_check(2, f7.from_int(2)).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.conditions, [false, false, true]);
        let c = binomial_irreducible_check(4, f7.from_int(3)).unwrap();
        assert_eq!(c.conditions, [true, true, false]);
        assert!(!is_irreducible(&Polynomial::binomial(4, f7.from_int(3))).unwrap());
        assert!(binomial_irreducible_check(1, f7.from_int(3)).is_err());
        assert_eq!(
            binomial_irreducible_check(2, f7.zero()),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn composed_criterion_examples() {
        let f7 = Field::new(7, 1).unwrap();
        let f = poly(&f7, &[4, 1]); // x - 3
        let c = composed_irreducible_check(&f, 2).unwrap();
        assert!(c.verdict);
        assert!(is_irreducible(&f.compose_power(2)).unwrap());
        let f = poly(&f7, &[6, 1]); // x - 1
        let c = composed_irreducible_check(&f, 2).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.root_order, 1);
        let f = poly(&f7, &[3, 1, 1]);
        if is_irreducible(&f).unwrap() {
            assert!(composed_irreducible_check(&f, 1).unwrap().verdict);
        }
        assert_eq!(
            composed_irreducible_check(&poly(&f7, &[6, 0, 1]), 2),
            Err(Error::ReduciblePolynomial)
        );
    }

    #[test]
    fn root_order_matches_field_arithmetic() {
        // roots of the F_9 modulus x^2 + 1 are x and 2x, of order 4
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(root_order(&poly(&f3, &[1, 0, 1])).unwrap(), 4);
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.from_coeffs(&[0, 1]).unwrap().mult_order().unwrap(), 4);
    }

    #[test]
    fn value_set_examples() {
        let f7 = Field::new(7, 1).unwrap();
        let cubes: Vec<u32> = value_set(&Polynomial::monomial(f7.one(), 3))
            .iter()
            .map(|e| e.index())
            .collect();
        assert_eq!(cubes, vec![0, 1, 6]);
        assert_eq!(value_set(&poly(&f7, &[2, 3])).len(), 7);
    }

    #[test]
    fn squarefree_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(squarefree_part_degree(&poly(&f7, &[1, 0, 1])).unwrap(), 2);
        // (x - 1)^2 = x^2 - 2x + 1
        assert_eq!(squarefree_part_degree(&poly(&f7, &[1, 5, 1])).unwrap(), 1);
        // x^7 - 3 = (x - 3)^7 over F_7
        let mut c = vec![4u64];
        c.extend([0; 6]);
        c.push(1);
        let f = poly(&f7, &c);
        assert_eq!(squarefree_part_degree(&f).unwrap(), 1);
        assert_eq!(squarefree_decomposition(&f).unwrap()[0].1, 7);
        assert_eq!(
            squarefree_part_degree(&poly(&f7, &[5])),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn squarefree_decomposition_reconstructs() {
        let f5 = Field::new(5, 2).unwrap();
        let a = poly(&f5, &[3, 1]);
        let b = poly(&f5, &[7, 0, 1]);
        let c = poly(&f5, &[11, 1]);
        // a^1 b^5 c^7 has multiplicities 1, 5 (= p) and 7
        let mut f = a.clone();
        for _ in 0..5 {
            f = &f * &b;
        }
        for _ in 0..7 {
            f = &f * &c;
        }
        let dec = squarefree_decomposition(&f).unwrap();
        let mut rebuilt = Polynomial::one(&f5);
        for (g, m) in &dec {
            for _ in 0..*m {
                rebuilt = &rebuilt * g;
            }
        }
        assert_eq!(rebuilt, f.monic());
        let expected_d = [&a, &b, &c]
            .iter()
            .map(|g| g.degree().unwrap())
            .sum::<usize>();
        let sqfree_b = squarefree_part_degree(&b).unwrap();
        assert!(squarefree_part_degree(&f).unwrap() <= expected_d);
        assert_eq!(
            squarefree_part_degree(&f).unwrap(),
            squarefree_part_degree(&(&(&a * &b) * &c)).unwrap()
        );
        assert!(sqfree_b <= 2);
    }

    #[test]
    fn distinct_degree_examples() {
        let f3 = Field::new(3, 1).unwrap();
        // (x)(x + 1)(x^2 + 1)
        let f = &(&poly(&f3, &[0, 1]) * &poly(&f3, &[1, 1])) * &poly(&f3, &[1, 0, 1]);
        let ddf = distinct_degree_factorization(&f).unwrap();
        assert_eq!(ddf.len(), 2);
        assert_eq!(ddf[0].0, 1);
        assert_eq!(ddf[0].1.degree(), Some(2));
        assert_eq!(ddf[1], (2, poly(&f3, &[1, 0, 1])));
    }

    #[test]
    fn roots_examples() {
        let f3 = Field::new(3, 1).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        let emb = Embedding::new(&f3, &f9).unwrap();
        let roots = roots_in_extension(&poly(&f3, &[1, 0, 1]), &emb).unwrap();
        let idx: Vec<(u32, u32)> = roots.iter().map(|(z, m)| (z.index(), *m)).collect();
        assert_eq!(idx, vec![(3, 1), (6, 1)]);
        assert!(roots_in_extension(&poly(&f3, &[1, 0, 1]), &Embedding::new(&f3, &f3).unwrap())
            .unwrap()
            .is_empty());
        // (x - 2)^2 = x^2 - 4x + 4 = x^2 + 2x + 1
        let sq = roots_in_extension(&poly(&f3, &[1, 2, 1]), &emb).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!((sq[0].0, sq[0].1), (f9.from_int(2), 2));
    }

    #[test]
    fn record_round_trip() {
        let f9 = Field::new(3, 2).unwrap();
        let f = poly(&f9, &[4, 0, 1]);
        let json = serde_json::to_string(&f.to_record()).unwrap();
        assert_eq!(
            json,
            r#"{"field":{"p":3,"k":2,"modulus":[1,0,1],"generator":4},"coeffs":[4,0,1]}"#
        );
        let rec: PolynomialRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(Polynomial::from_record(&f9, &rec).unwrap(), f);
        let f27 = Field::new(3, 3).unwrap();
        assert!(Polynomial::from_record(&f27, &rec).is_err());
    }
}
