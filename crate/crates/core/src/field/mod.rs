//! Finite fields `F_{p^k}` in a polynomial basis.
//!
//! A field is fixed completely by `(p, k)`: the modulus is the monic
//! irreducible of degree `k` whose non-leading coefficient vector has the
//! smallest index encoding, and the generator is the primitive element of
//! smallest index. Elements are stored as that index,
//! `idx(b) = sum_i coeff_i * p^i`.
//!
//! Fields up to the table cap carry discrete-log, antilog and Zech-log
//! tables, which turn every operation into a couple of lookups. Without
//! tables, arithmetic falls back to schoolbook multiplication modulo the
//! modulus.

mod embed;
pub(crate) mod fp_poly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt::{self, Factorization};

pub use embed::Embedding;

/// Default cap on field cardinality, and on the size of fields that get
/// discrete-log tables.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

/// Limits applied when constructing a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldOptions {
    /// Largest cardinality accepted at all.
    pub cap: u64,
    /// Largest cardinality for which log tables are built.
    pub table_cap: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            cap: DEFAULT_FIELD_CAP,
            table_cap: DEFAULT_FIELD_CAP,
        }
    }
}

impl FieldOptions {
    pub fn with_cap(cap: u64) -> Self {
        FieldOptions {
            cap,
            table_cap: cap.min(DEFAULT_FIELD_CAP),
        }
    }

    /// Polynomial-basis arithmetic only.
    pub fn without_tables(self) -> Self {
        FieldOptions {
            table_cap: 0,
            ..self
        }
    }
}

/// Serialized form of a field: `{"p", "k", "modulus", "generator"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub generator: u32,
}

struct LogTables {
    /// index -> discrete log (NO_LOG at 0)
    log: Vec<u32>,
    /// discrete log -> index
    exp: Vec<u32>,
    /// n -> log(1 + g^n), NO_LOG when 1 + g^n = 0
    zech: Vec<u32>,
}

pub struct Field {
    p: u32,
    k: u32,
    order: u64,
    modulus: Vec<u32>,
    generator: u32,
    unit_group: Factorization,
    tables: Option<LogTables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl Field {
    /// `F_{p^k}` with the default cap.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        Field::with_options(p, k, &FieldOptions::default())
    }

    pub fn with_options(p: u32, k: u32, opts: &FieldOptions) -> Result<Field> {
        if !nt::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("field degree must be at least 1".into()));
        }
        let order = (p as u128)
            .checked_pow(k)
            .filter(|&q| q <= opts.cap as u128 && q <= u32::MAX as u128)
            .ok_or(Error::CapExceeded {
                requested: (p as u128).saturating_pow(k),
                cap: opts.cap,
            })? as u64;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            find_modulus(p as u64, k as usize)
        };
        let unit_group = nt::factorize(order - 1)?;
        let mut field = Field {
            p,
            k,
            order,
            modulus,
            generator: 0,
            unit_group,
            tables: None,
        };
        field.generator = (1..order as u32)
            .find(|&g| field.is_primitive_idx(g))
            .ok_or_else(|| Error::Internal("no primitive element found".into()))?;
        if order <= opts.table_cap {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// Rebuild a field from its descriptor, refusing descriptors that do
    /// not match the deterministic construction.
    pub fn from_descriptor(desc: &FieldDescriptor, opts: &FieldOptions) -> Result<Field> {
        let field = Field::with_options(desc.p, desc.k, opts)?;
        if field.descriptor() != *desc {
            return Err(Error::DescriptorMismatch(format!(
                "expected {:?}, got {:?}",
                field.descriptor(),
                desc
            )));
        }
        Ok(field)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
            generator: self.generator,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Cardinality `Q = p^k`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Factorization of `Q - 1`.
    pub fn unit_group(&self) -> &Factorization {
        &self.unit_group
    }

    pub fn has_log_table(&self) -> bool {
        self.tables.is_some()
    }

    pub fn label(&self) -> String {
        format!("{}^{}", self.p, self.k)
    }

    pub(crate) fn same_as(&self, other: &Field) -> bool {
        std::ptr::eq(self, other) || (self.p == other.p && self.k == other.k)
    }

    fn check_same(&self, other: &Field) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::MixedFields(self.label(), other.label()))
        }
    }

    // ---- element constructors -------------------------------------------

    fn wrap(&self, idx: u32) -> FieldElement<'_> {
        FieldElement { field: self, idx }
    }

    pub fn zero(&self) -> FieldElement<'_> {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement<'_> {
        self.wrap(1)
    }

    pub fn generator(&self) -> FieldElement<'_> {
        self.wrap(self.generator)
    }

    pub fn element(&self, idx: u64) -> Result<FieldElement<'_>> {
        if idx >= self.order {
            return Err(Error::IndexOutOfRange {
                index: idx,
                order: self.order,
            });
        }
        Ok(self.wrap(idx as u32))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement<'_> {
        self.wrap(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given coefficients (constant first); shorter
    /// vectors are zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement<'_>> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "{coeffs:?} is not a coefficient vector of F_{}",
                self.label()
            )));
        }
        Ok(self.wrap(self.encode(coeffs)))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> + Clone + '_ {
        (0..self.order as u32).map(move |i| self.wrap(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement<'_>> + Clone + '_ {
        (1..self.order as u32).map(move |i| self.wrap(i))
    }

    // ---- coefficient encoding -------------------------------------------

    fn digits(&self, mut idx: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(idx % self.p);
            idx /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64) as u32
    }

    // ---- polynomial-basis arithmetic ------------------------------------

    fn add_basis(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| ((x as u64 + y as u64) % self.p as u64) as u32)
            .collect();
        self.encode(&sum)
    }

    fn neg_basis(&self, a: u32) -> u32 {
        let neg: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.encode(&neg)
    }

    fn mul_basis(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let m = self.modulus[j] as u64;
                prod[i - k + j] = (prod[i - k + j] + c * ((p - m) % p)) % p;
            }
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.encode(&low)
    }

    fn pow_basis(&self, a: u32, e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_basis(acc, base);
            }
            base = self.mul_basis(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive_idx(&self, g: u32) -> bool {
        let n = self.order - 1;
        self.unit_group
            .primes()
            .all(|r| self.pow_basis(g, n / r) != 1)
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as usize;
        let mut log = vec![NO_LOG; self.order as usize];
        let mut exp = Vec::with_capacity(n);
        let mut cur = 1u32;
        for i in 0..n {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = self.mul_basis(cur, self.generator);
        }
        debug_assert_eq!(cur, 1);
        let zech = exp
            .iter()
            .map(|&e| {
                let s = self.add_basis(1, e);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        LogTables { log, exp, zech }
    }

    // ---- dispatch between table and basis arithmetic ---------------------

    fn n_units(&self) -> u64 {
        self.order - 1
    }

    fn add_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let n = self.n_units();
                let la = t.log[a as usize] as u64;
                let lb = t.log[b as usize] as u64;
                let diff = (lb + n - la) % n;
                match t.zech[diff as usize] {
                    NO_LOG => 0,
                    z => t.exp[((la + z as u64) % n) as usize],
                }
            }
            None => self.add_basis(a, b),
        }
    }

    fn neg_idx(&self, a: u32) -> u32 {
        if a == 0 || self.p == 2 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let n = self.n_units();
                t.exp[((t.log[a as usize] as u64 + n / 2) % n) as usize]
            }
            None => self.neg_basis(a),
        }
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = self.n_units();
                t.exp[((t.log[a as usize] as u64 + t.log[b as usize] as u64) % n) as usize]
            }
            None => self.mul_basis(a, b),
        }
    }

    fn pow_idx(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.n_units();
        match &self.tables {
            Some(t) => {
                let l = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
                t.exp[l]
            }
            None => {
                let r = e % n;
                self.pow_basis(a, if r == 0 { n } else { r })
            }
        }
    }

    fn inv_idx(&self, a: u32) -> u32 {
        debug_assert_ne!(a, 0);
        let n = self.n_units();
        match &self.tables {
            Some(t) => t.exp[((n - t.log[a as usize] as u64) % n) as usize],
            None => self.pow_basis(a, n - 1),
        }
    }
}

/// Scan monic degree-`k` polynomials over `F_p` by index of their lower
/// coefficients and return the first irreducible one.
fn find_modulus(p: u64, k: usize) -> Vec<u32> {
    let total = p.pow(k as u32);
    for idx in 0..total {
        let mut f: Vec<u64> = (0..k).map(|i| idx / p.pow(i as u32) % p).collect();
        if f[0] == 0 {
            continue;
        }
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An element of a [`Field`], stored as its index encoding.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    idx: u32,
}

impl<'f> FieldElement<'f> {
    pub fn field(&self) -> &'f Field {
        self.field
    }

    /// Index encoding `sum_i coeff_i p^i`.
    pub fn index(&self) -> u32 {
        self.idx
    }

    /// Coefficients in the polynomial basis, constant first, length `k`.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.idx)
    }

    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }

    pub fn is_one(&self) -> bool {
        self.idx == 1
    }

    fn check(&self, other: &FieldElement<'_>) -> Result<()> {
        self.field.check_same(other.field)
    }

    pub fn try_add(self, other: FieldElement<'f>) -> Result<Self> {
        self.check(&other)?;
        Ok(self.field.wrap(self.field.add_idx(self.idx, other.idx)))
    }

    pub fn try_sub(self, other: FieldElement<'f>) -> Result<Self> {
        self.check(&other)?;
        let neg = self.field.neg_idx(other.idx);
        Ok(self.field.wrap(self.field.add_idx(self.idx, neg)))
    }

    pub fn try_mul(self, other: FieldElement<'f>) -> Result<Self> {
        self.check(&other)?;
        Ok(self.field.wrap(self.field.mul_idx(self.idx, other.idx)))
    }

    pub fn inv(self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.field.wrap(self.field.inv_idx(self.idx)))
    }

    /// `self^e`, with the exponent reduced modulo `Q - 1` for nonzero bases.
    pub fn pow(self, e: u64) -> Self {
        self.field.wrap(self.field.pow_idx(self.idx, e))
    }

    /// Signed exponent; negative powers need a nonzero base.
    pub fn pow_signed(self, e: i64) -> Result<Self> {
        if e >= 0 {
            return Ok(self.pow(e as u64));
        }
        let base = self.inv()?;
        let n = self.field.n_units();
        Ok(base.pow((e.unsigned_abs()) % n))
    }

    /// `self^p`.
    pub fn frobenius(self) -> Self {
        self.pow(self.field.p as u64)
    }

    /// Least `e >= 1` with `self^e = 1`, found by stripping prime factors
    /// off `Q - 1`.
    pub fn mult_order(self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut e = self.field.n_units();
        for &(r, v) in self.field.unit_group.factors() {
            for _ in 0..v {
                if self.pow(e / r).is_one() {
                    e /= r;
                } else {
                    break;
                }
            }
        }
        Ok(e)
    }

    pub fn is_primitive(self) -> Result<bool> {
        Ok(self.mult_order()? == self.field.n_units())
    }

    /// Is `self = y^d` for some `y`? Tested as `self^{(Q-1)/gcd(d, Q-1)} = 1`.
    pub fn is_dth_power(self, d: u64) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        if d == 0 {
            return Err(Error::ZeroArgument);
        }
        let n = self.field.n_units();
        Ok(self.pow(n / d.gcd(&n)).is_one())
    }

    /// Discrete logarithm to the field's generator, from the table.
    pub fn discrete_log(self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        match &self.field.tables {
            Some(t) => Ok(t.log[self.idx as usize] as u64),
            None => Err(Error::MissingLogTable(self.field.label())),
        }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && self.field.same_as(other.field)
    }
}

impl Eq for FieldElement<'_> {}

impl Hash for FieldElement<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.field.p, self.field.k, self.idx).hash(state);
    }
}

impl PartialOrd for FieldElement<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Index order. Comparing elements of different fields orders by `(p, k)`.
impl Ord for FieldElement<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.p, self.field.k, self.idx).cmp(&(other.field.p, other.field.k, other.idx))
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.field.label(), self.idx)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'f> $trait for FieldElement<'f> {
            type Output = FieldElement<'f>;

            /// Panics if the operands come from different fields.
            fn $method(self, rhs: FieldElement<'f>) -> FieldElement<'f> {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<'f> Div for FieldElement<'f> {
    type Output = FieldElement<'f>;

    /// Panics on division by zero or mixed fields.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: FieldElement<'f>) -> FieldElement<'f> {
        let inv = rhs.inv().expect("division by zero in a finite field");
        self * inv
    }
}

impl<'f> Neg for FieldElement<'f> {
    type Output = FieldElement<'f>;

    fn neg(self) -> FieldElement<'f> {
        self.field.wrap(self.field.neg_idx(self.idx))
    }
}
