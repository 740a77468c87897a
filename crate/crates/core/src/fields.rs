//! Exact arithmetic in GF(p^k) over a fixed polynomial basis.
//!
//! An element is identified by its integer index `sum c_i p^i`, where `c_i`
//! is the coefficient of `x^i` in the polynomial basis (low degree first).
//! The prime subfield therefore occupies indices `0..p`, with `0` and `1`
//! the additive and multiplicative identities.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Raw element index inside a known field.
pub type Elem = u32;

/// Fields up to this order get precomputed addition and multiplication tables.
const TABLE_LIMIT: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("polynomial must be monic of degree {k}, got {got:?}")]
    BadPolynomial { k: u32, got: Vec<u32> },
    #[error("polynomial {0:?} is reducible over the prime field")]
    Reducible(Vec<u32>),
    #[error("no shipped field of order {0}")]
    UnknownOrder(u64),
    #[error("field order {0} is too large")]
    TooLarge(u64),
    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },
    #[error("frobenius power {i} out of range for degree {k}")]
    FrobeniusRange { i: u32, k: u32 },
    #[error("cannot parse field spec: {0}")]
    Parse(String),
}

/// The defining data of GF(p^k): prime, degree and a monic irreducible polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    poly: Vec<u32>,
}

/// Conventional defining polynomials, coefficients low degree first.
/// Prime fields use `x`; extensions use the Conway polynomials.
const SHIPPED: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (3, 1, &[0, 1]),
    (5, 1, &[0, 1]),
    (7, 1, &[0, 1]),
    (11, 1, &[0, 1]),
    (13, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Validates primality, monicity and irreducibility.
    pub fn new(p: u32, k: u32, poly: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if poly.len() != k as usize + 1 || poly[k as usize] != 1 || poly.iter().any(|&c| c >= p) {
            return Err(FieldError::BadPolynomial { k, got: poly });
        }
        if (p as u64).checked_pow(k).is_none_or(|q| q > u32::MAX as u64 / 2) {
            return Err(FieldError::TooLarge(p as u64));
        }
        if !poly::is_irreducible(p, &poly) {
            return Err(FieldError::Reducible(poly));
        }
        Ok(FieldSpec { p, k, poly })
    }

    /// The shipped field of order `q`.
    pub fn standard(q: u64) -> Result<Self, FieldError> {
        lookup(SHIPPED.iter().map(|(p, k, poly)| (*p, *k, poly.to_vec())), q)
    }

    /// Looks `q` up in a user table first, then in the shipped one.
    pub fn standard_with(q: u64, overrides: &[FieldSpec]) -> Result<Self, FieldError> {
        if let Some(s) = overrides.iter().find(|s| s.order() as u64 == q) {
            return Ok(s.clone());
        }
        Self::standard(q)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.k)
    }
}

fn lookup(table: impl Iterator<Item = (u32, u32, Vec<u32>)>, q: u64) -> Result<FieldSpec, FieldError> {
    for (p, k, poly) in table {
        if (p as u64).pow(k) == q {
            return FieldSpec::new(p, k, poly);
        }
    }
    Err(FieldError::UnknownOrder(q))
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly: Vec<String> = self.poly.iter().map(|c| c.to_string()).collect();
        write!(f, "field p={} k={} poly={}", self.p, self.k, poly.join(","))
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Parses `field p=<p> k=<k> poly=<c0,...,ck>`; the leading `field` is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = None;
        let mut k = None;
        let mut poly = None;
        for tok in s.split_whitespace() {
            if tok == "field" {
                continue;
            }
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| FieldError::Parse(format!("unexpected token `{tok}`")))?;
            let num = |v: &str| {
                v.parse::<u32>()
                    .map_err(|_| FieldError::Parse(format!("bad number `{v}`")))
            };
            match key {
                "p" => p = Some(num(val)?),
                "k" => k = Some(num(val)?),
                "poly" => {
                    poly = Some(val.split(',').map(num).collect::<Result<Vec<_>, _>>()?);
                }
                _ => return Err(FieldError::Parse(format!("unknown key `{key}`"))),
            }
        }
        let p = p.ok_or_else(|| FieldError::Parse("missing p".into()))?;
        let k = k.unwrap_or(1);
        match poly {
            Some(poly) => FieldSpec::new(p, k, poly),
            None => FieldSpec::standard((p as u64).pow(k)),
        }
    }
}

/// Dense polynomial helpers over the prime field GF(p).
mod poly {
    pub(super) fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub(super) fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
        let mut a = a.to_vec();
        let dm = m.len() - 1;
        while a.len() > dm && a.len() > 1 {
            let lead = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            if lead != 0 {
                for (i, &c) in m.iter().enumerate() {
                    let t = (lead as u64 * c as u64 % p as u64) as u32;
                    a[shift + i] = (a[shift + i] + p - t) % p;
                }
            }
            a.pop();
        }
        a
    }

    /// Exhaustive check that no monic polynomial of degree `1..=k/2` divides `f`.
    pub(super) fn is_irreducible(p: u32, f: &[u32]) -> bool {
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    g.push((t % p as u64) as u32);
                    t /= p as u64;
                }
                g.push(1);
                if trim(rem(p, f, &g)).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

struct FieldInner {
    spec: FieldSpec,
    q: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field with its arithmetic ready to use. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.spec.fmt(f)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let q = spec.order();
        let mut inner = FieldInner {
            spec,
            q,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let mut add = vec![0; q * q];
            let mut mul = vec![0; q * q];
            for a in 0..q {
                for b in a..q {
                    let s = slow_add(&inner.spec, a as Elem, b as Elem);
                    let m = slow_mul(&inner.spec, a as Elem, b as Elem);
                    add[a * q + b] = s;
                    add[b * q + a] = s;
                    mul[a * q + b] = m;
                    mul[b * q + a] = m;
                }
            }
            let mut neg = vec![0; q];
            let mut inv = vec![0; q];
            for a in 0..q {
                for b in 0..q {
                    if add[a * q + b] == 0 {
                        neg[a] = b as Elem;
                    }
                    if mul[a * q + b] == 1 {
                        inv[a] = b as Elem;
                    }
                }
            }
            inner.add = add;
            inner.mul = mul;
            inner.neg = neg;
            inner.inv = inv;
        }
        Field(Arc::new(inner))
    }

    /// The shipped field of order `q`.
    pub fn standard(q: u64) -> Result<Field, FieldError> {
        Ok(Field::new(FieldSpec::standard(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.k
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.add.is_empty() {
            slow_add(&self.0.spec, a, b)
        } else {
            self.0.add[a as usize * self.0.q + b as usize]
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.mul.is_empty() {
            slow_mul(&self.0.spec, a, b)
        } else {
            self.0.mul[a as usize * self.0.q + b as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.neg.is_empty() {
            let p = self.0.spec.p;
            let c: Vec<u32> = coeffs_of(&self.0.spec, a).iter().map(|&c| (p - c) % p).collect();
            index_of(&self.0.spec, &c)
        } else {
            self.0.neg[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if self.0.inv.is_empty() {
            // a^(q-2)
            Some(self.pow(a, self.0.q as u64 - 2))
        } else {
            Some(self.0.inv[a as usize])
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `e^(p^i)`, the i-th power of the Frobenius endomorphism.
    pub fn frobenius(&self, e: Elem, i: u32) -> Result<Elem, FieldError> {
        let k = self.degree();
        if i >= k {
            return Err(FieldError::FrobeniusRange { i, k });
        }
        let mut x = e;
        for _ in 0..i {
            x = self.pow(x, self.characteristic() as u64);
        }
        Ok(x)
    }

    /// Polynomial-basis coefficients of `a`, low degree first.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        coeffs_of(&self.0.spec, a)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Elem {
        index_of(&self.0.spec, c)
    }

    /// Embeds the prime-field residue `c mod p`.
    pub fn prime(&self, c: u64) -> Elem {
        (c % self.characteristic() as u64) as Elem
    }

    pub fn check(&self, a: u64) -> Result<Elem, FieldError> {
        if a < self.0.q as u64 {
            Ok(a as Elem)
        } else {
            Err(FieldError::ElementOutOfRange {
                index: a,
                order: self.0.q as u64,
            })
        }
    }
}

fn coeffs_of(spec: &FieldSpec, mut a: Elem) -> Vec<u32> {
    let mut c = Vec::with_capacity(spec.k as usize);
    for _ in 0..spec.k {
        c.push(a % spec.p);
        a /= spec.p;
    }
    c
}

fn index_of(spec: &FieldSpec, c: &[u32]) -> Elem {
    c.iter().rev().fold(0, |acc, &d| acc * spec.p + d)
}

fn slow_add(spec: &FieldSpec, a: Elem, b: Elem) -> Elem {
    let p = spec.p;
    let ca = coeffs_of(spec, a);
    let cb = coeffs_of(spec, b);
    let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
    index_of(spec, &s)
}

fn slow_mul(spec: &FieldSpec, a: Elem, b: Elem) -> Elem {
    let p = spec.p as u64;
    let ca = coeffs_of(spec, a);
    let cb = coeffs_of(spec, b);
    let mut prod = vec![0u32; ca.len() + cb.len() - 1];
    for (i, &x) in ca.iter().enumerate() {
        for (j, &y) in cb.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
        }
    }
    let mut r = poly::rem(spec.p, &prod, &spec.poly);
    r.resize(spec.k as usize, 0);
    index_of(spec, &r)
}

/// An element bundled with its field, for checked arithmetic across API boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    /// Integer power; negative exponents invert first.
    Pow(i64),
}

impl FieldElement {
    pub fn new(field: &Field, index: u64) -> Result<Self, FieldError> {
        Ok(FieldElement {
            value: field.check(index)?,
            field: field.clone(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }
}

/// One arithmetic operation on elements of the same field.
/// Unary operations ignore `b`.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    if a.field != b.field {
        return Err(FieldError::FieldMismatch(a.field.to_string(), b.field.to_string()));
    }
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Neg => f.neg(a.value),
        ArithOp::Inv => f.inv(a.value).ok_or(FieldError::DivisionByZero)?,
        ArithOp::Pow(e) if e >= 0 => f.pow(a.value, e as u64),
        ArithOp::Pow(e) => {
            let inv = f.inv(a.value).ok_or(FieldError::DivisionByZero)?;
            f.pow(inv, e.unsigned_abs())
        }
    };
    Ok(FieldElement {
        field: f.clone(),
        value,
    })
}

/// `e^(p^i)`.
pub fn frobenius(e: &FieldElement, i: u32) -> Result<FieldElement, FieldError> {
    Ok(FieldElement {
        field: e.field.clone(),
        value: e.field.frobenius(e.value, i)?,
    })
}

/// A unital ring homomorphism between finite fields, fully tabulated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldHom {
    src: Field,
    dst: Field,
    table: Vec<Elem>,
}

impl fmt::Debug for FieldHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldHom({:?}->{:?}, {:?})", self.src, self.dst, self.table)
    }
}

impl FieldHom {
    pub fn identity(field: &Field) -> FieldHom {
        FieldHom {
            src: field.clone(),
            dst: field.clone(),
            table: field.elements().collect(),
        }
    }

    /// Builds a hom from an explicit table, checking the ring-hom laws.
    pub fn from_table(src: &Field, dst: &Field, table: Vec<Elem>) -> Option<FieldHom> {
        let h = FieldHom {
            src: src.clone(),
            dst: dst.clone(),
            table,
        };
        if h.table.len() == src.order() && h.table.iter().all(|&v| (v as usize) < dst.order()) && h.is_homomorphism() {
            Some(h)
        } else {
            None
        }
    }

    pub fn src(&self) -> &Field {
        &self.src
    }

    pub fn dst(&self) -> &Field {
        &self.dst
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a as usize]
    }

    pub fn is_surjective(&self) -> bool {
        self.src.order() == self.dst.order()
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.table.iter().enumerate().all(|(i, &v)| i as Elem == v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FieldHom) -> Option<FieldHom> {
        if self.dst != other.src {
            return None;
        }
        Some(FieldHom {
            src: self.src.clone(),
            dst: other.dst.clone(),
            table: self.table.iter().map(|&a| other.apply(a)).collect(),
        })
    }

    /// Full-table check of `h(1)=1`, additivity, multiplicativity and injectivity.
    pub fn is_homomorphism(&self) -> bool {
        let (s, d) = (&self.src, &self.dst);
        if self.apply(1) != 1 {
            return false;
        }
        for a in s.elements() {
            for b in s.elements() {
                if self.apply(s.add(a, b)) != d.add(self.apply(a), self.apply(b)) {
                    return false;
                }
                if self.apply(s.mul(a, b)) != d.mul(self.apply(a), self.apply(b)) {
                    return false;
                }
            }
        }
        let mut seen = vec![false; d.order()];
        self.table
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }
}

/// All unital ring homomorphisms `src -> dst`, one per root of the defining
/// polynomial of `src` in `dst`, ordered by root index.
pub fn enumerate_field_homs(src: &Field, dst: &Field) -> Vec<FieldHom> {
    if src.characteristic() != dst.characteristic() {
        return Vec::new();
    }
    let poly = src.spec().poly().to_vec();
    let eval = |r: Elem| {
        poly.iter()
            .rev()
            .fold(0, |acc, &c| dst.add(dst.mul(acc, r), dst.prime(c as u64)))
    };
    let mut homs = Vec::new();
    for r in dst.elements() {
        if eval(r) != 0 {
            continue;
        }
        let table = src
            .elements()
            .map(|a| {
                src.coeffs(a).iter().enumerate().fold(0, |acc, (i, &c)| {
                    dst.add(acc, dst.mul(dst.prime(c as u64), dst.pow(r, i as u64)))
                })
            })
            .collect();
        let h = FieldHom {
            src: src.clone(),
            dst: dst.clone(),
            table,
        };
        assert!(h.is_homomorphism(), "root-induced map failed the ring-hom laws");
        homs.push(h);
    }
    homs
}
