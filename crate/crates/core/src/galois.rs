//! Arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as indices `0..q` of their coefficient vectors
//! `c_0 + c_1 t + ... + c_{m-1} t^{m-1}`, read base `p` with `c_0` as the
//! least significant digit. Multiplication goes through log/antilog tables
//! built from a distinguished primitive element `g`; addition uses a
//! precomputed `q x q` table (or XOR in characteristic 2).

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1024;

/// Frozen table of primitive moduli `(p, m, coefficients low -> high)` for
/// every supported extension degree `m >= 2`.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[2, 1, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (5, 2, &[2, 1, 1]),
    (5, 3, &[2, 3, 0, 1]),
    (5, 4, &[2, 2, 1, 0, 1]),
    (7, 2, &[3, 1, 1]),
    (7, 3, &[2, 3, 0, 1]),
    (11, 2, &[7, 1, 1]),
    (13, 2, &[2, 1, 1]),
    (17, 2, &[3, 1, 1]),
    (19, 2, &[2, 1, 1]),
    (23, 2, &[7, 1, 1]),
    (29, 2, &[3, 1, 1]),
    (31, 2, &[12, 1, 1]),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{m} is outside the supported range 2..=1024")]
    OutOfRange { p: u32, m: u32 },
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus coefficient {0} is not reduced mod p")]
    BadCoefficient(u32),
    #[error("modulus is reducible over GF({0})")]
    Reducible(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroNegativePower,
    #[error("element index {index} is not in GF({q})")]
    NotInField { index: u32, q: u32 },
    #[error("operands belong to different fields")]
    MixedFields,
}

/// An element of some field, identified by its canonical index.
///
/// The index alone does not carry the field; arithmetic goes through a
/// [`Field`]. [`FieldValue`] pairs the two when mixed-field checks matter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// How coordinate-wise addition is realized in the search kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddKind {
    /// Characteristic 2: addition is XOR of indices.
    Xor,
    /// Prime field: addition is integer addition mod p.
    ModP(u16),
    /// General extension field of odd characteristic: table lookup.
    Table,
}

struct FieldTables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<FieldElement>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
    add: Vec<FieldElement>,
    neg: Vec<FieldElement>,
    add_kind: AddKind,
}

/// A validated finite field GF(p^m) with its lookup tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field(Arc<FieldTables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.0.p)
            .field("m", &self.0.m)
            .field("modulus", &self.0.modulus)
            .field("generator", &self.0.generator)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p).
/// Coefficient lists are low -> high.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for deg in 1..=m / 2 {
        // every monic polynomial of this degree
        let count = (p as usize).pow(deg as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(deg + 1);
            let mut rest = idx;
            for _ in 0..deg {
                div.push((rest % p as usize) as u32);
                rest /= p as usize;
            }
            div.push(1);
            if poly_rem(modulus, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(index: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut rest = index;
    for _ in 0..m {
        out.push(rest % p);
        rest /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues by schoolbook multiplication and reduction.
fn naive_mul(a: u32, b: u32, modulus: &[u32], p: u32, m: u32) -> u32 {
    let da = digits(a, p, m);
    let db = digits(b, p, m);
    let mut prod = vec![0u32; 2 * m as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(m as usize, 0);
    undigits(&r, p)
}

fn multiplicative_order(a: u32, modulus: &[u32], p: u32, m: u32, q: u32) -> u32 {
    let mut x = a;
    let mut order = 1;
    while x != 1 {
        x = naive_mul(x, a, modulus, p, m);
        order += 1;
        if order > q {
            return 0;
        }
    }
    order
}

impl Field {
    /// Builds GF(p^m), using the built-in primitive modulus when `modulus`
    /// is `None`. At `m = 1` the modulus is ignored.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_FIELD_SIZE as u64);
        let q = q.ok_or(FieldError::OutOfRange { p, m })? as u32;

        let modulus: Vec<u32> = if m == 1 {
            // t - g for the smallest primitive root g, so that t == g
            let g = (1..p)
                .find(|&g| multiplicative_order(g, &[0, 1], p, 1, q) == q - 1 || p == 2)
                .unwrap_or(1);
            vec![(p - g) % p, 1]
        } else {
            match modulus {
                Some(c) => {
                    if c.len() != m as usize + 1 || c[m as usize] != 1 {
                        return Err(FieldError::BadModulus { expected: m });
                    }
                    if let Some(&bad) = c.iter().find(|&&x| x >= p) {
                        return Err(FieldError::BadCoefficient(bad));
                    }
                    if !is_irreducible(c, p) {
                        return Err(FieldError::Reducible(p));
                    }
                    c.to_vec()
                }
                None => DEFAULT_MODULI
                    .iter()
                    .find(|(pp, mm, _)| *pp == p && *mm == m)
                    .map(|(_, _, c)| c.to_vec())
                    .ok_or(FieldError::OutOfRange { p, m })?,
            }
        };

        // the class of t, if it generates; otherwise the smallest generator
        let t = if m == 1 { (p - modulus[0]) % p } else { p };
        let generator = if q == 2 {
            1
        } else if multiplicative_order(t, &modulus, p, m, q) == q - 1 {
            t
        } else {
            (2..q)
                .find(|&a| multiplicative_order(a, &modulus, p, m, q) == q - 1)
                .expect("unit group of a finite field is cyclic")
        };

        let units = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * units);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..units {
            exp.push(FieldElement(x as u16));
            log[x as usize] = i as u32;
            x = naive_mul(x, generator, &modulus, p, m);
        }
        for i in 0..units {
            exp.push(exp[i]);
        }

        let qs = q as usize;
        let mut add = vec![FieldElement::ZERO; qs * qs];
        let mut neg = vec![FieldElement::ZERO; qs];
        let all: Vec<Vec<u32>> = (0..q).map(|a| digits(a, p, m)).collect();
        for (a, da) in all.iter().enumerate() {
            let na: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a] = FieldElement(undigits(&na, p) as u16);
            for (b, db) in all.iter().enumerate() {
                let s = da.iter().zip(db).rev().fold(0, |acc, (&x, &y)| {
                    let c = x + y;
                    acc * p + if c >= p { c - p } else { c }
                });
                add[a * qs + b] = FieldElement(s as u16);
            }
        }
        let add_kind = if p == 2 {
            AddKind::Xor
        } else if m == 1 {
            AddKind::ModP(p as u16)
        } else {
            AddKind::Table
        };

        Ok(Field(Arc::new(FieldTables {
            p,
            m,
            q,
            modulus,
            generator: FieldElement(generator as u16),
            exp,
            log,
            add,
            neg,
            add_kind,
        })))
    }

    /// GF(q) with the default modulus, for a prime power `q`.
    pub fn with_order(q: u32) -> Result<Field, FieldError> {
        let p = (2..=q.max(2)).find(|&d| q.is_multiple_of(d)).unwrap_or(q);
        let mut m = 0;
        let mut rest = q;
        while rest > 1 && rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrime(q));
        }
        Field::new(p, m, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The distinguished primitive element `g`.
    pub fn primitive(&self) -> FieldElement {
        self.0.generator
    }

    pub fn add_kind(&self) -> AddKind {
        self.0.add_kind
    }

    /// Row-major `q x q` addition table.
    pub fn add_table(&self) -> &[FieldElement] {
        &self.0.add
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index < self.0.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(FieldError::NotInField { index, q: self.0.q })
        }
    }

    /// Coefficient vector (low -> high) of an element.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        digits(a.index(), self.0.p, self.0.m)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.0.neg[a.0 as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let t = &self.0;
        t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let t = &self.0;
        let l = t.log[a.0 as usize];
        Ok(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents go through the inverse.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return match e {
                0 => Ok(FieldElement::ONE),
                e if e > 0 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::ZeroNegativePower),
            };
        }
        let order = (self.0.q - 1) as i64;
        let l = self.0.log[a.0 as usize] as i64;
        Ok(self.exp(l * e.rem_euclid(order)))
    }

    /// `g^k` for any integer `k`.
    #[inline]
    pub fn exp(&self, k: i64) -> FieldElement {
        let order = (self.0.q - 1) as i64;
        self.0.exp[k.rem_euclid(order) as usize]
    }

    /// Discrete logarithm base `g`; `None` for zero.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.0.log[a.0 as usize])
        }
    }

    /// Nonzero elements in the order `g^0, g^1, ..., g^(q-2)`.
    pub fn units(&self) -> Vec<FieldElement> {
        self.0.exp[..(self.0.q - 1) as usize].to_vec()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(|i| FieldElement(i as u16))
    }

    /// Range-checked binary operation.
    pub fn apply(&self, op: ArithOp, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        for x in [a, b] {
            self.element(x.index())?;
        }
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    pub fn value(&self, index: u32) -> Result<FieldValue, FieldError> {
        Ok(FieldValue {
            field: self.clone(),
            elem: self.element(index)?,
        })
    }

    /// Inner product of two equal-length vectors.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter()
            .zip(b)
            .fold(FieldElement::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

/// An element bound to its field, for checked arithmetic across values
/// whose origin is not statically known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldValue {
    pub field: Field,
    pub elem: FieldElement,
}

impl FieldValue {
    pub fn apply(&self, op: ArithOp, other: &FieldValue) -> Result<FieldValue, FieldError> {
        if self.field != other.field {
            return Err(FieldError::MixedFields);
        }
        Ok(FieldValue {
            field: self.field.clone(),
            elem: self.field.apply(op, self.elem, other.elem)?,
        })
    }

    pub fn pow(&self, e: i64) -> Result<FieldValue, FieldError> {
        Ok(FieldValue {
            field: self.field.clone(),
            elem: self.field.pow(self.elem, e)?,
        })
    }
}
