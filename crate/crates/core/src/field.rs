//! Finite fields `GF(p^m)`.
//!
//! An element is stored as the packed index `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! of its coefficient vector in the basis `1, t, ..., t^{m-1}`, where `t` is a
//! root of the field's modulus. Every ordering in the crate ("least element",
//! sorted element lists, the default modulus) is the numeric order of this index.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

const LOG_TABLE_LIMIT: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u64 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds 2^32")]
    TooLarge { p: u64, m: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element index {index} is not below the field order {q}")]
    ForeignElement { index: u64, q: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("coefficient {value} is not reduced modulo {p}")]
    BadCoefficient { value: u64, p: u64 },
}

/// Characteristic, degree and defining polynomial of a field.
///
/// `modulus` lists the coefficients of a monic irreducible polynomial of
/// degree `m`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    /// Checks primality, size, shape and irreducibility.
    pub fn validate(&self) -> Result<(), FieldError> {
        check_params(self.p as u64, self.m)?;
        let p = self.p as u64;
        if self.modulus.len() != self.m as usize + 1 {
            return Err(FieldError::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                self.m + 1,
                self.modulus.len()
            )));
        }
        if let Some(&c) = self.modulus.iter().find(|&&c| c as u64 >= p) {
            return Err(FieldError::BadCoefficient { value: c as u64, p });
        }
        if *self.modulus.last().unwrap() != 1 {
            return Err(FieldError::InvalidModulus("polynomial is not monic".into()));
        }
        let f: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        if !poly::is_irreducible(&f, p) {
            return Err(FieldError::InvalidModulus("polynomial is reducible".into()));
        }
        Ok(())
    }
}

/// Field element as a packed coefficient index. Only meaningful together with
/// the [`Field`] that produced it; serializes as the bare index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A finite field with its arithmetic tables. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    spec: FieldSpec,
    p: u32,
    m: u32,
    q: u64,
    pow_p: Vec<u64>,
    modulus: Vec<u64>,
    logs: Option<LogTables>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
    primitive: u32,
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_params(p: u64, m: u32) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.saturating_mul(p);
        if q > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge { p, m });
        }
    }
    Ok(())
}

/// Distinct prime divisors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The least monic irreducible polynomial of degree `m` over `GF(p)`.
pub fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>, FieldError> {
    check_params(p as u64, m)?;
    let p = p as u64;
    let count = p.pow(m);
    for idx in 0..count {
        let mut f = poly::digits(idx, p, m as usize);
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return Ok(f.into_iter().map(|c| c as u32).collect());
        }
    }
    Err(FieldError::InvalidModulus("no irreducible polynomial found".into()))
}

impl Field {
    /// Builds `GF(p^m)` with the default modulus.
    pub fn new(p: u32, m: u32) -> Result<Field, FieldError> {
        let modulus = default_modulus(p, m)?;
        Field::from_spec(FieldSpec { p, m, modulus })
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field, FieldError> {
        spec.validate()?;
        let p = spec.p;
        let m = spec.m;
        let q = spec.order();
        let pow_p: Vec<u64> = (0..=m).map(|i| (p as u64).pow(i)).collect();
        let modulus: Vec<u64> = spec.modulus.iter().map(|&c| c as u64).collect();
        let mut inner = Inner {
            spec,
            p,
            m,
            q,
            pow_p,
            modulus,
            logs: None,
            add_table: None,
            neg_table: Vec::new(),
            primitive: 0,
        };
        inner.primitive = inner.find_primitive();
        if q <= LOG_TABLE_LIMIT {
            inner.logs = Some(inner.build_logs());
        }
        if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = inner.add_digits(a as u32, b as u32);
                }
            }
            inner.add_table = Some(t);
        }
        if q <= LOG_TABLE_LIMIT {
            inner.neg_table = (0..q).map(|a| inner.neg_digits(a as u32)).collect();
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The element with packed index `index`.
    pub fn element(&self, index: u64) -> Result<FieldElement, FieldError> {
        if index >= self.0.q {
            return Err(FieldError::ForeignElement { index, q: self.0.q });
        }
        Ok(FieldElement(index as u32))
    }

    pub fn check(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.element(a.0 as u64)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The root `t` of the modulus; `1` for prime fields.
    pub fn generator(&self) -> FieldElement {
        if self.0.m == 1 {
            FieldElement::ONE
        } else {
            FieldElement(self.0.p)
        }
    }

    /// `1, t, ..., t^{m-1}`, a basis over the prime field.
    pub fn prime_basis(&self) -> Vec<FieldElement> {
        if self.0.m == 1 {
            return vec![FieldElement::ONE];
        }
        (0..self.0.m as usize).map(|i| FieldElement(self.0.pow_p[i] as u32)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(|i| FieldElement(i as u32))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.0.q).map(|i| FieldElement(i as u32))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        poly::digits(a.0 as u64, self.0.p as u64, self.0.m as usize)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.0.m as usize {
            return Err(FieldError::BadLength { got: coeffs.len(), expected: self.0.m as usize });
        }
        let p = self.0.p as u64;
        let mut idx = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c as u64 >= p {
                return Err(FieldError::BadCoefficient { value: c as u64, p });
            }
            idx += c as u64 * self.0.pow_p[i];
        }
        Ok(FieldElement(idx as u32))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.add_table {
            Some(t) => FieldElement(t[(a.0 as u64 * self.0.q + b.0 as u64) as usize]),
            None => FieldElement(self.0.add_digits(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.0.neg_table.is_empty() {
            FieldElement(self.0.neg_digits(a.0))
        } else {
            FieldElement(self.0.neg_table[a.0 as usize])
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.0.logs {
            Some(t) => {
                FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
            }
            None => FieldElement(self.0.mul_poly(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match &self.0.logs {
            Some(t) => {
                let l = t.log[a.0 as usize];
                let qm1 = (self.0.q - 1) as u32;
                FieldElement(t.exp[((qm1 - l) % qm1) as usize])
            }
            None => self.pow_u(a, self.0.q - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked arithmetic on possibly untrusted operands.
    pub fn arith(
        &self,
        op: ArithOp,
        a: FieldElement,
        b: FieldElement,
    ) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    fn pow_u(&self, a: FieldElement, mut e: u64) -> FieldElement {
        if let (Some(t), false) = (&self.0.logs, a.is_zero()) {
            let qm1 = self.0.q - 1;
            let l = (t.log[a.0 as usize] as u64 * (e % qm1)) % qm1;
            return FieldElement(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e`; negative exponents invert first.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            return Ok(self.pow_u(a, e as u64));
        }
        let inv = self.inv(a)?;
        Ok(self.pow_u(inv, e.unsigned_abs()))
    }

    /// `a^{p^k}`; `k` is read modulo `m`.
    pub fn frobenius(&self, a: FieldElement, k: i64) -> FieldElement {
        let k = k.rem_euclid(self.0.m as i64) as usize;
        if k == 0 || a.is_zero() {
            return a;
        }
        let e = self.0.pow_p[k] % (self.0.q - 1);
        self.pow_u(a, e)
    }

    /// Least element (by packed index) of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.0.primitive)
    }

    pub fn mult_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.0.q - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord % r == 0 && self.pow_u(a, ord / r) == FieldElement::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    pub fn is_prime_subfield(&self, a: FieldElement) -> bool {
        (a.0 as u64) < self.0.p as u64
    }

    /// `sum a_i b_i`.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn format(&self, a: FieldElement) -> String {
        let c = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            terms.push(format!("{coef}{var}"));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl Inner {
    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        for i in 0..self.m as usize {
            out += ((a % p + b % p) % p) * self.pow_p[i];
            a /= p;
            b /= p;
        }
        out as u32
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let p = self.p as u64;
        let mut a = a as u64;
        let mut out = 0u64;
        for i in 0..self.m as usize {
            out += ((p - a % p) % p) * self.pow_p[i];
            a /= p;
        }
        out as u32
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = poly::digits(a as u64, p, m);
        let db = poly::digits(b as u64, p, m);
        let prod = poly::mul(&da, &db, p);
        let r = poly::rem(&prod, &self.modulus, p);
        let mut idx = 0u64;
        for (i, &c) in r.iter().enumerate().take(m) {
            idx += c * self.pow_p[i];
        }
        idx as u32
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_primitive(&self) -> u32 {
        let n = self.q - 1;
        if n == 1 {
            return 1;
        }
        let factors = prime_factors(n);
        (1..self.q)
            .map(|g| g as u32)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_logs(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = self.mul_poly(x, self.primitive);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { exp, log }
    }
}

/// Polynomials over `GF(p)` as coefficient vectors, constant term first.
pub(crate) mod poly {
    pub fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(n % p);
            n /= p;
        }
        out
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut f = f.to_vec();
        trim(&mut f);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        while r.len() > df {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            for i in 0..=df {
                let k = dr - df + i;
                r[k] = (r[k] + p - c * f[i] % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), f, p);
            }
            b = rem(&mul(&b, &b, p), f, p);
            e >>= 1;
        }
        acc
    }

    /// `x^{p^k} mod f`.
    fn frob_x(k: usize, f: &[u64], p: u64) -> Vec<u64> {
        let mut h = rem(&[0, 1], f, p);
        for _ in 0..k {
            h = powmod(&h, p, f, p);
        }
        h
    }

    /// Rabin's test for a monic polynomial of degree at least 1.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let mut f = f.to_vec();
        trim(&mut f);
        if f.len() < 2 {
            return false;
        }
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        if !sub(&frob_x(n, &f, p), &x, p).is_empty() {
            return false;
        }
        for r in super::prime_factors(n as u64) {
            let h = sub(&frob_x(n / r as usize, &f, p), &x, p);
            let g = gcd(&f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
