//! Arithmetic in the small finite fields GF(p^k), p in {2, 3, 5, 7}, k in {1, 2}.
//!
//! Elements are stored as a single byte: the polynomial `c0 + c1*w` is encoded
//! as `c0 + c1*p`. All four operations go through precomputed tables, so a
//! [`FieldCtx`] is immutable once built and can be shared freely.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub mod linalg;

pub use linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not a supported prime (expected 2, 3, 5 or 7)")]
    NotPrime(u32),
    #[error("extension degree {0} is not supported (expected 1 or 2)")]
    UnsupportedDegree(u32),
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands belong to GF({0}) and GF({1})")]
    ContextMismatch(usize, usize),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

/// Identifies a field up to equality: two contexts with the same `(p, k)`
/// are the same field because the modulus choice is deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    pub p: u8,
    pub k: u8,
}

/// An element tagged with the field it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    field: FieldId,
    value: u8,
}

impl FieldElem {
    pub fn field(&self) -> FieldId {
        self.field
    }

    /// Raw table index; `0` is zero and `1` is one in every field.
    pub fn raw(&self) -> u8 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Residues `c0, c1, ...` of the polynomial representation.
    pub fn coeffs(&self) -> Vec<u8> {
        let p = self.field.p;
        let mut v = self.value;
        (0..self.field.k)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }
}

#[derive(Clone)]
pub struct FieldCtx {
    id: FieldId,
    order: usize,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.name())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FieldCtx {}

const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Builds GF(p^k). For `k = 2` the modulus is the lexicographically smallest
/// monic irreducible quadratic `x^2 + c1 x + c0`, ordered by `(c1, c0)`.
pub fn make_field(p: u32, k: u32) -> Result<Arc<FieldCtx>, FieldError> {
    FieldCtx::new(p, k).map(Arc::new)
}

impl FieldCtx {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(FieldError::NotPrime(p));
        }
        if k != 1 && k != 2 {
            return Err(FieldError::UnsupportedDegree(k));
        }
        let pu = p as usize;
        let order = pu.pow(k);
        debug_assert!(order <= 256);
        let modulus = if k == 1 { Vec::new() } else { smallest_irreducible_quadratic(p as u8) };

        let mut add = vec![0u8; order * order];
        let mut mul = vec![0u8; order * order];
        for a in 0..order {
            for b in 0..order {
                add[a * order + b] = poly_add(a, b, pu, k as usize) as u8;
                mul[a * order + b] = poly_mul(a, b, pu, &modulus) as u8;
            }
        }
        let mut neg = vec![0u8; order];
        let mut inv = vec![0u8; order];
        for a in 0..order {
            neg[a] = (0..order).find(|&b| add[a * order + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..order).find(|&b| mul[a * order + b] == 1).unwrap() as u8;
            }
        }
        Ok(FieldCtx { id: FieldId { p: p as u8, k: k as u8 }, order, modulus, add, mul, neg, inv })
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn p(&self) -> u32 {
        self.id.p as u32
    }

    pub fn k(&self) -> u32 {
        self.id.k as u32
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficients `[c0, c1]` of the monic modulus `x^2 + c1 x + c0`; empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn name(&self) -> String {
        format!("GF({})", self.order)
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// The class of `x` in `GF(p)[x]/(modulus)`. Only meaningful for `k = 2`.
    pub fn generator(&self) -> FieldElem {
        if self.id.k == 1 {
            self.one()
        } else {
            self.wrap(self.id.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(|v| self.wrap(v as u8))
    }

    pub fn wrap(&self, raw: u8) -> FieldElem {
        debug_assert!((raw as usize) < self.order);
        FieldElem { field: self.id, value: raw }
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElem {
        let p = self.id.p as i64;
        let mut v = 0i64;
        for (i, c) in coeffs.iter().enumerate().take(self.id.k as usize) {
            v += c.rem_euclid(p) * p.pow(i as u32);
        }
        self.wrap(v as u8)
    }

    /// Canonical image of an integer.
    pub fn lift_integer(&self, z: i64) -> FieldElem {
        self.wrap(self.lift_raw(z))
    }

    pub(crate) fn lift_raw(&self, z: i64) -> u8 {
        z.rem_euclid(self.id.p as i64) as u8
    }

    fn check(&self, a: FieldElem) -> Result<u8, FieldError> {
        if a.field != self.id {
            let other = (a.field.p as usize).pow(a.field.k as u32);
            return Err(FieldError::ContextMismatch(self.order, other));
        }
        Ok(a.value)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.add_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.sub_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.mul_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.neg_raw(self.check(a)?)))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.wrap(self.inv_raw(a)))
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u8, b: u8) -> u8 {
        self.add_raw(a, self.neg[b as usize])
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Panics on zero; callers check first.
    #[inline]
    pub(crate) fn inv_raw(&self, a: u8) -> u8 {
        assert!(a != 0, "inversion of zero");
        self.inv[a as usize]
    }

    /// `(-1)^e` for a parity exponent.
    #[inline]
    pub(crate) fn sign_raw(&self, odd: bool) -> u8 {
        if odd {
            self.neg_raw(1)
        } else {
            1
        }
    }

    pub fn format(&self, a: FieldElem) -> String {
        self.format_raw(a.value)
    }

    /// `k = 1`: decimal residue. `k = 2`: `a*w+b` with `w` the generator.
    pub fn format_raw(&self, raw: u8) -> String {
        let p = self.id.p;
        if self.id.k == 1 {
            raw.to_string()
        } else {
            format!("{}*w+{}", raw / p, raw % p)
        }
    }

    /// Accepts signed integers and `c*w+d` with either part optional (`w`, `w+1`, `2*w`).
    pub fn parse(&self, text: &str) -> Result<FieldElem, FieldError> {
        let t = text.trim();
        let err = || FieldError::Parse(text.to_string());
        if let Ok(z) = t.parse::<i64>() {
            return Ok(self.lift_integer(z));
        }
        if self.id.k < 2 {
            return Err(err());
        }
        let (lin, cst) = t.split_once('+').unwrap_or((t, "0"));
        let lin = lin.trim();
        let a: i64 =
            if lin == "w" { 1 } else { lin.strip_suffix("*w").ok_or_else(err)?.trim().parse().map_err(|_| err())? };
        let b: i64 = cst.trim().parse().map_err(|_| err())?;
        Ok(self.from_coeffs(&[b, a]))
    }
}

fn poly_add(a: usize, b: usize, p: usize, k: usize) -> usize {
    let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..k {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn poly_mul(a: usize, b: usize, p: usize, modulus: &[u8]) -> usize {
    if modulus.is_empty() {
        return a * b % p;
    }
    let (a0, a1) = (a % p, a / p);
    let (b0, b1) = (b % p, b / p);
    // (a0 + a1 x)(b0 + b1 x) with x^2 = -c1 x - c0
    let c0 = modulus[0] as usize;
    let c1 = modulus[1] as usize;
    let x2 = a1 * b1 % p;
    let lo = (a0 * b0 + x2 * (p - c0)) % p;
    let hi = (a0 * b1 + a1 * b0 + x2 * (p - c1)) % p;
    lo + hi * p
}

fn smallest_irreducible_quadratic(p: u8) -> Vec<u8> {
    for c1 in 0..p {
        for c0 in 0..p {
            let has_root = (0..p).any(|x| {
                let (x, c0, c1, p) = (x as u32, c0 as u32, c1 as u32, p as u32);
                (x * x + c1 * x + c0) % p == 0
            });
            if !has_root {
                return vec![c0, c1];
            }
        }
    }
    unreachable!("every prime admits an irreducible quadratic")
}
