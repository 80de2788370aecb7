//! Finite field towers.
//!
//! A [`FieldCtx`] is either a prime field `F_p` or a simple extension of
//! another context by a monic irreducible modulus. Elements are packed into
//! a single `u64`: an element `c_0 + c_1 u + ... + c_{k-1} u^{k-1}` of a
//! degree-`k` layer over a base of cardinality `Q_b` is stored as
//! `c_0 + c_1 Q_b + ... + c_{k-1} Q_b^{k-1}`, each `c_i` being the packed
//! encoding of a base element. The packing nests, so the base-`|F|` digits
//! of a packed value are its coordinates over any lower layer `F`, and the
//! inclusion of a lower layer is the identity on packed values.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest supported field cardinality.
pub const CARDINALITY_CAP: u64 = 1 << 40;

/// Fields up to this size get discrete log tables.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

struct Inner {
    p: u64,
    base: Option<FieldCtx>,
    degree: usize,
    modulus: Vec<u64>,
    order: u64,
    tables: Option<LogTables>,
}

struct LogTables {
    log: Vec<u32>,
    // doubled so that log a + log b never needs a reduction
    exp: Vec<u32>,
}

impl FieldCtx {
    /// The prime field `F_p`, carrying the marker modulus `x`.
    pub fn prime(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > CARDINALITY_CAP {
            return Err(Error::CardinalityOverflow);
        }
        Ok(Self::finish(Inner {
            p,
            base: None,
            degree: 1,
            modulus: vec![0, 1],
            order: p,
            tables: None,
        }))
    }

    /// `F_{p^m}` as a single extension of `F_p`, modulus chosen by seeded search.
    pub fn make(p: u64, m: usize, seed: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument("extension degree m must be at least 1".into()));
        }
        Self::prime(p)?.extend(m, seed)
    }

    /// Degree-`k` tower step over `self`. Candidates are drawn from a
    /// ChaCha stream seeded by `seed`; the first irreducible one is kept.
    pub fn extend(&self, k: usize, seed: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("extension degree k must be at least 1".into()));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        self.checked_extension_order(k)?;
        let qb = self.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut modulus: Vec<u64> = (0..k).map(|_| rng.gen_range(0..qb)).collect();
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            if Poly::from_raw(self.clone(), modulus.clone()).is_irreducible_unchecked() {
                return self.build_extension(modulus);
            }
        }
    }

    /// Extension by an explicit monic modulus (constant term first, leading 1 included).
    pub fn with_modulus(&self, modulus: &[u64]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::InvalidArgument("modulus must have degree at least 1".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::NotMonic);
        }
        if modulus.iter().any(|&c| c >= self.order()) {
            return Err(Error::InvalidArgument("modulus coefficient outside the base field".into()));
        }
        self.checked_extension_order(modulus.len() - 1)?;
        if !Poly::from_raw(self.clone(), modulus.to_vec()).is_irreducible_unchecked() {
            return Err(Error::ReducibleModulus);
        }
        self.build_extension(modulus.to_vec())
    }

    fn checked_extension_order(&self, k: usize) -> Result<u64> {
        let k = u32::try_from(k).map_err(|_| Error::CardinalityOverflow)?;
        match self.order().checked_pow(k) {
            Some(q) if q <= CARDINALITY_CAP => Ok(q),
            _ => Err(Error::CardinalityOverflow),
        }
    }

    fn build_extension(&self, modulus: Vec<u64>) -> Result<Self> {
        let degree = modulus.len() - 1;
        let order = self.checked_extension_order(degree)?;
        Ok(Self::finish(Inner {
            p: self.characteristic(),
            base: Some(self.clone()),
            degree,
            modulus,
            order,
            tables: None,
        }))
    }

    fn finish(inner: Inner) -> Self {
        let ctx = FieldCtx(Arc::new(inner));
        if ctx.order() > TABLE_LIMIT || ctx.order() < 3 {
            return ctx;
        }
        let tables = ctx.build_tables();
        let Inner { p, base, degree, modulus, order, .. } =
            Arc::try_unwrap(ctx.0).ok().expect("fresh context is uniquely owned");
        FieldCtx(Arc::new(Inner { p, base, degree, modulus, order, tables: Some(tables) }))
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order();
        let g = self.primitive_element();
        let n = (q - 1) as usize;
        let mut log = vec![0u32; q as usize];
        let mut exp = vec![0u32; 2 * n];
        let mut x = 1u64;
        for i in 0..n {
            exp[i] = x as u32;
            exp[i + n] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul(x, g);
        }
        LogTables { log, exp }
    }

    /// Smallest packed value generating the multiplicative group.
    pub fn primitive_element(&self) -> u64 {
        let q = self.order();
        if q == 2 {
            return 1;
        }
        let primes = arith::prime_divisors((q - 1) as u128);
        (2..q)
            .find(|&g| primes.iter().all(|&r| self.pow(g, (q as u128 - 1) / r) != 1))
            .expect("a finite field has a primitive element")
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Cardinality `Q`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        match &self.0.base {
            None => 1,
            Some(b) => self.0.degree * b.absolute_degree(),
        }
    }

    pub fn base(&self) -> Option<&FieldCtx> {
        self.0.base.as_ref()
    }

    /// Modulus over the base, constant term first. `[0, 1]` for a prime field.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// The prime field at the bottom of the tower.
    pub fn prime_field(&self) -> FieldCtx {
        match &self.0.base {
            None => self.clone(),
            Some(b) => b.prime_field(),
        }
    }

    /// True when `sub` is `self` or one of the layers below it.
    pub fn has_layer(&self, sub: &FieldCtx) -> bool {
        let mut cur = Some(self);
        while let Some(c) = cur {
            if c == sub {
                return true;
            }
            cur = c.base();
        }
        false
    }

    /// Degree `[self : sub]` when `sub` is a layer of this tower.
    pub fn degree_over(&self, sub: &FieldCtx) -> Result<usize> {
        if !self.has_layer(sub) {
            return Err(self.not_in_tower(sub));
        }
        Ok(self.absolute_degree() / sub.absolute_degree())
    }

    pub(crate) fn not_in_tower(&self, sub: &FieldCtx) -> Error {
        Error::NotInTower { source_field: sub.to_string(), target: self.to_string() }
    }

    /// The class of `v` in `Z/p`, viewed in this field.
    pub fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.0.p as i64) as u64
    }

    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value >= self.order() {
            return Err(Error::InvalidArgument(format!("{value} is not an element of {self}")));
        }
        Ok(FieldElem { ctx: self.clone(), value })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { ctx: self.clone(), value: 0 }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { ctx: self.clone(), value: 1 }
    }

    /// The adjoined root `u` of the modulus (for a degree-1 layer, `-m_0`).
    pub fn generator(&self) -> FieldElem {
        let value = match &self.0.base {
            None => 0,
            Some(b) if self.0.degree == 1 => b.neg(self.0.modulus[0]),
            Some(b) => b.order(),
        };
        FieldElem { ctx: self.clone(), value }
    }

    /// Element from base-field coefficients, constant first.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        match &self.0.base {
            None => {
                if coeffs.len() != 1 {
                    return Err(Error::InvalidArgument("prime field elements have one coordinate".into()));
                }
                self.elem(coeffs[0])
            }
            Some(b) => {
                if coeffs.len() != self.0.degree {
                    return Err(Error::InvalidArgument(format!(
                        "expected {} coefficients, got {}",
                        self.0.degree,
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c >= b.order()) {
                    return Err(Error::InvalidArgument("coefficient outside the base field".into()));
                }
                Ok(FieldElem { ctx: self.clone(), value: pack(coeffs, b.order()) })
            }
        }
    }

    /// Coordinates of a packed value over a lower layer `sub`.
    pub fn coords_over(&self, sub: &FieldCtx, v: u64) -> Result<Vec<u64>> {
        let dim = self.degree_over(sub)?;
        Ok(unpack(v, sub.order(), dim))
    }

    // Raw arithmetic on packed values. Callers guarantee the operands belong
    // to this context.

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.is_prime_field() {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            let s = a % p + b % p;
            out += if s >= p { s - p } else { s } * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.is_prime_field() {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 {
            let d = a % p;
            out += if d == 0 { 0 } else { p - d } * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.0.tables {
            return t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64;
        }
        match &self.0.base {
            None => ((a as u128 * b as u128) % self.0.p as u128) as u64,
            Some(base) => {
                let k = self.0.degree;
                let qb = base.order();
                let da = unpack(a, qb, k);
                let db = unpack(b, qb, k);
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = base.add(prod[i + j], base.mul(x, y));
                    }
                }
                let m = &self.0.modulus;
                for i in (k..2 * k - 1).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    for j in 0..k {
                        prod[i - k + j] = base.sub(prod[i - k + j], base.mul(c, m[j]));
                    }
                }
                pack(&prod[..k], qb)
            }
        }
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        if let Some(t) = &self.0.tables {
            if e == 0 {
                return 1;
            }
            if a == 0 {
                return 0;
            }
            let n = (self.order() - 1) as u128;
            let l = (t.log[a as usize] as u128 * (e % n)) % n;
            return t.exp[l as usize] as u64;
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.0.tables {
            let n = (self.order() - 1) as usize;
            return Some(t.exp[(n - t.log[a as usize] as usize) % n] as u64);
        }
        Some(self.pow(a, self.order() as u128 - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Euler criterion on a packed value; `None` in characteristic 2.
    pub fn is_square_raw(&self, a: u64) -> Option<bool> {
        if self.0.p == 2 {
            return None;
        }
        Some(a == 0 || self.pow(a, (self.order() as u128 - 1) / 2) == 1)
    }

    /// Coefficient-vector rendering, base field first, nested for towers.
    pub fn format_value(&self, v: u64) -> String {
        match &self.0.base {
            None => v.to_string(),
            Some(b) => {
                let parts: Vec<String> =
                    unpack(v, b.order(), self.0.degree).into_iter().map(|c| b.format_value(c)).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    /// Inverse of [`format_value`](Self::format_value). A bare integer is
    /// read as an element of the prime subfield.
    pub fn parse_value(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let base = self
                .base()
                .ok_or_else(|| Error::Parse(format!("prime field element cannot be a vector: {s}")))?;
            let parts = split_top_level(inner);
            if parts.len() != self.degree() {
                return Err(Error::Parse(format!(
                    "expected {} coordinates in {s}, got {}",
                    self.degree(),
                    parts.len()
                )));
            }
            let coeffs = parts.iter().map(|p| base.parse_value(p)).collect::<Result<Vec<_>>>()?;
            return Ok(pack(&coeffs, base.order()));
        }
        let v: i64 = s.parse().map_err(|_| Error::Parse(format!("bad field element `{s}`")))?;
        if v < 0 || v as u64 >= self.characteristic() {
            return Err(Error::Parse(format!("integer {v} outside 0..{}", self.characteristic())));
        }
        Ok(v as u64)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.order == other.0.order
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for FieldCtx {}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.base {
            None => write!(f, "F_{}", self.0.p),
            Some(b) if b.is_prime_field() => write!(f, "F_{}", self.0.order),
            Some(b) => write!(f, "F_{}/{}", self.0.order, b),
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({self}, modulus {:?})", self.0.modulus)
    }
}

pub fn make_field(p: u64, m: usize, seed: u64) -> Result<FieldCtx> {
    FieldCtx::make(p, m, seed)
}

pub fn extend_field(base: &FieldCtx, k: usize, seed: u64) -> Result<FieldCtx> {
    base.extend(k, seed)
}

pub(crate) fn unpack(mut v: u64, radix: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % radix);
        v /= radix;
    }
    out
}

pub(crate) fn pack(digits: &[u64], radix: u64) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * radix + d)
}

/// Splits on commas that are not nested in brackets.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// An element together with the field it lives in.
#[derive(Clone)]
pub struct FieldElem {
    ctx: FieldCtx,
    value: u64,
}

impl FieldElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Packed encoding.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Coefficients over the immediate base, constant first.
    pub fn coeffs(&self) -> Vec<u64> {
        match self.ctx.base() {
            None => vec![self.value],
            Some(b) => unpack(self.value, b.order(), self.ctx.degree()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    fn same_ctx(&self, other: &FieldElem) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.ctx.to_string(), right: other.ctx.to_string() })
        }
    }

    fn with(&self, value: u64) -> FieldElem {
        FieldElem { ctx: self.ctx.clone(), value }
    }

    pub fn try_eq(&self, other: &FieldElem) -> Result<bool> {
        self.same_ctx(other)?;
        Ok(self.value == other.value)
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        Ok(self.with(self.ctx.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        Ok(self.with(self.ctx.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        Ok(self.with(self.ctx.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        self.ctx.div(self.value, other.value).map(|v| self.with(v)).ok_or(Error::DivisionByZero)
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.ctx.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.ctx.inv(self.value).map(|v| self.with(v)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u128) -> FieldElem {
        self.with(self.ctx.pow(self.value, e))
    }

    /// `a^{|sub|}`, the Frobenius of this field relative to the layer `sub`.
    pub fn frobenius(&self, sub: &FieldCtx) -> Result<FieldElem> {
        if !self.ctx.has_layer(sub) {
            return Err(self.ctx.not_in_tower(sub));
        }
        Ok(self.pow(sub.order() as u128))
    }

    /// Euler criterion; zero counts as a square.
    pub fn is_square(&self) -> Result<bool> {
        self.ctx.is_square_raw(self.value).ok_or(Error::CharacteristicTwo)
    }

    /// Canonical inclusion into a field above this one in the tower.
    pub fn embed(&self, target: &FieldCtx) -> Result<FieldElem> {
        if !target.has_layer(&self.ctx) {
            return Err(target.not_in_tower(&self.ctx));
        }
        Ok(FieldElem { ctx: target.clone(), value: self.value })
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ctx.format_value(self.value))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ctx)
    }
}
