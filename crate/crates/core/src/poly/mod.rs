//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Coefficients are packed field values, constant term first, with no
//! trailing zeros. Arithmetic helpers assume both operands share a context
//! and panic otherwise; the operations that take user input (`gcd`,
//! `factor`, `discriminant`, ...) check contexts and return errors.

mod factor;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::{split_top_level, FieldCtx, FieldElem};

pub use factor::Factorization;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Wraps packed coefficients without range checks, trimming trailing zeros.
    pub(crate) fn from_raw(ctx: FieldCtx, mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        Poly { ctx, coeffs }
    }

    pub fn from_values(ctx: &FieldCtx, coeffs: &[u64]) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= ctx.order()) {
            return Err(Error::InvalidArgument(format!("{bad} is not an element of {ctx}")));
        }
        Ok(Self::from_raw(ctx.clone(), coeffs.to_vec()))
    }

    pub fn from_elems(ctx: &FieldCtx, coeffs: &[FieldElem]) -> Result<Self> {
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.ctx() != ctx {
                return Err(Error::ContextMismatch { left: ctx.to_string(), right: c.ctx().to_string() });
            }
            out.push(c.value());
        }
        Ok(Self::from_raw(ctx.clone(), out))
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: vec![1] }
    }

    pub fn x(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, 1, 1)
    }

    /// `c * x^e`.
    pub fn monomial(ctx: &FieldCtx, c: u64, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Self::from_raw(ctx.clone(), coeffs)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn check_ctx(&self, other: &Poly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.ctx.to_string(), right: other.ctx.to_string() })
        }
    }

    fn assert_ctx(&self, other: &Poly) {
        assert!(self.ctx == other.ctx, "polynomials over {} and {}", self.ctx, other.ctx);
    }

    fn with(&self, coeffs: Vec<u64>) -> Poly {
        Poly::from_raw(self.ctx.clone(), coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|i| self.ctx.add(self.coeff(i), other.coeff(i))).collect();
        self.with(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|i| self.ctx.sub(self.coeff(i), other.coeff(i))).collect();
        self.with(out)
    }

    pub fn neg(&self) -> Poly {
        self.with(self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }

    pub fn scale(&self, c: u64) -> Poly {
        self.with(self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        self.with(mul_slices(&self.ctx, &self.coeffs, &other.coeffs))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        self.assert_ctx(d);
        assert!(!d.is_zero(), "polynomial division by zero");
        let ctx = &self.ctx;
        let dd = d.coeffs.len() - 1;
        let lc_inv = ctx.inv(d.lc()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(ctx), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = ctx.mul(r[top], lc_inv);
            let shift = top - dd;
            q[shift] = c;
            for j in 0..dd {
                r[shift + j] = ctx.sub(r[shift + j], ctx.mul(c, d.coeffs[j]));
            }
            r.pop();
            trim(&mut r);
        }
        (self.with(q), self.with(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.assert_ctx(d);
        let mut r = self.coeffs.clone();
        rem_in_place(&self.ctx, &mut r, &d.coeffs);
        self.with(r)
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.ctx.inv(self.lc()).unwrap())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| self.ctx.add(self.ctx.mul(acc, x), c))
    }

    pub fn eval_elem(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.ctx() != &self.ctx {
            return Err(Error::ContextMismatch { left: self.ctx.to_string(), right: x.ctx().to_string() });
        }
        self.ctx.elem(self.eval(x.value()))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.ctx.mul(self.ctx.from_int((i as u64 % self.ctx.characteristic()) as i64), c))
            .collect();
        self.with(out)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        Ok(self.gcd_unchecked(other))
    }

    pub(crate) fn gcd_unchecked(&self, other: &Poly) -> Poly {
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            rem_in_place(&self.ctx, &mut a, &b);
            std::mem::swap(&mut a, &mut b);
        }
        self.with(a).monic()
    }

    /// True iff nonzero and coprime to its derivative.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd_unchecked(&self.derivative()).is_constant()
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        let mut prod = mul_slices(&self.ctx, &self.coeffs, &other.coeffs);
        rem_in_place(&self.ctx, &mut prod, &m.coeffs);
        self.with(prod)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.ctx).rem(m);
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

    /// Resultant with the convention `Res(f, g) = lc(f)^{deg g} * prod g(a)`
    /// over the roots `a` of `f`, computed along the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Poly) -> Result<FieldElem> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return Ok(ctx.zero());
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = 1u64;
        loop {
            let m = a.degree().unwrap();
            let n = b.degree().unwrap();
            if n == 0 {
                acc = ctx.mul(acc, ctx.pow(b.lc(), m as u128));
                return ctx.elem(acc);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Ok(ctx.zero());
            }
            let s = r.degree().unwrap();
            if (m * n) % 2 == 1 {
                acc = ctx.neg(acc);
            }
            acc = ctx.mul(acc, ctx.pow(b.lc(), (m - s) as u128));
            a = b;
            b = r;
        }
    }

    /// `(-1)^{m(m-1)/2} Res(f, f') / lc(f)` with `f'` taken at formal degree `m - 1`.
    pub fn discriminant(&self) -> Result<FieldElem> {
        let ctx = &self.ctx;
        let m = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(m) => m,
        };
        let d = self.derivative();
        let Some(dd) = d.degree() else {
            return Ok(ctx.zero());
        };
        let res = self.resultant(&d)?.value();
        let lc = self.lc();
        let mut out = ctx.mul(res, ctx.pow(lc, (m - 1 - dd) as u128));
        out = ctx.div(out, lc).unwrap();
        if (m * (m - 1) / 2) % 2 == 1 {
            out = ctx.neg(out);
        }
        ctx.elem(out)
    }

    /// Parses `"c0,c1,...,cd"` where each `ci` uses the field element syntax.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Poly> {
        let coeffs = split_top_level(s.trim())
            .into_iter()
            .map(|c| ctx.parse_value(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(ctx.clone(), coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.ctx.format_value(c)).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}] over {}", self, self.ctx)
    }
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn mul_slices(ctx: &FieldCtx, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

/// Reduces `a` modulo the nonzero, trimmed `m` in place.
pub(crate) fn rem_in_place(ctx: &FieldCtx, a: &mut Vec<u64>, m: &[u64]) {
    assert!(!m.is_empty(), "reduction modulo zero");
    trim(a);
    let dm = m.len() - 1;
    let lc_inv = ctx.inv(m[dm]).expect("nonzero leading coefficient");
    while a.len() > dm {
        let top = a.len() - 1;
        let c = ctx.mul(a[top], lc_inv);
        let shift = top - dm;
        for j in 0..dm {
            a[shift + j] = ctx.sub(a[shift + j], ctx.mul(c, m[j]));
        }
        a.pop();
        trim(a);
    }
}

/// Multiset of positive integers, kept sorted: irreducible factor degrees
/// or cycle lengths of a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<u64>);

impl CycleType {
    pub fn new(mut lengths: Vec<u64>) -> Self {
        lengths.sort_unstable();
        CycleType(lengths)
    }

    pub fn lengths(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Order of a permutation with this cycle type.
    pub fn lcm(&self) -> u128 {
        self.0.iter().fold(1u128, |acc, &d| arith::lcm(acc, d as u128))
    }

    pub fn has_fixed_point(&self) -> bool {
        self.0.first() == Some(&1)
    }

    pub fn has_even_length(&self) -> bool {
        self.0.iter().any(|d| d % 2 == 0)
    }

    /// Sign of the permutation is `(-1)^{sum (d_i - 1)}`.
    pub fn is_even_permutation(&self) -> bool {
        self.0.iter().map(|d| d - 1).sum::<u64>() % 2 == 0
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
