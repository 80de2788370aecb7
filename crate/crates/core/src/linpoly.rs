//! q-linearized polynomials `L(x) = a_0 x + a_1 x^q + ... + a_n x^{q^n}`.
//!
//! `L` is stored by its coefficient vector. Evaluation uses iterated
//! q-power maps, so the dense degree-`q^n` polynomial is only materialized
//! when explicitly requested through [`LinPoly::to_poly`] or
//! [`LinPoly::reduced`].

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{split_top_level, FieldCtx, FieldElem};
use crate::linalg;
use crate::poly::Poly;

/// Largest dense degree `to_poly` will build.
pub const DENSE_DEGREE_CAP: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SquareClass {
    Zero,
    Square,
    NonSquare,
}

impl SquareClass {
    pub fn of(a: &FieldElem) -> Result<SquareClass> {
        if a.is_zero() {
            return Ok(SquareClass::Zero);
        }
        Ok(if a.is_square()? { SquareClass::Square } else { SquareClass::NonSquare })
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, rhs: SquareClass) -> SquareClass {
        use SquareClass::*;
        match (self, rhs) {
            (Zero, _) | (_, Zero) => Zero,
            (Square, Square) | (NonSquare, NonSquare) => Square,
            _ => NonSquare,
        }
    }
}

#[derive(Clone)]
pub struct LinPoly {
    base: FieldCtx,
    coeff_field: FieldCtx,
    coeffs: Vec<u64>,
}

impl LinPoly {
    /// Builds `L` over the scalar field `base` (that is, `F_q`) from packed
    /// coefficients living in `coeff_field`, which must be `base` or lie
    /// above it. Trailing zero coefficients are dropped.
    pub fn from_values(base: &FieldCtx, coeff_field: &FieldCtx, coeffs: &[u64]) -> Result<Self> {
        if !coeff_field.has_layer(base) {
            return Err(coeff_field.not_in_tower(base));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= coeff_field.order()) {
            return Err(Error::InvalidArgument(format!("{bad} is not an element of {coeff_field}")));
        }
        let mut coeffs = coeffs.to_vec();
        crate::poly::trim(&mut coeffs);
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("the zero map has no q-degree".into()));
        }
        Ok(LinPoly { base: base.clone(), coeff_field: coeff_field.clone(), coeffs })
    }

    pub fn new(base: &FieldCtx, coeffs: &[FieldElem]) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        };
        let field = first.ctx().clone();
        let mut values = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.ctx() != &field {
                return Err(Error::ContextMismatch { left: field.to_string(), right: c.ctx().to_string() });
            }
            values.push(c.value());
        }
        Self::from_values(base, &field, &values)
    }

    /// `x^{q^n}`.
    pub fn monomial(base: &FieldCtx, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        LinPoly { base: base.clone(), coeff_field: base.clone(), coeffs }
    }

    /// Parses `"a0,a1,...,an"` with coefficients in `base`.
    pub fn parse(base: &FieldCtx, s: &str) -> Result<Self> {
        let values = split_top_level(s.trim())
            .into_iter()
            .map(|c| base.parse_value(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(base, base, &values)
    }

    /// The scalar field `F_q`.
    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn coeff_field(&self) -> &FieldCtx {
        &self.coeff_field
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }

    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeff_field.elem(self.coeffs.get(i).copied().unwrap_or(0)).unwrap()
    }

    pub fn is_monic(&self) -> bool {
        *self.coeffs.last().unwrap() == 1
    }

    /// True for `x^{q^n}` itself.
    pub fn is_top_monomial(&self) -> bool {
        self.is_monic() && self.coeffs[..self.q_degree()].iter().all(|&c| c == 0)
    }

    /// Same map with `a_0` set to zero, i.e. `a_0` absorbed into `t`.
    pub fn normalized(&self) -> LinPoly {
        let mut out = self.clone();
        out.coeffs[0] = 0;
        out
    }

    /// `q^n` as an exact integer, if it fits.
    pub fn dense_degree(&self) -> Option<u64> {
        self.q().checked_pow(self.q_degree() as u32)
    }

    fn check_target(&self, target: &FieldCtx) -> Result<()> {
        if target.has_layer(&self.coeff_field) {
            Ok(())
        } else {
            Err(target.not_in_tower(&self.coeff_field))
        }
    }

    fn dense_exponents(&self) -> Result<Vec<usize>> {
        let top = self.dense_degree().filter(|&d| d <= DENSE_DEGREE_CAP).ok_or_else(|| {
            Error::CapExceeded(format!("dense degree q^n above {DENSE_DEGREE_CAP}"))
        })?;
        let q = self.q() as usize;
        let mut exps = Vec::with_capacity(self.coeffs.len());
        let mut e = 1usize;
        for _ in 0..self.coeffs.len() {
            exps.push(e);
            e = e.saturating_mul(q);
        }
        debug_assert_eq!(*exps.last().unwrap() as u64, top);
        Ok(exps)
    }

    /// Dense `sum a_i x^{q^i}` over `target`.
    pub fn to_poly(&self, target: &FieldCtx) -> Result<Poly> {
        self.check_target(target)?;
        let exps = self.dense_exponents()?;
        let mut dense = vec![0u64; exps.last().unwrap() + 1];
        for (&e, &a) in exps.iter().zip(&self.coeffs) {
            dense[e] = a;
        }
        Poly::from_values(target, &dense)
    }

    /// `G(x) = L(x)/x`, of degree `q^n - 1`, with constant term `a_0`.
    pub fn reduced(&self, target: &FieldCtx) -> Result<Poly> {
        self.check_target(target)?;
        let exps = self.dense_exponents()?;
        let mut dense = vec![0u64; *exps.last().unwrap()];
        for (&e, &a) in exps.iter().zip(&self.coeffs) {
            dense[e - 1] = a;
        }
        Poly::from_values(target, &dense)
    }

    /// `L(alpha)` by iterated q-th powers.
    pub fn evaluate(&self, alpha: &FieldElem) -> Result<FieldElem> {
        let ctx = alpha.ctx();
        self.check_target(ctx)?;
        ctx.elem(self.evaluate_raw(ctx, alpha.value()))
    }

    /// Packed evaluation; `ctx` must lie above the coefficient field.
    pub(crate) fn evaluate_raw(&self, ctx: &FieldCtx, alpha: u64) -> u64 {
        let q = self.q() as u128;
        let mut t = alpha;
        let mut acc = 0u64;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                t = ctx.pow(t, q);
            }
            if a != 0 {
                acc = ctx.add(acc, ctx.mul(a, t));
            }
        }
        acc
    }

    /// `L_alpha(x) = L(x) - (L(alpha)/alpha) x`, with coefficients moved into
    /// `alpha`'s field. `alpha` is always a root of the result.
    pub fn specialize(&self, alpha: &FieldElem) -> Result<LinPoly> {
        if alpha.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = alpha.ctx();
        self.check_target(ctx)?;
        let shift = ctx.div(self.evaluate_raw(ctx, alpha.value()), alpha.value()).unwrap();
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = ctx.sub(coeffs[0], shift);
        Ok(LinPoly { base: self.base.clone(), coeff_field: ctx.clone(), coeffs })
    }

    /// `F_q`-basis of the roots of `L` lying in `field`, via the kernel of
    /// `L` as an `F_q`-linear map on `field` viewed as `F_q^{[field : F_q]}`.
    pub fn root_space(&self, field: &FieldCtx) -> Result<Vec<FieldElem>> {
        self.check_target(field)?;
        let dim = field.degree_over(&self.base)?;
        let q = self.base.order();
        // column j of the matrix is L(e_j), e_j = q^j in packed form
        let images: Vec<Vec<u64>> = (0..dim)
            .map(|j| {
                let e = q.pow(j as u32);
                field.coords_over(&self.base, self.evaluate_raw(field, e))
            })
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<u64>> = (0..dim).map(|i| images.iter().map(|col| col[i]).collect()).collect();
        linalg::kernel(&self.base, &rows, dim)
            .into_iter()
            .map(|v| field.elem(crate::ff::pack(&v, q)))
            .collect()
    }

    /// Square class of `(-1)^{(q^n-1)/2} a_0`, the discriminant of `L(x)/x`
    /// modulo squares of the coefficient field.
    pub fn disc_square_class(&self) -> Result<SquareClass> {
        if self.base.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let c = self.coeffs[0];
        if c == 0 {
            return Err(Error::InvalidArgument("constant term of L(x)/x must be nonzero".into()));
        }
        let ctx = &self.coeff_field;
        // (q^n - 1)/2 is odd iff q^n = 3 mod 4
        let qn_mod4 = (0..self.q_degree()).fold(1u64, |acc, _| acc * (self.q() % 4) % 4);
        let v = if qn_mod4 == 3 { ctx.neg(c) } else { c };
        SquareClass::of(&ctx.elem(v)?)
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.q();
        let mut terms = Vec::new();
        for (i, &a) in self.coeffs.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mono = match i {
                0 => "x".to_string(),
                _ => match q.checked_pow(i as u32) {
                    Some(e) => format!("x^{e}"),
                    None => format!("x^({q}^{i})"),
                },
            };
            if a == 1 {
                terms.push(mono);
            } else {
                terms.push(format!("{}{}", self.coeff_field.format_value(a), mono));
            }
        }
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinPoly({self}) over {}", self.coeff_field)
    }
}
