//! Squarefree decomposition, distinct-degree and equal-degree factorization,
//! and Rabin's irreducibility test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mul_slices, rem_in_place, trim, CycleType, Poly};
use crate::arith;
use crate::error::{Error, Result};
use crate::ff::FieldCtx;

/// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
pub type Factorization = Vec<(Poly, usize)>;

/// Matrix of the `F_Q`-linear map `h -> h^Q mod f`, stored by columns
/// `x^{iQ} mod f`.
pub(crate) struct FrobeniusMap {
    ctx: FieldCtx,
    modulus: Vec<u64>,
    cols: Vec<Vec<u64>>,
}

impl FrobeniusMap {
    pub(crate) fn new(f: &Poly) -> Self {
        let n = f.degree().expect("nonzero modulus");
        let ctx = f.ctx().clone();
        let xq = Poly::x(&ctx).pow_mod(ctx.order() as u128, f);
        let mut cols = Vec::with_capacity(n);
        let mut cur = Poly::one(&ctx).rem(f);
        for _ in 0..n {
            cols.push(cur.coeffs().to_vec());
            cur = cur.mul_mod(&xq, f);
        }
        FrobeniusMap { ctx, modulus: f.coeffs().to_vec(), cols }
    }

    /// `h^Q mod f` for `h` already reduced mod `f`.
    pub(crate) fn apply(&self, h: &Poly) -> Poly {
        let n = self.modulus.len() - 1;
        let mut out = vec![0u64; n];
        for (i, &c) in h.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &m) in self.cols[i].iter().enumerate() {
                out[j] = self.ctx.add(out[j], self.ctx.mul(c, m));
            }
        }
        Poly::from_raw(self.ctx.clone(), out)
    }
}

impl Poly {
    fn require_nonconstant(&self) -> Result<()> {
        if self.is_constant() {
            Err(Error::ConstantPolynomial)
        } else {
            Ok(())
        }
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, read off
    /// the distinct-degree factorization alone.
    pub fn factor_degrees(&self) -> Result<CycleType> {
        self.require_nonconstant()?;
        if !self.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let degrees = ddf(&self.monic())
            .into_iter()
            .flat_map(|(d, slice)| {
                let copies = slice.degree().unwrap() / d;
                std::iter::repeat(d as u64).take(copies)
            })
            .collect();
        Ok(CycleType::new(degrees))
    }

    /// Full factorization with the default splitting seed.
    pub fn factor(&self) -> Result<Factorization> {
        self.factor_seeded(0)
    }

    /// Squarefree decomposition, then DDF, then seeded equal-degree splitting.
    pub fn factor_seeded(&self, seed: u64) -> Result<Factorization> {
        self.require_nonconstant()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (part, mult) in squarefree_decomposition(&self.monic()) {
            for (d, slice) in ddf(&part) {
                for irreducible in edf(&slice, d, &mut rng) {
                    out.push((irreducible, mult));
                }
            }
        }
        out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
        Ok(out)
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        self.require_nonconstant()?;
        Ok(self.is_irreducible_unchecked())
    }

    /// Rabin's test: `x^{Q^n} = x mod f` and `gcd(x^{Q^{n/r}} - x, f) = 1`
    /// for every prime `r | n`.
    pub(crate) fn is_irreducible_unchecked(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let ctx = f.ctx().clone();
        let map = FrobeniusMap::new(&f);
        let x = Poly::x(&ctx).rem(&f);
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(x.clone());
        for i in 0..n {
            let next = map.apply(&powers[i]);
            powers.push(next);
        }
        if powers[n] != x {
            return false;
        }
        arith::prime_divisors(n as u128).into_iter().all(|r| {
            let h = powers[n / r as usize].sub(&x);
            f.gcd_unchecked(&h).is_one()
        })
    }

    /// `f^{1/p}` for `f` whose exponents are all multiples of `p`.
    fn pth_root(&self) -> Poly {
        let ctx = self.ctx();
        let p = ctx.characteristic() as usize;
        let e = (ctx.order() / ctx.characteristic()) as u128;
        let coeffs = self.coeffs().iter().step_by(p).map(|&c| ctx.pow(c, e)).collect();
        Poly::from_raw(ctx.clone(), coeffs)
    }
}

/// Squarefree parts with multiplicities, pairwise coprime. Input must be monic.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.ctx().characteristic() as usize;
    let mut out = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd_unchecked(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd_unchecked(&c);
        let fac = w.div_exact(&y);
        if !fac.is_constant() {
            out.push((fac, i));
        }
        i += 1;
        c = c.div_exact(&y);
        w = y;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(d, product of all irreducible factors of degree d)`.
fn ddf(f: &Poly) -> Vec<(usize, Poly)> {
    let ctx = f.ctx().clone();
    let mut out = Vec::new();
    if f.degree() == Some(1) {
        out.push((1, f.clone()));
        return out;
    }
    let map = FrobeniusMap::new(f);
    let x = Poly::x(&ctx);
    let mut h = x.rem(f);
    let mut rest = f.clone();
    let mut d = 0;
    loop {
        d += 1;
        let deg = rest.degree().unwrap();
        if deg < 2 * d {
            break;
        }
        h = map.apply(&h);
        let g = rest.gcd_unchecked(&h.sub(&x));
        if !g.is_constant() {
            rest = rest.div_exact(&g);
            out.push((d, g));
        }
    }
    if !rest.is_constant() {
        out.push((rest.degree().unwrap(), rest));
    }
    out
}

/// Splits a product of distinct irreducibles of common degree `d`.
fn edf(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let ctx = f.ctx().clone();
    let q = ctx.order();
    let odd = ctx.characteristic() != 2;
    let map = if odd { Some(FrobeniusMap::new(f)) } else { None };
    let mut pieces = vec![f.clone()];
    while pieces.len() < n / d {
        let mut coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        trim(&mut coeffs);
        let a = Poly::from_raw(ctx.clone(), coeffs);
        if a.is_constant() {
            continue;
        }
        let splitter = match &map {
            Some(map) => {
                // a^{(Q^d - 1)/2} = (a * a^Q * ... * a^{Q^{d-1}})^{(Q-1)/2}
                let mut t = a.clone();
                let mut norm = a.clone();
                for _ in 1..d {
                    t = map.apply(&t);
                    norm = norm.mul_mod(&t, f);
                }
                norm.pow_mod((q as u128 - 1) / 2, f).sub(&Poly::one(&ctx))
            }
            None => {
                // absolute trace to F_2: sum of a^{2^i}, i < log2(Q) * d
                let m = ctx.absolute_degree() * d;
                let mut t = a.clone();
                let mut tr = a.clone();
                for _ in 1..m {
                    let mut sq = mul_slices(&ctx, t.coeffs(), t.coeffs());
                    rem_in_place(&ctx, &mut sq, f.coeffs());
                    t = Poly::from_raw(ctx.clone(), sq);
                    tr = tr.add(&t);
                }
                tr
            }
        };
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for piece in pieces {
            if piece.degree() == Some(d) {
                next.push(piece);
                continue;
            }
            let g = piece.gcd_unchecked(&splitter);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < piece.degree().unwrap() {
                next.push(piece.div_exact(&g));
                next.push(g);
            } else {
                next.push(piece);
            }
        }
        pieces = next;
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::necklace_count;
    use crate::ff::unpack;
    use std::collections::BTreeMap;

    fn poly(ctx: &FieldCtx, c: &[u64]) -> Poly {
        Poly::from_values(ctx, c).unwrap()
    }

    /// x^e - x
    fn x_pow_minus_x(ctx: &FieldCtx, e: usize) -> Poly {
        Poly::monomial(ctx, 1, e).sub(&Poly::x(ctx))
    }

    fn recombine(ctx: &FieldCtx, fac: &Factorization) -> Poly {
        fac.iter().fold(Poly::one(ctx), |acc, (g, m)| (0..*m).fold(acc, |a, _| a.mul(g)))
    }

    #[test]
    fn factor_degree_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let x8m1 = poly(&f3, &[2, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(x8m1.factor_degrees().unwrap(), CycleType::new(vec![1, 1, 2, 2, 2]));
        assert_eq!(poly(&f3, &[1, 0, 1]).factor_degrees().unwrap(), CycleType::new(vec![2]));
        assert_eq!(x_pow_minus_x(&f3, 3).factor_degrees().unwrap(), CycleType::new(vec![1, 1, 1]));
        let f9 = FieldCtx::make(3, 2, 0).unwrap();
        assert_eq!(x_pow_minus_x(&f9, 9).factor_degrees().unwrap(), CycleType::new(vec![1; 9]));
        assert_eq!(poly(&f3, &[0, 0, 1]).factor_degrees().unwrap_err(), Error::NotSquarefree);
        assert_eq!(poly(&f3, &[2]).factor_degrees().unwrap_err(), Error::ConstantPolynomial);
    }

    #[test]
    fn factor_x4_plus_x_over_f2() {
        let f2 = FieldCtx::prime(2).unwrap();
        let fac = poly(&f2, &[0, 1, 0, 0, 1]).factor().unwrap();
        let expected = vec![(poly(&f2, &[0, 1]), 1), (poly(&f2, &[1, 1]), 1), (poly(&f2, &[1, 1, 1]), 1)];
        assert_eq!(fac, expected);
    }

    #[test]
    fn factor_x8_minus_x_over_f2() {
        let f2 = FieldCtx::prime(2).unwrap();
        let fac = x_pow_minus_x(&f2, 8).factor().unwrap();
        let mut by_degree = BTreeMap::new();
        for (g, m) in &fac {
            assert_eq!(*m, 1);
            *by_degree.entry(g.degree().unwrap()).or_insert(0) += 1;
        }
        assert_eq!(by_degree, BTreeMap::from([(1, 2), (3, 2)]));
    }

    #[test]
    fn irreducibility() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert!(poly(&f3, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(!poly(&f3, &[2, 0, 1]).is_irreducible().unwrap());
        assert!(poly(&f3, &[1]).is_irreducible().is_err());
    }

    /// Irreducibility by brute force: no monic divisor of degree 1..=n/2.
    fn brute_irreducible(ctx: &FieldCtx, f: &Poly) -> bool {
        let n = f.degree().unwrap();
        let q = ctx.order();
        for d in 1..=n / 2 {
            for code in 0..q.pow(d as u32) {
                let mut c = unpack(code, q, d);
                c.push(1);
                if f.rem(&Poly::from_raw(ctx.clone(), c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_brute_force() {
        for ctx in [FieldCtx::prime(2).unwrap(), FieldCtx::prime(3).unwrap(), FieldCtx::make(2, 2, 0).unwrap()] {
            let q = ctx.order();
            for n in 1..=4u32 {
                for code in 0..q.pow(n) {
                    let mut c = unpack(code, q, n as usize);
                    c.push(1);
                    let f = Poly::from_raw(ctx.clone(), c);
                    assert_eq!(f.is_irreducible().unwrap(), brute_irreducible(&ctx, &f), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn factor_recombines_exhaustively() {
        for p in [2u64, 3] {
            let ctx = FieldCtx::prime(p).unwrap();
            for n in 1..=4u32 {
                for code in 0..p.pow(n) {
                    let mut c = unpack(code, p, n as usize);
                    c.push(1);
                    let f = Poly::from_raw(ctx.clone(), c);
                    let fac = f.factor().unwrap();
                    assert_eq!(recombine(&ctx, &fac), f);
                    for (g, _) in &fac {
                        assert!(g.is_monic() && g.is_irreducible().unwrap());
                    }
                    if f.is_squarefree() {
                        let degs: Vec<u64> = fac.iter().map(|(g, _)| g.degree().unwrap() as u64).collect();
                        assert_eq!(f.factor_degrees().unwrap(), CycleType::new(degs));
                        assert_eq!(f.factor_degrees().unwrap().total(), n as u64);
                    }
                }
            }
        }
    }

    #[test]
    fn factor_over_extension_fields() {
        // odd and characteristic-2 equal-degree splitting over towers
        for ctx in [FieldCtx::make(3, 2, 1).unwrap(), FieldCtx::make(2, 2, 1).unwrap().extend(2, 0).unwrap()] {
            let q = ctx.order() as usize;
            let f = Poly::monomial(&ctx, 1, q * q).sub(&Poly::x(&ctx));
            for seed in 0..3 {
                let fac = f.factor_seeded(seed).unwrap();
                assert_eq!(recombine(&ctx, &fac), f);
                assert_eq!(fac.len() as u64, necklace_count(q as u64, 1) + necklace_count(q as u64, 2));
            }
        }
    }

    #[test]
    fn squarefree_decomposition_with_pth_powers() {
        // (x+1)^3 (x+2)^2 x over F_3
        let f3 = FieldCtx::prime(3).unwrap();
        let a = poly(&f3, &[1, 1]);
        let b = poly(&f3, &[2, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b).mul(&Poly::x(&f3));
        let fac = f.factor().unwrap();
        assert_eq!(fac, vec![(Poly::x(&f3), 1), (a, 3), (b, 2)]);
    }

    #[test]
    fn necklace_counts_for_field_polynomial() {
        for q in [2u64, 3] {
            let ctx = FieldCtx::prime(q).unwrap();
            for n in 1..=3u32 {
                let f = x_pow_minus_x(&ctx, q.pow(n) as usize);
                let mut by_degree = BTreeMap::new();
                for (g, m) in f.factor().unwrap() {
                    assert_eq!(m, 1);
                    *by_degree.entry(g.degree().unwrap() as u64).or_insert(0u64) += 1;
                }
                let expected: BTreeMap<u64, u64> =
                    arith::divisors(n as u64).into_iter().map(|d| (d, necklace_count(q, d))).collect();
                assert_eq!(by_degree, expected);
            }
        }
    }
}
