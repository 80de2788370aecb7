//! Small matrix groups over `F_q`: Singer cycles, the Frobenius of
//! `F_{q^n}/F_q`, breadth-first closure, and cycle types of the action on the
//! `q^n - 1` nonzero vectors of `F_q^n`.
//!
//! Vectors are column vectors; a nonzero vector `(v_0, ..., v_{n-1})` is
//! indexed by its lexicographic rank `sum v_i q^{n-1-i}` minus one.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::linalg;
use crate::poly::CycleType;

/// Full `GL(n,q)` enumeration is refused above `q^{n^2}` = 3^9.
pub const GL_ENUMERATION_CAP: u64 = 19_683;

#[derive(Clone)]
pub struct MatGL {
    ctx: FieldCtx,
    n: usize,
    entries: Vec<u64>,
}

impl MatGL {
    /// Row-major entries; fails on a singular matrix.
    pub fn new(ctx: &FieldCtx, n: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::InvalidArgument(format!("expected {} entries", n * n)));
        }
        if entries.iter().any(|&e| e >= ctx.order()) {
            return Err(Error::InvalidArgument("matrix entry outside the field".into()));
        }
        let m = MatGL { ctx: ctx.clone(), n, entries };
        if m.det() == 0 {
            return Err(Error::InvalidArgument("matrix is singular".into()));
        }
        Ok(m)
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        MatGL { ctx: ctx.clone(), n, entries }
    }

    fn from_rows(ctx: &FieldCtx, rows: &[Vec<u64>]) -> Self {
        MatGL { ctx: ctx.clone(), n: rows.len(), entries: rows.concat() }
    }

    fn from_columns(ctx: &FieldCtx, cols: &[Vec<u64>]) -> Self {
        let n = cols.len();
        let entries = (0..n).flat_map(|i| cols.iter().map(move |c| c[i])).collect();
        MatGL { ctx: ctx.clone(), n, entries }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn mul(&self, other: &MatGL) -> MatGL {
        assert!(self.n == other.n && self.ctx == other.ctx, "incompatible matrices");
        let (n, ctx) = (self.n, &self.ctx);
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = ctx.add(*e, ctx.mul(a, other.get(k, j)));
                }
            }
        }
        MatGL { ctx: ctx.clone(), n, entries }
    }

    pub fn inverse(&self) -> MatGL {
        let inv = linalg::inverse(&self.ctx, &self.rows()).expect("MatGL is invertible");
        MatGL::from_rows(&self.ctx, &inv)
    }

    pub fn pow(&self, mut e: u128) -> MatGL {
        let mut base = self.clone();
        let mut acc = MatGL::identity(&self.ctx, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn det(&self) -> u64 {
        linalg::determinant(&self.ctx, &self.rows())
    }

    /// `M v` for a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|i| (0..self.n).fold(0, |acc, j| self.ctx.add(acc, self.ctx.mul(self.get(i, j), v[j]))))
            .collect()
    }

    /// Exact multiplicative order check: `M^m = I` and `M^{m/r} != I` for
    /// each prime `r | m`.
    pub fn has_order(&self, m: u128) -> bool {
        self.pow(m).is_identity() && arith::prime_divisors(m).into_iter().all(|r| !self.pow(m / r).is_identity())
    }

    /// Multiplicative order by factoring `|GL(n,q)|`-bounded candidates.
    pub fn order(&self) -> u128 {
        let bound = gl_order(self.n, &self.ctx).expect("order fits in u128");
        let mut m = bound;
        for (r, _) in arith::factorize(bound) {
            while m % r == 0 && self.pow(m / r).is_identity() {
                m /= r;
            }
        }
        m
    }

    /// Image of each nonzero vector, by index.
    pub fn permutation(&self) -> Vec<u32> {
        let q = self.ctx.order();
        let count = vector_count(self.n, q);
        (1..=count).map(|idx| (vector_index(&self.apply(&vector_at(idx, self.n, q)), q) - 1) as u32).collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type_of_permutation(&self.permutation())
    }
}

impl PartialEq for MatGL {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries && self.ctx == other.ctx
    }
}

impl Eq for MatGL {}

impl fmt::Debug for MatGL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatGL{:?} over {}", self.rows(), self.ctx)
    }
}

impl Serialize for MatGL {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| self.ctx.format_value(v)).collect())
            .collect();
        rows.serialize(s)
    }
}

/// `q^n - 1`.
pub fn vector_count(n: usize, q: u64) -> u64 {
    q.pow(n as u32) - 1
}

/// Lexicographic rank of a vector (zero vector has rank 0).
pub fn vector_index(v: &[u64], q: u64) -> u64 {
    v.iter().fold(0, |acc, &c| acc * q + c)
}

pub fn vector_at(mut idx: u64, n: usize, q: u64) -> Vec<u64> {
    let mut v = vec![0u64; n];
    for i in (0..n).rev() {
        v[i] = idx % q;
        idx /= q;
    }
    v
}

pub fn cycle_type_of_permutation(perm: &[u32]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    CycleType::new(lengths)
}

pub fn cycle_type_of(m: &MatGL) -> CycleType {
    m.cycle_type()
}

/// The model `F_{q^n} = F_q[x]/(f)` for a primitive `f`, shared by the
/// Singer cycle and the Frobenius matrix so that both act on one space.
#[derive(Clone, Debug)]
pub struct SingerModel {
    field: FieldCtx,
    ext: FieldCtx,
    n: usize,
}

impl SingerModel {
    /// Searches a seeded stream of monic degree-`n` polynomials for one that
    /// is irreducible with a root of order `q^n - 1`.
    pub fn new(field: &FieldCtx, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let q = field.order();
        let size = q
            .checked_pow(n as u32)
            .filter(|&s| s <= crate::ff::CARDINALITY_CAP)
            .ok_or(Error::CardinalityOverflow)?;
        let primes = arith::prime_divisors(size as u128 - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut modulus: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            let Ok(ext) = field.with_modulus(&modulus) else {
                continue;
            };
            let z = ext.generator().value();
            if primes.iter().all(|&r| ext.pow(z, (size as u128 - 1) / r) != 1) {
                return Ok(SingerModel { field: field.clone(), ext, n });
            }
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// `F_{q^n}` with the primitive modulus.
    pub fn extension(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Primitive polynomial, constant term first.
    pub fn modulus(&self) -> &[u64] {
        self.ext.modulus()
    }

    fn matrix_of(&self, f: impl Fn(u64) -> u64) -> MatGL {
        let q = self.field.order();
        let cols: Vec<Vec<u64>> = (0..self.n)
            .map(|j| self.ext.coords_over(&self.field, f(q.pow(j as u32))).unwrap())
            .collect();
        MatGL::from_columns(&self.field, &cols)
    }

    /// Multiplication by the primitive root `z` in the power basis: the
    /// companion matrix of the primitive polynomial.
    pub fn singer(&self) -> MatGL {
        let z = self.ext.generator().value();
        self.matrix_of(|v| self.ext.mul(z, v))
    }

    /// `v -> v^q` in the power basis.
    pub fn frobenius(&self) -> MatGL {
        let q = self.field.order() as u128;
        self.matrix_of(|v| self.ext.pow(v, q))
    }

    /// `<S, F>`, the normalizer of the Singer subgroup.
    pub fn normalizer(&self, cap: usize) -> Result<Vec<MatGL>> {
        generate_group(&[self.singer(), self.frobenius()], cap)
    }
}

pub fn singer_generator(n: usize, field: &FieldCtx) -> Result<MatGL> {
    Ok(SingerModel::new(field, n, 0)?.singer())
}

pub fn frobenius_matrix(n: usize, field: &FieldCtx) -> Result<MatGL> {
    Ok(SingerModel::new(field, n, 0)?.frobenius())
}

/// Breadth-first closure of `gens` under right multiplication, starting
/// from the identity. Elements come back in discovery order.
pub fn generate_group(gens: &[MatGL], cap: usize) -> Result<Vec<MatGL>> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidArgument("no generators".into()));
    };
    let (ctx, n) = (first.ctx.clone(), first.n);
    if gens.iter().any(|g| g.n != n || g.ctx != ctx) {
        return Err(Error::InvalidArgument("generators of mixed shape or field".into()));
    }
    let id = MatGL::identity(&ctx, n);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([id.entries.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s);
            if seen.insert(h.entries.clone()) {
                if out.len() >= cap {
                    return Err(Error::CapExceeded(format!("group has more than {cap} elements")));
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

/// Number of elements fixing the nonzero vector `v`.
pub fn stabilizer_order(elements: &[MatGL], v: &[u64]) -> Result<usize> {
    if v.iter().all(|&c| c == 0) {
        return Err(Error::ZeroVector);
    }
    Ok(elements.iter().filter(|m| m.apply(v) == v).count())
}

/// `prod_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, field: &FieldCtx) -> Result<u128> {
    gl_order_q(n, field.order())
}

pub fn gl_order_q(n: usize, q: u64) -> Result<u128> {
    let overflow = || Error::CapExceeded("|GL(n,q)| does not fit in 128 bits".into());
    let q = q as u128;
    let qn = q.checked_pow(n as u32).ok_or_else(overflow)?;
    (0..n as u32).try_fold(1u128, |acc, i| acc.checked_mul(qn - q.pow(i)).ok_or_else(overflow))
}

/// Every element of `GL(n,q)`, built row by row so each new row avoids the
/// span of the previous ones. Rows are chosen in lexicographic order.
pub fn enumerate_gl(n: usize, field: &FieldCtx) -> Result<Vec<MatGL>> {
    let q = field.order();
    match q.checked_pow((n * n) as u32) {
        Some(s) if s <= GL_ENUMERATION_CAP && n > 0 => {}
        _ => return Err(Error::CapExceeded(format!("q^(n^2) above {GL_ENUMERATION_CAP}"))),
    }
    let total = q.pow(n as u32);
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut span = vec![false; total as usize];
    span[0] = true;
    extend_rows(field, n, &mut rows, &span, &mut out);
    Ok(out)
}

fn extend_rows(field: &FieldCtx, n: usize, rows: &mut Vec<Vec<u64>>, span: &[bool], out: &mut Vec<MatGL>) {
    if rows.len() == n {
        out.push(MatGL::from_rows(field, rows));
        return;
    }
    let q = field.order();
    for idx in 0..span.len() as u64 {
        if span[idx as usize] {
            continue;
        }
        let v = vector_at(idx, n, q);
        let mut next = span.to_vec();
        for (s, &inside) in span.iter().enumerate() {
            if !inside {
                continue;
            }
            let w = vector_at(s as u64, n, q);
            for c in 1..q {
                let sum: Vec<u64> = w.iter().zip(&v).map(|(&a, &b)| field.add(a, field.mul(c, b))).collect();
                next[vector_index(&sum, q) as usize] = true;
            }
        }
        rows.push(v);
        extend_rows(field, n, rows, &next, out);
        rows.pop();
    }
}

/// A generating set of `GL(n,q)`: the transvection `I + E_{01}`, the cyclic
/// coordinate shift and `diag(w, 1, ..., 1)` for a primitive `w`.
pub fn gl_generators(n: usize, field: &FieldCtx) -> Vec<MatGL> {
    let w = field.primitive_element();
    let mut diag = MatGL::identity(field, n);
    diag.entries[0] = w;
    if n == 1 {
        return vec![diag];
    }
    let mut transvection = MatGL::identity(field, n);
    transvection.entries[1] = 1;
    let mut shift = MatGL { ctx: field.clone(), n, entries: vec![0; n * n] };
    for i in 0..n {
        shift.entries[i * n + (i + 1) % n] = 1;
    }
    vec![transvection, shift, diag]
}

/// Cycle-type counts of a group acting on nonzero vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    order: u128,
    counts: BTreeMap<CycleType, u64>,
}

impl Census {
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn counts(&self) -> &BTreeMap<CycleType, u64> {
        &self.counts
    }

    pub fn contains(&self, t: &CycleType) -> bool {
        self.counts.contains_key(t)
    }
}

impl Serialize for Census {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Class<'a> {
            cycle_type: &'a CycleType,
            count: u64,
        }
        let classes: Vec<Class> = self.counts.iter().map(|(t, &c)| Class { cycle_type: t, count: c }).collect();
        let mut st = s.serialize_struct("Census", 3)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("distinct_cycle_types", &classes.len())?;
        st.serialize_field("classes", &classes)?;
        st.end()
    }
}

/// Counts are merged into a sorted map, so the result does not depend on
/// how the parallel fold is scheduled.
pub fn census(elements: &[MatGL]) -> Census {
    let counts = elements
        .par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<CycleType, u64>, m| {
            *acc.entry(m.cycle_type()).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Census { order: elements.len() as u128, counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn singer_small_cases() {
        let f3 = fp(3);
        let s = singer_generator(1, &f3).unwrap();
        assert_eq!(s.entries(), &[2]);
        let s = singer_generator(2, &f3).unwrap();
        // oracle: repeated multiplication
        let mut m = s.clone();
        let mut k = 1;
        while !m.is_identity() {
            m = m.mul(&s);
            k += 1;
        }
        assert_eq!(k, 8);
        assert!(s.has_order(8));
        assert_eq!(s.order(), 8);
        assert_eq!(s.cycle_type(), CycleType::new(vec![8]));
    }

    #[test]
    fn frobenius_in_the_x2_plus_1_model() {
        let f3 = fp(3);
        let model = SingerModel { field: f3.clone(), ext: f3.with_modulus(&[1, 0, 1]).unwrap(), n: 2 };
        let f = model.frobenius();
        assert_eq!(f.entries(), &[1, 0, 0, 2]);
        assert_eq!(f.cycle_type(), CycleType::new(vec![1, 1, 2, 2, 2]));
    }

    #[test]
    fn frobenius_normalizes_singer() {
        for (n, q) in [(2usize, 3u64), (3, 2), (3, 3), (2, 5)] {
            let model = SingerModel::new(&fp(q), n, 0).unwrap();
            let s = model.singer();
            let f = model.frobenius();
            assert!(f.pow(n as u128).is_identity());
            assert!(s.has_order(q.pow(n as u32) as u128 - 1));
            assert_eq!(f.mul(&s).mul(&f.inverse()), s.pow(q as u128));
        }
    }

    #[test]
    fn normalizer_orders_and_stabilizers() {
        for (n, q) in [(2usize, 3u64), (3, 2), (3, 3)] {
            let model = SingerModel::new(&fp(q), n, 0).unwrap();
            let group = model.normalizer(10_000).unwrap();
            assert_eq!(group.len() as u64, n as u64 * (q.pow(n as u32) - 1));
            for idx in 1..=vector_count(n, q) {
                let v = vector_at(idx, n, q);
                assert_eq!(stabilizer_order(&group, &v).unwrap(), n);
            }
        }
        let g = generate_group(&[MatGL::identity(&fp(3), 2)], 10).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(stabilizer_order(&g, &[0, 0]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(3, &fp(3)).unwrap(), 11232);
        assert_eq!(gl_order(1, &fp(7)).unwrap(), 6);
        assert_eq!(gl_order(3, &fp(2)).unwrap(), 168);
        let g = generate_group(&gl_generators(3, &fp(2)), 1000).unwrap();
        assert_eq!(g.len(), 168);
        assert!(generate_group(&gl_generators(3, &fp(2)), 100).is_err());
    }

    #[test]
    fn generators_match_enumeration() {
        for (n, q) in [(2usize, 2u64), (2, 3), (3, 2), (2, 4)] {
            let field = if q == 4 { FieldCtx::make(2, 2, 0).unwrap() } else { fp(q) };
            let all = enumerate_gl(n, &field).unwrap();
            assert_eq!(all.len() as u128, gl_order(n, &field).unwrap());
            let gen = generate_group(&gl_generators(n, &field), 100_000).unwrap();
            assert_eq!(gen.len(), all.len());
            assert_eq!(census(&gen), census(&all));
        }
        assert!(enumerate_gl(3, &FieldCtx::make(2, 2, 0).unwrap()).is_err());
    }

    #[test]
    fn full_census_sums_to_group_order() {
        for (n, q) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
            let field = fp(q);
            let c = census(&enumerate_gl(n, &field).unwrap());
            assert_eq!(c.counts().values().sum::<u64>() as u128, gl_order(n, &field).unwrap());
            for t in c.counts().keys() {
                assert_eq!(t.total(), q.pow(n as u32) - 1);
            }
        }
    }

    #[test]
    fn normalizer_census_has_odd_fixed_point_types() {
        let model = SingerModel::new(&fp(3), 3, 0).unwrap();
        let c = census(&model.normalizer(1000).unwrap());
        assert_eq!(c.order(), 78);
        for t in c.counts().keys().filter(|t| t.has_fixed_point()) {
            assert_eq!(3 % t.lcm(), 0, "{t}");
            assert!(!t.has_even_length());
        }
    }

    #[test]
    fn identity_cycle_type() {
        let id = MatGL::identity(&fp(3), 2);
        assert_eq!(id.cycle_type(), CycleType::new(vec![1; 8]));
        assert!(MatGL::new(&fp(3), 2, vec![1, 2, 2, 1]).is_err());
    }
}
