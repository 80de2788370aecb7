//! Exhaustive checkers for the finite statements behind the verdicts.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::group::{self, Census, MatGL, SingerModel};
use crate::linpoly::{LinPoly, SquareClass};
use crate::poly::{CycleType, Poly};

/// Largest number of maps `verify_gmg` enumerates.
pub const GMG_MAP_CAP: u64 = 1_000_000;
pub const DISC_LEMMA_CAP: u64 = 729;
pub const FACTOR_IDENTITY_CAP: u64 = 512;
/// Bound on `|group| * (q^n - 1)` for permutation-level checks.
pub const PERMUTATION_WORK_CAP: u128 = 100_000_000;

const MAX_COUNTEREXAMPLES: usize = 10;

fn qn(q: u64, n: usize, cap: u64) -> Result<u64> {
    arith::checked_pow(q, n as u32)
        .filter(|&v| v <= cap)
        .ok_or_else(|| Error::CapExceeded(format!("q^n above {cap}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct GmgReport {
    pub q: u64,
    pub p: u64,
    pub m: usize,
    pub maps_checked: u64,
    pub passing_count: usize,
    pub expected_count: usize,
    /// Coefficient vectors `(c_0, ..., c_{m-1})` of the passing maps.
    pub passing: Vec<Vec<u64>>,
    pub counterexamples: Vec<Vec<u64>>,
    pub pass: bool,
}

/// Over `F_q`, `q = p^m` odd: the nonzero p-linearized maps
/// `L = sum_{i<m} c_i x^{p^i}` with `L(x)/x` always a square or zero are
/// exactly `a x^{p^d}` with `a` a nonzero square.
pub fn verify_gmg(field: &FieldCtx, cap: u64) -> Result<GmgReport> {
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let (q, m) = (field.order(), field.absolute_degree());
    let maps = arith::checked_pow(q, m as u32)
        .map(|v| v - 1)
        .filter(|&v| v <= cap)
        .ok_or_else(|| Error::CapExceeded(format!("more than {cap} maps")))?;
    // pw[i][x] = x^{p^i}
    let mut pw: Vec<Vec<u64>> = vec![(0..q).collect()];
    for i in 1..m {
        let row = pw[i - 1].iter().map(|&x| field.pow(x, p as u128)).collect();
        pw.push(row);
    }
    let inverses: Vec<u64> = (0..q).map(|x| field.inv(x).unwrap_or(0)).collect();
    let square: Vec<bool> = (0..q).map(|x| x == 0 || field.is_square_raw(x).unwrap()).collect();

    let results: Vec<(Vec<u64>, bool, bool)> = (1..=maps)
        .into_par_iter()
        .map(|idx| {
            let c = group::vector_at(idx, m, q);
            let in_squares = (1..q).all(|x| {
                let lx = c.iter().enumerate().fold(0, |acc, (i, &ci)| field.add(acc, field.mul(ci, pw[i][x as usize])));
                square[field.mul(lx, inverses[x as usize]) as usize]
            });
            let nonzero: Vec<u64> = c.iter().copied().filter(|&v| v != 0).collect();
            let expected = nonzero.len() == 1 && field.is_square_raw(nonzero[0]).unwrap();
            (c, in_squares, expected)
        })
        .collect();

    let passing: Vec<Vec<u64>> = results.iter().filter(|r| r.1).map(|r| r.0.clone()).collect();
    let counterexamples: Vec<Vec<u64>> =
        results.iter().filter(|r| r.1 != r.2).take(MAX_COUNTEREXAMPLES).map(|r| r.0.clone()).collect();
    let expected_count = m * (q as usize - 1) / 2;
    Ok(GmgReport {
        q,
        p,
        m,
        maps_checked: maps,
        passing_count: passing.len(),
        expected_count,
        pass: counterexamples.is_empty() && passing.len() == expected_count,
        passing,
        counterexamples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscMismatch {
    pub coeffs: Vec<u64>,
    pub resultant_class: SquareClass,
    pub formula_class: SquareClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscLemmaReport {
    pub q: u64,
    pub n: usize,
    pub polynomials_checked: usize,
    pub agreements: usize,
    pub counterexamples: Vec<DiscMismatch>,
    pub pass: bool,
}

/// For every monic `L` of q-degree `n` with `a_0 = c != 0`, the square class
/// of `disc(L(x)/x)` computed through the resultant equals the class of
/// `(-1)^{(q^n-1)/2} c`.
pub fn verify_disc_lemma(field: &FieldCtx, n: usize) -> Result<DiscLemmaReport> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let q = field.order();
    qn(q, n, DISC_LEMMA_CAP)?;
    let tails = q.pow(n as u32 - 1);
    let results: Vec<(Vec<u64>, SquareClass, SquareClass)> = (1..q)
        .flat_map(|c| (0..tails).map(move |t| (c, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, t)| {
            let mut coeffs = vec![c];
            coeffs.extend(group::vector_at(t, n - 1, q));
            coeffs.push(1);
            let l = LinPoly::from_values(field, field, &coeffs)?;
            let disc = l.reduced(field)?.discriminant()?;
            Ok((coeffs, SquareClass::of(&disc)?, l.disc_square_class()?))
        })
        .collect::<Result<_>>()?;
    let agreements = results.iter().filter(|r| r.1 == r.2).count();
    let counterexamples = results
        .iter()
        .filter(|r| r.1 != r.2)
        .take(MAX_COUNTEREXAMPLES)
        .map(|r| DiscMismatch { coeffs: r.0.clone(), resultant_class: r.1, formula_class: r.2 })
        .collect();
    Ok(DiscLemmaReport {
        q,
        n,
        polynomials_checked: results.len(),
        pass: agreements == results.len(),
        agreements,
        counterexamples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorIdentityReport {
    pub q: u64,
    pub n: usize,
    /// `(d, number of irreducible factors of degree d)` in `x^{q^n} - x`.
    pub degree_counts: Vec<(u64, u64)>,
    pub necklace_counts: Vec<(u64, u64)>,
    pub product_matches: bool,
    pub corpus_size: usize,
    /// Separable q-polynomials whose factor degrees all divide `n`.
    pub hypothesis_holders: Vec<Vec<u64>>,
    pub forcing_holds: bool,
    pub pass: bool,
}

/// `x^{q^n} - x` is the product of the monic irreducibles of degree
/// dividing `n`, and among the separable monic q-polynomials of q-degree
/// `n` it is the only one whose factor degrees all divide `n`.
pub fn verify_factor_identity(field: &FieldCtx, n: usize) -> Result<FactorIdentityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let q = field.order();
    let size = qn(q, n, FACTOR_IDENTITY_CAP)?;
    let mut dense = vec![0u64; size as usize + 1];
    dense[1] = field.neg(1);
    dense[size as usize] = 1;
    let target = Poly::from_values(field, &dense)?;

    let factors = target.factor()?;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut product = Poly::one(field);
    let mut all_simple = true;
    for (f, mult) in &factors {
        all_simple &= *mult == 1;
        *counts.entry(f.degree().unwrap() as u64).or_default() += 1;
        for _ in 0..*mult {
            product = product.mul(f);
        }
    }
    let necklace: Vec<(u64, u64)> =
        arith::divisors(n as u64).into_iter().map(|d| (d, arith::necklace_count(q, d))).collect();
    let degree_counts: Vec<(u64, u64)> = counts.into_iter().collect();
    let product_matches = product == target && all_simple;

    let tails = q.pow(n as u32 - 1);
    let corpus: Vec<Vec<u64>> = (1..q)
        .flat_map(|c| {
            (0..tails).map(move |t| {
                let mut coeffs = vec![c];
                coeffs.extend(group::vector_at(t, n - 1, q));
                coeffs.push(1);
                coeffs
            })
        })
        .collect();
    let holders: Vec<Vec<u64>> = corpus
        .par_iter()
        .map(|coeffs| {
            let l = LinPoly::from_values(field, field, coeffs)?;
            let degrees = l.to_poly(field)?.factor_degrees()?;
            Ok(degrees.lengths().iter().all(|d| n as u64 % d == 0).then(|| coeffs.clone()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut expected = vec![0u64; n + 1];
    expected[0] = field.neg(1);
    expected[n] = 1;
    let forcing_holds = holders == vec![expected];

    Ok(FactorIdentityReport {
        q,
        n,
        pass: product_matches && degree_counts == necklace && forcing_holds,
        degree_counts,
        necklace_counts: necklace,
        product_matches,
        corpus_size: corpus.len(),
        hypothesis_holders: holders,
        forcing_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlternatingReport {
    pub q: u64,
    pub n: usize,
    /// `"census"` for a full enumeration of `GL(n,q)`, `"generators"` when
    /// only a generating set is checked (sign is a homomorphism).
    pub mode: &'static str,
    pub elements_checked: u64,
    pub odd_elements: u64,
    pub odd_example: Option<CycleType>,
    pub all_even: bool,
    pub exception_case: bool,
    pub pass: bool,
}

/// For `q` even, `GL(n,q)` acts on the nonzero vectors by even
/// permutations, except when `q = n = 2`. The report passes when the
/// observed parity matches that prediction.
pub fn verify_alternating_char2(field: &FieldCtx, n: usize) -> Result<AlternatingReport> {
    if field.characteristic() != 2 {
        return Err(Error::InvalidArgument("the alternating check needs characteristic 2".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let q = field.order();
    let (mode, counts): (&'static str, Vec<(CycleType, u64)>) = match group::enumerate_gl(n, field) {
        Ok(all) => ("census", group::census(&all).counts().clone().into_iter().collect()),
        Err(Error::CapExceeded(_)) => {
            qn(q, n, 1 << 20)?;
            let gens = group::gl_generators(n, field);
            ("generators", gens.iter().map(|g| (g.cycle_type(), 1)).collect())
        }
        Err(e) => return Err(e),
    };
    let elements_checked = counts.iter().map(|c| c.1).sum();
    let odd: Vec<&(CycleType, u64)> = counts.iter().filter(|c| !c.0.is_even_permutation()).collect();
    let odd_elements = odd.iter().map(|c| c.1).sum();
    let all_even = odd.is_empty();
    let exception_case = q == 2 && n == 2;
    Ok(AlternatingReport {
        q,
        n,
        mode,
        elements_checked,
        odd_elements,
        odd_example: odd.first().map(|c| c.0.clone()),
        all_even,
        exception_case,
        pass: all_even != exception_case,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizerReport {
    pub q: u64,
    pub n: usize,
    pub modulus: Vec<u64>,
    pub singer: MatGL,
    pub frobenius: MatGL,
    pub singer_order: u128,
    pub frobenius_order: u128,
    /// `F S F^{-1} = S^q`.
    pub relation_holds: bool,
    pub group_order: u128,
    pub expected_order: u128,
    pub stabilizer_orders: Vec<u64>,
    pub stabilizers_equal_n: bool,
    /// Fixed-point elements have order dividing `n`, and odd order for odd `n`.
    pub fixed_point_types_ok: bool,
    pub census: Census,
    pub pass: bool,
}

/// Builds `S` and `F` from one primitive model of `F_{q^n}` and checks the
/// structure of `N(C) = <S, F>`.
pub fn verify_normalizer(field: &FieldCtx, n: usize, seed: u64) -> Result<NormalizerReport> {
    let q = field.order();
    let size = arith::checked_pow(q, n as u32).ok_or(Error::CardinalityOverflow)? as u128;
    let expected_order = n as u128 * (size - 1);
    if expected_order.saturating_mul(size - 1) > PERMUTATION_WORK_CAP {
        return Err(Error::CapExceeded(format!("|N(C)| (q^n - 1) above {PERMUTATION_WORK_CAP}")));
    }
    let model = SingerModel::new(field, n, seed)?;
    let (s, f) = (model.singer(), model.frobenius());
    let singer_order = s.order();
    let frobenius_order = f.order();
    let relation_holds = f.mul(&s).mul(&f.inverse()) == s.pow(q as u128);
    let elements = model.normalizer(expected_order as usize + 1)?;

    let perms: Vec<Vec<u32>> = elements.par_iter().map(|m| m.permutation()).collect();
    let mut stabilizer_orders = vec![0u64; size as usize - 1];
    for perm in &perms {
        for (i, &img) in perm.iter().enumerate() {
            if img as usize == i {
                stabilizer_orders[i] += 1;
            }
        }
    }
    let stabilizers_equal_n = stabilizer_orders.iter().all(|&c| c == n as u64);
    let census = group::census(&elements);
    let fixed_point_types_ok = census
        .counts()
        .keys()
        .filter(|t| t.has_fixed_point())
        .all(|t| n as u128 % t.lcm() == 0 && (n % 2 == 0 || !t.has_even_length()));
    let group_order = elements.len() as u128;
    Ok(NormalizerReport {
        q,
        n,
        modulus: model.modulus().to_vec(),
        pass: singer_order == size - 1
            && frobenius_order == n as u128
            && relation_holds
            && group_order == expected_order
            && stabilizers_equal_n
            && fixed_point_types_ok,
        singer: s,
        frobenius: f,
        singer_order,
        frobenius_order,
        relation_holds,
        group_order,
        expected_order,
        stabilizer_orders,
        stabilizers_equal_n,
        fixed_point_types_ok,
        census,
    })
}
