//! Evidence gathering for the Galois group `Γ` of `L(x) + tx` over `F_q(t)`.
//!
//! Specializing `t` to `-L(α)/α` for `α` in `F_{q^k}` gives the q-polynomial
//! `L_α(x) = L(x) - (L(α)/α) x`. The factor degrees of `L_α(x)/x` over
//! `F_{q^k}` form the cycle type of an element of `Γ` (Dedekind). The
//! functions here sample those cycle types, look for witnesses that `Γ` is
//! not inside the normalizer `N(C)` of a Singer cycle, and turn the result
//! into a [`Verdict`].

mod verify;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::group::{self, Census, SingerModel};
use crate::linpoly::{LinPoly, SquareClass};
use crate::poly::CycleType;

pub use verify::{
    verify_alternating_char2, verify_disc_lemma, verify_factor_identity, verify_gmg, verify_normalizer,
    AlternatingReport, DiscLemmaReport, DiscMismatch, FactorIdentityReport, GmgReport, NormalizerReport,
    DISC_LEMMA_CAP, FACTOR_IDENTITY_CAP, GMG_MAP_CAP, PERMUTATION_WORK_CAP,
};

/// Fields with at most this many elements are enumerated in full.
pub const EXHAUSTIVE_LIMIT: u64 = 2000;

pub const DEFAULT_BUDGET: usize = 200;

/// Largest `|N(C)| * (q^n - 1)` for which verdicts attach the normalizer census.
pub const NORMALIZER_WORK_CAP: u128 = 50_000_000;

pub fn default_kmax(n: usize) -> usize {
    n + 3
}

/// A point `α` of `F_{q^k}`, stored so it can be rebuilt from `F_q` alone:
/// the modulus of `F_{q^k}` over `F_q` (packed `F_q` values, constant term
/// first), the packed value, and its coordinates over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaPoint {
    pub k: usize,
    pub modulus: Vec<u64>,
    pub value: u64,
    pub coords: Vec<u64>,
}

impl AlphaPoint {
    pub fn new(base: &FieldCtx, k: usize, alpha: &FieldElem) -> Result<Self> {
        let ext = alpha.ctx();
        let modulus = if k == 1 { vec![0, 1] } else { ext.modulus().to_vec() };
        Ok(AlphaPoint { k, modulus, value: alpha.value(), coords: ext.coords_over(base, alpha.value())? })
    }

    /// Reconstructs `α` in a fresh copy of `F_{q^k}` built from the stored modulus.
    pub fn rebuild(&self, base: &FieldCtx) -> Result<FieldElem> {
        let ext = if self.k == 1 { base.clone() } else { base.with_modulus(&self.modulus)? };
        if ext.degree_over(base)? != self.k {
            return Err(Error::DegreeMismatch { expected: self.k, found: ext.degree_over(base)? });
        }
        let alpha = ext.elem(self.value)?;
        if ext.coords_over(base, self.value)? != self.coords {
            return Err(Error::InvalidArgument("alpha coordinates do not match its value".into()));
        }
        Ok(alpha)
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub k: usize,
    pub alpha: FieldElem,
    pub cycle_type: CycleType,
}

#[derive(Clone, Debug)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    /// `α` with `L(α) = 0`, which give an inseparable specialization.
    pub skipped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvidenceKind {
    CycleTypeSample,
    OrderLcm,
    FixedPointOddness,
    DiscWitness,
    NCycleGuarantee,
    Char2SumCondition,
    FactorIdentity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Sample {
        alpha: AlphaPoint,
        cycle_type: CycleType,
    },
    Disc {
        alpha: AlphaPoint,
        /// Constant term `-L(α)/α` of `L_α(x)/x`, packed in `F_{q^k}`.
        constant_term: u64,
        square_class: SquareClass,
    },
    Lcm {
        samples: usize,
        lcm: u128,
        guaranteed_divisor: u128,
        combined: u128,
    },
    NCycle {
        cycle_length: u64,
        characteristic: u64,
        gcd: u128,
    },
    Char2Sum {
        /// `a_1 + ... + a_{n-1} + 1`, packed in `F_q`.
        sum: u64,
        alpha: u64,
        l_alpha: u64,
    },
    Normalizer {
        order: u128,
        census: Census,
        fixed_point_types: Vec<CycleType>,
        samples_in_census: Option<bool>,
    },
    Identity {
        q: u64,
        n: usize,
        degree_counts: Vec<(u64, u64)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub kind: EvidenceKind,
    pub payload: Payload,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupVerdict {
    GL,
    GammaL,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    MainTheorem,
    Char2Theorem,
    EvidenceOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub verdict: GroupVerdict,
    pub group: String,
    pub order: Option<u128>,
    pub basis: Basis,
    pub evidence: Vec<Evidence>,
    pub skipped_alphas: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub kmax: Option<usize>,
    pub budget: usize,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { kmax: None, budget: DEFAULT_BUDGET, seed: 0 }
    }
}

/// `F_{q^k}` as a single tower step over `F_q`.
pub fn sample_field(base: &FieldCtx, k: usize, seed: u64) -> Result<FieldCtx> {
    base.extend(k, seed)
}

/// Nonzero packed values to try in `field`: all of them when the field is
/// small, otherwise `budget` seeded draws, sorted and deduplicated.
fn alpha_values(field: &FieldCtx, k: usize, budget: usize, seed: u64) -> Vec<u64> {
    let order = field.order();
    if order <= EXHAUSTIVE_LIMIT {
        return (1..order).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let set: BTreeSet<u64> = (0..budget).map(|_| rng.gen_range(1..order)).collect();
    set.into_iter().collect()
}

fn normalized_monic(l: &LinPoly) -> Result<LinPoly> {
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(l.normalized())
}

fn k_values(ks: &[usize]) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = ks.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::InvalidArgument("empty k range".into()));
    }
    if set.contains(&0) {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(set.into_iter().collect())
}

/// Factor degrees of `L_α(x)/x` over `α`'s field, for `L` already normalized.
fn specialized_cycle_type(l: &LinPoly, alpha: &FieldElem) -> Result<CycleType> {
    l.specialize(alpha)?.reduced(alpha.ctx())?.factor_degrees()
}

/// Cycle types of Frobenius elements of `Γ`, one per sampled `α` with
/// `L(α) != 0`, ordered by `(k, α)`. `L` is normalized to `a_0 = 0` first.
pub fn sample_cycle_types(l: &LinPoly, ks: &[usize], budget: usize, seed: u64) -> Result<SampleSet> {
    let l = normalized_monic(l)?;
    let base = l.base().clone();
    let mut samples = Vec::new();
    let mut skipped = 0;
    for k in k_values(ks)? {
        let field = sample_field(&base, k, seed)?;
        let values = alpha_values(&field, k, budget, seed);
        let types: Vec<Option<CycleType>> = values
            .par_iter()
            .map(|&a| {
                if l.evaluate_raw(&field, a) == 0 {
                    return Ok(None);
                }
                specialized_cycle_type(&l, &field.elem(a)?).map(Some)
            })
            .collect::<Result<_>>()?;
        for (a, t) in values.into_iter().zip(types) {
            match t {
                Some(cycle_type) => samples.push(Sample { k, alpha: field.elem(a)?, cycle_type }),
                None => skipped += 1,
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::NoSamples(format!("L vanishes at every sampled point ({skipped} skipped)")));
    }
    Ok(SampleSet { samples, skipped })
}

/// lcm of the orders of the sampled elements; it divides `|Γ|`.
pub fn order_lcm_evidence(samples: &[Sample]) -> u128 {
    samples.iter().fold(1, |acc, s| arith::lcm(acc, s.cycle_type.lcm()))
}

pub fn order_lcm_entry(samples: &[Sample], q: u64, n: usize) -> Result<Evidence> {
    let lcm = order_lcm_evidence(samples);
    let guaranteed = arith::checked_pow(q, n as u32).ok_or(Error::CardinalityOverflow)? as u128 - 1;
    let combined = arith::lcm(lcm, guaranteed);
    Ok(Evidence {
        kind: EvidenceKind::OrderLcm,
        payload: Payload::Lcm { samples: samples.len(), lcm, guaranteed_divisor: guaranteed, combined },
        note: format!("{combined} divides |Γ|"),
    })
}

/// Why an element with cycle type `t` cannot lie in `N(C)`: elements of
/// `N(C)` with a fixed point have order dividing `n`.
pub fn incompatibility_reason(t: &CycleType, n: usize) -> Option<String> {
    if !t.has_fixed_point() {
        return None;
    }
    let n = n as u128;
    if n % 2 == 1 && t.has_even_length() {
        return Some(format!("fixed point and an even cycle length, n = {n} is odd"));
    }
    if n % t.lcm() != 0 {
        return Some(format!("fixed point and order {} not dividing n = {n}", t.lcm()));
    }
    None
}

fn sample_evidence(base: &FieldCtx, kind: EvidenceKind, s: &Sample, note: String) -> Result<Evidence> {
    Ok(Evidence {
        kind,
        payload: Payload::Sample { alpha: AlphaPoint::new(base, s.k, &s.alpha)?, cycle_type: s.cycle_type.clone() },
        note,
    })
}

/// First sample whose cycle type rules out `Γ <= N(C)`.
pub fn normalizer_incompatibility_witness(base: &FieldCtx, samples: &[Sample], n: usize) -> Option<Evidence> {
    samples.iter().find_map(|s| {
        let reason = incompatibility_reason(&s.cycle_type, n)?;
        sample_evidence(base, EvidenceKind::FixedPointOddness, s, format!("{reason}: Γ is not contained in N(C)"))
            .ok()
    })
}

/// Search result of [`disc_nonsquare_witness`].
#[derive(Clone, Debug)]
pub struct DiscSearch {
    pub witness: Option<Evidence>,
    pub examined: usize,
    pub skipped: usize,
}

/// Looks for `α` with `disc(L_α(x)/x)` a nonsquare in `F_{q^k}`, which
/// gives an odd permutation in `Γ` fixing a point. Requires odd `q`.
pub fn disc_nonsquare_witness(l: &LinPoly, ks: &[usize], budget: usize, seed: u64) -> Result<DiscSearch> {
    if l.base().characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let l = normalized_monic(l)?;
    let base = l.base().clone();
    let (mut examined, mut skipped) = (0, 0);
    for k in k_values(ks)? {
        let field = sample_field(&base, k, seed)?;
        for a in alpha_values(&field, k, budget, seed) {
            examined += 1;
            if l.evaluate_raw(&field, a) == 0 {
                skipped += 1;
                continue;
            }
            let alpha = field.elem(a)?;
            let la = l.specialize(&alpha)?;
            if la.disc_square_class()? == SquareClass::NonSquare {
                let witness = Evidence {
                    kind: EvidenceKind::DiscWitness,
                    payload: Payload::Disc {
                        alpha: AlphaPoint::new(&base, k, &alpha)?,
                        constant_term: la.coeffs()[0],
                        square_class: SquareClass::NonSquare,
                    },
                    note: format!("disc(L_α(x)/x) is a nonsquare in F_{}", field.order()),
                };
                return Ok(DiscSearch { witness: Some(witness), examined, skipped });
            }
        }
    }
    Ok(DiscSearch { witness: None, examined, skipped })
}

fn ncycle_evidence(l: &LinPoly) -> Result<Evidence> {
    let p = l.base().characteristic();
    let len = l.dense_degree().ok_or(Error::CardinalityOverflow)? - 1;
    let gcd = arith::gcd(len as u128, p as u128);
    Ok(Evidence {
        kind: EvidenceKind::NCycleGuarantee,
        payload: Payload::NCycle { cycle_length: len, characteristic: p, gcd },
        note: format!("tame ramification at infinity gives a {len}-cycle in Γ (trusted, not computed)"),
    })
}

/// Re-checks an evidence item from `L` and its payload alone. Points are
/// rebuilt from the stored modulus, and discriminant witnesses are
/// re-derived through the resultant rather than the closed form.
pub fn reverify(l: &LinPoly, ev: &Evidence) -> Result<bool> {
    let l = normalized_monic(l)?;
    let base = l.base();
    let n = l.q_degree();
    match (&ev.kind, &ev.payload) {
        (EvidenceKind::CycleTypeSample | EvidenceKind::FixedPointOddness, Payload::Sample { alpha, cycle_type }) => {
            let alpha = alpha.rebuild(base)?;
            if l.evaluate(&alpha)?.is_zero() {
                return Ok(false);
            }
            let t = specialized_cycle_type(&l, &alpha)?;
            let extra = ev.kind == EvidenceKind::CycleTypeSample || incompatibility_reason(&t, n).is_some();
            Ok(&t == cycle_type && extra)
        }
        (EvidenceKind::DiscWitness, Payload::Disc { alpha, constant_term, square_class }) => {
            let alpha = alpha.rebuild(base)?;
            let field = alpha.ctx().clone();
            let ratio = l.evaluate(&alpha)?.div(&alpha)?;
            if ratio.is_zero() || field.neg(ratio.value()) != *constant_term {
                return Ok(false);
            }
            let g = l.specialize(&alpha)?.reduced(&field)?;
            Ok(SquareClass::of(&g.discriminant()?)? == *square_class && *square_class == SquareClass::NonSquare)
        }
        (EvidenceKind::OrderLcm, Payload::Lcm { lcm, guaranteed_divisor, combined, .. }) => {
            let qn = l.dense_degree().ok_or(Error::CardinalityOverflow)? as u128;
            Ok(*guaranteed_divisor == qn - 1 && *combined == arith::lcm(*lcm, qn - 1))
        }
        (EvidenceKind::NCycleGuarantee, Payload::NCycle { cycle_length, characteristic, gcd }) => {
            let qn = l.dense_degree().ok_or(Error::CardinalityOverflow)?;
            Ok(*cycle_length == qn - 1
                && *characteristic == base.characteristic()
                && *gcd == 1
                && arith::gcd(*cycle_length as u128, *characteristic as u128) == 1)
        }
        (EvidenceKind::Char2SumCondition, Payload::Char2Sum { sum, alpha, l_alpha }) => {
            let s = (1..n).fold(1, |acc, i| base.add(acc, l.coeffs()[i]));
            let value = l.evaluate_raw(base, *alpha);
            Ok(s == *sum && s != 0 && value == *l_alpha && value == base.mul(*alpha, s))
        }
        (EvidenceKind::FixedPointOddness, Payload::Normalizer { order, census, fixed_point_types, .. }) => {
            let qn = l.dense_degree().ok_or(Error::CardinalityOverflow)? as u128;
            let fixed: Vec<CycleType> = census.counts().keys().filter(|t| t.has_fixed_point()).cloned().collect();
            Ok(*order == n as u128 * (qn - 1)
                && census.order() == *order
                && &fixed == fixed_point_types
                && fixed.iter().all(|t| n as u128 % t.lcm() == 0))
        }
        _ => Ok(false),
    }
}

fn gamma_l_order(q: u64, n: usize) -> Result<u128> {
    let qn = arith::checked_pow(q, n as u32).ok_or(Error::CardinalityOverflow)? as u128;
    Ok(n as u128 * (qn - 1))
}

fn normalizer_evidence(l: &LinPoly, samples: Option<&SampleSet>, seed: u64) -> Result<Option<Evidence>> {
    let (q, n) = (l.q(), l.q_degree());
    let order = gamma_l_order(q, n)?;
    if order.saturating_mul(order / n as u128) > NORMALIZER_WORK_CAP {
        return Ok(None);
    }
    let model = SingerModel::new(l.base(), n, seed)?;
    let census = group::census(&model.normalizer(order as usize + 1)?);
    let fixed_point_types = census.counts().keys().filter(|t| t.has_fixed_point()).cloned().collect();
    let samples_in_census = samples.map(|s| s.samples.iter().all(|x| census.contains(&x.cycle_type)));
    let note = match samples_in_census {
        Some(true) => "every sampled cycle type occurs in the census of N(C) = <S, F>",
        Some(false) => "some sampled cycle type is missing from the census of N(C)",
        None => "census of N(C) = <S, F>; fixed-point elements have order dividing n",
    };
    Ok(Some(Evidence {
        kind: EvidenceKind::FixedPointOddness,
        payload: Payload::Normalizer { order, census, fixed_point_types, samples_in_census },
        note: note.into(),
    }))
}

/// Distinct sampled cycle types, each with its first `(k, α)`.
fn distinct_type_evidence(base: &FieldCtx, samples: &[Sample]) -> Result<Vec<Evidence>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in samples {
        if seen.insert(s.cycle_type.clone()) {
            out.push(sample_evidence(base, EvidenceKind::CycleTypeSample, s, "Frobenius cycle type in Γ".into())?);
        }
    }
    Ok(out)
}

/// Identifies `Γ` where one of the two theorems applies and otherwise
/// reports what the sampled evidence shows.
pub fn verdict(l: &LinPoly, expected_n: Option<usize>, opts: AnalyzeOptions) -> Result<Verdict> {
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = l.q_degree();
    if let Some(expected) = expected_n {
        if expected != n {
            return Err(Error::DegreeMismatch { expected, found: n });
        }
    }
    if n == 0 {
        return Err(Error::InvalidArgument("L must have q-degree at least 1".into()));
    }
    let base = l.base().clone();
    let (q, p) = (l.q(), base.characteristic());
    let kmax = opts.kmax.unwrap_or_else(|| default_kmax(n));
    let ks: Vec<usize> = (1..=kmax).collect();
    let lnorm = l.normalized();
    let mut notes = Vec::new();
    if l.coeffs()[0] != 0 {
        notes.push("the coefficient of x was absorbed into t (a_0 set to 0)".to_string());
    }
    let mut evidence = vec![ncycle_evidence(l)?];
    let n_prime = arith::is_prime(n as u64);

    if lnorm.is_top_monomial() {
        let samples = sample_cycle_types(&lnorm, &ks, opts.budget, opts.seed)?;
        evidence.push(order_lcm_entry(&samples.samples, q, n)?);
        match normalizer_evidence(&lnorm, Some(&samples), opts.seed)? {
            Some(ev) => evidence.push(ev),
            None => notes.push("normalizer census skipped: group too large".into()),
        }
        notes.push("geometric monodromy group: cyclic of order q^n - 1 (reported, not computed)".into());
        return Ok(Verdict {
            verdict: GroupVerdict::GammaL,
            group: format!("ΓL(1,{})", l.dense_degree().unwrap()),
            order: Some(gamma_l_order(q, n)?),
            basis: Basis::MainTheorem,
            evidence,
            skipped_alphas: samples.skipped,
            notes,
        });
    }

    let gl = || -> Result<u128> { group::gl_order_q(n, q) };
    let geometric_note = || format!("geometric monodromy group: GL({n},{q}) (reported, not computed)");

    if p != 2 && n_prime && n % 2 == 1 {
        let search = disc_nonsquare_witness(&lnorm, &ks, opts.budget, opts.seed)?;
        let mut skipped = search.skipped;
        if let Some(w) = search.witness {
            evidence.push(w);
        } else {
            let samples = sample_cycle_types(&lnorm, &ks, opts.budget, opts.seed)?;
            skipped = samples.skipped;
            match normalizer_incompatibility_witness(&base, &samples.samples, n) {
                Some(w) => evidence.push(w),
                None => notes.push(format!("no witness found for k <= {kmax}; a larger --kmax may be required")),
            }
            evidence.push(order_lcm_entry(&samples.samples, q, n)?);
        }
        notes.push(geometric_note());
        return Ok(Verdict {
            verdict: GroupVerdict::GL,
            group: format!("GL({n},{q})"),
            order: Some(gl()?),
            basis: Basis::MainTheorem,
            evidence,
            skipped_alphas: skipped,
            notes,
        });
    }

    if p == 2 && n_prime && n % 2 == 1 {
        let sum = (1..n).fold(1, |acc, i| base.add(acc, lnorm.coeffs()[i]));
        if sum != 0 {
            evidence.push(Evidence {
                kind: EvidenceKind::Char2SumCondition,
                payload: Payload::Char2Sum { sum, alpha: 1, l_alpha: lnorm.evaluate_raw(&base, 1) },
                note: "a_1 + ... + a_{n-1} + 1 is nonzero, so L(1) != 0".into(),
            });
            notes.push(geometric_note());
            return Ok(Verdict {
                verdict: GroupVerdict::GL,
                group: format!("GL({n},{q})"),
                order: Some(gl()?),
                basis: Basis::Char2Theorem,
                evidence,
                skipped_alphas: 0,
                notes,
            });
        }
        notes.push("a_1 + ... + a_{n-1} + 1 = 0: the characteristic 2 hypothesis fails".into());
    } else if !n_prime {
        notes.push(format!("n = {n} is not prime: no theorem here identifies Γ"));
    } else {
        notes.push("n = 2 is excluded by both theorems".into());
    }

    let samples = sample_cycle_types(&lnorm, &ks, opts.budget, opts.seed)?;
    evidence.push(order_lcm_entry(&samples.samples, q, n)?);
    if let Some(mut w) = normalizer_incompatibility_witness(&base, &samples.samples, n) {
        w.note.push_str("; the verdict stays open outside the theorems' hypotheses");
        evidence.push(w);
    }
    evidence.extend(distinct_type_evidence(&base, &samples.samples)?);
    notes.push(format!("q^n - 1 = {} divides |Γ|", l.dense_degree().unwrap() - 1));
    Ok(Verdict {
        verdict: GroupVerdict::Inconclusive,
        group: "Inconclusive".into(),
        order: None,
        basis: Basis::EvidenceOnly,
        evidence,
        skipped_alphas: samples.skipped,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(q: u64, s: &str) -> LinPoly {
        let base = match q {
            4 => FieldCtx::make(2, 2, 0).unwrap(),
            9 => FieldCtx::make(3, 2, 0).unwrap(),
            _ => FieldCtx::prime(q).unwrap(),
        };
        LinPoly::parse(&base, s).unwrap()
    }

    #[test]
    fn x9_at_one_gives_x8_minus_1_type() {
        let l = lin(3, "0,0,1");
        let set = sample_cycle_types(&l, &[1], 10, 0).unwrap();
        assert_eq!(set.samples.len(), 2);
        assert_eq!(set.samples[0].cycle_type, CycleType::new(vec![1, 1, 2, 2, 2]));
        assert_eq!(set.skipped, 0);
    }

    #[test]
    fn samples_sum_to_degree_and_are_ordered() {
        let l = lin(3, "0,1,0,1");
        let set = sample_cycle_types(&l, &[2, 1, 3], 10, 0).unwrap();
        assert!(set.samples.iter().all(|s| s.cycle_type.total() == 26));
        let keys: Vec<(usize, u64)> = set.samples.iter().map(|s| (s.k, s.alpha.value())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(sample_cycle_types(&l, &[], 10, 0).is_err());
    }

    #[test]
    fn a0_is_normalized_away() {
        let a = sample_cycle_types(&lin(3, "2,0,1"), &[1, 2], 10, 0).unwrap();
        let b = sample_cycle_types(&lin(3, "0,0,1"), &[1, 2], 10, 0).unwrap();
        let ta: Vec<&CycleType> = a.samples.iter().map(|s| &s.cycle_type).collect();
        let tb: Vec<&CycleType> = b.samples.iter().map(|s| &s.cycle_type).collect();
        assert_eq!(ta, tb);
    }

    #[test]
    fn skipped_roots_are_counted() {
        // x^9 + x^3 = (x^3 + x)^3 vanishes at the two square roots of -1 in F_9
        let set = sample_cycle_types(&lin(3, "0,1,1"), &[1, 2], 10, 0).unwrap();
        assert_eq!(set.skipped, 2);
        assert_eq!(set.samples.len(), 2 + 8 - 2);
    }

    #[test]
    fn random_regime_is_seeded() {
        let l = lin(3, "0,1,1");
        let a = sample_cycle_types(&l, &[7], 20, 5).unwrap();
        let b = sample_cycle_types(&l, &[7], 20, 5).unwrap();
        let va: Vec<u64> = a.samples.iter().map(|s| s.alpha.value()).collect();
        let vb: Vec<u64> = b.samples.iter().map(|s| s.alpha.value()).collect();
        assert_eq!(va, vb);
        assert!(va.len() <= 20 && va.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lcm_evidence() {
        let l = lin(3, "0,0,0,1");
        let set = sample_cycle_types(&l, &[1, 2, 3], 10, 0).unwrap();
        assert_eq!(78 % order_lcm_evidence(&set.samples), 0);
        let ev = order_lcm_entry(&set.samples, 3, 3).unwrap();
        assert!(reverify(&l, &ev).unwrap());
    }

    #[test]
    fn incompatibility_reasons() {
        assert!(incompatibility_reason(&CycleType::new(vec![1, 2, 2]), 3).is_some());
        assert!(incompatibility_reason(&CycleType::new(vec![1; 8]), 3).is_none());
        assert!(incompatibility_reason(&CycleType::new(vec![2, 2]), 3).is_none());
        assert!(incompatibility_reason(&CycleType::new(vec![1, 1, 3, 3]), 3).is_none());
        assert!(incompatibility_reason(&CycleType::new(vec![1, 1, 5]), 3).is_some());
    }

    #[test]
    fn no_disc_witness_for_monomial() {
        let l = lin(3, "0,0,0,1");
        let s = disc_nonsquare_witness(&l, &[1, 2, 3, 4], 50, 0).unwrap();
        assert!(s.witness.is_none());
        assert_eq!(s.examined, 2 + 8 + 26 + 80);
        assert!(disc_nonsquare_witness(&lin(2, "0,1,1"), &[1], 5, 0).is_err());
    }

    #[test]
    fn disc_witness_reverifies() {
        let l = lin(3, "0,1,0,1");
        let s = disc_nonsquare_witness(&l, &[1, 2, 3], 50, 0).unwrap();
        let w = s.witness.unwrap();
        assert!(reverify(&l, &w).unwrap());
        let mut bad = w.clone();
        if let Payload::Disc { constant_term, .. } = &mut bad.payload {
            *constant_term = 0;
        }
        assert!(!reverify(&l, &bad).unwrap());
    }

    #[test]
    fn verdict_examples() {
        let v = verdict(&lin(3, "0,0,0,1"), Some(3), AnalyzeOptions::default()).unwrap();
        assert_eq!((v.verdict, v.order, v.basis), (GroupVerdict::GammaL, Some(78), Basis::MainTheorem));
        for ev in &v.evidence {
            assert!(reverify(&lin(3, "0,0,0,1"), ev).unwrap(), "{ev:?}");
        }

        let l = lin(3, "0,1,0,1");
        let v = verdict(&l, None, AnalyzeOptions::default()).unwrap();
        assert_eq!((v.verdict, v.order), (GroupVerdict::GL, Some(11232)));
        assert!(v.evidence.iter().any(|e| e.kind == EvidenceKind::DiscWitness));
        assert!(v.evidence.iter().all(|e| reverify(&l, e).unwrap()));

        let l = lin(2, "0,1,1,1");
        let v = verdict(&l, None, AnalyzeOptions::default()).unwrap();
        assert_eq!((v.verdict, v.order, v.basis), (GroupVerdict::GL, Some(168), Basis::Char2Theorem));
        assert!(v.evidence.iter().all(|e| reverify(&l, e).unwrap()));

        let v = verdict(&lin(2, "0,1,0,1"), None, AnalyzeOptions::default()).unwrap();
        assert_eq!((v.verdict, v.order, v.basis), (GroupVerdict::Inconclusive, None, Basis::EvidenceOnly));

        assert_eq!(
            verdict(&lin(3, "0,1"), Some(3), AnalyzeOptions::default()).unwrap_err(),
            Error::DegreeMismatch { expected: 3, found: 1 }
        );
        assert_eq!(verdict(&lin(3, "0,1,2"), None, AnalyzeOptions::default()).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn degree_one_is_always_gamma_l() {
        let v = verdict(&lin(5, "3,1"), None, AnalyzeOptions::default()).unwrap();
        assert_eq!((v.verdict, v.order), (GroupVerdict::GammaL, Some(4)));
        assert!(!v.notes.is_empty());
    }

    #[test]
    fn alpha_point_round_trip() {
        let base = FieldCtx::make(3, 2, 0).unwrap();
        let field = sample_field(&base, 3, 7).unwrap();
        let alpha = field.elem(12345 % field.order()).unwrap();
        let pt = AlphaPoint::new(&base, 3, &alpha).unwrap();
        let back = pt.rebuild(&base).unwrap();
        assert!(back.try_eq(&alpha).unwrap());
        let one = AlphaPoint::new(&base, 1, &base.one()).unwrap();
        assert!(one.rebuild(&base).unwrap().is_one());
    }
}
