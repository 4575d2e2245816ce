//! Graded semigroups `S ⊆ N^p × N` given by a membership predicate, their
//! level counts, lattice invariants and Okounkov bodies.

mod lattice;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::asymptotics::{estimate_limit_with, LengthSequence, LimitEstimate, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::families::GradedFamily;
use crate::geometry::Polytope;
use crate::length::{for_each_in_box, maximal_power_index};
use crate::rational::{pow, to_f64, Q};

pub use lattice::HermiteLattice;

/// Membership test for the points of one level.
pub type LevelTest = Box<dyn Fn(&[u32]) -> bool + Send + Sync>;
type LevelBuilder = dyn Fn(u32) -> Result<LevelTest> + Send + Sync;

/// A graded semigroup of `N^p × N` whose level-`i` points satisfy
/// `‖a‖₁ <= β i`.
#[derive(Clone)]
pub struct SemigroupPredicate {
    dim: usize,
    beta: u32,
    level: Arc<LevelBuilder>,
    label: String,
}

impl fmt::Debug for SemigroupPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemigroupPredicate")
            .field("dim", &self.dim)
            .field("beta", &self.beta)
            .field("label", &self.label)
            .finish()
    }
}

impl SemigroupPredicate {
    pub fn new(
        dim: usize,
        beta: u32,
        label: impl Into<String>,
        membership: impl Fn(&[u32], u32) -> bool + Send + Sync + 'static,
    ) -> Self {
        let membership = Arc::new(membership);
        let level = move |i: u32| -> Result<LevelTest> {
            let m = membership.clone();
            Ok(Box::new(move |a: &[u32]| m(a, i)))
        };
        Self { dim, beta, level: Arc::new(level), label: label.into() }
    }

    /// `Γ(I_*) = {(a, i) : x^a ∈ I_i, ‖a‖₁ <= β i}` with `β = c κ`, where `c`
    /// is the least integer with `m^c ⊆ I_1` and `κ >= 1` a user constant.
    pub fn from_family(family: Arc<GradedFamily>, kappa: u32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::Hypothesis("the box constant must be positive".into()));
        }
        let first = family.member_ideal(1)?;
        let c = maximal_power_index(&first).ok_or_else(|| Error::NotPrimary(first.to_string()))?;
        let beta = c.max(1) * kappa;
        let label = format!("gamma({})", family.spec());
        let dim = family.dim();
        let level = move |i: u32| -> Result<LevelTest> {
            let index = family.member_ideal(i)?.membership_index();
            let cap = beta as u64 * i as u64;
            Ok(Box::new(move |a: &[u32]| a.iter().map(|&x| x as u64).sum::<u64>() <= cap && index.contains(a)))
        };
        Ok(Self { dim, beta, level: Arc::new(level), label })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, a: &[u32], level: u32) -> Result<bool> {
        Ok((self.level)(level)?(a))
    }

    /// Calls `f` on every member of level `i`, in lexicographic order of the
    /// reversed coordinates.
    pub fn for_each_point(&self, i: u32, mut f: impl FnMut(&[u32])) -> Result<()> {
        let test = (self.level)(i)?;
        let cap = self.beta as u64 * i as u64;
        let side = u32::try_from(cap + 1).map_err(|_| Error::Internal("level box too large".into()))?;
        let bounds = vec![side; self.dim];
        for_each_in_box(&bounds, |a| {
            if a.iter().map(|&x| x as u64).sum::<u64>() <= cap && test(a) {
                f(a);
            }
        });
        Ok(())
    }
}

/// Number of member pairs checked for closure under addition.
pub const ADDITIVITY_SAMPLES: usize = 200;
const RESERVOIR: usize = 8;
const SEED: u64 = 0x5eed_0f_1e7e15;

#[derive(Debug, Clone)]
struct Level {
    count: u128,
    extremes: Vec<Vec<u32>>,
    sample: Vec<Vec<u32>>,
    lattice: HermiteLattice,
}

fn scan_level(p: &SemigroupPredicate, i: u32) -> Result<Level> {
    // For each prefix of the first p-1 coordinates keep the smallest and
    // largest last coordinate: a superset of the hull vertices.
    let mut columns: BTreeMap<Vec<u32>, (u32, u32)> = BTreeMap::new();
    let mut lattice = HermiteLattice::new(p.dim + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ i as u64);
    let mut sample: Vec<Vec<u32>> = Vec::new();
    let mut count: u128 = 0;
    p.for_each_point(i, |a| {
        count += 1;
        let (last, prefix) = a.split_last().expect("positive dimension");
        columns
            .entry(prefix.to_vec())
            .and_modify(|(lo, hi)| {
                *lo = (*lo).min(*last);
                *hi = (*hi).max(*last);
            })
            .or_insert((*last, *last));
        let mut v = Vec::with_capacity(a.len() + 1);
        v.push(i as i128);
        v.extend(a.iter().map(|&x| x as i128));
        lattice.insert(&v);
        if sample.len() < RESERVOIR {
            sample.push(a.to_vec());
        } else {
            let k = rng.gen_range(0..count) as usize;
            if k < RESERVOIR {
                sample[k] = a.to_vec();
            }
        }
    })?;
    let mut extremes = Vec::new();
    for (prefix, (lo, hi)) in columns {
        for last in if lo == hi { vec![lo] } else { vec![lo, hi] } {
            let mut v = prefix.clone();
            v.push(last);
            extremes.push(v);
        }
    }
    Ok(Level { count, extremes, sample, lattice })
}

/// Enumerated levels `1..=N` of a semigroup.
#[derive(Debug, Clone)]
pub struct SemigroupLevels {
    predicate: SemigroupPredicate,
    counts: BTreeMap<u32, u128>,
    extremes: BTreeMap<u32, Vec<Vec<u32>>>,
    lattice: HermiteLattice,
}

pub fn enumerate_levels(predicate: &SemigroupPredicate, max_level: u32) -> Result<SemigroupLevels> {
    if max_level == 0 {
        return Err(Error::Hypothesis("enumeration needs N >= 1".into()));
    }
    let levels: Vec<Level> =
        (1..=max_level).into_par_iter().map(|i| scan_level(predicate, i)).collect::<Result<_>>()?;
    let mut lattice = HermiteLattice::new(predicate.dim + 1);
    let mut counts = BTreeMap::new();
    let mut extremes = BTreeMap::new();
    let mut samples: Vec<(u32, Vec<u32>)> = Vec::new();
    for (i, level) in (1..=max_level).zip(levels) {
        lattice.merge(&level.lattice);
        counts.insert(i, level.count);
        extremes.insert(i, level.extremes);
        samples.extend(level.sample.into_iter().map(|a| (i, a)));
    }
    check_additivity(predicate, &samples)?;
    Ok(SemigroupLevels { predicate: predicate.clone(), counts, extremes, lattice })
}

fn check_additivity(predicate: &SemigroupPredicate, samples: &[(u32, Vec<u32>)]) -> Result<()> {
    if samples.is_empty() {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut by_level: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for _ in 0..ADDITIVITY_SAMPLES {
        let (i, a) = &samples[rng.gen_range(0..samples.len())];
        let (j, b) = &samples[rng.gen_range(0..samples.len())];
        let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        by_level.entry(i + j).or_default().push(sum);
    }
    for (level, points) in by_level {
        let test = (predicate.level)(level)?;
        if let Some(bad) = points.iter().find(|p| !test(p)) {
            return Err(Error::NotASemigroup(format!("{bad:?} at level {level} is a sum of members but not a member")));
        }
    }
    Ok(())
}

/// `m(S)`, `ind(S)`, `q(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeInvariants {
    /// Index of the level projection of the group generated by `S` in `Z`.
    pub m: u64,
    /// Index of the level-zero part of that group in the integer points of
    /// its span.
    pub ind: u64,
    /// Rank of the level-zero part.
    pub q: usize,
    /// Too few nonempty levels for the rank to be trusted.
    pub heuristic: bool,
}

impl SemigroupLevels {
    pub fn predicate(&self) -> &SemigroupPredicate {
        &self.predicate
    }

    pub fn max_level(&self) -> u32 {
        *self.counts.keys().next_back().expect("at least one level")
    }

    pub fn counts(&self) -> &BTreeMap<u32, u128> {
        &self.counts
    }

    pub fn count(&self, i: u32) -> Option<u128> {
        self.counts.get(&i).copied()
    }

    /// All members of level `i`, enumerated again from the predicate.
    pub fn points(&self, i: u32) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        self.predicate.for_each_point(i, |a| out.push(a.to_vec()))?;
        Ok(out)
    }

    /// Hermite basis of the group generated by `S`, level coordinate first.
    pub fn lattice(&self) -> &HermiteLattice {
        &self.lattice
    }

    fn nonempty_levels(&self) -> usize {
        self.counts.values().filter(|&&c| c > 0).count()
    }

    pub fn lattice_invariants(&self) -> Result<LatticeInvariants> {
        let total: u128 = self.counts.values().sum();
        if total <= 1 {
            return Err(Error::DegenerateSemigroup("fewer than two points".into()));
        }
        let rows = self.lattice.rows();
        let m = match rows.first() {
            Some(r) if r[0] != 0 => r[0] as u64,
            _ => return Err(Error::DegenerateSemigroup("no points above level zero".into())),
        };
        let mut zero = HermiteLattice::new(self.predicate.dim);
        for r in &rows[1..] {
            zero.insert(&r[1..]);
        }
        let q = zero.rank();
        let ind = zero.saturation_index() as u64;
        Ok(LatticeInvariants { m, ind, q, heuristic: self.nonempty_levels() < 3 })
    }

    /// `Δ(S)`: hull of `a / i` over the enumerated levels.
    pub fn okounkov_body(&self) -> Result<Polytope> {
        let mut pts: Vec<Vec<Q>> = Vec::new();
        for (&i, ext) in &self.extremes {
            let li = Q::from_integer(i.into());
            pts.extend(ext.iter().map(|a| a.iter().map(|&x| Q::from_integer(x.into()) / &li).collect()));
        }
        if pts.is_empty() {
            return Err(Error::DegenerateSemigroup("no points enumerated".into()));
        }
        Polytope::hull(self.predicate.dim, &pts)
    }

    /// Compares `#S_{mk} / k^q` with `m^q vol(Δ) / ind`.
    pub fn limit_check(&self) -> Result<SemigroupLimitReport> {
        semigroup_limit_check(self)
    }
}

pub fn lattice_invariants(levels: &SemigroupLevels) -> Result<LatticeInvariants> {
    levels.lattice_invariants()
}

pub fn okounkov_body(levels: &SemigroupLevels) -> Result<Polytope> {
    if levels.nonempty_levels() < 3 {
        return Err(Error::DegenerateSemigroup("the body needs at least three nonempty levels".into()));
    }
    levels.okounkov_body()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupLimitReport {
    pub invariants: LatticeInvariants,
    /// `(k, #S_{mk})`, normalized by `k^q`.
    pub sequence: LengthSequence,
    pub estimate: LimitEstimate,
    pub body_volume: Q,
    /// `m^q vol(Δ) / ind`; `None` when `q < p`, where the `q`-volume of the
    /// body in its own lattice would be needed.
    pub expected: Option<Q>,
    pub relative_gap: Option<f64>,
    /// Largest `#S_{mk} / k^q` seen: bounded ratios are consistent with a
    /// strongly nonnegative semigroup. Diagnostic only.
    pub max_ratio: Q,
}

pub fn semigroup_limit_check(levels: &SemigroupLevels) -> Result<SemigroupLimitReport> {
    let inv = levels.lattice_invariants()?;
    let body = levels.okounkov_body()?;
    let m = inv.m as u32;
    let entries: Vec<(u32, u128)> =
        (1..=levels.max_level() / m).map(|k| (k, levels.count(k * m).expect("enumerated level"))).collect();
    let sequence = LengthSequence::new(entries, inv.q as u32)?;
    let estimate = estimate_limit_with(&sequence, DEFAULT_TOLERANCE)?;
    let max_ratio = sequence.normalized().into_iter().map(|(_, v)| v).max().unwrap_or_default();
    let (expected, relative_gap) = if inv.q == levels.predicate.dim {
        let e = pow(&Q::from_integer(m.into()), inv.q as u32) * body.volume() / Q::from_integer(inv.ind.into());
        let gap = (to_f64(&estimate.point_estimate) - to_f64(&e)).abs() / to_f64(&e).max(f64::MIN_POSITIVE);
        (Some(e), Some(gap))
    } else {
        (None, None)
    };
    Ok(SemigroupLimitReport {
        invariants: inv,
        sequence,
        estimate,
        body_volume: body.volume().clone(),
        expected,
        relative_gap,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{FamilySpec, ValuationWeight};
    use crate::rational::{q, qi};
    use crate::ring::AmbientRing;
    use crate::syntax::parse_ideal;

    fn interval() -> SemigroupPredicate {
        SemigroupPredicate::new(1, 2, "a <= 2k", |a, k| a[0] <= 2 * k)
    }

    #[test]
    fn interval_semigroup() {
        let l = enumerate_levels(&interval(), 30).unwrap();
        assert!(l.counts().iter().all(|(&k, &c)| c == 2 * k as u128 + 1));
        let inv = l.lattice_invariants().unwrap();
        assert_eq!((inv.m, inv.ind, inv.q), (1, 1, 1));
        let body = okounkov_body(&l).unwrap();
        assert_eq!(body.vertices(), &[vec![qi(0)], vec![qi(2)]]);
        let r = l.limit_check().unwrap();
        assert_eq!(r.expected, Some(qi(2)));
        assert_eq!(r.estimate.point_estimate, qi(2));
    }

    #[test]
    fn sublattice_and_even_levels() {
        let even = SemigroupPredicate::new(1, 2, "even a", |a, k| a[0] % 2 == 0 && a[0] <= 2 * k);
        let l = enumerate_levels(&even, 30).unwrap();
        let inv = l.lattice_invariants().unwrap();
        assert_eq!((inv.m, inv.ind, inv.q), (1, 2, 1));
        let r = l.limit_check().unwrap();
        assert_eq!(r.expected, Some(qi(1)));
        assert_eq!(r.estimate.point_estimate, qi(1));

        let levels = SemigroupPredicate::new(1, 1, "even levels", |a, k| k % 2 == 0 && a[0] <= k);
        let l = enumerate_levels(&levels, 40).unwrap();
        assert!(l.counts().iter().filter(|(k, _)| *k % 2 == 1).all(|(_, &c)| c == 0));
        let inv = l.lattice_invariants().unwrap();
        assert_eq!(inv.m, 2);
        let r = l.limit_check().unwrap();
        assert_eq!(r.expected, Some(qi(2)));
        assert_eq!(r.estimate.point_estimate, qi(2));

        let triple = SemigroupPredicate::new(2, 2, "index 3", |a, k| (a[0] + 2 * a[1]) % 3 == 0 && a[0] + a[1] <= 2 * k);
        let inv = enumerate_levels(&triple, 12).unwrap().lattice_invariants().unwrap();
        assert_eq!((inv.ind, inv.q), (3, 2));
    }

    #[test]
    fn simplex_body() {
        let s = SemigroupPredicate::new(3, 1, "simplex", |a, k| a.iter().sum::<u32>() <= k);
        let l = enumerate_levels(&s, 8).unwrap();
        assert_eq!(okounkov_body(&l).unwrap().volume(), &q(1, 6));
        assert_eq!(l.count(2), Some(10));
    }

    #[test]
    fn family_semigroups() {
        let ring = AmbientRing::standard(2).unwrap();
        let m = Arc::new(GradedFamily::new(FamilySpec::Power(parse_ideal(&ring, "x, y").unwrap())).unwrap());
        let p = SemigroupPredicate::from_family(m, 2).unwrap();
        assert_eq!(p.beta(), 2);
        let l = enumerate_levels(&p, 40).unwrap();
        // Oracle: points with 3 <= |a| <= 6.
        let oracle = (0..=6u32).flat_map(|x| (0..=6u32).map(move |y| x + y)).filter(|s| (3..=6).contains(s)).count();
        assert_eq!(l.count(3), Some(oracle as u128));
        assert_eq!(l.count(3), Some(22));
        assert_eq!(okounkov_body(&l).unwrap().volume(), &q(3, 2));
        let r = l.limit_check().unwrap();
        assert_eq!(r.expected, Some(q(3, 2)));
        assert!(r.relative_gap.unwrap() < 0.03);

        let w = ValuationWeight::new(vec![qi(2), qi(1)], qi(2));
        let v = Arc::new(GradedFamily::new(FamilySpec::Valuation { ring, constraints: vec![w] }).unwrap());
        let p = SemigroupPredicate::from_family(v, 1).unwrap();
        let l = enumerate_levels(&p, 12).unwrap();
        // Δ = {2y1 + y2 >= 2, y1 + y2 <= β}, β = 2 (m^2 ⊆ (x, y^2)).
        assert_eq!(p.beta(), 2);
        assert_eq!(okounkov_body(&l).unwrap().volume(), &qi(1));
    }

    #[test]
    fn rejects_non_semigroups() {
        let bad = SemigroupPredicate::new(1, 2, "a = k", |a, k| a[0] == k || k == 1);
        assert!(matches!(enumerate_levels(&bad, 10), Err(Error::NotASemigroup(_))));
    }
}
