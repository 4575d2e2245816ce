//! Length sequences of graded families, limit estimation, and the limit and
//! inequality statements about them as executable checks.

mod checks;
mod epsilon;

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{FamilySpec, GradedFamily};
use crate::length::{rel_length, Length};
use crate::rational::{pow, to_f64, Q};

pub use checks::{
    filtration_difference_bound, quotient_length_bound_check, minkowski_family_check, multiplicity, teissier_check,
    volume_equals_multiplicity, BoundReport, FamilyInequalityReport, FiltrationBoundReport, MultiplicityReport,
    VolumeComparison,
};
pub use epsilon::{
    difference_dimension, epsilon_ideal, epsilon_module, symbolic_multiplicity, EpsilonReport, SymbolicReport,
};

/// Default relative tail range for a `Converged` verdict.
pub const DEFAULT_TOLERANCE: f64 = 1e-2;

/// Exact values `(n, value_n)`, to be normalized by `n^degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSequence {
    entries: Vec<(u32, u128)>,
    degree: u32,
}

impl LengthSequence {
    pub fn new(entries: Vec<(u32, u128)>, degree: u32) -> Result<Self> {
        if let Some(w) = entries.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::NonConsecutive(w[1].0));
        }
        if entries.iter().any(|&(n, _)| n == 0) {
            return Err(Error::Hypothesis("sequence indices start at 1".into()));
        }
        Ok(Self { entries, degree })
    }

    pub fn entries(&self) -> &[(u32, u128)] {
        &self.entries
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `value_n / n^degree` for every entry.
    pub fn normalized(&self) -> Vec<(u32, Q)> {
        self.entries.iter().map(|&(n, v)| (n, normalize(v, n, self.degree as i32))).collect()
    }
}

fn normalize(value: u128, n: u32, degree: i32) -> Q {
    Q::from_integer(value.into()) / npow(n, degree)
}

fn npow(n: u32, e: i32) -> Q {
    let base = Q::from_integer(n.into());
    if e >= 0 {
        pow(&base, e as u32)
    } else {
        Q::from_integer(1.into()) / pow(&base, (-e) as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    Oscillating,
    Diverging,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converged => "CONVERGED",
            Verdict::Oscillating => "OSCILLATING",
            Verdict::Diverging => "DIVERGING",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub point_estimate: Q,
    pub tail_min: Q,
    pub tail_max: Q,
    pub verdict: Verdict,
    /// First and last `n` of the tail window.
    pub window: (u32, u32),
}

impl LimitEstimate {
    /// A limit known exactly, e.g. from a zero module.
    pub fn exact(value: Q, window: (u32, u32)) -> Self {
        Self { tail_min: value.clone(), tail_max: value.clone(), point_estimate: value, verdict: Verdict::Converged, window }
    }

    pub fn relative_range(&self) -> f64 {
        let width = to_f64(&(&self.tail_max - &self.tail_min));
        let p = to_f64(&self.point_estimate).abs();
        if p == 0.0 { width } else { width / p }
    }

    pub fn scaled(&self, t: &Q) -> Self {
        let (a, b) = (&self.tail_min * t, &self.tail_max * t);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Self {
            point_estimate: &self.point_estimate * t,
            tail_min: lo,
            tail_max: hi,
            verdict: self.verdict,
            window: self.window,
        }
    }
}

/// Exact `ℓ(R/I_n)` for `n = 1..=max_n`.
///
/// Members that are not `m`-primary contribute `ℓ(I_n^sat / I_n)` instead,
/// the part of the quotient supported at the origin.
pub fn length_sequence(family: &GradedFamily, max_n: u32) -> Result<LengthSequence> {
    if max_n == 0 {
        return Err(Error::Hypothesis("length sequence needs N >= 1".into()));
    }
    if let Some(k) = family.max_index() {
        if k < max_n {
            return Err(Error::TableOutOfRange { index: max_n, len: k as usize + 1 });
        }
    }
    prepare_members(family, max_n)?;
    let values: Vec<u128> = (1..=max_n)
        .into_par_iter()
        .map(|n| member_length(family, n))
        .collect::<Result<_>>()?;
    LengthSequence::new((1..=max_n).zip(values).collect(), family.dim() as u32)
}

/// Fills the member memo in order for families whose members are built
/// incrementally from earlier ones, so that later lookups can run in parallel.
pub fn prepare_members(family: &GradedFamily, max_n: u32) -> Result<()> {
    if needs_sequential_members(family.spec()) {
        for n in 1..=max_n {
            family.member_ideal(n)?;
        }
    }
    Ok(())
}

fn needs_sequential_members(spec: &FamilySpec) -> bool {
    match spec {
        FamilySpec::Power(_) | FamilySpec::Symbolic { .. } | FamilySpec::Saturation(_) => true,
        FamilySpec::Product(a, b) => needs_sequential_members(a) || needs_sequential_members(b),
        _ => false,
    }
}

/// The `n`-th entry of [`length_sequence`].
pub fn member_length(family: &GradedFamily, n: u32) -> Result<u128> {
    if let Length::Finite(v) = family.colength_at(n)? {
        return Ok(v);
    }
    let member = family.member_ideal(n)?;
    match rel_length(&member.saturation(), &member)? {
        Length::Finite(v) => Ok(v),
        Length::Infinite => Err(Error::InfiniteLength(format!("saturation of {member}"))),
    }
}

pub fn estimate_limit(seq: &LengthSequence) -> Result<LimitEstimate> {
    estimate_limit_with(seq, DEFAULT_TOLERANCE)
}

/// Estimates `lim value_n / n^degree` from the last quarter of the samples.
///
/// The point estimate is the leading coefficient of a least-squares fit of
/// `a n^d + b n^(d-1)` to the tail. Fits through consecutive tail pairs give
/// the tail range; the verdict is `Converged` when its relative width is
/// below `tol`.
pub fn estimate_limit_with(seq: &LengthSequence, tol: f64) -> Result<LimitEstimate> {
    const MIN_SAMPLES: usize = 8;
    if seq.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: seq.len() });
    }
    let len = seq.len();
    let w = len.div_ceil(4).max(2);
    let tail = &seq.entries()[len - w..];
    let d = seq.degree() as i32;
    let point = least_squares_leading(tail, d);
    let local: Vec<Q> = tail.windows(2).map(|p| least_squares_leading(p, d)).collect();
    let mut tail_min = point.clone();
    let mut tail_max = point.clone();
    for v in &local {
        if *v < tail_min {
            tail_min = v.clone();
        }
        if *v > tail_max {
            tail_max = v.clone();
        }
    }
    let window = (tail[0].0, tail[w - 1].0);
    let mut est = LimitEstimate { point_estimate: point, tail_min, tail_max, verdict: Verdict::Inconclusive, window };
    est.verdict = if est.relative_range() < tol { Verdict::Converged } else { classify(&local) };
    Ok(est)
}

/// Leading coefficient `a` of the least-squares fit `v ≈ a n^d + b n^(d-1)`.
fn least_squares_leading(points: &[(u32, u128)], d: i32) -> Q {
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::zero());
    for &(n, v) in points {
        let f1 = npow(n, d);
        let f2 = npow(n, d - 1);
        let v = Q::from_integer(v.into());
        s11 += &f1 * &f1;
        s12 += &f1 * &f2;
        s22 += &f2 * &f2;
        t1 += &f1 * &v;
        t2 += &f2 * &v;
    }
    let det = &s11 * &s22 - &s12 * &s12;
    if det.is_zero() {
        return t1 / s11;
    }
    (t1 * s22 - t2 * s12) / det
}

fn classify(local: &[Q]) -> Verdict {
    let steps: Vec<Q> = local.windows(2).map(|p| &p[1] - &p[0]).filter(|s| !s.is_zero()).collect();
    if steps.is_empty() {
        return Verdict::Inconclusive;
    }
    let sign_changes = steps.windows(2).filter(|p| p[0].is_positive() != p[1].is_positive()).count();
    if sign_changes >= 2 {
        return Verdict::Oscillating;
    }
    if sign_changes == 0 && steps.len() >= 2 {
        // Monotone; call it divergent when the steps are not shrinking.
        let half = steps.len() / 2;
        let early: Q = steps[..half].iter().map(|s| s.abs()).sum();
        let late: Q = steps[steps.len() - half..].iter().map(|s| s.abs()).sum();
        if late >= early {
            return Verdict::Diverging;
        }
    }
    Verdict::Inconclusive
}

/// Normalized first differences of a sequence with consecutive indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceProfile {
    /// `(n, (value_{n+1} - value_n) / n^{d-1})`.
    pub forward: Vec<(u32, Q)>,
    /// `(n, (value_n - value_{n+1}) / n^{d-1})`.
    pub backward: Vec<(u32, Q)>,
}

pub fn difference_profile(seq: &LengthSequence) -> Result<DifferenceProfile> {
    if seq.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: seq.len() });
    }
    let d = seq.degree() as i32;
    let mut forward = Vec::with_capacity(seq.len() - 1);
    for w in seq.entries().windows(2) {
        let ((n, a), (m, b)) = (w[0], w[1]);
        if m != n + 1 {
            return Err(Error::NonConsecutive(m));
        }
        let diff = Q::from_integer(b.into()) - Q::from_integer(a.into());
        forward.push((n, diff / npow(n, d - 1)));
    }
    let backward = forward.iter().map(|(n, v)| (*n, -v)).collect();
    Ok(DifferenceProfile { forward, backward })
}
