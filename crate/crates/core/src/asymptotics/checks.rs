use num_bigint::BigInt;
use num_traits::Zero;

use super::{estimate_limit_with, length_sequence, LengthSequence, LimitEstimate, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::families::{FamilySpec, GradedFamily};
use crate::geometry::multiplicity_exact;
use crate::ideal::MonomialIdeal;
use crate::length::{colength, maximal_power_index, rel_length};
use crate::rational::{factorial, pow, to_f64, RootSumReport, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityReport {
    pub ideal: MonomialIdeal,
    /// `d! · covol` of the Newton region; `None` above dimension three.
    pub e_exact: Option<BigInt>,
    /// Estimate of `d! · lim ℓ(R/I^n) / n^d`.
    pub e_numeric: LimitEstimate,
    pub hs_samples: LengthSequence,
}

impl MultiplicityReport {
    /// Whether the numeric tail range contains the exact value.
    pub fn brackets_exact(&self) -> Option<bool> {
        let e = Q::from_integer(self.e_exact.clone()?);
        Some(self.e_numeric.tail_min <= e && e <= self.e_numeric.tail_max)
    }

    pub fn relative_error(&self) -> Option<f64> {
        let e = to_f64(&Q::from_integer(self.e_exact.clone()?));
        Some((to_f64(&self.e_numeric.point_estimate) - e).abs() / e)
    }
}

/// Multiplicity of an `m`-primary ideal, exactly from the Newton region
/// (`d <= 3`) and numerically from the Hilbert–Samuel samples `ℓ(R/I^n)`
/// at eight evenly spaced `n <= max_n`.
pub fn multiplicity(ideal: &MonomialIdeal, max_n: u32) -> Result<MultiplicityReport> {
    if !ideal.is_primary() {
        return Err(Error::NotPrimary(ideal.to_string()));
    }
    let d = ideal.dim();
    let e_exact = if d <= 3 { Some(multiplicity_exact(ideal)?) } else { None };
    let step = (max_n / 8).max(1);
    let ns: Vec<u32> = (1..=8).map(|k| k * step).collect();
    let mut entries = Vec::with_capacity(ns.len());
    let mut power = MonomialIdeal::unit(ideal.ring());
    let mut at = 0;
    for &n in &ns {
        power = power.multiply(&ideal.power(n - at))?;
        at = n;
        let v = colength(&power).finite().ok_or_else(|| Error::Internal("power of a primary ideal".into()))?;
        entries.push((n, v));
    }
    let hs_samples = LengthSequence::new(entries, d as u32)?;
    let e_numeric =
        estimate_limit_with(&hs_samples, DEFAULT_TOLERANCE)?.scaled(&Q::from_integer(factorial(d as u32)));
    Ok(MultiplicityReport { ideal: ideal.clone(), e_exact, e_numeric, hs_samples })
}

/// Both sides of `lim ℓ(R/I_n) / (n^d/d!) = lim e(I_p) / p^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeComparison {
    /// `d!` times the estimated limit of the length sequence.
    pub volume_side: LimitEstimate,
    /// `(p, e(I_p) / p^d)` on the ladder `N/8, N/4, N/2, N`.
    pub multiplicity_side: Vec<(u32, Q)>,
    pub relative_gap: f64,
}

impl VolumeComparison {
    pub fn multiplicity_estimate(&self) -> &Q {
        &self.multiplicity_side.last().expect("nonempty ladder").1
    }

    pub fn agrees_within(&self, tol: f64) -> bool {
        self.relative_gap <= tol
    }
}

pub fn volume_equals_multiplicity(family: &GradedFamily, max_n: u32) -> Result<VolumeComparison> {
    let d = family.dim() as u32;
    if d > 3 {
        return Err(Error::DimensionUnsupported(d as usize));
    }
    let seq = length_sequence(family, max_n)?;
    let dfact = Q::from_integer(factorial(d));
    let volume_side = estimate_limit_with(&seq, DEFAULT_TOLERANCE)?.scaled(&dfact);
    let mut ladder: Vec<u32> = [8, 4, 2, 1].iter().map(|k| (max_n / k).max(1)).collect();
    ladder.dedup();
    let mut multiplicity_side = Vec::new();
    for p in ladder {
        let member = family.member_ideal(p)?;
        let e = Q::from_integer(multiplicity_exact(&member)?);
        multiplicity_side.push((p, e / pow(&Q::from_integer(p.into()), d)));
    }
    let right = to_f64(&multiplicity_side.last().expect("nonempty").1);
    let left = to_f64(&volume_side.point_estimate);
    let relative_gap = if right == 0.0 { left.abs() } else { (left - right).abs() / right };
    Ok(VolumeComparison { volume_side, multiplicity_side, relative_gap })
}

/// `e(IJ)^{1/d} <= e(I)^{1/d} + e(J)^{1/d}`, decided exactly.
pub fn teissier_check(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<RootSumReport> {
    for x in [i, j] {
        if !x.is_primary() {
            return Err(Error::NotPrimary(x.to_string()));
        }
    }
    let d = i.dim();
    if d > 3 {
        return Err(Error::DimensionUnsupported(d));
    }
    let ei = Q::from_integer(multiplicity_exact(i)?);
    let ej = Q::from_integer(multiplicity_exact(j)?);
    let eij = Q::from_integer(multiplicity_exact(&i.multiply(j)?)?);
    Ok(RootSumReport::decide(ei, ej, eij, d as u32))
}

/// The family Minkowski inequality on estimated limits.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInequalityReport {
    pub first: LimitEstimate,
    pub second: LimitEstimate,
    pub product: LimitEstimate,
    /// Exact comparison of the three point estimates.
    pub comparison: RootSumReport,
}

impl FamilyInequalityReport {
    /// Passes when the slack is above the estimation noise floor.
    pub fn holds(&self, noise: f64) -> bool {
        self.comparison.holds() || self.comparison.slack >= -noise
    }
}

pub fn minkowski_family_check(f: &GradedFamily, g: &GradedFamily, max_n: u32) -> Result<FamilyInequalityReport> {
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    let product = GradedFamily::new(FamilySpec::Product(Box::new(f.spec().clone()), Box::new(g.spec().clone())))?;
    let first = estimate_limit_with(&length_sequence(f, max_n)?, DEFAULT_TOLERANCE)?;
    let second = estimate_limit_with(&length_sequence(g, max_n)?, DEFAULT_TOLERANCE)?;
    let prod = estimate_limit_with(&length_sequence(&product, max_n)?, DEFAULT_TOLERANCE)?;
    let nonneg = |q: &Q| if q < &Q::zero() { Q::zero() } else { q.clone() };
    let comparison = RootSumReport::decide(
        nonneg(&first.point_estimate),
        nonneg(&second.point_estimate),
        nonneg(&prod.point_estimate),
        f.dim() as u32,
    );
    Ok(FamilyInequalityReport { first, second, product: prod, comparison })
}

/// `value <= bound`, with both sides exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub value: u128,
    pub bound: u128,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.value <= self.bound
    }
}

/// `dim_k(I / m^r I) <= (s + r)^{d-1} r` for `m^s ⊆ I`.
pub fn quotient_length_bound_check(ideal: &MonomialIdeal, r: u32, s: u32) -> Result<BoundReport> {
    let ring = ideal.ring();
    if !MonomialIdeal::maximal_power(ring, s).is_subset_of(ideal)? {
        return Err(Error::Hypothesis(format!("m^{s} is not contained in {ideal}")));
    }
    let lower = MonomialIdeal::maximal_power(ring, r).multiply(ideal)?;
    let value = rel_length(ideal, &lower)?
        .finite()
        .ok_or_else(|| Error::Internal("I / m^r I of a primary ideal is infinite".into()))?;
    let d = ideal.dim() as u32;
    let bound = (s as u128 + r as u128).pow(d - 1) * r as u128;
    Ok(BoundReport { value, bound })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationBoundReport {
    /// Least `c` with `m^c ⊆ I_1`.
    pub c: u32,
    /// `(n, ℓ(I_n / I_{n+1}), c^d (n+1)^{d-1})` for `n = 1..=N`.
    pub rows: Vec<(u32, u128, u128)>,
}

impl FiltrationBoundReport {
    pub fn first_violation(&self) -> Option<u32> {
        self.rows.iter().find(|(_, v, b)| v > b).map(|r| r.0)
    }

    pub fn holds(&self) -> bool {
        self.first_violation().is_none()
    }
}

/// Checks `ℓ(I_n / I_{n+1}) <= c^d (n+1)^{d-1}` for `n <= max_n`.
pub fn filtration_difference_bound(family: &GradedFamily, max_n: u32) -> Result<FiltrationBoundReport> {
    if let crate::families::VerificationReport::Fail { m, .. } = family.verify_filtration(max_n + 1)? {
        return Err(Error::NotFiltration(m));
    }
    let first = family.member_ideal(1)?;
    let c = maximal_power_index(&first).ok_or_else(|| Error::NotPrimary(first.to_string()))?;
    let seq = length_sequence(family, max_n + 1)?;
    let d = family.dim() as u32;
    let cd = (c as u128).pow(d);
    let rows = seq
        .entries()
        .windows(2)
        .map(|w| {
            let ((n, a), (_, b)) = (w[0], w[1]);
            (n, b - a, cd * (n as u128 + 1).pow(d - 1))
        })
        .collect();
    Ok(FiltrationBoundReport { c, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ExponentSequence, ValuationWeight};
    use crate::rational::{q, qi};
    use crate::ring::AmbientRing;
    use crate::syntax::parse_ideal;
    use std::cmp::Ordering;

    fn ideal(s: &str) -> MonomialIdeal {
        parse_ideal(&AmbientRing::standard(2).unwrap(), s).unwrap()
    }

    fn valuation() -> GradedFamily {
        let ring = AmbientRing::standard(2).unwrap();
        let w = ValuationWeight::new(vec![qi(2), qi(1)], qi(2));
        GradedFamily::new(FamilySpec::Valuation { ring, constraints: vec![w] }).unwrap()
    }

    #[test]
    fn multiplicity_reports() {
        let r = multiplicity(&ideal("x^3, x*y, y^2"), 64).unwrap();
        assert_eq!(r.e_exact, Some(5.into()));
        assert!(r.relative_error().unwrap() < 0.05);
        let r = multiplicity(&ideal("x^2, y^3"), 64).unwrap();
        assert_eq!(r.e_exact, Some(6.into()));
        assert!(r.relative_error().unwrap() < 0.05);
        assert_eq!(multiplicity(&ideal("x, y"), 16).unwrap().e_numeric.point_estimate, qi(1));
        assert!(multiplicity(&ideal("x*y"), 8).is_err());
    }

    #[test]
    fn volume_and_multiplicity_sides() {
        let v = volume_equals_multiplicity(&valuation(), 48).unwrap();
        assert_eq!(v.multiplicity_estimate(), &qi(2));
        assert!(v.agrees_within(0.02), "{v:?}");
        let p = GradedFamily::new(FamilySpec::Power(ideal("x^2, y^3"))).unwrap();
        let v = volume_equals_multiplicity(&p, 32).unwrap();
        assert!(v.multiplicity_side.iter().all(|(_, e)| e == &qi(6)));
        assert!(v.agrees_within(0.02));
    }

    #[test]
    fn teissier_examples() {
        let m = ideal("x, y");
        let r = teissier_check(&m, &m).unwrap();
        assert!(r.is_equality());
        assert_eq!(r.combined, qi(4));
        let r = teissier_check(&ideal("x, y^2"), &ideal("x^2, y")).unwrap();
        assert_eq!((r.first.clone(), r.second.clone(), r.combined.clone()), (qi(2), qi(2), qi(6)));
        assert_eq!(r.ordering, Ordering::Greater);
        let r = teissier_check(&ideal("x^2, y^3"), &m).unwrap();
        assert!(r.holds());
        assert!(teissier_check(&ideal("x"), &m).is_err());
    }

    #[test]
    fn family_minkowski() {
        let m = GradedFamily::new(FamilySpec::Power(ideal("x, y"))).unwrap();
        let r = minkowski_family_check(&m, &m, 32).unwrap();
        assert_eq!(r.first.point_estimate, q(1, 2));
        assert_eq!(r.product.point_estimate, qi(2));
        assert!(r.comparison.is_equality());
        let f = GradedFamily::new(FamilySpec::Power(ideal("x, y^2"))).unwrap();
        let g = GradedFamily::new(FamilySpec::Power(ideal("x^2, y"))).unwrap();
        let r = minkowski_family_check(&f, &g, 32).unwrap();
        assert_eq!(r.first.point_estimate, qi(1));
        assert_eq!(r.product.point_estimate, qi(3));
        assert!(r.holds(1e-9));
        let r = minkowski_family_check(&valuation(), &m, 24).unwrap();
        assert!(r.holds(1e-9));
    }

    #[test]
    fn quotient_length_bound_examples() {
        let n2 = ideal("x^2, x*y, y^2");
        assert_eq!(quotient_length_bound_check(&n2, 1, 2).unwrap(), BoundReport { value: 3, bound: 3 });
        let r = quotient_length_bound_check(&ideal("x^2, y"), 2, 2).unwrap();
        assert!(r.holds());
        assert_eq!(r.bound, 8);
        // Oracle: (x^2, y) / m^2 (x^2, y) has basis x^2, x^3, y, xy, y^2.
        assert_eq!(r.value, 5);
        assert_eq!(quotient_length_bound_check(&n2, 0, 2).unwrap(), BoundReport { value: 0, bound: 0 });
        assert!(quotient_length_bound_check(&ideal("x^2, y"), 1, 1).is_err());
    }

    #[test]
    fn filtration_bounds() {
        let ring = AmbientRing::standard(2).unwrap();
        let log = GradedFamily::new(FamilySpec::MaxPowerSeq { ring: ring.clone(), sequence: ExponentSequence::Log })
            .unwrap();
        let r = filtration_difference_bound(&log, 200).unwrap();
        assert_eq!(r.c, 2);
        assert!(r.holds());
        let m = GradedFamily::new(FamilySpec::Power(ideal("x, y"))).unwrap();
        let r = filtration_difference_bound(&m, 30).unwrap();
        assert_eq!(r.c, 1);
        assert!(r.rows.iter().all(|&(n, v, b)| v == n as u128 + 1 && b == v));
        assert!(filtration_difference_bound(&valuation(), 60).unwrap().holds());
        let sigma = GradedFamily::new(FamilySpec::MaxPowerSeq { ring, sequence: ExponentSequence::Sigma }).unwrap();
        assert!(matches!(filtration_difference_bound(&sigma, 20), Err(Error::NotFiltration(15))));
    }
}
