//! Graded families `{I_n}` of monomial ideals: `I_0 = R` and
//! `I_m I_n ⊆ I_{m+n}`. Filtrations are additionally descending.

pub mod sequences;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::length::{colength, colength_of_maximal_power, Length};
use crate::rational::{fmt_q, Q};
use crate::ring::{AmbientRing, Exponent};

pub use sequences::{log_exponent, log_increment, sigma, sigma_exponent};

/// `n ↦ b_n` for families `I_n = m^{b_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentSequence {
    /// `b_m = ⌈m σ(m)⌉`: graded, not a filtration, with divergent first differences.
    Sigma,
    /// `b_n = n + a_n` with `a_n ≈ log_2 n`: a filtration whose normalized
    /// first differences oscillate.
    Log,
    /// Explicit `b_0, b_1, ...`.
    Table(Vec<u64>),
}

impl ExponentSequence {
    pub fn exponent(&self, n: u32) -> Result<u64> {
        match self {
            ExponentSequence::Sigma => Ok(sigma_exponent(n as u64)),
            ExponentSequence::Log => Ok(log_exponent(n as u64)),
            ExponentSequence::Table(t) => t
                .get(n as usize)
                .copied()
                .ok_or(Error::TableOutOfRange { index: n, len: t.len() }),
        }
    }
}

/// One constraint `⟨λ, a⟩ >= t n` of a valuation family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationWeight {
    pub weights: Vec<Q>,
    pub threshold: Q,
}

impl ValuationWeight {
    pub fn new(weights: Vec<Q>, threshold: Q) -> Self {
        Self { weights, threshold }
    }

    /// Integer form `⟨w, a⟩ >= t n` with the same solution set.
    fn integral(&self) -> (Vec<i128>, i128) {
        let lcm = self
            .weights
            .iter()
            .chain(std::iter::once(&self.threshold))
            .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let scale = |q: &Q| (q * Q::from_integer(lcm.clone())).to_integer().to_i128().expect("weight fits i128");
        (self.weights.iter().map(scale).collect(), scale(&self.threshold))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `I_n = I^n`.
    Power(MonomialIdeal),
    /// `I_n = m^{b_n}`.
    MaxPowerSeq { ring: Arc<AmbientRing>, sequence: ExponentSequence },
    /// `I_n = (x^a : ⟨λ_j, a⟩ >= t_j n for all j)`.
    Valuation { ring: Arc<AmbientRing>, constraints: Vec<ValuationWeight> },
    /// `I_n = I^n : J^∞`.
    Symbolic { ideal: MonomialIdeal, by: MonomialIdeal },
    /// `I_n = (I^n)^sat`.
    Saturation(MonomialIdeal),
    /// `I_n = F_n G_n`.
    Product(Box<FamilySpec>, Box<FamilySpec>),
    /// Explicit `I_0, I_1, ...`.
    Table(Vec<MonomialIdeal>),
}

impl FamilySpec {
    pub fn ring(&self) -> Result<Arc<AmbientRing>> {
        match self {
            FamilySpec::Power(i) | FamilySpec::Saturation(i) => Ok(Arc::clone(i.ring())),
            FamilySpec::Symbolic { ideal, .. } => Ok(Arc::clone(ideal.ring())),
            FamilySpec::MaxPowerSeq { ring, .. } | FamilySpec::Valuation { ring, .. } => Ok(Arc::clone(ring)),
            FamilySpec::Product(f, _) => f.ring(),
            FamilySpec::Table(t) => t
                .first()
                .map(|i| Arc::clone(i.ring()))
                .ok_or_else(|| Error::MalformedSpec("table family is empty".into())),
        }
    }

    fn validate(&self) -> Result<()> {
        let ring = self.ring()?;
        let d = ring.dim();
        match self {
            FamilySpec::Power(i) | FamilySpec::Saturation(i) => {
                if i.is_zero() {
                    return Err(Error::MalformedSpec("base ideal has no generators".into()));
                }
            }
            FamilySpec::Symbolic { ideal, by } => {
                if ideal.is_zero() || by.is_zero() {
                    return Err(Error::MalformedSpec("symbolic power needs nonzero ideals".into()));
                }
                if **ideal.ring() != **by.ring() {
                    return Err(Error::RingMismatch);
                }
            }
            FamilySpec::MaxPowerSeq { sequence: ExponentSequence::Table(t), .. } => {
                if t.is_empty() {
                    return Err(Error::MalformedSpec("exponent table is empty".into()));
                }
            }
            FamilySpec::MaxPowerSeq { .. } => {}
            FamilySpec::Valuation { constraints, .. } => {
                if constraints.is_empty() {
                    return Err(Error::MalformedSpec("valuation family needs at least one weight".into()));
                }
                for c in constraints {
                    if c.weights.len() != d {
                        return Err(Error::DimensionMismatch { expected: d, found: c.weights.len() });
                    }
                    if c.weights.iter().any(|w| w.is_negative()) || c.threshold.is_negative() {
                        return Err(Error::MalformedSpec("weights and thresholds must be nonnegative".into()));
                    }
                    if c.weights.iter().all(|w| w.is_zero()) {
                        return Err(Error::MalformedSpec("weight vector must be nonzero".into()));
                    }
                }
            }
            FamilySpec::Product(f, g) => {
                f.validate()?;
                g.validate()?;
                if *f.ring()? != *g.ring()? {
                    return Err(Error::RingMismatch);
                }
            }
            FamilySpec::Table(t) => {
                if t.iter().any(|i| **i.ring() != *ring) {
                    return Err(Error::RingMismatch);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Power(i) => write!(f, "power({i})"),
            FamilySpec::MaxPowerSeq { sequence, .. } => match sequence {
                ExponentSequence::Sigma => f.write_str("maxpower(sigma)"),
                ExponentSequence::Log => f.write_str("maxpower(log)"),
                ExponentSequence::Table(t) => {
                    let s: Vec<String> = t.iter().map(|b| b.to_string()).collect();
                    write!(f, "maxpower[{}]", s.join(", "))
                }
            },
            FamilySpec::Valuation { constraints, .. } => {
                let parts: Vec<String> = constraints
                    .iter()
                    .map(|c| {
                        let w: Vec<String> = c.weights.iter().map(fmt_q).collect();
                        format!("({}) >= {}", w.join(", "), fmt_q(&c.threshold))
                    })
                    .collect();
                write!(f, "valuation[{}]", parts.join("; "))
            }
            FamilySpec::Symbolic { ideal, by } => write!(f, "symbolic({ideal}; {by})"),
            FamilySpec::Saturation(i) => write!(f, "saturation({i})"),
            FamilySpec::Product(a, b) => write!(f, "product({a}; {b})"),
            FamilySpec::Table(t) => {
                let s: Vec<String> = t.iter().map(|i| format!("({i})")).collect();
                write!(f, "table[{}]", s.join(", "))
            }
        }
    }
}

#[derive(Debug)]
enum Inner {
    Leaf,
    Powers(Box<GradedFamily>),
    Product(Box<GradedFamily>, Box<GradedFamily>),
}

/// A lazily evaluated graded family with a memo table.
///
/// Evaluation is deterministic; concurrent callers may race to fill the memo
/// but always store identical canonical forms.
#[derive(Debug)]
pub struct GradedFamily {
    spec: FamilySpec,
    ring: Arc<AmbientRing>,
    inner: Inner,
    valuation: Vec<(Vec<i128>, i128)>,
    memo: Mutex<BTreeMap<u32, MonomialIdeal>>,
}

/// Outcome of a containment sweep over a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationReport {
    Pass { checked: usize },
    /// `I_m I_n ⊄ I_{m+n}` (graded check) or `I_{m+1} ⊄ I_m` with `n = m + 1`
    /// (filtration check). `witness` is a monomial on the wrong side.
    Fail { m: u32, n: u32, witness: Option<Exponent> },
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        matches!(self, VerificationReport::Pass { .. })
    }
}

pub fn build_family(spec: FamilySpec) -> Result<GradedFamily> {
    GradedFamily::new(spec)
}

impl GradedFamily {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        spec.validate()?;
        let ring = spec.ring()?;
        let inner = match &spec {
            FamilySpec::Symbolic { ideal, .. } | FamilySpec::Saturation(ideal) => {
                Inner::Powers(Box::new(GradedFamily::new(FamilySpec::Power(ideal.clone()))?))
            }
            FamilySpec::Product(f, g) => Inner::Product(
                Box::new(GradedFamily::new((**f).clone())?),
                Box::new(GradedFamily::new((**g).clone())?),
            ),
            _ => Inner::Leaf,
        };
        let valuation = match &spec {
            FamilySpec::Valuation { constraints, .. } => constraints.iter().map(|c| c.integral()).collect(),
            _ => Vec::new(),
        };
        Ok(Self { spec, ring, inner, valuation, memo: Mutex::new(BTreeMap::new()) })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// Largest index available, for table families.
    pub fn max_index(&self) -> Option<u32> {
        match &self.spec {
            FamilySpec::Table(t) => Some(t.len() as u32 - 1),
            FamilySpec::MaxPowerSeq { sequence: ExponentSequence::Table(t), .. } => Some(t.len() as u32 - 1),
            FamilySpec::Product(..) => match &self.inner {
                Inner::Product(f, g) => match (f.max_index(), g.max_index()) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// `b_n` when the family is `I_n = m^{b_n}`.
    pub fn max_power_exponent(&self, n: u32) -> Result<Option<u64>> {
        match &self.spec {
            FamilySpec::MaxPowerSeq { sequence, .. } => Ok(Some(sequence.exponent(n)?)),
            _ => Ok(None),
        }
    }

    fn cached(&self, n: u32) -> Option<MonomialIdeal> {
        self.memo.lock().expect("memo poisoned").get(&n).cloned()
    }

    fn store(&self, n: u32, ideal: &MonomialIdeal) {
        self.memo.lock().expect("memo poisoned").entry(n).or_insert_with(|| ideal.clone());
    }

    /// `I_n` in canonical form.
    pub fn member_ideal(&self, n: u32) -> Result<MonomialIdeal> {
        if let Some(i) = self.cached(n) {
            return Ok(i);
        }
        let ideal = match &self.spec {
            FamilySpec::Table(t) => {
                t.get(n as usize).cloned().ok_or(Error::TableOutOfRange { index: n, len: t.len() })?
            }
            _ if n == 0 => MonomialIdeal::unit(&self.ring),
            FamilySpec::Power(base) => {
                // Extend from the largest cached power below n.
                let (start, mut acc) = {
                    let memo = self.memo.lock().expect("memo poisoned");
                    memo.range(..n)
                        .next_back()
                        .map(|(k, v)| (*k, v.clone()))
                        .unwrap_or((0, MonomialIdeal::unit(&self.ring)))
                };
                if n - start > 8 {
                    acc = acc.multiply(&base.power(n - start))?;
                } else {
                    for k in start + 1..=n {
                        acc = acc.multiply(base)?;
                        if k < n {
                            self.store(k, &acc);
                        }
                    }
                }
                acc
            }
            FamilySpec::MaxPowerSeq { sequence, .. } => {
                let b = sequence.exponent(n)?;
                let b = u32::try_from(b).map_err(|_| Error::Internal(format!("exponent {b} too large to materialize")))?;
                MonomialIdeal::maximal_power(&self.ring, b)
            }
            FamilySpec::Valuation { .. } => self.valuation_member(n),
            FamilySpec::Symbolic { by, .. } => match &self.inner {
                Inner::Powers(p) => p.member_ideal(n)?.saturate(by)?,
                _ => unreachable!("symbolic family has a power child"),
            },
            FamilySpec::Saturation(_) => match &self.inner {
                Inner::Powers(p) => p.member_ideal(n)?.saturation(),
                _ => unreachable!("saturation family has a power child"),
            },
            FamilySpec::Product(..) => match &self.inner {
                Inner::Product(f, g) => f.member_ideal(n)?.multiply(&g.member_ideal(n)?)?,
                _ => unreachable!("product family has two children"),
            },
        };
        self.store(n, &ideal);
        Ok(ideal)
    }

    /// Minimal generators of `{a : ⟨w_j, a⟩ >= t_j n}`: enumerate all but
    /// the last coordinate up to the per-axis bound past which raising that
    /// coordinate cannot be minimal, and take the least feasible last one.
    fn valuation_member(&self, n: u32) -> MonomialIdeal {
        let d = self.dim();
        let n = n as i128;
        let bounds: Vec<u32> = (0..d)
            .map(|i| {
                self.valuation
                    .iter()
                    .filter(|(w, _)| w[i] > 0)
                    .map(|(w, t)| div_ceil_nonneg(t * n, w[i]))
                    .max()
                    .unwrap_or(0) as u32
            })
            .collect();
        let mut raw = Vec::new();
        let mut prefix = vec![0u32; d - 1];
        loop {
            let mut last: Option<i128> = Some(0);
            for (w, t) in &self.valuation {
                let partial: i128 = prefix.iter().zip(w).map(|(&a, &wi)| a as i128 * wi).sum();
                let need = t * n - partial;
                if need > 0 {
                    if w[d - 1] > 0 {
                        let c = div_ceil_nonneg(need, w[d - 1]);
                        last = last.map(|l| l.max(c));
                    } else {
                        last = None;
                    }
                }
            }
            if let Some(l) = last {
                let mut g = prefix.clone();
                g.push(l as u32);
                raw.push(g);
            }
            // Next prefix in the box.
            let mut j = 0;
            loop {
                if j == d - 1 {
                    return MonomialIdeal::from_raw(&self.ring, raw);
                }
                prefix[j] += 1;
                if prefix[j] <= bounds[j] {
                    break;
                }
                prefix[j] = 0;
                j += 1;
            }
        }
    }

    /// `ℓ(R/I_n)`, using the closed form for powers of the maximal ideal.
    pub fn colength_at(&self, n: u32) -> Result<Length> {
        if let Some(b) = self.max_power_exponent(n)? {
            return Ok(Length::Finite(colength_of_maximal_power(self.dim(), b)));
        }
        Ok(colength(&self.member_ideal(n)?))
    }

    /// Checks `I_m I_n ⊆ I_{m+n}` for all `m, n >= 1` with `m + n <= max_n`.
    pub fn verify_graded(&self, max_n: u32) -> Result<VerificationReport> {
        let limit = self.max_index().map_or(max_n, |k| k.min(max_n));
        let mut checked = 0;
        for total in 2..=limit {
            for m in 1..=total / 2 {
                let n = total - m;
                checked += 1;
                if let (Some(a), Some(b), Some(c)) =
                    (self.max_power_exponent(m)?, self.max_power_exponent(n)?, self.max_power_exponent(total)?)
                {
                    if a + b < c {
                        let witness = Exponent::unit(self.dim(), 0, (a + b) as u32);
                        return Ok(VerificationReport::Fail { m, n, witness: Some(witness) });
                    }
                    continue;
                }
                let im = self.member_ideal(m)?;
                let inn = self.member_ideal(n)?;
                let target = self.member_ideal(total)?.membership_index();
                for g in im.gens() {
                    for h in inn.gens() {
                        let s = g.add(h);
                        if !target.contains(&s.0) {
                            return Ok(VerificationReport::Fail { m, n, witness: Some(s) });
                        }
                    }
                }
            }
        }
        Ok(VerificationReport::Pass { checked })
    }

    /// Checks `I_{n+1} ⊆ I_n` for `0 <= n < max_n`.
    pub fn verify_filtration(&self, max_n: u32) -> Result<VerificationReport> {
        let limit = self.max_index().map_or(max_n, |k| k.min(max_n));
        let mut checked = 0;
        for n in 0..limit {
            checked += 1;
            if let (Some(a), Some(b)) = (self.max_power_exponent(n)?, self.max_power_exponent(n + 1)?) {
                if b < a {
                    let witness = Exponent::unit(self.dim(), 0, b as u32);
                    return Ok(VerificationReport::Fail { m: n, n: n + 1, witness: Some(witness) });
                }
                continue;
            }
            let upper = self.member_ideal(n)?;
            let lower = self.member_ideal(n + 1)?;
            if let Some(g) = lower.gens().iter().find(|g| !upper.contains_coords(&g.0)) {
                return Ok(VerificationReport::Fail { m: n, n: n + 1, witness: Some(g.clone()) });
            }
        }
        Ok(VerificationReport::Pass { checked })
    }
}

fn div_ceil_nonneg(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    if a <= 0 {
        0
    } else {
        (a + b - 1) / b
    }
}

impl Clone for GradedFamily {
    fn clone(&self) -> Self {
        GradedFamily::new(self.spec.clone()).expect("spec already validated")
    }
}
