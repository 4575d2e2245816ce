use num_bigint::BigInt;

use super::{estimate_limit_with, LengthSequence, LimitEstimate, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::length::{length_mod_power, rel_length, Length};
use crate::module::MonomialModule;
use crate::rational::{factorial, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonReport {
    pub sequence: LengthSequence,
    pub limit: LimitEstimate,
    /// `(degree)! · limit`.
    pub epsilon: LimitEstimate,
    /// Every power is `m`-primary, so the saturation is the whole ring and
    /// the sequence is the colength sequence itself.
    pub primary: bool,
}

fn finite(len: Length, what: impl FnOnce() -> String) -> Result<u128> {
    len.finite().ok_or_else(|| Error::Internal(format!("{} has infinite length", what())))
}

/// `ℓ((I^n)^sat / I^n) / n^d` for `n = 1..=max_n`, with `ε = d! · limit`.
pub fn epsilon_ideal(ideal: &MonomialIdeal, max_n: u32) -> Result<EpsilonReport> {
    let mut entries = Vec::with_capacity(max_n as usize);
    let mut power = MonomialIdeal::unit(ideal.ring());
    for n in 1..=max_n {
        power = power.multiply(ideal)?;
        let sat = power.saturation();
        let v = finite(rel_length(&sat, &power)?, || format!("saturation of {power}"))?;
        entries.push((n, v));
    }
    let d = ideal.dim() as u32;
    report(LengthSequence::new(entries, d)?, d, ideal.is_primary())
}

fn report(sequence: LengthSequence, degree: u32, primary: bool) -> Result<EpsilonReport> {
    let limit = estimate_limit_with(&sequence, DEFAULT_TOLERANCE)?;
    let epsilon = limit.scaled(&Q::from_integer(factorial(degree)));
    Ok(EpsilonReport { sequence, limit, epsilon, primary })
}

/// `Σ_β ℓ(sat(E^k_β) / E^k_β) / k^{d+e-1}` for `k = 1..=max_k`, where `e` is
/// the rank of `E`; `ε = (d+e-1)! · limit`.
pub fn epsilon_module(module: &MonomialModule, max_k: u32) -> Result<EpsilonReport> {
    let e = module.rank();
    if e == 0 {
        return Err(Error::Hypothesis("the module has rank zero".into()));
    }
    let degree = (module.ring().dim() + e - 1) as u32;
    let mut entries = Vec::with_capacity(max_k as usize);
    let mut piece = module.zeroth_piece();
    let mut primary = true;
    for k in 1..=max_k {
        piece = module.next_piece(&piece);
        let mut total = 0u128;
        for comp in piece.values() {
            primary &= comp.is_primary();
            let sat = comp.saturation();
            total += finite(rel_length(&sat, comp)?, || format!("component {comp}"))?;
        }
        entries.push((k, total));
    }
    report(LengthSequence::new(entries, degree)?, degree, primary)
}

/// Dimension of `B / A` for monomial ideals `A ⊆ B`: the largest set of
/// variables whose inversion does not kill the quotient. `None` if `A = B`.
pub fn difference_dimension(b: &MonomialIdeal, a: &MonomialIdeal) -> Result<Option<usize>> {
    if !a.is_subset_of(b)? {
        return Err(Error::NotContained(a.to_string(), b.to_string()));
    }
    let d = a.dim();
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << d) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|s| s >= size) {
            continue;
        }
        let axes: Vec<bool> = (0..d).map(|j| mask >> j & 1 == 1).collect();
        if b.saturate_axes(&axes) != a.saturate_axes(&axes) {
            best = Some(size);
        }
    }
    Ok(best)
}

/// `e_m(B / A)` for a quotient of dimension `s`: the `s`-th finite difference
/// of `k ↦ ℓ(B / (m^k B + A))` once it is constant.
fn module_multiplicity(b: &MonomialIdeal, a: &MonomialIdeal, s: usize) -> Result<u128> {
    if s == 0 {
        return finite(rel_length(b, a)?, || format!("{b} / {a}"));
    }
    let maxdeg = a.gens().iter().chain(b.gens()).map(|g| g.degree()).max().unwrap_or(0);
    let mut k = maxdeg as u32 + 1;
    loop {
        let h: Vec<i128> = (0..s as u32 + 3)
            .map(|i| length_mod_power(b, a, k + i).map(|v| v as i128))
            .collect::<Result<_>>()?;
        let mut diff = h;
        for _ in 0..s {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        if diff.windows(2).all(|w| w[0] == w[1]) {
            return u128::try_from(diff[0]).map_err(|_| Error::Internal("negative multiplicity".into()));
        }
        k *= 2;
        if k > 1 << 16 {
            return Err(Error::Internal("Hilbert function of the difference module did not stabilize".into()));
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicReport {
    /// Dimension of `I_n(J) / I^n`; `None` when the two agree for every `n`.
    pub s: Option<usize>,
    /// `(n, e_m(I_n(J) / I^n))`, normalized by `n^{d-s}` in the estimate.
    pub sequence: LengthSequence,
    pub limit: LimitEstimate,
}

/// `lim e_m(I_n(J) / I^n) / n^{d-s}` with `I_n(J) = I^n : J^∞`.
pub fn symbolic_multiplicity(i: &MonomialIdeal, j: &MonomialIdeal, max_n: u32) -> Result<SymbolicReport> {
    let d = i.dim();
    let mut power = MonomialIdeal::unit(i.ring());
    let mut pairs = Vec::with_capacity(max_n as usize);
    let mut s: Option<Option<usize>> = None;
    for n in 1..=max_n {
        power = power.multiply(i)?;
        let sym = power.saturate(j)?;
        let dim = difference_dimension(&sym, &power)?;
        match s {
            None => s = Some(dim),
            Some(prev) if prev != dim => {
                // Small n may still be in the transient; only a change after
                // the module appears is fatal.
                if prev.is_some() {
                    return Err(Error::Hypothesis(format!("difference dimension changes at n = {n}")));
                }
                s = Some(dim);
                pairs.clear();
            }
            _ => {}
        }
        pairs.push((n, sym, power.clone()));
    }
    let s = s.flatten();
    let Some(s) = s else {
        let entries = (1..=max_n).map(|n| (n, 0u128)).collect();
        return Ok(SymbolicReport {
            s: None,
            sequence: LengthSequence::new(entries, 0)?,
            limit: LimitEstimate::exact(Q::from_integer(BigInt::from(0)), (1, max_n)),
        });
    };
    if s >= d {
        return Err(Error::Hypothesis(format!("I_n(J) / I^n has full dimension {d}")));
    }
    let entries = pairs
        .iter()
        .map(|(n, sym, pow)| Ok((*n, module_multiplicity(sym, pow, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let sequence = LengthSequence::new(entries, (d - s) as u32)?;
    let limit = estimate_limit_with(&sequence, DEFAULT_TOLERANCE)?;
    Ok(SymbolicReport { s: Some(s), sequence, limit })
}
