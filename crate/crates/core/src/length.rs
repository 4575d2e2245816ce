//! Lengths of monomial quotients, computed as lattice-point counts of
//! staircase complements.

use std::fmt;

use crate::error::{Error, Result};
use crate::ideal::{minimal_antichain, MonomialIdeal};
use crate::ring::Exponent;

/// A length that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(u128),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u128> {
        match self {
            Length::Finite(v) => Some(v),
            Length::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(v) => write!(f, "{v}"),
            Length::Infinite => f.write_str("INFINITE"),
        }
    }
}

pub(crate) fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `ℓ(R/m^b) = C(b+d-1, d)`, the number of monomials of degree below `b`.
pub fn colength_of_maximal_power(d: usize, b: u64) -> u128 {
    if b == 0 {
        return 0;
    }
    binomial_u128(b as u128 + d as u128 - 1, d as u128).expect("colength overflows u128")
}

/// `ℓ(R/I)`: the number of exponents outside the staircase of `I`.
///
/// Counted by slicing along the first coordinate: the slice ideal is constant
/// between consecutive first exponents of generators, so the count is a sum
/// of slice colengths weighted by interval widths. Powers of the maximal
/// ideal use the binomial closed form.
pub fn colength(ideal: &MonomialIdeal) -> Length {
    if let Some(b) = ideal.as_maximal_power() {
        return Length::Finite(colength_of_maximal_power(ideal.dim(), b as u64));
    }
    let raw: Vec<Vec<u32>> = ideal.gens().iter().map(|g| g.0.clone()).collect();
    match colength_raw(&raw, ideal.dim()) {
        Some(v) => Length::Finite(v),
        None => Length::Infinite,
    }
}

fn colength_raw(gens: &[Vec<u32>], d: usize) -> Option<u128> {
    if d == 0 {
        return Some(if gens.is_empty() { 1 } else { 0 });
    }
    if gens.is_empty() {
        return None;
    }
    if d == 1 {
        return gens.iter().map(|g| g[0] as u128).min();
    }
    let mut sorted: Vec<&Vec<u32>> = gens.iter().collect();
    sorted.sort_unstable_by_key(|g| g[0]);

    let mut total: u128 = 0;
    let mut prev_t: u32 = 0;
    let mut slice: Vec<Vec<u32>> = Vec::new();
    let mut slice_len: Option<u128> = None; // empty slice in d-1 >= 1 variables
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i][0];
        let width = (t - prev_t) as u128;
        if width > 0 {
            total = total.checked_add(width.checked_mul(slice_len?)?)?;
        }
        while i < sorted.len() && sorted[i][0] == t {
            slice.push(sorted[i][1..].to_vec());
            i += 1;
        }
        slice = minimal_antichain(std::mem::take(&mut slice), d - 1);
        slice_len = colength_raw(&slice, d - 1);
        prev_t = t;
        if slice_len == Some(0) {
            return Some(total);
        }
    }
    None
}

/// Reference count: scans the box `∏[0, max_j)` of generator maxima and
/// counts non-members. Infinite when the ideal is not primary.
pub fn colength_box_scan(ideal: &MonomialIdeal) -> Length {
    if !ideal.is_primary() {
        return Length::Infinite;
    }
    let bounds = ideal.max_exponents();
    let mut count = 0u128;
    for_each_in_box(&bounds, |a| {
        if !ideal.contains_coords(a) {
            count += 1;
        }
    });
    Length::Finite(count)
}

/// Calls `f` on every point of `∏[0, bounds_j)`.
pub fn for_each_in_box(bounds: &[u32], mut f: impl FnMut(&[u32])) {
    if bounds.iter().any(|&b| b == 0) {
        return;
    }
    let d = bounds.len();
    let mut cur = vec![0u32; d];
    loop {
        f(&cur);
        let mut j = 0;
        loop {
            if j == d {
                return;
            }
            cur[j] += 1;
            if cur[j] < bounds[j] {
                break;
            }
            cur[j] = 0;
            j += 1;
        }
    }
}

/// `ℓ(J/I)` for `I ⊆ J`: the number of exponents in `J` but not in `I`.
///
/// Membership in either ideal is unchanged by lowering a coordinate that
/// exceeds every generator's coordinate on that axis, so the difference is
/// infinite iff it meets the layer at that cap on some axis. Both facts are
/// read off box-capped colengths.
pub fn rel_length(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<Length> {
    if !i.is_subset_of(j)? {
        return Err(Error::NotContained(i.to_string(), j.to_string()));
    }
    if let (Length::Finite(a), Length::Finite(b)) = (colength(i), colength(j)) {
        return Ok(Length::Finite(a - b));
    }
    let d = i.dim();
    let mi = i.max_exponents();
    let mj = j.max_exponents();
    let caps: Vec<u32> = (0..d).map(|k| mi[k].max(mj[k]).max(1)).collect();
    let inside = capped_difference(j, i, &caps)?;
    for axis in 0..d {
        let mut wider = caps.clone();
        wider[axis] += 1;
        if capped_difference(j, i, &wider)? != inside {
            return Ok(Length::Infinite);
        }
    }
    Ok(Length::Finite(inside))
}

fn capped_difference(j: &MonomialIdeal, i: &MonomialIdeal, caps: &[u32]) -> Result<u128> {
    let bx = MonomialIdeal::diagonal(i.ring(), caps)?;
    let ci = colength(&i.sum(&bx)?).finite().expect("capped ideal is primary");
    let cj = colength(&j.sum(&bx)?).finite().expect("capped ideal is primary");
    Ok(ci - cj)
}

/// `ℓ(J/(m^k J + I))` for `I ⊆ J`; always finite.
pub fn length_mod_power(j: &MonomialIdeal, i: &MonomialIdeal, k: u32) -> Result<u128> {
    if !i.is_subset_of(j)? {
        return Err(Error::NotContained(i.to_string(), j.to_string()));
    }
    if k == 0 {
        return Ok(0);
    }
    let lower = MonomialIdeal::maximal_power(j.ring(), k).multiply(j)?.sum(i)?;
    rel_length(j, &lower)?
        .finite()
        .ok_or_else(|| Error::Internal("J/(m^k J + I) has infinite length".into()))
}

/// Least `c` with `m^c ⊆ I`, i.e. one more than the largest degree of a
/// standard monomial. `None` when `I` is not primary.
pub fn maximal_power_index(ideal: &MonomialIdeal) -> Option<u32> {
    if let Some(b) = ideal.as_maximal_power() {
        return Some(b);
    }
    let raw: Vec<Vec<u32>> = ideal.gens().iter().map(|g| g.0.clone()).collect();
    match max_standard_degree(&raw, ideal.dim())? {
        None => Some(0),
        Some(deg) => Some(deg as u32 + 1),
    }
}

/// `None` if infinitely many standard monomials, `Some(None)` if there are
/// none, otherwise the largest degree among them.
fn max_standard_degree(gens: &[Vec<u32>], d: usize) -> Option<Option<u64>> {
    if d == 0 {
        return Some(if gens.is_empty() { Some(0) } else { None });
    }
    if gens.is_empty() {
        return None;
    }
    let mut sorted: Vec<&Vec<u32>> = gens.iter().collect();
    sorted.sort_unstable_by_key(|g| g[0]);
    let mut best: Option<u64> = None;
    let mut prev_t = 0u32;
    let mut slice: Vec<Vec<u32>> = Vec::new();
    let mut slice_max: Option<Option<u64>> = if d == 1 { Some(Some(0)) } else { None };
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i][0];
        if t > prev_t {
            if let Some(m) = slice_max? {
                let cand = (t - 1) as u64 + m;
                best = Some(best.map_or(cand, |b| b.max(cand)));
            }
        }
        while i < sorted.len() && sorted[i][0] == t {
            slice.push(sorted[i][1..].to_vec());
            i += 1;
        }
        slice = minimal_antichain(std::mem::take(&mut slice), d - 1);
        slice_max = max_standard_degree(&slice, d - 1);
        prev_t = t;
        if slice_max == Some(None) {
            return Some(best);
        }
    }
    None
}

/// All standard monomials of a primary ideal, in no particular order.
pub fn standard_monomials(ideal: &MonomialIdeal) -> Option<Vec<Exponent>> {
    if !ideal.is_primary() {
        return None;
    }
    let mut out = Vec::new();
    for_each_in_box(&ideal.max_exponents(), |a| {
        if !ideal.contains_coords(a) {
            out.push(Exponent(a.to_vec()));
        }
    });
    Some(out)
}
