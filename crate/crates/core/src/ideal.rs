use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{divides, grlex, AmbientRing, Exponent};

/// A monomial ideal in canonical form: the antichain of minimal generators
/// sorted in graded lex order.
///
/// No generators is the zero ideal; the single generator `0` is the unit ideal.
/// Two ideals are equal iff their canonical forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    ring: Arc<AmbientRing>,
    gens: Vec<Exponent>,
}

impl MonomialIdeal {
    /// Canonicalizes an arbitrary generating set.
    pub fn minimalize(ring: &Arc<AmbientRing>, gens: Vec<Exponent>) -> Result<Self> {
        let d = ring.dim();
        if let Some(g) = gens.iter().find(|g| g.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
        }
        Ok(Self::from_raw(ring, gens.into_iter().map(|g| g.0).collect()))
    }

    pub(crate) fn from_raw(ring: &Arc<AmbientRing>, raw: Vec<Vec<u32>>) -> Self {
        let gens = minimal_antichain(raw, ring.dim()).into_iter().map(Exponent).collect();
        Self { ring: Arc::clone(ring), gens }
    }

    pub fn zero(ring: &Arc<AmbientRing>) -> Self {
        Self { ring: Arc::clone(ring), gens: Vec::new() }
    }

    pub fn unit(ring: &Arc<AmbientRing>) -> Self {
        Self { ring: Arc::clone(ring), gens: vec![Exponent::zero(ring.dim())] }
    }

    /// The maximal ideal `(x_1, ..., x_d)`.
    pub fn maximal(ring: &Arc<AmbientRing>) -> Self {
        Self::maximal_power(ring, 1)
    }

    /// `m^k`, generated by every monomial of degree `k`.
    pub fn maximal_power(ring: &Arc<AmbientRing>, k: u32) -> Self {
        let d = ring.dim();
        let mut raw = Vec::new();
        let mut cur = vec![0u32; d];
        compositions(k, 0, &mut cur, &mut raw);
        raw.sort_by(|a, b| grlex(a, b));
        Self { ring: Arc::clone(ring), gens: raw.into_iter().map(Exponent).collect() }
    }

    /// `(x_1^{a_1}, ..., x_d^{a_d})`.
    pub fn diagonal(ring: &Arc<AmbientRing>, powers: &[u32]) -> Result<Self> {
        let d = ring.dim();
        if powers.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: powers.len() });
        }
        let gens = powers.iter().enumerate().map(|(i, &p)| Exponent::unit(d, i, p)).collect();
        Self::minimalize(ring, gens)
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_zero()
    }

    /// Exponent of the pure power of `x_axis` among the generators, if any.
    pub fn pure_power(&self, axis: usize) -> Option<u32> {
        self.gens
            .iter()
            .filter(|g| g.0.iter().enumerate().all(|(j, &a)| j == axis || a == 0))
            .map(|g| g.0[axis])
            .min()
    }

    /// Whether the ideal is primary to the maximal ideal (contains a pure
    /// power of every variable). The unit ideal counts as primary.
    pub fn is_primary(&self) -> bool {
        (0..self.dim()).all(|j| self.pure_power(j).is_some())
    }

    /// If the ideal is `m^b`, returns `b`.
    pub fn as_maximal_power(&self) -> Option<u32> {
        let first = self.gens.first()?;
        let b = first.degree();
        if self.gens.iter().any(|g| g.degree() != b) {
            return None;
        }
        let expected = crate::length::binomial_u128(b as u128 + self.dim() as u128 - 1, self.dim() as u128 - 1);
        (expected == Some(self.gens.len() as u128)).then_some(b as u32)
    }

    /// Componentwise maximum over the generators.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.dim()];
        for g in &self.gens {
            for (o, &a) in out.iter_mut().zip(&g.0) {
                *o = (*o).max(a);
            }
        }
        out
    }

    fn check_ring(&self, other: &MonomialIdeal) -> Result<()> {
        if self.ring == other.ring || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn contains(&self, a: &Exponent) -> Result<bool> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        Ok(self.contains_coords(&a.0))
    }

    /// Membership without the dimension check.
    pub fn contains_coords(&self, a: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(&g.0, a))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.gens.iter().all(|g| other.contains_coords(&g.0)))
    }

    pub fn multiply(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_ring(other)?;
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                raw.push(g.0.iter().zip(&h.0).map(|(a, b)| a + b).collect());
            }
        }
        Ok(Self::from_raw(&self.ring, raw))
    }

    /// `I^k` by binary exponentiation; `I^0 = R`.
    pub fn power(&self, mut k: u32) -> MonomialIdeal {
        let mut result = Self::unit(&self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.multiply(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.multiply(&base).expect("same ring");
            }
        }
        result
    }

    /// `I + J`.
    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_ring(other)?;
        let raw = self.gens.iter().chain(&other.gens).map(|g| g.0.clone()).collect();
        Ok(Self::from_raw(&self.ring, raw))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_ring(other)?;
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                raw.push(g.0.iter().zip(&h.0).map(|(&a, &b)| a.max(b)).collect());
            }
        }
        Ok(Self::from_raw(&self.ring, raw))
    }

    /// `I : x^a`.
    pub fn colon_monomial(&self, a: &Exponent) -> MonomialIdeal {
        let raw = self.gens.iter().map(|g| g.monus(a).0).collect();
        Self::from_raw(&self.ring, raw)
    }

    /// `I : J`, the intersection of `I : x^g` over the generators `g` of `J`.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Err(Error::ColonByZero);
        }
        let mut acc = self.colon_monomial(&other.gens[0]);
        for g in &other.gens[1..] {
            acc = acc.intersect(&self.colon_monomial(g))?;
        }
        Ok(acc)
    }

    /// `I : (x_S)^∞` where `S` is the set of axes flagged in `axes`: every
    /// flagged coordinate of every generator is dropped to zero.
    pub fn saturate_axes(&self, axes: &[bool]) -> MonomialIdeal {
        let raw = self
            .gens
            .iter()
            .map(|g| g.0.iter().zip(axes).map(|(&a, &s)| if s { 0 } else { a }).collect())
            .collect();
        Self::from_raw(&self.ring, raw)
    }

    /// `I : J^∞`, computed as the intersection over generators `g` of `J` of
    /// `I : (x^g)^∞`.
    pub fn saturate(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Err(Error::ColonByZero);
        }
        let support = |g: &Exponent| g.0.iter().map(|&a| a > 0).collect::<Vec<_>>();
        let mut acc = self.saturate_axes(&support(&other.gens[0]));
        for g in &other.gens[1..] {
            acc = acc.intersect(&self.saturate_axes(&support(g)))?;
        }
        Ok(acc)
    }

    /// `I : J^∞` as the stable value of the chain `I ⊆ I:J ⊆ (I:J):J ⊆ ...`.
    pub fn saturate_by_iteration(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        let mut cur = self.clone();
        loop {
            let next = cur.colon(other)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `I^sat = I : m^∞`.
    pub fn saturation(&self) -> MonomialIdeal {
        self.saturate(&Self::maximal(&self.ring)).expect("maximal ideal is nonzero")
    }

    /// A lookup structure for repeated membership queries.
    pub fn membership_index(&self) -> MembershipIndex {
        MembershipIndex::new(self)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("0");
        }
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_monomial(f, self.ring.names(), &g.0)?;
        }
        Ok(())
    }
}

pub(crate) fn write_monomial(f: &mut impl fmt::Write, names: &[String], a: &[u32]) -> fmt::Result {
    let mut first = true;
    for (name, &e) in names.iter().zip(a) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(name)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    if first {
        f.write_char('1')?;
    }
    Ok(())
}

/// Fast membership for repeated queries. In two variables the staircase is
/// kept sorted by the first exponent and queries are a binary search.
#[derive(Debug, Clone)]
pub struct MembershipIndex {
    staircase: Option<Vec<(u32, u32)>>,
    gens: Vec<Vec<u32>>,
}

impl MembershipIndex {
    fn new(ideal: &MonomialIdeal) -> Self {
        if ideal.dim() == 2 {
            let mut s: Vec<(u32, u32)> = ideal.gens.iter().map(|g| (g.0[0], g.0[1])).collect();
            s.sort_unstable();
            Self { staircase: Some(s), gens: Vec::new() }
        } else {
            Self { staircase: None, gens: ideal.gens.iter().map(|g| g.0.clone()).collect() }
        }
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        match &self.staircase {
            // Sorted by x ascending, so y is descending along the antichain:
            // the last generator with x <= a_x has the smallest y.
            Some(s) => {
                let idx = s.partition_point(|&(x, _)| x <= a[0]);
                idx > 0 && s[idx - 1].1 <= a[1]
            }
            None => self.gens.iter().any(|g| divides(g, a)),
        }
    }
}

fn compositions(k: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == cur.len() {
        cur[pos] = k;
        out.push(cur.clone());
        return;
    }
    for a in (0..=k).rev() {
        cur[pos] = a;
        compositions(k - a, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Minimal elements of a finite set of exponents under divisibility, sorted
/// in graded lex order.
pub(crate) fn minimal_antichain(mut raw: Vec<Vec<u32>>, d: usize) -> Vec<Vec<u32>> {
    if raw.is_empty() {
        return raw;
    }
    let mut kept: Vec<Vec<u32>> = match d {
        1 => vec![raw.into_iter().min().expect("nonempty")],
        2 => {
            raw.sort_unstable();
            let mut out: Vec<Vec<u32>> = Vec::new();
            let mut best = u32::MAX;
            for g in raw {
                if g[1] < best {
                    best = g[1];
                    out.push(g);
                }
            }
            out
        }
        _ => {
            raw.sort_unstable_by(|a, b| grlex(a, b));
            raw.dedup();
            let mut out: Vec<Vec<u32>> = Vec::new();
            for g in raw {
                // Divisors have smaller degree, hence were seen first.
                if !out.iter().any(|k| divides(k, &g)) {
                    out.push(g);
                }
            }
            out
        }
    };
    kept.sort_unstable_by(|a, b| grlex(a, b));
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> Arc<AmbientRing> {
        AmbientRing::standard(2).unwrap()
    }

    fn ideal(r: &Arc<AmbientRing>, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(r, gens.iter().map(|g| Exponent(g.to_vec())).collect()).unwrap()
    }

    #[test]
    fn minimalize_examples() {
        let r = ring2();
        assert_eq!(ideal(&r, &[&[1, 0], &[2, 0], &[0, 1]]), ideal(&r, &[&[1, 0], &[0, 1]]));
        assert!(ideal(&r, &[]).is_zero());
        assert_eq!(ideal(&r, &[&[2, 1], &[1, 2], &[2, 2]]).num_gens(), 2);
        let err = MonomialIdeal::minimalize(&r, vec![Exponent(vec![1, 2, 3])]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn canonical_order_is_grlex() {
        let r = ring2();
        let i = ideal(&r, &[&[0, 3], &[3, 0], &[1, 1]]);
        assert_eq!(i.to_string(), "x*y, x^3, y^3");
        let r3 = AmbientRing::standard(3).unwrap();
        let m2 = MonomialIdeal::maximal_power(&r3, 2);
        assert_eq!(m2.to_string(), "x^2, x*y, x*z, y^2, y*z, z^2");
    }

    #[test]
    fn membership() {
        let r = ring2();
        let m = ideal(&r, &[&[1, 0], &[0, 1]]);
        assert!(!m.contains(&Exponent(vec![0, 0])).unwrap());
        let i = ideal(&r, &[&[2, 0], &[1, 1]]);
        assert!(i.contains(&Exponent(vec![1, 3])).unwrap());
        let b = ideal(&r, &[&[2, 0], &[0, 3]]);
        assert!(!b.contains(&Exponent(vec![1, 2])).unwrap());
        assert!(b.contains(&Exponent(vec![1])).is_err());
        let idx = i.membership_index();
        for a in 0..5 {
            for c in 0..5 {
                assert_eq!(idx.contains(&[a, c]), i.contains_coords(&[a, c]));
            }
        }
    }

    #[test]
    fn products_and_intersections() {
        let r = ring2();
        let x = ideal(&r, &[&[1, 0]]);
        let y = ideal(&r, &[&[0, 1]]);
        assert_eq!(x.multiply(&y).unwrap(), ideal(&r, &[&[1, 1]]));
        assert_eq!(x.intersect(&y).unwrap(), ideal(&r, &[&[1, 1]]));
        let m = MonomialIdeal::maximal(&r);
        assert_eq!(m.power(2), ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]));
        let a = ideal(&r, &[&[1, 0], &[0, 2]]);
        let b = ideal(&r, &[&[2, 0], &[0, 1]]);
        assert_eq!(a.multiply(&b).unwrap(), ideal(&r, &[&[3, 0], &[1, 1], &[0, 3]]));
        let c = ideal(&r, &[&[2, 0], &[0, 1]]);
        let e = ideal(&r, &[&[1, 0], &[0, 2]]);
        assert_eq!(c.intersect(&e).unwrap(), ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(c.intersect(&MonomialIdeal::unit(&r)).unwrap(), c);
        assert!(MonomialIdeal::zero(&r).multiply(&c).unwrap().is_zero());
        let other = AmbientRing::new(&["u", "v"]).unwrap();
        assert_eq!(c.multiply(&MonomialIdeal::unit(&other)), Err(Error::RingMismatch));
    }

    #[test]
    fn colon_examples() {
        let r = ring2();
        let i = ideal(&r, &[&[2, 0], &[1, 1]]);
        let x = ideal(&r, &[&[1, 0]]);
        assert_eq!(i.colon(&x).unwrap(), MonomialIdeal::maximal(&r));
        let b = ideal(&r, &[&[2, 0], &[0, 3]]);
        assert!(b.colon(&b).unwrap().is_unit());
        let xy = ideal(&r, &[&[1, 1]]);
        assert_eq!(xy.colon(&MonomialIdeal::maximal(&r)).unwrap(), xy);
        assert_eq!(i.colon(&MonomialIdeal::zero(&r)), Err(Error::ColonByZero));
    }

    #[test]
    fn saturation_examples() {
        let r = ring2();
        let m = MonomialIdeal::maximal(&r);
        let i = ideal(&r, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.saturate(&m).unwrap(), ideal(&r, &[&[1, 0]]));
        assert_eq!(i.saturate_by_iteration(&m).unwrap(), ideal(&r, &[&[1, 0]]));
        assert!(ideal(&r, &[&[2, 0], &[0, 3]]).saturation().is_unit());
        let s = i.saturate(&m).unwrap();
        assert_eq!(s.saturate(&m).unwrap(), s);
        assert_eq!(i.saturate(&MonomialIdeal::zero(&r)), Err(Error::ColonByZero));
    }

    #[test]
    fn maximal_power_detection() {
        let r = AmbientRing::standard(3).unwrap();
        assert_eq!(MonomialIdeal::maximal_power(&r, 4).as_maximal_power(), Some(4));
        let r2 = ring2();
        assert_eq!(ideal(&r2, &[&[2, 0], &[0, 2]]).as_maximal_power(), None);
        assert_eq!(MonomialIdeal::unit(&r2).as_maximal_power(), Some(0));
    }
}
