use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{det, dot, rank, solve, sort_cyclic};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// `⟨normal, y⟩ >= offset` with a nonnegative normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, offset: Q) -> Self {
        Self { normal, offset }
    }

    pub fn from_ints(normal: &[i64], offset: Q) -> Self {
        Self { normal: normal.iter().map(|&x| Q::from_integer(x.into())).collect(), offset }
    }

    /// Scales the normal to coprime integers.
    fn canonical(&self) -> Option<Halfspace> {
        if self.normal.iter().all(|x| x.is_zero()) {
            return None;
        }
        let lcm = self.normal.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = self.normal.iter().map(|q| (q * Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let factor = Q::new(lcm, g);
        Some(Halfspace {
            normal: self.normal.iter().map(|x| x * &factor).collect(),
            offset: &self.offset * &factor,
        })
    }

    pub fn contains(&self, y: &[Q]) -> bool {
        dot(&self.normal, y) >= self.offset
    }

    pub fn is_tight(&self, y: &[Q]) -> bool {
        dot(&self.normal, y) == self.offset
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.normal.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if !c.is_one() {
                write!(f, "{}*", fmt_q(c))?;
            }
            write!(f, "y{}", j + 1)?;
        }
        write!(f, " >= {}", fmt_q(&self.offset))
    }
}

/// An upward-closed convex region of the positive orthant, given as the
/// intersection of the orthant with halfspaces `⟨n, y⟩ >= c`, `n >= 0`.
///
/// For `dim <= 3` the halfspace list is canonical: normals are coprime
/// integers, redundant halfspaces are removed, and the list is sorted, so
/// region equality is list equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexRegion {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

/// How a covolume was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovolMethod {
    ExactPolytope,
    GridBracket,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovolResult {
    pub value: Q,
    pub method: CovolMethod,
    pub bracket: Option<(Q, Q)>,
}

impl ConvexRegion {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRing("region dimension must be positive".into()));
        }
        for h in &halfspaces {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.normal.len() });
            }
            if h.normal.iter().any(|x| x.is_negative()) {
                return Err(Error::Hypothesis(format!("halfspace `{h}` has a negative normal coordinate")));
            }
        }
        let mut hs: Vec<Halfspace> = halfspaces
            .iter()
            .filter_map(Halfspace::canonical)
            .filter(|h| h.offset.is_positive())
            .collect();
        hs.sort();
        hs.dedup();
        // Among parallel halfspaces only the largest offset matters.
        let mut kept: Vec<Halfspace> = Vec::new();
        for h in hs {
            match kept.last_mut() {
                Some(last) if last.normal == h.normal => *last = h,
                _ => kept.push(h),
            }
        }
        let mut region = Self { dim, halfspaces: kept };
        if dim <= 3 {
            region.remove_redundant();
        }
        Ok(region)
    }

    /// The whole orthant (covolume zero).
    pub fn orthant(dim: usize) -> Self {
        Self { dim, halfspaces: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, y: &[Q]) -> bool {
        y.iter().all(|c| !c.is_negative()) && self.halfspaces.iter().all(|h| h.contains(y))
    }

    /// The complement in the orthant is bounded iff every halfspace with a
    /// positive offset has a strictly positive normal.
    pub fn is_cobounded(&self) -> bool {
        self.halfspaces.iter().all(|h| h.normal.iter().all(|x| x.is_positive()))
    }

    /// `t · D` for rational `t > 0`.
    pub fn scale(&self, t: &Q) -> Self {
        assert!(t.is_positive(), "scale factor must be positive");
        Self {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace { normal: h.normal.clone(), offset: &h.offset * t })
                .collect(),
        }
    }

    fn constraints(&self) -> Vec<Halfspace> {
        let mut all = self.halfspaces.clone();
        for j in 0..self.dim {
            let mut n = vec![Q::zero(); self.dim];
            n[j] = Q::one();
            all.push(Halfspace { normal: n, offset: Q::zero() });
        }
        all
    }

    /// Vertices of the region (`dim <= 3`), sorted.
    pub fn vertices(&self) -> Result<Vec<Vec<Q>>> {
        if self.dim > 3 {
            return Err(Error::DimensionUnsupported(self.dim));
        }
        let cons = self.constraints();
        let mut out = Vec::new();
        for_each_subset(cons.len(), self.dim, |idx| {
            let a: Vec<Vec<Q>> = idx.iter().map(|&i| cons[i].normal.clone()).collect();
            let b: Vec<Q> = idx.iter().map(|&i| cons[i].offset.clone()).collect();
            if let Some(y) = solve(&a, &b) {
                if self.contains(&y) {
                    out.push(y);
                }
            }
        });
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn remove_redundant(&mut self) {
        let verts = self.vertices().expect("dim <= 3");
        let dim = self.dim;
        self.halfspaces.retain(|h| {
            let tight: Vec<&Vec<Q>> = verts.iter().filter(|v| h.is_tight(v)).collect();
            let Some(base) = tight.first() else { return false };
            let mut dirs: Vec<Vec<Q>> = tight[1..].iter().map(|v| super::linalg::sub(v, base)).collect();
            for j in 0..dim {
                if h.normal[j].is_zero() {
                    let mut e = vec![Q::zero(); dim];
                    e[j] = Q::one();
                    dirs.push(e);
                }
            }
            rank(&dirs) >= dim - 1
        });
    }

    /// Volume of the bounded complement `orthant \ D`.
    ///
    /// Exact for `dim <= 3`: the complement is star-shaped from the origin and
    /// is the union of the cones over the facets with positive offset.
    /// Above that, unit cells of side `1/resolution` are counted.
    pub fn covol(&self) -> Result<CovolResult> {
        if !self.is_cobounded() {
            return Err(Error::NotCobounded);
        }
        if self.halfspaces.is_empty() {
            return Ok(CovolResult { value: Q::zero(), method: CovolMethod::ExactPolytope, bracket: None });
        }
        match self.dim {
            1 => {
                let v = self.halfspaces.iter().map(|h| &h.offset / &h.normal[0]).max().expect("nonempty");
                Ok(CovolResult { value: v, method: CovolMethod::ExactPolytope, bracket: None })
            }
            2 | 3 => {
                let verts = self.vertices()?;
                let mut total = Q::zero();
                for h in &self.halfspaces {
                    let mut face: Vec<Vec<Q>> = verts.iter().filter(|v| h.is_tight(v)).cloned().collect();
                    if self.dim == 2 {
                        if face.len() == 2 {
                            total += det(&face).abs() / Q::from_integer(2.into());
                        }
                    } else if face.len() >= 3 {
                        sort_cyclic(&mut face, 2);
                        for i in 1..face.len() - 1 {
                            let rows = vec![face[0].clone(), face[i].clone(), face[i + 1].clone()];
                            total += det(&rows).abs() / Q::from_integer(6.into());
                        }
                    }
                }
                Ok(CovolResult { value: total, method: CovolMethod::ExactPolytope, bracket: None })
            }
            _ => Ok(self.covol_grid(0)),
        }
    }

    /// Cell-counting bracket; `resolution = 0` picks one automatically.
    pub fn covol_grid(&self, resolution: u32) -> CovolResult {
        let d = self.dim;
        // The complement lies below every axis intercept of the violated halfspace.
        let extent: Vec<Q> = (0..d)
            .map(|j| self.halfspaces.iter().map(|h| &h.offset / &h.normal[j]).max().unwrap_or_else(Q::zero))
            .collect();
        let res = if resolution > 0 {
            resolution
        } else {
            let mut r = 1u32;
            loop {
                let cells: f64 = extent.iter().map(|e| (crate::rational::to_f64(e) * (2 * r) as f64).ceil()).product();
                if cells > 2e5 || r >= 64 {
                    break r;
                }
                r *= 2;
            }
        };
        let m = Q::from_integer(res.into());
        let bounds: Vec<u32> = extent
            .iter()
            .map(|e| (e * &m).ceil().to_integer().try_into().expect("grid extent fits u32"))
            .collect();
        let (mut inner, mut outer) = (0u64, 0u64);
        crate::length::for_each_in_box(&bounds, |k| {
            let lo: Vec<Q> = k.iter().map(|&c| Q::from_integer(c.into()) / &m).collect();
            let hi: Vec<Q> = k.iter().map(|&c| Q::from_integer((c + 1).into()) / &m).collect();
            if !self.contains(&lo) {
                outer += 1;
                if !self.contains(&hi) {
                    inner += 1;
                }
            }
        });
        let cell = Q::one() / crate::rational::pow(&m, d as u32);
        let lower = Q::from_integer(inner.into()) * &cell;
        let upper = Q::from_integer(outer.into()) * &cell;
        let value = (&lower + &upper) / Q::from_integer(2.into());
        CovolResult { value, method: CovolMethod::GridBracket, bracket: Some((lower, upper)) }
    }
}

impl fmt::Display for ConvexRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.halfspaces.is_empty() {
            return f.write_str("{orthant}");
        }
        let parts: Vec<String> = self.halfspaces.iter().map(|h| h.to_string()).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}
