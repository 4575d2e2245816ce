use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::linalg::add;
use super::region::{ConvexRegion, CovolMethod, CovolResult, Halfspace};
use crate::error::{Error, Result};
use crate::families::GradedFamily;
use crate::ideal::MonomialIdeal;
use crate::rational::{RootSumReport, Q};

/// Upward hull `conv(points) + orthant` as a canonical region (`dim <= 3`).
pub fn upward_hull(dim: usize, points: &[Vec<Q>]) -> Result<ConvexRegion> {
    if dim == 0 || dim > 3 {
        return Err(Error::DimensionUnsupported(dim));
    }
    if points.is_empty() {
        return Err(Error::Hypothesis("upward hull of an empty point set".into()));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
    }
    let lcm = points.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scale = Q::from_integer(lcm);
    let mut ints: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| (c * &scale).to_integer().to_i128().expect("hull coordinates fit i128"))
                .collect()
        })
        .collect();
    ints.sort();
    ints.dedup();
    let ints = minimal_points(ints);
    let normals: Vec<Vec<i128>> = match dim {
        1 => vec![vec![1]],
        2 => normals_2d(&ints),
        _ => normals_3d(&ints),
    };
    let halfspaces = normals
        .into_iter()
        .map(|n| {
            let c = ints.iter().map(|p| idot(&n, p)).min().expect("nonempty");
            Halfspace::new(
                n.iter().map(|&x| Q::from_integer(x.into())).collect(),
                Q::from_integer(c.into()) / &scale,
            )
        })
        .collect();
    ConvexRegion::new(dim, halfspaces)
}

fn idot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Drops points dominated coordinatewise by another point.
fn minimal_points(points: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b)))
        .cloned()
        .collect()
}

fn normalize(mut n: Vec<i128>) -> Option<Vec<i128>> {
    if n.iter().all(|&x| x <= 0) {
        n.iter_mut().for_each(|x| *x = -*x);
    }
    if n.iter().any(|&x| x < 0) || n.iter().all(|&x| x == 0) {
        return None;
    }
    let g = n.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    Some(n.into_iter().map(|x| x / g).collect())
}

/// Facet normals of the lower-left convex chain of a planar point set.
fn normals_2d(points: &[Vec<i128>]) -> Vec<Vec<i128>> {
    // `points` is sorted by x and pairwise incomparable, so y strictly decreases.
    let mut chain: Vec<&Vec<i128>> = Vec::new();
    for p in points {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if cross <= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    let mut out = vec![vec![1, 0], vec![0, 1]];
    for w in chain.windows(2) {
        if let Some(n) = normalize(vec![w[0][1] - w[1][1], w[1][0] - w[0][0]]) {
            out.push(n);
        }
    }
    out
}

fn icross(a: &[i128], b: &[i128]) -> Vec<i128> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn irank(vectors: &[Vec<i128>]) -> usize {
    let q: Vec<Vec<Q>> = vectors.iter().map(|v| v.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
    super::linalg::rank(&q)
}

/// Candidate facet normals in dimension three: every facet of the upward hull
/// is spanned by three points, two points and an axis, or one point and two
/// axes. Candidates are kept only if their tight set really spans a facet.
fn normals_3d(points: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let axes: Vec<Vec<i128>> = (0..3).map(|j| (0..3).map(|k| i128::from(j == k)).collect()).collect();
    let mut candidates: BTreeSet<Vec<i128>> = axes.iter().cloned().collect();
    // Differences from a common base point suffice for triangles through it.
    let n = points.len();
    for i in 0..n {
        let local: Vec<Vec<i128>> = (0..n)
            .filter(|&j| j != i)
            .map(|j| points[j].iter().zip(&points[i]).map(|(a, b)| a - b).collect())
            .chain(axes.iter().cloned())
            .collect();
        for a in 0..local.len() {
            for b in a + 1..local.len() {
                if let Some(nv) = normalize(icross(&local[a], &local[b])) {
                    candidates.insert(nv);
                }
            }
        }
    }
    candidates
        .into_iter()
        .filter(|nv| {
            let c = points.iter().map(|p| idot(nv, p)).min().expect("nonempty");
            if c <= 0 {
                return false;
            }
            let tight: Vec<&Vec<i128>> = points.iter().filter(|p| idot(nv, p) == c).collect();
            let mut span: Vec<Vec<i128>> =
                tight[1..].iter().map(|p| p.iter().zip(tight[0]).map(|(a, b)| a - b).collect()).collect();
            for (j, e) in axes.iter().enumerate() {
                if nv[j] == 0 {
                    span.push(e.clone());
                }
            }
            irank(&span) >= 2
        })
        .collect()
}

/// Convex Newton region of an `m`-primary monomial ideal.
pub fn hull_region(ideal: &MonomialIdeal) -> Result<ConvexRegion> {
    if !ideal.is_primary() {
        return Err(Error::NotPrimary(ideal.to_string()));
    }
    let points: Vec<Vec<Q>> = ideal
        .gens()
        .iter()
        .map(|g| g.coords().iter().map(|&c| Q::from_integer(c.into())).collect())
        .collect();
    upward_hull(ideal.dim(), &points)
}

/// `D1 + D2`, computed as the upward hull of sums of vertices.
pub fn minkowski_sum(a: &ConvexRegion, b: &ConvexRegion) -> Result<ConvexRegion> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let va = a.vertices()?;
    let vb = b.vertices()?;
    let sums: Vec<Vec<Q>> = va.iter().flat_map(|x| vb.iter().map(move |y| add(x, y))).collect();
    upward_hull(a.dim(), &sums)
}

/// Checks `covol(D1)^{1/d} + covol(D2)^{1/d} >= covol(D1 + D2)^{1/d}` exactly.
pub fn kt_check(a: &ConvexRegion, b: &ConvexRegion) -> Result<RootSumReport> {
    let sum = minkowski_sum(a, b)?;
    let exact = |r: &ConvexRegion| -> Result<Q> {
        let c: CovolResult = r.covol()?;
        if c.method != CovolMethod::ExactPolytope {
            return Err(Error::DimensionUnsupported(r.dim()));
        }
        Ok(c.value)
    };
    Ok(RootSumReport::decide(exact(a)?, exact(b)?, exact(&sum)?, a.dim() as u32))
}

/// `(1/n) · hull_region(I_n)`.
pub fn limit_newton_region(family: &GradedFamily, n: u32) -> Result<ConvexRegion> {
    if n == 0 {
        return Err(Error::Hypothesis("the scaled region needs n >= 1".into()));
    }
    let member = family.member_ideal(n)?;
    Ok(hull_region(&member)?.scale(&(Q::one() / Q::from_integer(n.into()))))
}

/// `d! · covol(hull_region(I))`, the multiplicity of an `m`-primary ideal.
pub fn multiplicity_exact(ideal: &MonomialIdeal) -> Result<BigInt> {
    let c = hull_region(ideal)?.covol()?.value;
    let e = c * Q::from_integer(crate::rational::factorial(ideal.dim() as u32));
    if !e.is_integer() {
        return Err(Error::Internal(format!("non-integral multiplicity for {ideal}")));
    }
    Ok(e.to_integer())
}
