use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::linalg::{cross, det, dot, rank, sub};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Bounded convex hull of finitely many rational points (`dim <= 3`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Q>>,
    volume: Q,
}

impl Polytope {
    pub fn hull(dim: usize, points: &[Vec<Q>]) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::DimensionUnsupported(dim));
        }
        if points.is_empty() {
            return Err(Error::Hypothesis("convex hull of an empty point set".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let (vertices, volume) = match dim {
            1 => {
                let lo = pts.first().expect("nonempty").clone();
                let hi = pts.last().expect("nonempty").clone();
                let vol = &hi[0] - &lo[0];
                let v = if lo == hi { vec![lo] } else { vec![lo, hi] };
                (v, vol)
            }
            2 => hull_2d(&pts),
            _ => hull_3d(&pts),
        };
        Ok(Self { dim, vertices, volume })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices; cyclically ordered in dimension two, sorted otherwise.
    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    /// `dim`-dimensional volume (zero for degenerate hulls).
    pub fn volume(&self) -> &Q {
        &self.volume
    }
}

fn turn(o: &[Q], a: &[Q], b: &[Q]) -> Q {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn hull_2d(pts: &[Vec<Q>]) -> (Vec<Vec<Q>>, Q) {
    if pts.len() <= 2 {
        return (pts.to_vec(), Q::zero());
    }
    let mut lower: Vec<Vec<Q>> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Q>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return (lower, Q::zero());
    }
    let mut twice = Q::zero();
    for i in 0..lower.len() {
        let a = &lower[i];
        let b = &lower[(i + 1) % lower.len()];
        twice += &a[0] * &b[1] - &a[1] * &b[0];
    }
    (lower, twice.abs() / Q::from_integer(2.into()))
}

fn hull_3d(pts: &[Vec<Q>]) -> (Vec<Vec<Q>>, Q) {
    let diffs: Vec<Vec<Q>> = pts.iter().map(|p| sub(p, &pts[0])).collect();
    if rank(&diffs) < 3 {
        // Flat: report the extreme points of the point set itself.
        let verts = pts
            .iter()
            .filter(|p| {
                !pts.iter().any(|a| {
                    pts.iter().any(|b| a != *p && b != *p && a != b && strictly_between(a, p, b))
                })
            })
            .cloned()
            .collect();
        return (verts, Q::zero());
    }
    let tris = incremental_hull(pts);
    let interior = {
        let n = Q::from_integer(((tris.len() * 3) as i64).into());
        (0..3)
            .map(|j| tris.iter().flat_map(|t| t.v.iter()).fold(Q::zero(), |acc, &i| acc + &pts[i][j]) / &n)
            .collect::<Vec<Q>>()
    };
    let mut volume = Q::zero();
    for t in &tris {
        let rows: Vec<Vec<Q>> = t.v.iter().map(|&i| sub(&pts[i], &interior)).collect();
        volume += det(&rows).abs() / Q::from_integer(6.into());
    }
    // A boundary point is a vertex iff the facets through it have normals of rank 3.
    let mut verts: Vec<Vec<Q>> = Vec::new();
    let mut used: Vec<usize> = tris.iter().flat_map(|t| t.v).collect();
    used.sort_unstable();
    used.dedup();
    for i in used {
        let normals: Vec<Vec<Q>> = tris.iter().filter(|t| t.v.contains(&i)).map(|t| t.n.clone()).collect();
        if rank(&normals) == 3 {
            verts.push(pts[i].clone());
        }
    }
    verts.sort();
    (verts, volume)
}

struct Tri {
    v: [usize; 3],
    n: Vec<Q>,
    c: Q,
}

impl Tri {
    fn new(pts: &[Vec<Q>], v: [usize; 3]) -> Self {
        let n = cross(&sub(&pts[v[1]], &pts[v[0]]), &sub(&pts[v[2]], &pts[v[0]]));
        let c = dot(&n, &pts[v[0]]);
        Self { v, n, c }
    }

    fn sees(&self, p: &[Q]) -> bool {
        dot(&self.n, p) > self.c
    }
}

/// Outward-oriented triangulated boundary of a full-dimensional point set.
fn incremental_hull(pts: &[Vec<Q>]) -> Vec<Tri> {
    let i1 = (1..pts.len()).find(|&i| pts[i] != pts[0]).expect("full rank");
    let i2 = (1..pts.len())
        .find(|&i| !cross(&sub(&pts[i1], &pts[0]), &sub(&pts[i], &pts[0])).iter().all(|x| x.is_zero()))
        .expect("full rank");
    let base = Tri::new(pts, [0, i1, i2]);
    let i3 = (1..pts.len()).find(|&i| dot(&base.n, &pts[i]) != base.c).expect("full rank");
    let simplex = [0, i1, i2, i3];
    let mut tris: Vec<Tri> = Vec::new();
    for skip in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| simplex[k]).collect();
        let mut t = Tri::new(pts, [f[0], f[1], f[2]]);
        if t.sees(&pts[simplex[skip]]) {
            t = Tri::new(pts, [f[0], f[2], f[1]]);
        }
        tris.push(t);
    }
    for (i, p) in pts.iter().enumerate() {
        if simplex.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = tris.iter().map(|t| t.sees(p)).collect();
        if !visible.contains(&true) {
            continue;
        }
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (t, _) in tris.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                edges.insert((t.v[k], t.v[(k + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = edges.iter().filter(|(a, b)| !edges.contains(&(*b, *a))).copied().collect();
        let mut kept: Vec<Tri> = tris.into_iter().zip(visible).filter(|(_, v)| !v).map(|(t, _)| t).collect();
        kept.extend(horizon.into_iter().map(|(a, b)| Tri::new(pts, [a, b, i])));
        tris = kept;
    }
    tris
}

fn strictly_between(a: &[Q], p: &[Q], b: &[Q]) -> bool {
    let ab = sub(b, a);
    let ap = sub(p, a);
    if !cross(&ab, &ap).iter().all(|x| x.is_zero()) {
        return false;
    }
    let t = dot(&ap, &ab);
    t.is_positive() && t < dot(&ab, &ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter().map(|p| p.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn interval_and_polygon() {
        let p = Polytope::hull(1, &pts(&[&[2], &[0], &[1]])).unwrap();
        assert_eq!(p.volume(), &qi(2));
        let sq = Polytope::hull(2, &pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]])).unwrap();
        assert_eq!(sq.volume(), &qi(4));
        assert_eq!(sq.vertices().len(), 4);
        let line = Polytope::hull(2, &pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap();
        assert_eq!(line.volume(), &qi(0));
    }

    #[test]
    fn simplex_and_cube_volumes() {
        let s = Polytope::hull(3, &pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(s.volume(), &q(1, 6));
        let mut cube = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    cube.push(vec![qi(x), qi(y), qi(z)]);
                }
            }
        }
        let c = Polytope::hull(3, &cube).unwrap();
        assert_eq!(c.volume(), &qi(8));
        assert_eq!(c.vertices().len(), 8);
    }
}
