//! Small exact linear algebra over the rationals (dimension <= 3).

use num_traits::Zero;

use crate::rational::Q;

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Q], t: &Q) -> Vec<Q> {
    a.iter().map(|x| x * t).collect()
}

pub fn cross(a: &[Q], b: &[Q]) -> Vec<Q> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn det(rows: &[Vec<Q>]) -> Q {
    match rows.len() {
        1 => rows[0][0].clone(),
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        3 => dot(&rows[0], &cross(&rows[1], &rows[2])),
        n => panic!("det of size {n} unsupported"),
    }
}

/// Solves `A y = b` for square `A` of size <= 3 by Cramer's rule.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let d = det(a);
    if d.is_zero() {
        return None;
    }
    Some(
        (0..n)
            .map(|col| {
                let m: Vec<Vec<Q>> = a
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| {
                        let mut r = row.clone();
                        r[col] = bi.clone();
                        r
                    })
                    .collect();
                det(&m) / &d
            })
            .collect(),
    )
}

/// Rank of a set of vectors by fraction-free elimination.
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = vectors.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Sorts coplanar points of a convex polygon cyclically. `drop_axis` is a
/// coordinate along which the plane's normal is nonzero, so projecting it
/// away is injective.
pub fn sort_cyclic(points: &mut [Vec<Q>], drop_axis: usize) {
    if points.len() < 3 {
        return;
    }
    let keep: Vec<usize> = (0..points[0].len()).filter(|&j| j != drop_axis).collect();
    let proj = |p: &Vec<Q>| (p[keep[0]].clone(), p[keep[1]].clone());
    let n = Q::from_integer((points.len() as i64).into());
    let cx = points.iter().fold(Q::zero(), |a, p| a + &p[keep[0]]) / &n;
    let cy = points.iter().fold(Q::zero(), |a, p| a + &p[keep[1]]) / &n;
    points.sort_by(|a, b| {
        let (ax, ay) = proj(a);
        let (bx, by) = proj(b);
        let (ax, ay, bx, by) = (ax - &cx, ay - &cy, bx - &cx, by - &cy);
        let half = |x: &Q, y: &Q| if y > &Q::zero() || (y.is_zero() && x > &Q::zero()) { 0 } else { 1 };
        half(&ax, &ay)
            .cmp(&half(&bx, &by))
            .then_with(|| (&bx * &ay).cmp(&(&ax * &by)))
    });
}
