//! Integer lattices in Hermite normal form, built one generator at a time.

use num_integer::Integer;

use crate::geometry::for_each_subset;

/// Row-style Hermite basis of the subgroup of `Z^n` spanned by the inserted
/// vectors: pivots strictly increase, pivot entries are positive, and the
/// entries above each pivot are reduced modulo it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteLattice {
    width: usize,
    rows: Vec<Vec<i128>>,
}

fn pivot(row: &[i128]) -> usize {
    row.iter().position(|&x| x != 0).expect("basis rows are nonzero")
}

impl HermiteLattice {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn rows(&self) -> &[Vec<i128>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a generator; returns whether the lattice changed.
    pub fn insert(&mut self, v: &[i128]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        let mut changed = false;
        let mut r = 0;
        for col in 0..self.width {
            if v[col] == 0 {
                if r < self.rows.len() && pivot(&self.rows[r]) == col {
                    r += 1;
                }
                continue;
            }
            if r < self.rows.len() && pivot(&self.rows[r]) == col {
                let row = &self.rows[r];
                let (a, b) = (row[col], v[col]);
                if b % a != 0 {
                    // Replace the pivot row by the gcd combination.
                    let e = a.extended_gcd(&b);
                    let (g, s, t) = (e.gcd, e.x, e.y);
                    let new_row: Vec<i128> = row.iter().zip(&v).map(|(x, y)| s * x + t * y).collect();
                    let (ra, rb) = (a / g, b / g);
                    v = v.iter().zip(row.iter()).map(|(y, x)| ra * y - rb * x).collect();
                    self.rows[r] = new_row;
                    changed = true;
                } else {
                    let f = b / a;
                    v = v.iter().zip(row.iter()).map(|(y, x)| y - f * x).collect();
                }
                r += 1;
            } else {
                if v[col] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                self.rows.insert(r, v);
                changed = true;
                break;
            }
        }
        if changed {
            self.normalize();
        }
        changed
    }

    fn normalize(&mut self) {
        for j in 0..self.rows.len() {
            let pj = pivot(&self.rows[j]);
            if self.rows[j][pj] < 0 {
                self.rows[j].iter_mut().for_each(|x| *x = -*x);
            }
            let pivot_row = self.rows[j].clone();
            for i in 0..j {
                let f = Integer::div_floor(&self.rows[i][pj], &pivot_row[pj]);
                if f != 0 {
                    for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
    }

    pub fn merge(&mut self, other: &HermiteLattice) {
        for row in &other.rows {
            self.insert(row);
        }
    }

    /// Index of the lattice inside its saturation (the integer points of
    /// its real span): the gcd of the maximal minors.
    pub fn saturation_index(&self) -> i128 {
        let k = self.rows.len();
        if k == 0 {
            return 1;
        }
        let mut g = 0i128;
        for_each_subset(self.width, k, |cols| {
            let m: Vec<Vec<i128>> = self.rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            g = g.gcd(&bareiss_det(m));
        });
        g
    }
}

/// Fraction-free determinant.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}
