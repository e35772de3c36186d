//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Incrementally maintained row-echelon form; used to test whether a new
/// vector enlarges the span of the vectors inserted so far.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    // (pivot column, row normalised so the pivot entry is 1)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; the remainder is zero iff `v`
    /// lies in their span.
    pub fn residual(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (col, row) in &self.rows {
            if r[*col].is_zero() {
                continue;
            }
            let f = r[*col].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.residual(v).iter().all(Zero::is_zero)
    }

    /// Inserts `v`; returns true iff the rank grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.residual(v);
        let Some(col) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[col].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((col, r));
        true
    }
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut e = Echelon::new();
    for row in m {
        e.insert(row);
    }
    e.rank()
}

/// Indices of the rows kept by a greedy left-to-right scan that keeps a row
/// iff it is independent of the rows kept before it.
pub fn independent_rows(m: &[Vec<Rational>]) -> Vec<usize> {
    let mut e = Echelon::new();
    m.iter().enumerate().filter_map(|(i, row)| e.insert(row).then_some(i)).collect()
}

pub fn transpose(m: &[Vec<Rational>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_symmetric(m: &[Vec<Rational>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.len() == m.len() && (0..i).all(|j| row[j] == m[j][i]))
}

/// Gauss-Jordan inverse; `None` if singular or not square.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] * &inv;
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Matrix {
    let (rref, pivots) = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &p) in rref.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

fn rref(m: &[Vec<Rational>], cols: usize) -> (Matrix, Vec<usize>) {
    let mut a = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Some solution of `m x = rhs`, or `None` when the system is inconsistent.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let augmented: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (rref, pivots) = rref(&augmented, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in rref.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}
