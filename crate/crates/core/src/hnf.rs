//! Row Hermite normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style HNF of the Z-span of `rows`.
///
/// Zero rows are dropped. Each remaining row has a positive leading entry,
/// leading columns strictly increase, and entries above a pivot lie in
/// `[0, pivot)`. The result depends only on the lattice, not on the order
/// or choice of generators.
pub fn hermite_normal_form(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for col in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            // smallest nonzero magnitude in this column at or below r
            let best = (r..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            let (head, tail) = a.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                if row[col].is_zero() {
                    continue;
                }
                let q = row[col].div_floor(&pivot_row[col]);
                axpy(row, &q, pivot_row, col);
                if !row[col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = a.split_at_mut(r);
        let pivot_row = &tail[0];
        for row in head.iter_mut() {
            let q = row[col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                axpy(row, &q, pivot_row, col);
            }
        }
        r += 1;
        a.retain(|row| row.iter().any(|x| !x.is_zero()));
    }
    a.truncate(r);
    a
}

// row -= q * other, for columns >= from
fn axpy(row: &mut [BigInt], q: &BigInt, other: &[BigInt], from: usize) {
    for (x, y) in row.iter_mut().zip(other).skip(from) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

pub fn pivot_columns(hnf: &[Vec<BigInt>]) -> Vec<usize> {
    hnf.iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero"))
        .collect()
}

/// True iff `v` is an integer combination of the rows of `hnf`.
pub fn in_row_span(hnf: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut r = v.to_vec();
    for (row, p) in hnf.iter().zip(pivot_columns(hnf)) {
        if r[..p].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = r[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        if !q.is_zero() {
            axpy(&mut r, &q, row, p);
        }
    }
    r.iter().all(Zero::is_zero)
}

/// Product of the pivots; for a full-rank square HNF this is |det|.
pub fn pivot_product(hnf: &[Vec<BigInt>]) -> BigInt {
    hnf.iter()
        .zip(pivot_columns(hnf))
        .fold(BigInt::one(), |acc, (row, p)| acc * &row[p])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_hnf() {
        let h = hermite_normal_form(&b(&[&[2, 4], &[3, 5]]), 2);
        // span of (2,4),(3,5) = span of (1,1),(0,2)
        assert_eq!(h, b(&[&[1, 1], &[0, 2]]));
        assert_eq!(pivot_product(&h), BigInt::from(2));
    }

    #[test]
    fn sign_and_zero_rows() {
        let h = hermite_normal_form(&b(&[&[0, 0, 0], &[0, -3, 6], &[0, 0, 0]]), 3);
        assert_eq!(h, b(&[&[0, 3, -6]]));
    }

    #[test]
    fn membership() {
        let h = hermite_normal_form(&b(&[&[1, 1], &[1, -1]]), 2);
        assert_eq!(h, b(&[&[1, 1], &[0, 2]]));
        assert!(in_row_span(&h, &[BigInt::from(2), BigInt::from(0)]));
        assert!(!in_row_span(&h, &[BigInt::from(1), BigInt::from(0)]));
        assert!(in_row_span(&h, &[BigInt::from(0), BigInt::from(0)]));
    }

    #[test]
    fn rank_deficient() {
        let h = hermite_normal_form(&b(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]), 3);
        assert_eq!(h, b(&[&[1, 2, 3], &[0, 0, 5]]));
    }
}
