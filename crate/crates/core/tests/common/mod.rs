//! Independent oracles: nothing here calls the library's straightening,
//! basis selection or elimination code.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `<v | L(w_1) ... L(w_k) | v>` on a lowest-weight vector, computed by
/// commuting raising modes to the right one transposition at a time.
pub struct Expectation {
    c: Q,
    h: Q,
    memo: HashMap<Vec<i64>, Q>,
}

impl Expectation {
    pub fn new(c: Q, h: Q) -> Self {
        Self {
            c,
            h,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, word: &[i64]) -> Q {
        let Some(&last) = word.last() else {
            return Q::one();
        };
        if last > 0 || word[0] < 0 {
            return Q::zero();
        }
        let Some(i) = word.iter().rposition(|&x| x > 0) else {
            // only non-positive modes: the leftmost must be L(0)
            return self.h.clone() * self.eval(&word[1..]);
        };
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        // commute the rightmost raising mode with its right neighbour
        let (p, r) = (word[i], word[i + 1]);
        let mut swapped = word.to_vec();
        swapped.swap(i, i + 1);
        let mut total = self.eval(&swapped);
        let mut merged = word[..i].to_vec();
        merged.push(p + r);
        merged.extend_from_slice(&word[i + 2..]);
        total += Q::from_integer((p - r).into()) * self.eval(&merged);
        if p + r == 0 {
            let mut dropped = word[..i].to_vec();
            dropped.extend_from_slice(&word[i + 2..]);
            total += self.c.clone() * Q::from_integer((p * p * p - p).into()) / Q::from_integer(12.into()) * self.eval(&dropped);
        }
        self.memo.insert(word.to_vec(), total.clone());
        total
    }

    /// Pairing of `L(-a_1)...L(-a_k)v` with `L(-b_1)...L(-b_j)v`.
    pub fn pair(&mut self, a: &[u32], b: &[u32]) -> Q {
        let mut word: Vec<i64> = a.iter().rev().map(|&x| x as i64).collect();
        word.extend(b.iter().map(|&x| -(x as i64)));
        self.eval(&word)
    }
}

/// Partitions of `n` (parts weakly decreasing), any order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn dense_gram(c: &Q, h: &Q, level: u32) -> Vec<Vec<Q>> {
    let parts = partitions(level);
    let mut e = Expectation::new(c.clone(), h.clone());
    parts.iter().map(|a| parts.iter().map(|b| e.pair(a, b)).collect()).collect()
}

/// Fraction-free (Bareiss) rank after clearing denominators.
pub fn bareiss_rank(m: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].abs();
        rank += 1;
    }
    rank
}

/// Graded dimensions of the three Ising modules from their fermionic
/// characters: distinct half-odd-integer parts (even or odd count) for
/// `h = 0` and `h = 1/2`, distinct positive integer parts for `h = 1/16`.
pub fn ising_dims(h: &str, max_level: usize) -> Vec<usize> {
    match h {
        "0" | "1/2" => {
            let want_odd = h == "1/2";
            // count subsets of {1,3,5,...} (doubled half-integers) by sum
            let top = 2 * max_level + 2;
            let mut table = vec![[0usize; 2]; 2 * max_level + 2];
            table[0][0] = 1;
            for part in (1..=top).step_by(2) {
                for s in (part..table.len()).rev() {
                    let (even, odd) = (table[s - part][0], table[s - part][1]);
                    table[s][0] += odd;
                    table[s][1] += even;
                }
            }
            (0..=max_level)
                .map(|l| if want_odd { table[2 * l + 1][1] } else { table[2 * l][0] })
                .collect()
        }
        "1/16" => {
            let mut table = vec![0usize; max_level + 1];
            table[0] = 1;
            for part in 1..=max_level {
                for s in (part..=max_level).rev() {
                    table[s] += table[s - part];
                }
            }
            table
        }
        _ => panic!("not an Ising weight: {h}"),
    }
}

/// Dimension of the tensor product at `level` from factor dimension lists.
pub fn tensor_dim(factors: &[Vec<usize>], level: usize) -> usize {
    let mut poly = vec![0usize; level + 1];
    poly[0] = 1;
    for f in factors {
        let mut next = vec![0usize; level + 1];
        for a in 0..=level {
            for b in 0..=level - a {
                next[a + b] += poly[a] * f[b];
            }
        }
        poly = next;
    }
    poly[level]
}

/// `binom(m + 1, 3)` as the polynomial `(m + 1) m (m - 1) / 6`.
pub fn binom3(m: i64) -> Q {
    q((m + 1) * m * (m - 1), 6)
}
