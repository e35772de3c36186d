use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rational::{is_integral, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalModel {
    pub c: Rational,
    /// Distinct `h_{m,n}` for `0 < m < p`, `0 < n < q`, ascending.
    pub weights: Vec<Rational>,
}

pub fn minimal_model_data(p: i64, q: i64) -> Result<MinimalModel> {
    if p <= 1 || q <= 1 || p.gcd(&q) != 1 {
        return Err(Error::InvalidMinimalModel { p, q });
    }
    let c = rat(1, 1) - rat(6 * (p - q) * (p - q), p * q);
    let mut weights: Vec<Rational> = (1..p)
        .flat_map(|m| (1..q).map(move |n| rat((n * p - m * q).pow(2) - (p - q).pow(2), 4 * p * q)))
        .collect();
    weights.sort();
    weights.dedup();
    Ok(MinimalModel { c, weights })
}

/// Whether an integral form may contain `k * omega` at central charge `c`:
/// `k^2 c` must be an even integer.
pub fn scaling_admissible(k: &Rational, c: &Rational) -> bool {
    let x = k * k * c;
    is_integral(&x) && x.numer().is_even()
}
