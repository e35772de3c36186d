use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::verma::{monomials_at_level, PbwMonomial, VermaModule, VermaVector};
use super::CentralParams;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

/// Basis of one graded piece of `L(ell, h)`, given by PBW monomials whose
/// Gram matrix is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedIrreducibleBasis {
    pub level: usize,
    pub pivots: Vec<PbwMonomial>,
    pub gram: Matrix,
    gram_inverse: Matrix,
}

impl GradedIrreducibleBasis {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn gram_inverse(&self) -> &Matrix {
        &self.gram_inverse
    }
}

pub fn irreducible_basis(params: &CentralParams, level: usize) -> GradedIrreducibleBasis {
    basis_in(&VermaModule::new(params.clone()), level)
}

// Rows of the full Gram matrix are scanned in monomial order and kept when
// independent of those already kept. For a symmetric matrix a maximal
// independent row set indexes an invertible principal minor.
fn basis_in(verma: &VermaModule, level: usize) -> GradedIrreducibleBasis {
    let all = monomials_at_level(level);
    let full = verma.gram(&all);
    let keep = linalg::independent_rows(&full);
    let pivots: Vec<PbwMonomial> = keep.iter().map(|&i| all[i].clone()).collect();
    let gram: Matrix = keep.iter().map(|&i| keep.iter().map(|&j| full[i][j].clone()).collect()).collect();
    let gram_inverse = linalg::inverse(&gram).expect("independent rows of a symmetric matrix give an invertible minor");
    GradedIrreducibleBasis {
        level,
        pivots,
        gram,
        gram_inverse,
    }
}

/// Coordinates of the image of `v` in the irreducible quotient with respect
/// to the pivot basis: the solution `c` of `gram * c = (<pivot_i, v>)_i`.
pub fn reduce(verma: &VermaModule, v: &VermaVector, basis: &GradedIrreducibleBasis) -> Result<Vec<Rational>> {
    if v.is_zero() {
        return Ok(vec![Rational::zero(); basis.dim()]);
    }
    match v.homogeneous_level() {
        Some(l) if l == basis.level => {}
        Some(l) => {
            return Err(Error::LevelMismatch {
                expected: basis.level,
                found: l,
            })
        }
        None => {
            let found = v.terms().map(|(m, _)| m.level()).find(|&l| l != basis.level).unwrap_or(0);
            return Err(Error::LevelMismatch {
                expected: basis.level,
                found,
            });
        }
    }
    let pairings: Vec<Rational> = basis.pivots.iter().map(|p| verma.pairing(p, v)).collect();
    Ok(linalg::mat_vec(&basis.gram_inverse, &pairings))
}

type ActionKey = (i64, usize, usize);
/// Sparse image of one basis vector: `(index, coefficient)` pairs.
type Sparse = Vec<(usize, Rational)>;

/// `L(ell, h)` realised through pivot bases, with caches for bases and for
/// single-mode actions on basis vectors. Caches fill idempotently.
#[derive(Debug)]
pub struct IrreducibleModule {
    verma: VermaModule,
    bases: Mutex<HashMap<usize, Arc<GradedIrreducibleBasis>>>,
    actions: Mutex<HashMap<ActionKey, Arc<Sparse>>>,
}

impl IrreducibleModule {
    pub fn new(params: CentralParams) -> Self {
        Self {
            verma: VermaModule::new(params),
            bases: Mutex::new(HashMap::new()),
            actions: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &CentralParams {
        self.verma.params()
    }

    pub fn verma(&self) -> &VermaModule {
        &self.verma
    }

    pub fn basis(&self, level: usize) -> Arc<GradedIrreducibleBasis> {
        if let Some(b) = self.bases.lock().unwrap().get(&level) {
            return b.clone();
        }
        let b = Arc::new(basis_in(&self.verma, level));
        self.bases.lock().unwrap().entry(level).or_insert(b).clone()
    }

    pub fn dim(&self, level: usize) -> usize {
        self.basis(level).dim()
    }

    pub fn reduce(&self, v: &VermaVector, level: usize) -> Result<Vec<Rational>> {
        reduce(&self.verma, v, &self.basis(level))
    }

    /// `L(m)` applied to pivot `index` of `level`, as sparse coordinates in
    /// the pivot basis of `level - m`.
    pub fn action(&self, m: i64, level: usize, index: usize) -> Arc<Sparse> {
        let key = (m, level, index);
        if let Some(hit) = self.actions.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let target = level as i64 - m;
        let value = if target < 0 {
            Vec::new()
        } else if m == 0 {
            let weight = &self.params().h + Rational::from_integer((level as i64).into());
            if weight.is_zero() {
                Vec::new()
            } else {
                vec![(index, weight)]
            }
        } else {
            let basis = self.basis(level);
            let v = VermaVector::monomial(basis.pivots[index].clone());
            let image = self.verma.apply_mode(m, &v);
            let coords = self.reduce(&image, target as usize).expect("mode action preserves homogeneity");
            coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
        };
        let value = Arc::new(value);
        self.actions.lock().unwrap().entry(key).or_insert(value).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn vacuum_low_levels() {
        let p = CentralParams::ising(int(0));
        assert_eq!(irreducible_basis(&p, 0).dim(), 1);
        assert_eq!(irreducible_basis(&p, 1).dim(), 0);
        assert_eq!(irreducible_basis(&p, 2).dim(), 1);
    }

    #[test]
    fn reduce_examples() {
        let module = IrreducibleModule::new(CentralParams::ising(int(0)));
        let l1 = VermaVector::monomial(PbwMonomial::new(vec![1]).unwrap());
        assert!(module.reduce(&l1, 1).unwrap().is_empty());
        assert_eq!(module.reduce(&VermaVector::zero(), 2).unwrap(), vec![int(0)]);
        assert!(matches!(module.reduce(&l1, 2), Err(Error::LevelMismatch { expected: 2, found: 1 })));
        for level in 2..6 {
            let basis = module.basis(level);
            for (j, p) in basis.pivots.iter().enumerate() {
                let c = module.reduce(&VermaVector::monomial(p.clone()), level).unwrap();
                let unit: Vec<Rational> = (0..basis.dim()).map(|i| if i == j { int(1) } else { int(0) }).collect();
                assert_eq!(c, unit);
            }
        }
    }

    #[test]
    fn action_matches_weight_and_annihilation() {
        let module = IrreducibleModule::new(CentralParams::ising(rat(1, 2)));
        assert_eq!(*module.action(0, 0, 0), vec![(0, rat(1, 2))]);
        assert!(module.action(1, 0, 0).is_empty());
        // L(1) L(-1) v = 2h v = v
        assert_eq!(*module.action(1, 1, 0), vec![(0, int(1))]);
    }
}
