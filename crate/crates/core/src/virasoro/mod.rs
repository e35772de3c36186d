//! Virasoro algebra arithmetic on Verma modules and their irreducible
//! quotients, in exact rational arithmetic.

mod irreducible;
mod minimal;
mod verma;

pub use irreducible::{irreducible_basis, reduce, GradedIrreducibleBasis, IrreducibleModule};
pub use minimal::{minimal_model_data, scaling_admissible, MinimalModel};
pub use verma::{bracket, monomials_at_level, shapovalov_gram, Bracket, PbwMonomial, VermaModule, VermaVector};

use crate::rational::Rational;

/// Central charge and lowest conformal weight of a lowest-weight module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CentralParams {
    pub ell: Rational,
    pub h: Rational,
}

impl CentralParams {
    pub fn new(ell: Rational, h: Rational) -> Self {
        Self { ell, h }
    }

    /// `L(1/2, h)`.
    pub fn ising(h: Rational) -> Self {
        Self::new(crate::rational::rat(1, 2), h)
    }
}
