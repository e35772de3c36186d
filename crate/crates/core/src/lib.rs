//! Exact integral forms in tensor powers of the Ising vertex operator
//! algebra `L(1/2, 0)` and its modules, indexed by binary codes.

pub mod codes;
pub mod error;
pub mod hnf;
pub mod intertwining;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod tensor;
pub mod virasoro;

pub use codes::{BinaryCode, CodeSource, GoodformReport, Word};
pub use error::{Error, Result};
pub use intertwining::{CorrelationFunctional, TripleSpec, Verdict};
pub use lattice::{GradedLattice, LatticeEntry, ModuleForm, SpanningMonomial};
pub use rational::Rational;
pub use tensor::{HVector, IsingWeight, TensorModule, TensorVector};
pub use virasoro::{CentralParams, PbwMonomial, VermaModule, VermaVector};
