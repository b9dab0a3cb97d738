//! Two dipole-coupled two-level atoms in a single-mode cavity with phase
//! (intrinsic) decoherence.
//!
//! * [`model`]: parameters, Hamiltonian, initial state, dressed eigensystem.
//! * [`closedform`]: analytic reduced two-atom state and its long-time limit.
//! * [`measures`]: negativity and maximal CHSH value, closed form and generic.
//! * [`oracle`]: numerical master-equation evolution of the full state.
//! * [`qmath`]: the small dense linear algebra all of the above runs on.

pub mod closedform;
pub mod error;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod qmath;

pub use closedform::{AtomPairState, ClosedForm, EvolutionCoefficients};
pub use error::{Error, Result};
pub use model::{AtomPair, DressedBasis, ModelParams};
pub use oracle::{MasterEquationOracle, SpectralPropagator};
pub use qmath::{CMatrix, EigenDecomposition};
