//! Dense finite-dimensional quantum primitives: Hermitian operators,
//! density matrices with tensor-factor bookkeeping, unitaries, and the
//! entropic functionals built on their spectra.

mod entropy;
mod linalg;
mod operator;
pub(crate) mod random;
mod state;

pub use entropy::{conditional_entropy, mutual_information, relative_entropy, von_neumann_entropy};
pub use linalg::{hermitian_eigen, CMatrix, CVector, Eigen};
pub use operator::{swap_unitary, HermitianOp, Unitary};
pub use random::{haar_unitary, random_hamiltonian, random_state, rng_from_seed};
pub use state::{QState, DEFAULT_MAX_DIM};

/// Eigenvalues in `[-EIG_CLAMP, 0)` are read as zero.
pub const EIG_CLAMP: f64 = 1e-10;
/// Maximum entrywise deviation from Hermiticity accepted for inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Accepted deviation of a state's trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Accepted entrywise deviation of `U^dagger U` from the identity.
pub const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues at or below this contribute nothing to `-tr rho log rho`.
pub const ZERO_EIG: f64 = 1e-15;
/// Threshold deciding support membership in relative entropies.
pub const SUPPORT_TOL: f64 = 1e-10;
