//! Dense complex linear algebra: Hermitian eigendecomposition, the binary
//! matrix logarithm, von Neumann entropy, quantum relative entropy and
//! Kronecker products.

mod eigen;
mod entropy;
mod matrix;

pub use eigen::{herm_eig, herm_eigenvalues, EigenDecomposition};
pub use entropy::{
    entropy_of_spectrum, log_psd, relative_entropy, von_neumann_entropy, DEFAULT_LOG_FLOOR,
    PSD_TOLERANCE, SUPPORT_THRESHOLD, TRACE_TOLERANCE, ZERO_EIGENVALUE_THRESHOLD,
};
pub use matrix::{inner_product, kron, kron_vec, vector_norm, ComplexMatrix, HermitianMatrix};
