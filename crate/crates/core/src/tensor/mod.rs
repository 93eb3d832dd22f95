//! Dense complex linear algebra and multipartite index manipulation.

pub mod eigen;
pub mod matrix;
pub mod partial;
pub mod shape;

pub use eigen::{
    hermitian_eigen, hermitian_eigenvalues, singular_values, trace_norm, HermitianEigen,
};
pub use matrix::{kron, kron_capped, purity, ComplexMatrix};
pub use partial::{bipartite_view, partial_trace, partial_transpose, realign};
pub use shape::{dim_cap, PartySet, SubsetMask, SystemShape, DEFAULT_DIM_CAP, DIM_CAP_ENV};
