//! Exact Laurent-polynomial arithmetic and dense complex linear algebra
//! shared by the rest of the crate.

pub mod laurent;
pub mod matrix;

pub use laurent::LaurentPolynomial;
pub use matrix::{
    haar_special_unitary, haar_unitary, hermitian_eigen, operator_norm, pd_on_subspace,
    pd_scan, proj_distance, su_project, unitary_eigen, ComplexMatrix, ProjectiveDistance,
};
