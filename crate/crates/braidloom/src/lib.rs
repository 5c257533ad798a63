//! braidloom: Jones polynomials of plat closures through the Temperley-Lieb
//! path model, and compilation of quantum circuits into braid words whose
//! path-model expectation value tracks the circuit amplitude.
//!
//! The crate is organized around one exact oracle and one unitary pipeline:
//!
//! - [`kauffman`] computes the bracket and the Jones polynomial of a plat
//!   closure by brute-force state sum over crossing smoothings, in exact
//!   big-integer Laurent arithmetic ([`numerics::laurent`]).
//! - [`pathmodel`] realizes the unitary path-model representation of the
//!   braid group on walks over the line graph `G_k`, whose zig-zag
//!   expectation value reproduces the Jones evaluation at roots of unity.
//! - [`encoding`] embeds qubits into paths four steps at a time and reduces
//!   two-qubit gate synthesis to the eight-strand group.
//! - [`density`] holds the constructive density toolbox: SU(2) synthesis
//!   from two generators, the bridge iteration, decoupling search,
//!   epsilon-net construction, the auxiliary-generator net transfer, and
//!   Solovay-Kitaev.
//! - [`compiler`] ties it together: parse a circuit, compile every gate to an
//!   eight-strand word, embed, concatenate, and report certified errors.
//!
//! All value types are immutable after construction and freely shareable
//! across threads.

pub mod braid;
pub mod compiler;
pub mod density;
pub mod encoding;
pub mod error;
pub mod kauffman;
pub mod numerics;
pub mod pathmodel;

pub use braid::BraidWord;
pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, LaurentPolynomial};
