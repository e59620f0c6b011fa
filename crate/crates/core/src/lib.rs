//! Secure distributed matrix multiplication with offline precomputation.
//!
//! A user wants `A * B` computed by `N` honest-but-curious servers so that no
//! coalition of up to `T` servers learns anything about `A` or `B`. The user
//! splits `A` into `K` row blocks and `B` into `L` column blocks, hides the
//! blocks as coefficients of two masked polynomials `f` and `g`, and hands
//! server `i` the evaluations `f(a_i)` and `g(a_i)`. Each server returns the
//! product of its two shares, which is an evaluation of `h = f * g`; the user
//! interpolates `h` and reads the block products out of designated
//! coefficients.
//!
//! The server count equals the number of distinct exponents of `h`. When the
//! products of the random mask blocks are precomputed offline (they do not
//! depend on `A` or `B`), the exponents that involve only mask terms can be
//! cancelled before interpolation and stop costing servers. This crate
//! provides:
//!
//! - [`field`], [`matrix`], [`poly`], [`solve`]: arithmetic over a prime
//!   field `F_q`, matrices and matrix-coefficient sparse polynomials over it,
//!   and a generalized Vandermonde solver used for decoding.
//! - [`degree_table`]: the `GASP_r` exponent family, degree tables, exact
//!   server counts by support enumeration, and the validity conditions a
//!   table must satisfy.
//! - [`formulas`]: closed-form server counts, lower bounds, the small-vs-big
//!   chain comparison, collusion-fraction tolerance, and asymptotic cost
//!   exponents.
//! - [`protocol`]: partition, encode, evaluation-point selection,
//!   precomputation, server work, and decoding, plus transcript accounting.
//! - [`matrix_io`]: the plain-text matrix file format used by the CLI.
//! - [`audit`]: independent security checks (mask-matrix rank conditions and
//!   an exhaustive mutual-information audit for tiny parameters).
//! - [`search`]: exhaustive search over small degree tables and sumset
//!   helpers.

pub mod audit;
pub mod degree_table;
pub mod error;
pub mod field;
pub mod formulas;
pub mod matrix;
pub mod matrix_io;
pub mod poly;
pub mod protocol;
pub mod search;
pub mod solve;

pub use error::Error;
pub use field::{FieldElement, PrimeField};
pub use matrix::FieldMatrix;
pub use poly::SparsePoly;
