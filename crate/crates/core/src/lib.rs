//! Exact-arithmetic kernels for one-dimensional typical formal module laws
//! over p-adic number rings.
//!
//! The crate is organized around the objects the calculations live on:
//!
//! * [`exactnum`] — finite-dimensional rational models of p-adic number
//!   fields (unramified-then-Eisenstein towers), with exact valuations,
//!   residue maps, and finite-field arithmetic.
//! * [`gradedpoly`] — sparse multivariate polynomials in the indexed
//!   generator families `V_i`, `v_i`, `t_i`, graded by `2(q^i - 1)`.
//! * [`generators`] — the logarithm calculus: `Π`-values, `v_I` monomials,
//!   Araki and Hazewinkel expansions of the log coefficients, and the
//!   symmetric `w`-polynomials.
//! * [`formal`] — a truncated power-series engine for laws-with-logarithm:
//!   formal sums, `[α]`-series, typification, and strict isomorphisms.
//! * [`basechange`] — the map `γ: V^A ⊗ B → V^B` induced by an extension of
//!   number rings, in closed form (unramified) and by recursive solving
//!   (totally ramified).
//! * [`stabilizer`] — finite presentations of the height-`h` stabilizer
//!   algebras and the quotient maps induced by tame and unramified
//!   extensions.
//!
//! All arithmetic is exact; there is no floating point anywhere. Values are
//! immutable after construction and freely shareable between threads.

pub mod basechange;
pub mod error;
pub mod exactnum;
pub mod formal;
pub mod generators;
pub mod gradedpoly;
pub mod linalg;
pub mod pifrac;
pub mod scalar;
pub mod stabilizer;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
