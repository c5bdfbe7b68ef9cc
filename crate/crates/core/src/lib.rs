//! Numerical toolkit for joint measurability of MUB-derived measurements on
//! prime-power qudits.
//!
//! The library builds mutually unbiased bases ([`mub`]), turns them into
//! orthonormal Hermitian operator bases grouped into commuting families
//! ([`opbasis`]), and studies the unsharp joint measurements they generate:
//! global POVMs and their positivity threshold ([`povm`]), Margenau-Hill
//! characteristic functions ([`charfun`]), the classicality polytope in
//! generalized Bloch space ([`geometry`]), and Monte-Carlo sampling of the
//! joint outcome distribution ([`sampler`]).
//!
//! Everything is dense, small (dimension at most 16), deterministic, and
//! self-contained: the Hermitian eigensolver, the simplex solver, and the
//! vertex enumerator live in this crate.

pub mod charfun;
pub mod cli;
pub mod cmat;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod mub;
pub mod opbasis;
pub mod povm;
pub mod rng;
pub mod sampler;
pub mod states;
pub mod tol;

pub use cmat::CMat;
pub use error::Error;
