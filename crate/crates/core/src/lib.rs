//! Exact-arithmetic invariants of lattice and rational polytopes.
//!
//! Everything here is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in a result. The crate covers:
//!
//! * integer matrix normal forms (Hermite, Smith) and exact rational LP,
//! * rational polytopes with both V- and H-representations,
//! * certified lattice width and successive minima of the difference body,
//! * unimodular-simplex embeddings for bodies of large width, generalized
//!   flatness oracles and the exact one-dimensional flatness constant,
//! * affine-lattice spanning tests, generating subsets, spanning ranks,
//! * Delzant tests and polytope-side Gromov-width bounds (Λ, Υ, diamonds),
//! * the wide non-IDP polytope family and its witness verification.
//!
//! Operations that search (width directions, unimodular matrices, subset
//! ranks) return certificates carrying the bound that was searched, and every
//! certificate can be re-verified independently of how it was produced.
//!
//! All operations are pure functions on immutable values; there is no shared
//! mutable state, so everything is safe to call from concurrent threads.

pub mod cert;
pub mod error;
pub mod families;
pub mod flatness;
pub mod generate;
pub mod gromov;
pub mod json;
pub mod lp;
pub mod matrix;
pub mod polytope;
pub mod rat;
pub mod spanning;
pub mod width;

pub use error::{Error, Result};
pub use matrix::{IntMat, IntVec};
pub use polytope::Polytope;
pub use rat::{Rat, RatVec};
