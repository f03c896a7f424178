//! Exact computation of h-vectors and almost Gorenstein invariants for
//! Cohen-Macaulay rings coming from lattice polytopes and finite posets.
//!
//! The crate is organized as a pipeline:
//!
//! * [`geometry`] — arbitrary-precision polyhedral primitives (halfspaces,
//!   double description, Fourier-Motzkin projection);
//! * [`polytope`] — lattice polytopes, named families, exact lattice-point
//!   enumeration of dilates;
//! * [`ehrhart`] — h*-vectors, socle degrees, reciprocity and integer
//!   decomposition probes;
//! * [`poset`] — finite posets, linear extensions and descent statistics;
//! * [`gorenstein`] — the numerical Gorenstein / almost Gorenstein
//!   classifier over h-vectors;
//! * [`hibi`] — canonical-ideal combinatorics of Hibi rings via strictly
//!   order-reversing maps;
//! * [`xi`] — the descent-complementing bijection on linear extensions of
//!   the `pm` poset family and its verification.
//!
//! All arithmetic is exact; every count, coefficient and verdict is an
//! integer computation with no tolerances.

pub mod ehrhart;
pub mod error;
pub mod geometry;
pub mod polytope;
pub mod gorenstein;
pub mod hibi;
pub mod poset;
pub mod xi;

pub use error::{Error, Result};
