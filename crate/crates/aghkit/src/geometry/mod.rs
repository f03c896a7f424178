//! Exact rational linear algebra and polyhedral primitives.
//!
//! Everything here computes over arbitrary-precision integers and rationals;
//! nothing rounds. The three public pillars are halfspace systems in
//! primitive integer form, vertex-to-halfspace conversion by double
//! description, and Fourier-Motzkin projection bounds. All types are
//! immutable after construction and safe to share across threads.

mod halfspace;
mod hull;
mod projection;
mod simplex;

pub use halfspace::{Halfspace, HalfspaceSystem};
pub use hull::dd_convert;
pub use projection::{project_bounds, FmCascade, RationalInterval};

