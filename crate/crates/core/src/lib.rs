//! Exact computations for Burniat surfaces.
//!
//! The crate covers divisor-class arithmetic on blow-ups of the plane,
//! enumeration of (-1)- and (-2)-classes on (weak) Del Pezzo surfaces, the
//! 9-line branch configurations and their classification, the branch
//! divisor tables of the bidouble covers, the tangent-sheaf eigenspace
//! dimensions, and randomized exact verification of the invariant
//! generators for the moduli parameterizations with `K^2 = 5, 6`.
//!
//! All arithmetic is exact: integers for the Picard lattice and
//! arbitrary-precision rationals for plane geometry and parameters.

pub mod branch;
pub mod case;
pub mod cohomology;
pub mod curves;
pub mod exec;
pub mod invariants;
pub mod lattice;
pub mod plane;
pub mod rational;

pub use case::Case;
pub use exec::Exec;
pub use lattice::{DivisorClass, Effectivity, SurfaceLattice};
pub use rational::Rational;
