//! Plane geometry over the rationals and the 9-line branch configurations.

mod config;
mod geometry;

pub use config::*;
pub use geometry::*;
