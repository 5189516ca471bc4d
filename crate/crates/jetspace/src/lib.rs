//! Exact symbolic machinery for jet schemes of affine complete intersections:
//! liftable-jet equations, arc-space cylinder codimensions, minimal log
//! discrepancy bounds with an independent toric oracle, and jet-theoretic
//! singularity classification.

pub mod classify;
pub mod groebner;
pub mod jets;
pub mod lifting;
pub mod mld;
pub mod poly;
pub mod problem;
pub mod series;

pub use num_rational::BigRational as Rat;
