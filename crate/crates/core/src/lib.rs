//! Polytope approximation of convex bodies.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: hulls, face lattices, volumes, clipping, polarity and the
//!   Hausdorff and symmetric-difference distances.
//! * [`bodies`]: concrete convex bodies with curvature and affine surface
//!   area where they exist, plus spherical caps.
//! * [`floating`]: convex floating bodies, their volume-loss rates and the
//!   vertex-selection algorithm driven by a floating body.
//! * [`combinatorics`]: flag counts by three independent methods.
//! * [`sampling`]: seeded random sources, interior and boundary samplers,
//!   random polytopes and sphere coverings.
//! * [`experiments`]: Monte Carlo estimators, power-law fits, closed-form
//!   constants and the named experiments driven by the CLI.

pub mod bodies;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod floating;
pub mod geometry;
pub mod numeric;
pub mod sampling;

pub use error::{Error, Result};
pub use experiments::estimate::EstimateRecord;
pub use geometry::{HPolytope, Halfspace, VPolytope};
