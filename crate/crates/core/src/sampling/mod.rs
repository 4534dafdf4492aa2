//! Random sources, samplers, random polytopes and sphere coverings.

pub mod boundary;
pub mod covering;
pub mod inflated;
pub mod random_polytope;
pub mod rng;
pub mod uniform;

pub use boundary::{boundary_integral, sample_boundary, BoundaryDensity, BoundarySampler, DensityFn, DensityKind};
pub use covering::{fibonacci_sphere, sphere_covering, sphere_pool, SphereCovering};
pub use inflated::{disk_polygon_symdiff, inflated_radius, inflated_sphere_polytope};
pub use random_polytope::{random_polytope, PointModel, PointSampler, RandomPolytope};
pub use rng::{RandomSource, SimRng};
pub use uniform::{sample_uniform_body, UniformSampler};
