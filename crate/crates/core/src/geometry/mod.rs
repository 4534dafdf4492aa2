//! Exact polytope machinery in low dimension.

pub(crate) mod hull;
pub mod distance;
pub mod io;
pub mod lattice;
pub mod polytope;
pub mod symdiff;

pub use distance::{distance_to_polytope, hausdorff_distance};
pub use io::PolytopeFile;
pub use lattice::FaceLattice;
pub use polytope::{convex_hull, hull_vertex_count, hull_volume, points_volume, simplex_measure, HPolytope, Halfspace, Facet, VPolytope, Volume};
pub use symdiff::{symdiff_volume, SymdiffMode};

/// Largest dimension for exact lattice and volume work.
pub const MAX_EXACT_DIM: usize = 6;
/// Largest dimension accepted anywhere.
pub const MAX_DIM: usize = 10;
