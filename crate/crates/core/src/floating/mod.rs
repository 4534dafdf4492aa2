//! Floating bodies, their volume-loss rates and the vertex-selection
//! algorithm driven by them.

pub mod body;
pub mod directions;
pub mod fba;
pub mod rates;

pub use body::{floating_body, halfplane_intersection, FloatingBodyResult, FloatingShape};
pub use directions::{default_grid, direction_grid};
pub use fba::{fba_bound, fba_smooth_rate, floating_body_algorithm, select_vertices, FbaRatePoint, FbaRun};
pub use rates::{
    delta_sequence, polytope_floating_limit, polytope_floating_rate, smooth_floating_limit,
    smooth_floating_rate, FloatingRateTable, RateRow,
};
