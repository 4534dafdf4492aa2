//! Estimators, rate fits, constants and the experiments built on them.

pub mod approximation;
pub mod constants;
pub mod estimate;
pub mod fit;
pub mod montecarlo;
pub mod random_rates;
pub mod registry;

pub use approximation::{
    best_polygon_disk, cube_corner_bound, inflated_disk_experiment, inscribed_polygon_search, vertex_removal_scan,
    CornerBound, InflatedReport, InflatedRow, VertexRemovalScan,
};
pub use constants::{constant, Constant};
pub use estimate::EstimateRecord;
pub use fit::{log_term_test, rate_fit, LogTermTest, RateFit, RateModel};
pub use montecarlo::{estimate, missed_volume, trial_values, vertex_count, TrialPolicy, MIN_TRIALS};
pub use random_rates::{
    boundary_rate_experiment, boundary_reference, corner_lower_bounds, corner_scale, holder_functional, is_simple,
    polytope_boundary_rate, polytope_uniform_rate, polytope_uniform_reference, rate_report, uniform_rate_experiment,
    uniform_reference, unit_volume_body, vertex_count_rate, Correction, RatePoint, RateReport,
};
pub use registry::{preset_names, Experiment, ExperimentConfig, ExperimentKind, SamplerKind, Summary};
