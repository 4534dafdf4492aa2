//! Targets that a faithful implementation does not reach. They are kept as
//! strict assertions and ignored by default; the acceptance run prints the
//! measured numbers and the reasons.

use polyapprox::experiments::{cube_corner_bound, inflated_disk_experiment, TrialPolicy};

#[test]
#[ignore = "a boundary point hits the corner region with probability 1/(2nN), not 1/N"]
fn corner_miss_probability_matches_one_minus_one_over_n_to_the_n() {
    let trials = 10_000;
    let b = cube_corner_bound(3, 1000, &TrialPolicy::fixed(trials), 11).unwrap();
    let p = b.printed_miss;
    let z = (b.miss_probability.value - p) / (p * (1.0 - p) / trials as f64).sqrt();
    assert!(z.abs() <= 3.0, "z = {z}");
}

#[test]
#[ignore = "the median of the scaled symmetric difference rises towards its limit"]
fn inflated_disk_median_has_no_upward_trend() {
    let ns: Vec<usize> = (7..=11).map(|k| 1 << k).collect();
    let r = inflated_disk_experiment(&ns, 200, 12).unwrap();
    assert!(r.lower_bound_respected);
    assert!(!r.upward_trend, "slope {} ± {}", r.slope, r.slope_stderr);
}
