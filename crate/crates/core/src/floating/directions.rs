//! Deterministic direction grids on the sphere, closed under u ↦ -u.

use std::f64::consts::PI;

use crate::sampling::covering::fibonacci_sphere;
use crate::sampling::uniform::unit_sphere_point;
use crate::sampling::RandomSource;

/// Default grid size per dimension.
pub fn default_grid(n: usize) -> usize {
    match n {
        2 => 4096,
        3 => 2048,
        _ => 4096,
    }
}

/// `count` directions (rounded up to even): equally spaced angles for
/// n = 2, a Fibonacci lattice for n = 3 and fixed-seed Gaussian directions
/// otherwise. Every direction comes with its negative.
pub fn direction_grid(n: usize, count: usize) -> Vec<Vec<f64>> {
    let half = count.div_ceil(2).max(1);
    let mut dirs: Vec<Vec<f64>> = match n {
        2 => (0..half)
            .map(|k| {
                let t = PI * k as f64 / half as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => fibonacci_sphere(2 * half).into_iter().take(half).collect(),
        _ => {
            let mut rng = RandomSource::new(0xf10a7, n as u64).rng();
            (0..half)
                .map(|_| {
                    let mut x = vec![0.0; n];
                    unit_sphere_point(&mut rng, &mut x);
                    x
                })
                .collect()
        }
    };
    let neg: Vec<Vec<f64>> = dirs.iter().map(|u| u.iter().map(|x| -x).collect()).collect();
    dirs.extend(neg);
    dirs
}

/// Extra planar directions that approach each given normal on a
/// logarithmic scale (angular offsets from `smallest` up to `span`,
/// ratio 1.01), on both sides.
pub fn clustered_planar(normals: &[Vec<f64>], span: f64, smallest: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for nrm in normals {
        let base = nrm[1].atan2(nrm[0]);
        let mut off = smallest;
        while off < span {
            for t in [base + off, base - off] {
                out.push(vec![t.cos(), t.sin()]);
            }
            off *= 1.01;
        }
    }
    out
}
