//! Vertex and halfspace descriptions of convex polytopes.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::hull::{self, RawHull};
use super::lattice::FaceLattice;
use super::{MAX_DIM, MAX_EXACT_DIM};
use crate::error::{Error, Result};
use crate::numeric::{det, dot, factorial, norm};

/// The closed halfspace `{x : <x, normal> <= offset}` with a unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// Builds a halfspace, rescaling so the normal has unit length.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm(&normal);
        if !(len.is_finite() && len > 0.0 && offset.is_finite()) {
            return Err(Error::invalid("halfspace normal must be finite and nonzero"));
        }
        Ok(Self {
            normal: normal.iter().map(|x| x / len).collect(),
            offset: offset / len,
        })
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.signed_distance(x) <= tol
    }

    /// The opposite closed halfspace.
    pub fn complement(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -self.offset,
        }
    }
}

/// A facet: indices of the vertices it contains plus its supporting halfspace.
#[derive(Clone, Debug)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub halfspace: Halfspace,
}

/// Polytope given by its extreme points.
///
/// Construction always runs a hull, so the vertex list is irredundant and
/// the facet list is available without further work.
#[derive(Clone, Debug)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    simplices: Vec<Vec<usize>>,
    simplex_facet: Vec<usize>,
    volume: f64,
    lattice: OnceLock<FaceLattice>,
}

/// Volume together with a flag for flat inputs, which report zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Volume {
    pub value: f64,
    pub degenerate: bool,
}

/// Convex hull of a point set in dimension 2..=6.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<VPolytope> {
    let dim = points.first().map_or(0, Vec::len);
    if !(2..=MAX_EXACT_DIM).contains(&dim) {
        return Err(Error::OutOfRange(format!(
            "exact hulls need dimension 2..={MAX_EXACT_DIM}, got {dim}"
        )));
    }
    let raw = hull::hull(points)?;
    Ok(VPolytope::from_raw(dim, points, raw))
}

/// Volume of the hull of `points`; flat inputs give zero with the flag set.
pub fn points_volume(points: &[Vec<f64>]) -> Volume {
    match convex_hull(points) {
        Ok(p) => Volume {
            value: p.volume(),
            degenerate: false,
        },
        Err(_) => Volume {
            value: 0.0,
            degenerate: true,
        },
    }
}

/// Hull volume of a flat coordinate buffer (dimension up to 10). This skips
/// facet merging and is meant for Monte Carlo inner loops.
pub fn hull_volume(points: &[f64], dim: usize) -> Result<f64> {
    check_flat(points, dim)?;
    hull::hull_volume_flat(points, dim)
}

/// Number of hull vertices of a flat coordinate buffer.
pub fn hull_vertex_count(points: &[f64], dim: usize) -> Result<usize> {
    check_flat(points, dim)?;
    hull::hull_vertex_count_flat(points, dim)
}

fn check_flat(points: &[f64], dim: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::OutOfRange(format!("dimension {dim}")));
    }
    if !points.len().is_multiple_of(dim) || points.len() / dim < dim + 1 {
        return Err(Error::degenerate("too few points for a full-dimensional hull"));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite coordinate"));
    }
    Ok(())
}

impl VPolytope {
    fn from_raw(dim: usize, points: &[Vec<f64>], raw: RawHull) -> Self {
        let mut index = vec![usize::MAX; points.len()];
        for (new, &old) in raw.vertices.iter().enumerate() {
            index[old] = new;
        }
        let vertices: Vec<Vec<f64>> = raw.vertices.iter().map(|&i| points[i].clone()).collect();
        let facets: Vec<Facet> = raw
            .facets
            .into_iter()
            .map(|f| {
                let mut vs: Vec<usize> = f.vertices.iter().map(|&v| index[v]).collect();
                vs.sort_unstable();
                Facet {
                    vertices: vs,
                    halfspace: Halfspace {
                        normal: f.normal,
                        offset: f.offset,
                    },
                }
            })
            .collect();
        let simplices: Vec<Vec<usize>> = raw
            .simplices
            .iter()
            .map(|s| s.iter().map(|&v| index[v]).collect())
            .collect();

        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for (fi, f) in facets.iter().enumerate() {
            for &v in &f.vertices {
                incident[v].push(fi);
            }
        }
        let simplex_facet = simplices
            .iter()
            .map(|s| {
                // the facet through every vertex of the simplex
                incident[s[0]]
                    .iter()
                    .copied()
                    .filter(|&fi| s.iter().all(|v| facets[fi].vertices.binary_search(v).is_ok()))
                    .min_by(|&a, &b| {
                        let off = |fi: usize| {
                            s.iter()
                                .map(|&v| facets[fi].halfspace.signed_distance(&vertices[v]).abs())
                                .sum::<f64>()
                        };
                        off(a).total_cmp(&off(b))
                    })
                    .unwrap_or(incident[s[0]][0])
            })
            .collect();

        let mut p = Self {
            dim,
            vertices,
            facets,
            simplices,
            simplex_facet,
            volume: 0.0,
            lattice: OnceLock::new(),
        };
        p.volume = p.cone_volumes().iter().sum();
        p
    }

    /// Axis-parallel cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        let pts: Vec<Vec<f64>> = (0..1usize << dim)
            .map(|mask| {
                (0..dim)
                    .map(|k| if (mask >> k) & 1 == 1 { hi } else { lo })
                    .collect()
            })
            .collect();
        convex_hull(&pts)
    }

    /// `conv(0, e_1, ..., e_dim)`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        let mut pts = vec![vec![0.0; dim]];
        for k in 0..dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            pts.push(e);
        }
        convex_hull(&pts)
    }

    /// `conv(+-e_i)`.
    pub fn cross_polytope(dim: usize) -> Result<Self> {
        let mut pts = Vec::new();
        for k in 0..dim {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; dim];
                e[k] = s;
                pts.push(e);
            }
        }
        convex_hull(&pts)
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about the
    /// origin, first vertex on the positive x-axis.
    pub fn regular_polygon(n: usize, r: f64) -> Result<Self> {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                vec![r * t.cos(), r * t.sin()]
            })
            .collect();
        convex_hull(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.facets.iter().map(|f| f.halfspace.clone()).collect()
    }

    /// Boundary triangulation as (d-1)-simplices of vertex indices.
    pub fn boundary_simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Facet index of each boundary simplex.
    pub fn boundary_simplex_facets(&self) -> &[usize] {
        &self.simplex_facet
    }

    /// (d-1)-dimensional measure of each boundary simplex.
    pub fn boundary_simplex_areas(&self) -> Vec<f64> {
        self.simplices
            .iter()
            .map(|s| simplex_measure(&s.iter().map(|&v| self.vertices[v].clone()).collect::<Vec<_>>()))
            .collect()
    }

    /// Total boundary measure.
    pub fn surface_area(&self) -> f64 {
        self.boundary_simplex_areas().iter().sum()
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Mean of the vertices: an interior point.
    pub fn vertex_mean(&self) -> Vec<f64> {
        crate::numeric::centroid(&self.vertices)
    }

    /// Centre of mass.
    pub fn centroid(&self) -> Vec<f64> {
        let c = self.vertex_mean();
        let vols = self.cone_volumes();
        let mut out = vec![0.0; self.dim];
        for (s, w) in self.simplices.iter().zip(&vols) {
            for k in 0..self.dim {
                let sum: f64 = s.iter().map(|&v| self.vertices[v][k]).sum::<f64>() + c[k];
                out[k] += w * sum / (self.dim + 1) as f64;
            }
        }
        out.iter_mut().for_each(|x| *x /= self.volume);
        out
    }

    /// Volumes of the cones from the vertex mean over each boundary simplex.
    pub fn cone_volumes(&self) -> Vec<f64> {
        let c = self.vertex_mean();
        let fact = factorial(self.dim as u32);
        self.simplices
            .iter()
            .map(|s| {
                let rows: Vec<Vec<f64>> = s
                    .iter()
                    .map(|&v| self.vertices[v].iter().zip(&c).map(|(a, b)| a - b).collect())
                    .collect();
                det(&rows).abs() / fact
            })
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(crate::numeric::dist(a, b));
            }
        }
        d
    }

    /// Membership with an absolute tolerance on every facet inequality.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|f| f.halfspace.contains(x, tol))
    }

    /// Support value in direction `u` and the index of a maximizing vertex.
    pub fn support(&self, u: &[f64]) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, v) in self.vertices.iter().enumerate() {
            let s = dot(v, u);
            if s > best.0 {
                best = (s, i);
            }
        }
        best
    }

    /// Face lattice, computed once on first use.
    pub fn lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| FaceLattice::from_facets(self))
    }

    /// `P ∩ H`.
    pub fn clip(&self, h: &Halfspace) -> Result<VPolytope> {
        if h.normal.len() != self.dim {
            return Err(Error::invalid("halfspace dimension mismatch"));
        }
        let tol = 1e-12 * self.diameter().max(1e-300);
        let s: Vec<f64> = self.vertices.iter().map(|v| h.signed_distance(v)).collect();
        if s.iter().all(|&x| x <= tol) {
            return Ok(self.clone());
        }
        if s.iter().all(|&x| x >= -tol) {
            return Err(Error::EmptyResult);
        }
        let mut pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .zip(&s)
            .filter(|(_, &x)| x <= 0.0)
            .map(|(v, _)| v.clone())
            .collect();
        let mut seen = std::collections::HashSet::new();
        for simplex in &self.simplices {
            for i in 0..simplex.len() {
                for j in i + 1..simplex.len() {
                    let (a, b) = (simplex[i].min(simplex[j]), simplex[i].max(simplex[j]));
                    if (s[a] < 0.0) != (s[b] < 0.0) && s[a] != s[b] && seen.insert((a, b)) {
                        let t = s[a] / (s[a] - s[b]);
                        pts.push(
                            self.vertices[a]
                                .iter()
                                .zip(&self.vertices[b])
                                .map(|(x, y)| x + t * (y - x))
                                .collect(),
                        );
                    }
                }
            }
        }
        convex_hull(&pts).map_err(|e| match e {
            Error::DegenerateInput(_) => Error::EmptyResult,
            other => other,
        })
    }

    /// Polar body `{y : <x, y> <= 1 for all x in P}`.
    pub fn polar(&self) -> Result<VPolytope> {
        let tol = 1e-9 * self.diameter();
        if self.facets.iter().any(|f| f.halfspace.offset <= tol) {
            return Err(Error::OriginNotInterior);
        }
        let pts: Vec<Vec<f64>> = self
            .facets
            .iter()
            .map(|f| f.halfspace.normal.iter().map(|x| x / f.halfspace.offset).collect())
            .collect();
        convex_hull(&pts)
    }

    pub fn to_hpolytope(&self) -> HPolytope {
        HPolytope {
            dim: self.dim,
            halfspaces: self.halfspaces(),
            bounded: true,
        }
    }

    /// Image under `x -> a x + b` with `a` given row-major.
    pub fn affine_image(&self, a: &[Vec<f64>], b: &[f64]) -> Result<VPolytope> {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| {
                a.iter()
                    .zip(b)
                    .map(|(row, bi)| dot(row, v) + bi)
                    .collect()
            })
            .collect();
        convex_hull(&pts)
    }

    pub fn translated(&self, t: &[f64]) -> Result<VPolytope> {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        convex_hull(&pts)
    }

    /// Scaled copy about the origin.
    pub fn scaled(&self, s: f64) -> Result<VPolytope> {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * s).collect())
            .collect();
        convex_hull(&pts)
    }

    /// Copy rescaled about its centroid to unit volume.
    pub fn normalized_to_unit_volume(&self) -> Result<VPolytope> {
        let c = self.centroid();
        let s = self.volume.powf(-1.0 / self.dim as f64);
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(&c).map(|(x, ci)| ci + s * (x - ci)).collect())
            .collect();
        convex_hull(&pts)
    }
}

/// k-dimensional measure of a k-simplex in R^d given by k+1 points.
pub fn simplex_measure(points: &[Vec<f64>]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let gram: Vec<Vec<f64>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| dot(a, b)).collect())
        .collect();
    det(&gram).max(0.0).sqrt() / factorial(k as u32)
}

/// Polytope given by halfspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    bounded: bool,
}

impl HPolytope {
    /// Builds the intersection of `halfspaces`, dropping redundant ones.
    /// Fails with `EmptyResult` when the intersection has no interior and
    /// with `InvalidInput` when it is unbounded.
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::OutOfRange(format!("dimension {dim}")));
        }
        if halfspaces.iter().any(|h| h.normal.len() != dim) {
            return Err(Error::invalid("halfspace dimension mismatch"));
        }
        let hs: Vec<Halfspace> = halfspaces
            .into_iter()
            .map(|h| Halfspace::new(h.normal, h.offset))
            .collect::<Result<_>>()?;
        let raw = Self {
            dim,
            halfspaces: hs,
            bounded: false,
        };
        let (_, kept) = raw.vertex_enumeration()?;
        Ok(Self {
            dim,
            halfspaces: kept.into_iter().map(|i| raw.halfspaces[i].clone()).collect(),
            bounded: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }

    /// Deepest point in the sense of the largest common slack, with that
    /// slack (the Chebyshev radius, since normals are unit vectors).
    pub fn interior_point(&self) -> Result<(Vec<f64>, f64)> {
        chebyshev_center(&self.halfspaces, self.dim)
    }

    /// Vertex description.
    pub fn to_vpolytope(&self) -> Result<VPolytope> {
        Ok(self.vertex_enumeration()?.0)
    }

    /// `P ∩ H` as a vertex description.
    pub fn clip(&self, h: &Halfspace) -> Result<VPolytope> {
        let mut hs = self.halfspaces.clone();
        hs.push(Halfspace::new(h.normal.clone(), h.offset)?);
        HPolytope::new(self.dim, hs)?.to_vpolytope()
    }

    /// Vertices through polar duality about an interior point, plus the
    /// indices of the irredundant halfspaces.
    fn vertex_enumeration(&self) -> Result<(VPolytope, Vec<usize>)> {
        let (c, margin) = self.interior_point()?;
        let dual: Vec<Vec<f64>> = self
            .halfspaces
            .iter()
            .map(|h| {
                let slack = h.offset - dot(&h.normal, &c);
                h.normal.iter().map(|x| x / slack).collect()
            })
            .collect();
        if self.dim > MAX_EXACT_DIM {
            return Err(Error::OutOfRange(format!("vertex enumeration in dimension {}", self.dim)));
        }
        let dual_hull = convex_hull(&dual).map_err(|_| Error::invalid("unbounded halfspace intersection"))?;
        let scale = 1.0 / margin;
        let mut vertices = Vec::with_capacity(dual_hull.facets().len());
        for f in dual_hull.facets() {
            if f.halfspace.offset <= 1e-12 * scale {
                return Err(Error::invalid("unbounded halfspace intersection"));
            }
            vertices.push(
                c.iter()
                    .zip(&f.halfspace.normal)
                    .map(|(ci, n)| ci + n / f.halfspace.offset)
                    .collect::<Vec<f64>>(),
            );
        }
        let kept: Vec<usize> = dual_hull
            .vertices()
            .iter()
            .map(|v| {
                dual.iter()
                    .position(|d| d == v)
                    .expect("hull vertices are input points")
            })
            .collect();
        Ok((convex_hull(&vertices)?, kept))
    }
}

/// Maximizes the common slack `min_i (b_i - <a_i, x>)` with a log-barrier
/// Newton method on the variables (x, s), where s bounds every violation.
fn chebyshev_center(hs: &[Halfspace], dim: usize) -> Result<(Vec<f64>, f64)> {
    if hs.len() <= dim {
        return Err(Error::invalid("unbounded halfspace intersection"));
    }
    let scale = hs.iter().map(|h| h.offset.abs()).fold(1.0_f64, f64::max);
    let m = hs.len();
    let mut x = vec![0.0; dim];
    let viol = |x: &[f64]| hs.iter().map(|h| dot(&h.normal, x) - h.offset).fold(f64::NEG_INFINITY, f64::max);
    let mut s = viol(&x) + scale;
    let objective = |x: &[f64], s: f64, tau: f64| -> f64 {
        let mut f = tau * s;
        for h in hs {
            let w = s - (dot(&h.normal, x) - h.offset);
            if w <= 0.0 {
                return f64::INFINITY;
            }
            f -= w.ln();
        }
        f
    };
    let mut tau = 1.0 / scale;
    'path: for _ in 0..14 {
        for _ in 0..100 {
            let mut grad = DVector::<f64>::zeros(dim + 1);
            let mut hess = DMatrix::<f64>::zeros(dim + 1, dim + 1);
            grad[dim] = tau;
            for h in hs {
                let w = s - (dot(&h.normal, &x) - h.offset);
                let mut q = DVector::<f64>::zeros(dim + 1);
                for k in 0..dim {
                    q[k] = -h.normal[k];
                }
                q[dim] = 1.0;
                grad -= &q / w;
                hess += (&q * q.transpose()) / (w * w);
            }
            let Some(chol) = hess.clone().cholesky() else {
                // Late in the path the Hessian loses definiteness to
                // rounding; an interior iterate is good enough then.
                if viol(&x) < 0.0 {
                    break 'path;
                }
                return Err(Error::invalid("unbounded halfspace intersection"));
            };
            let step = -chol.solve(&grad);
            let decrement = -grad.dot(&step);
            if decrement < 1e-18 {
                break;
            }
            let f0 = objective(&x, s, tau);
            let mut t = 1.0;
            loop {
                let nx: Vec<f64> = (0..dim).map(|k| x[k] + t * step[k]).collect();
                let ns = s + t * step[dim];
                let f1 = objective(&nx, ns, tau);
                if f1 <= f0 - 0.25 * t * decrement {
                    x = nx;
                    s = ns;
                    break;
                }
                t *= 0.5;
                if t < 1e-20 {
                    break;
                }
            }
            if norm(&x) > 1e12 * scale {
                return Err(Error::invalid("unbounded halfspace intersection"));
            }
        }
        if (m as f64) / tau < 1e-12 * scale {
            break;
        }
        tau *= 10.0;
    }
    let margin = -viol(&x);
    if !(margin > 1e-12 * scale) {
        return Err(Error::EmptyResult);
    }
    Ok((x, margin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simplex_in_r3() {
        let p = VPolytope::standard_simplex(3).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert_relative_eq!(p.volume(), 1.0 / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn closed_form_volumes() {
        for d in 2..=6 {
            assert_relative_eq!(VPolytope::cube(d, 0.0, 1.0).unwrap().volume(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(
                VPolytope::standard_simplex(d).unwrap().volume(),
                1.0 / factorial(d as u32),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                VPolytope::cross_polytope(d).unwrap().volume(),
                2f64.powi(d as i32) / factorial(d as u32),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn disk_hull_vertices_pass_brute_force_extremality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Vec<f64>> = (0..1000)
            .map(|_| loop {
                let x: f64 = rng.random_range(-1.0..1.0);
                let y: f64 = rng.random_range(-1.0..1.0);
                if x * x + y * y <= 1.0 {
                    break vec![x, y];
                }
            })
            .collect();
        let p = convex_hull(&pts).unwrap();
        // A point is extreme iff some line through it has every other point
        // strictly on one side; for a point on the hull the lines through it
        // and another input point suffice.
        let extreme = |i: usize| {
            let a = &pts[i];
            (0..pts.len()).filter(|&j| j != i).any(|j| {
                let b = &pts[j];
                let side = |q: &Vec<f64>| (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
                let (mut pos, mut neg) = (false, false);
                for (k, q) in pts.iter().enumerate() {
                    if k == i || k == j {
                        continue;
                    }
                    let s = side(q);
                    pos |= s > 0.0;
                    neg |= s < 0.0;
                }
                !(pos && neg) && (pts[j] != *a)
            })
        };
        let brute: Vec<usize> = (0..pts.len()).filter(|&i| extreme(i)).collect();
        let mut ours: Vec<usize> = p
            .vertices()
            .iter()
            .map(|v| pts.iter().position(|q| q == v).unwrap())
            .collect();
        ours.sort_unstable();
        assert_eq!(ours, brute);
        for q in &pts {
            assert!(p.contains(q, 1e-9));
        }
    }

    #[test]
    fn clip_examples() {
        let sq = VPolytope::cube(2, 0.0, 1.0).unwrap();
        let h = Halfspace::new(vec![1.0, 0.0], 0.5).unwrap();
        assert_relative_eq!(sq.clip(&h).unwrap().volume(), 0.5, max_relative = 1e-12);
        let big = Halfspace::new(vec![1.0, 1.0], 10.0).unwrap();
        assert_relative_eq!(sq.clip(&big).unwrap().volume(), 1.0, max_relative = 1e-12);
        let s3 = VPolytope::standard_simplex(3).unwrap();
        let h = Halfspace::new(vec![1.0, 1.0, 1.0], 0.5).unwrap();
        assert_relative_eq!(s3.clip(&h).unwrap().volume(), 0.125 / 6.0, max_relative = 1e-12);
        let away = Halfspace::new(vec![1.0, 0.0], -1.0).unwrap();
        assert_eq!(sq.clip(&away).unwrap_err(), Error::EmptyResult);
    }

    #[test]
    fn polar_of_cube_is_cross_polytope() {
        for d in 2..=4 {
            let c = VPolytope::cube(d, -1.0, 1.0).unwrap();
            let p = c.polar().unwrap();
            assert_eq!(p.vertices().len(), 2 * d);
            for v in p.vertices() {
                assert_relative_eq!(norm(v), 1.0, max_relative = 1e-12);
                assert_eq!(v.iter().filter(|x| x.abs() > 1e-12).count(), 1);
            }
        }
    }

    #[test]
    fn polar_of_hexagon() {
        let h = VPolytope::regular_polygon(6, 1.0).unwrap();
        let p = h.polar().unwrap();
        let r = 2.0 / 3f64.sqrt();
        assert_eq!(p.vertices().len(), 6);
        for v in p.vertices() {
            assert_relative_eq!(norm(v), r, max_relative = 1e-12);
            let ang = v[1].atan2(v[0]).to_degrees().rem_euclid(60.0);
            assert_relative_eq!(ang, 30.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn polar_requires_interior_origin() {
        let sq = VPolytope::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(sq.polar().unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn hpolytope_round_trip() {
        let c = VPolytope::cube(3, -1.0, 2.0).unwrap();
        let mut hs = c.halfspaces();
        hs.push(Halfspace::new(vec![1.0, 1.0, 1.0], 100.0).unwrap());
        let h = HPolytope::new(3, hs).unwrap();
        assert_eq!(h.halfspaces().len(), 6);
        let v = h.to_vpolytope().unwrap();
        assert_eq!(v.vertices().len(), 8);
        assert_relative_eq!(v.volume(), 27.0, max_relative = 1e-10);
        let (x, r) = h.interior_point().unwrap();
        assert_relative_eq!(r, 1.5, max_relative = 1e-6);
        assert!(x.iter().all(|xi| (xi - 0.5).abs() < 1e-5));
    }

    #[test]
    fn hpolytope_rejects_unbounded_and_empty() {
        let hs = vec![
            Halfspace::new(vec![1.0, 0.0], 1.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
            Halfspace::new(vec![-1.0, 0.0], 1.0).unwrap(),
        ];
        assert!(matches!(HPolytope::new(2, hs), Err(Error::InvalidInput(_))));
        let hs = vec![
            Halfspace::new(vec![1.0, 0.0], 0.0).unwrap(),
            Halfspace::new(vec![-1.0, 0.0], -1.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], 1.0).unwrap(),
        ];
        assert_eq!(HPolytope::new(2, hs).unwrap_err(), Error::EmptyResult);
    }

    #[test]
    fn degenerate_volume_is_flagged() {
        let v = points_volume(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert_eq!(v, Volume { value: 0.0, degenerate: true });
    }

    #[test]
    fn centroid_of_triangle() {
        let t = convex_hull(&[vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let c = t.centroid();
        assert_relative_eq!(c[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(c[1], 1.0, max_relative = 1e-12);
    }
}
