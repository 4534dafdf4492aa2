use super::{support_of_points, BodyRef, ConvexBody};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, VPolytope};

/// A polytope viewed as a convex body.
#[derive(Clone, Debug)]
pub struct PolytopeBody {
    poly: VPolytope,
}

impl PolytopeBody {
    pub fn new(poly: VPolytope) -> Self {
        Self { poly }
    }

    pub fn inner(&self) -> &VPolytope {
        &self.poly
    }
}

/// A simplex given by its n+1 vertices.
#[derive(Clone, Debug)]
pub struct Simplex {
    body: PolytopeBody,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        if vertices.len() != dim + 1 {
            return Err(Error::invalid("a simplex in R^n needs n+1 vertices"));
        }
        let poly = convex_hull(&vertices)?;
        if poly.vertices().len() != dim + 1 {
            return Err(Error::degenerate("simplex vertices are not affinely independent"));
        }
        Ok(Self {
            body: PolytopeBody::new(poly),
        })
    }

    /// `conv(0, e_1, ..., e_n)`.
    pub fn standard(dim: usize) -> Result<Self> {
        Ok(Self {
            body: PolytopeBody::new(VPolytope::standard_simplex(dim)?),
        })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        self.body.poly.vertices()
    }
}

fn polytope_outer_normal(p: &VPolytope, x: &[f64]) -> Vec<f64> {
    p.facets()
        .iter()
        .max_by(|a, b| a.halfspace.signed_distance(x).total_cmp(&b.halfspace.signed_distance(x)))
        .map(|f| f.halfspace.normal.clone())
        .expect("polytopes have facets")
}

fn polytope_radial(p: &VPolytope, from: &[f64], dir: &[f64]) -> Vec<f64> {
    let mut t = f64::INFINITY;
    for f in p.facets() {
        let rate = crate::numeric::dot(&f.halfspace.normal, dir);
        if rate > 0.0 {
            t = t.min(-f.halfspace.signed_distance(from) / rate);
        }
    }
    from.iter().zip(dir).map(|(a, d)| a + t * d).collect()
}

fn polytope_boundary_distance(p: &VPolytope, x: &[f64]) -> f64 {
    let worst = p
        .facets()
        .iter()
        .map(|f| f.halfspace.signed_distance(x))
        .fold(f64::NEG_INFINITY, f64::max);
    if worst <= 0.0 {
        -worst
    } else {
        crate::geometry::distance_to_polytope(x, p).unwrap_or(worst)
    }
}

impl ConvexBody for PolytopeBody {
    fn dim(&self) -> usize {
        self.poly.dim()
    }

    fn name(&self) -> String {
        format!("polytope{}({} vertices)", self.dim(), self.poly.vertices().len())
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.poly.contains(x, tol)
    }

    fn support(&self, u: &[f64]) -> (f64, Vec<f64>) {
        support_of_points(self.poly.vertices(), u)
    }

    fn volume(&self) -> f64 {
        self.poly.volume()
    }

    fn surface_area(&self) -> f64 {
        self.poly.surface_area()
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for v in self.poly.vertices() {
            for k in 0..n {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    fn centroid(&self) -> Vec<f64> {
        self.poly.centroid()
    }

    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(polytope_outer_normal(&self.poly, x))
    }

    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        polytope_radial(&self.poly, from, dir)
    }

    fn boundary_distance(&self, x: &[f64]) -> f64 {
        polytope_boundary_distance(&self.poly, x)
    }

    fn polytope(&self) -> Option<&VPolytope> {
        Some(&self.poly)
    }

    fn view(&self) -> BodyRef<'_> {
        BodyRef::Polytope(self)
    }
}

impl ConvexBody for Simplex {
    fn dim(&self) -> usize {
        self.body.dim()
    }

    fn name(&self) -> String {
        format!("simplex{}", self.dim())
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.body.contains(x, tol)
    }

    fn support(&self, u: &[f64]) -> (f64, Vec<f64>) {
        self.body.support(u)
    }

    fn volume(&self) -> f64 {
        self.body.volume()
    }

    fn surface_area(&self) -> f64 {
        self.body.surface_area()
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.body.bounding_box()
    }

    fn centroid(&self) -> Vec<f64> {
        crate::numeric::centroid(self.vertices())
    }

    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.body.outer_normal(x)
    }

    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        self.body.radial_boundary(from, dir)
    }

    fn boundary_distance(&self, x: &[f64]) -> f64 {
        self.body.boundary_distance(x)
    }

    fn polytope(&self) -> Option<&VPolytope> {
        Some(&self.body.poly)
    }

    fn view(&self) -> BodyRef<'_> {
        BodyRef::Simplex(self)
    }
}
