//! Flag counts by three independent routes: chains in the face lattice,
//! the vertex-figure recurrence and the facet recurrence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, VPolytope};
use crate::numeric::{dist, dot, factorial, normalized, orthogonal_complement, orthonormal_basis, sub};

/// Largest dimension handled by the flag routines.
pub const MAX_FLAG_DIM: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
    pub flag_lattice: u64,
    pub flag_phi: u64,
    pub flag_psi: u64,
    pub methods_agree: bool,
}

impl FlagReport {
    pub fn compute(p: &VPolytope) -> Result<Self> {
        let flag_lattice = flag_via_lattice(p)?;
        let flag_phi = flag_phi(p)?;
        let flag_psi = flag_psi(p)?;
        Ok(Self {
            id: None,
            flag_lattice,
            flag_phi,
            flag_psi,
            methods_agree: flag_lattice == flag_phi && flag_phi == flag_psi,
        })
    }
}

fn check_dim(p: &VPolytope) -> Result<()> {
    if p.dim() > MAX_FLAG_DIM {
        return Err(Error::OutOfRange(format!("flag counts need dim <= {MAX_FLAG_DIM}, got {}", p.dim())));
    }
    Ok(())
}

/// Number of maximal chains of faces.
pub fn flag_via_lattice(p: &VPolytope) -> Result<u64> {
    check_dim(p)?;
    Ok(p.lattice().flag_count())
}

/// φ₁ = 2 and φ_n(P) = Σ_x φ_{n-1}(P ∩ H_x) over vertices x, with H_x a
/// hyperplane strictly separating x from the other vertices.
pub fn flag_phi(p: &VPolytope) -> Result<u64> {
    check_dim(p)?;
    phi_points(p.vertices())
}

fn phi_points(vertices: &[Vec<f64>]) -> Result<u64> {
    let n = vertices[0].len();
    if n == 1 {
        return Ok(2);
    }
    let p = convex_hull(vertices)?;
    let verts = p.vertices();
    (0..verts.len())
        .into_par_iter()
        .map(|i| {
            let section = vertex_figure(&p, i)?;
            phi_points(&section)
        })
        .sum()
}

/// The vertex figure at vertex `i`, in coordinates of its hyperplane.
fn vertex_figure(p: &VPolytope, i: usize) -> Result<Vec<Vec<f64>>> {
    let verts = p.vertices();
    let x = &verts[i];
    let (a, t) = separator(p, i).ok_or(Error::SeparationFailure(i))?;
    // the section is spanned by the crossings of the edges at x
    let mut pts: Vec<Vec<f64>> = Vec::new();
    for e in p.lattice().faces(1).iter().filter(|e| e.contains(&i)) {
        let j = if e[0] == i { e[1] } else { e[0] };
        let z = &verts[j];
        let (sx, sz) = (dot(&a, x) - t, dot(&a, z) - t);
        let w = sx / (sx - sz);
        pts.push(x.iter().zip(z).map(|(xa, za)| xa + w * (za - xa)).collect());
    }
    let basis = orthogonal_complement(std::slice::from_ref(&a), x.len());
    let origin = &pts[0].clone();
    Ok(pts.iter().map(|q| { let d = sub(q, origin); basis.iter().map(|b| dot(b, &d)).collect() }).collect())
}

/// A hyperplane ⟨a, y⟩ = t with ⟨a, x_i⟩ > t > ⟨a, z⟩ for the other
/// vertices z. First the bisector toward the nearest vertex; if that does
/// not separate, the mean of the facet normals at x_i with the offset
/// halfway to the next highest vertex.
fn separator(p: &VPolytope, i: usize) -> Option<(Vec<f64>, f64)> {
    let verts = p.vertices();
    let x = &verts[i];
    let scale = p.diameter();
    let strictly = |a: &[f64], t: f64| -> bool {
        let margin = 1e-9 * scale;
        dot(a, x) - t > margin
            && verts.iter().enumerate().all(|(j, z)| j == i || t - dot(a, z) > margin)
    };
    let nearest = verts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .min_by(|a, b| dist(a.1, x).total_cmp(&dist(b.1, x)))?
        .1;
    let a = normalized(&sub(x, nearest));
    let t = 0.5 * (dot(&a, x) + dot(&a, nearest));
    if strictly(&a, t) {
        return Some((a, t));
    }
    let mut s = vec![0.0; x.len()];
    for f in p.facets().iter().filter(|f| f.vertices.binary_search(&i).is_ok()) {
        s.iter_mut().zip(&f.halfspace.normal).for_each(|(si, ni)| *si += ni);
    }
    let a = normalized(&s);
    let top = dot(&a, x);
    let next = verts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, z)| dot(&a, z))
        .fold(f64::NEG_INFINITY, f64::max);
    let t = 0.5 * (top + next);
    strictly(&a, t).then_some((a, t))
}

/// ψ₁ = 2 and ψ_n(P) = Σ_F ψ_{n-1}(F) over facets F.
pub fn flag_psi(p: &VPolytope) -> Result<u64> {
    check_dim(p)?;
    psi_polytope(p)
}

fn psi_polytope(p: &VPolytope) -> Result<u64> {
    if p.dim() == 2 {
        return Ok(2 * p.facets().len() as u64);
    }
    p.facets()
        .par_iter()
        .map(|f| {
            let pts: Vec<&Vec<f64>> = f.vertices.iter().map(|&v| &p.vertices()[v]).collect();
            let origin = pts[0];
            let edges: Vec<Vec<f64>> = pts[1..].iter().map(|q| sub(q, origin)).collect();
            let basis = orthonormal_basis(&edges, 1e-9);
            if basis.len() != p.dim() - 1 {
                return Err(Error::degenerate("facet is not of codimension one"));
            }
            let local: Vec<Vec<f64>> = edges
                .iter()
                .map(|e| basis.iter().map(|b| dot(b, e)).collect())
                .chain(std::iter::once(vec![0.0; p.dim() - 1]))
                .collect();
            psi_polytope(&convex_hull(&local)?)
        })
        .sum()
}

/// (flag/(n! n^{n-1}), flag/((n+1)^{n-1} (n-1)!)): the floating-body
/// loss constant and the random-polytope constant.
pub fn flag_constants_from(n: usize, flag: u64) -> (f64, f64) {
    let nf = n as f64;
    let f = flag as f64;
    (
        f / (factorial(n as u32) * nf.powi(n as i32 - 1)),
        f / ((nf + 1.0).powi(n as i32 - 1) * factorial(n as u32 - 1)),
    )
}

pub fn flag_constants(p: &VPolytope) -> Result<(f64, f64)> {
    Ok(flag_constants_from(p.dim(), flag_via_lattice(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_polytope, PointModel, RandomSource};
    use crate::bodies::Ball;

    fn all_three(p: &VPolytope) -> u64 {
        let r = FlagReport::compute(p).unwrap();
        assert!(r.methods_agree, "{r:?}");
        r.flag_lattice
    }

    #[test]
    fn closed_forms() {
        for n in 2..=4usize {
            let nf = factorial(n as u32) as u64;
            // a simplex has (n+1)! flags: any ordering of its vertices
            assert_eq!(all_three(&VPolytope::standard_simplex(n).unwrap()), (n as u64 + 1) * nf);
            assert_eq!(all_three(&VPolytope::cube(n, 0.0, 1.0).unwrap()), (1 << n) * nf);
            assert_eq!(all_three(&VPolytope::cross_polytope(n).unwrap()), (1 << n) * nf);
        }
        assert_eq!(all_three(&VPolytope::regular_polygon(7, 1.0).unwrap()), 14);
    }

    #[test]
    fn polar_invariance() {
        for p in [
            VPolytope::cube(3, 0.0, 1.0).unwrap(),
            VPolytope::standard_simplex(3).unwrap(),
            VPolytope::cross_polytope(4).unwrap(),
        ] {
            let c = p.centroid();
            let q = p.translated(&c.iter().map(|x| -x).collect::<Vec<_>>()).unwrap().polar().unwrap();
            assert_eq!(flag_via_lattice(&p).unwrap(), flag_via_lattice(&q).unwrap());
        }
    }

    #[test]
    fn random_hulls_agree() {
        let ball = Ball::unit(3).unwrap();
        for seed in 0..10 {
            let mut rng = RandomSource::new(seed, 0).rng();
            let p = random_polytope(&ball, &PointModel::Uniform, 8 + seed as usize, &mut rng).unwrap().polytope;
            all_three(&p);
        }
    }

    #[test]
    fn constants() {
        let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12;
        assert!(close(flag_constants(&VPolytope::standard_simplex(2).unwrap()).unwrap(), (1.5, 2.0)));
        assert!(close(flag_constants(&VPolytope::cube(2, 0.0, 1.0).unwrap()).unwrap(), (2.0, 8.0 / 3.0)));
        assert!(close(flag_constants(&VPolytope::cube(3, 0.0, 1.0).unwrap()).unwrap(), (48.0 / 54.0, 1.5)));
    }

    #[test]
    fn segment_recurrence_base() {
        assert_eq!(phi_points(&[vec![0.0], vec![1.0]]).unwrap(), 2);
    }
}
