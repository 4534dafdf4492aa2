use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_unit, BodyRef, ConvexBody};
use crate::error::{Error, Result};
use crate::numeric::{dot, norm, simpson_doubling, unit_ball_volume, unit_sphere_area};

/// Ellipsoid `{c + R diag(a) s : |s| <= 1}` with orthogonal `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    pub center: Vec<f64>,
    pub semiaxes: Vec<f64>,
    /// Row-major orthogonal matrix whose columns are the axis directions.
    pub rotation: Vec<Vec<f64>>,
}

impl Ellipsoid {
    pub fn new(center: Vec<f64>, semiaxes: Vec<f64>, rotation: Vec<Vec<f64>>) -> Result<Self> {
        let n = center.len();
        if !(2..=crate::geometry::MAX_DIM).contains(&n) {
            return Err(Error::OutOfRange(format!("dimension {n}")));
        }
        if semiaxes.len() != n || rotation.len() != n || rotation.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("ellipsoid data has inconsistent dimensions"));
        }
        if semiaxes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::invalid("semiaxes must be positive"));
        }
        for i in 0..n {
            for j in 0..n {
                let g: f64 = (0..n).map(|k| rotation[k][i] * rotation[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > 1e-9 {
                    return Err(Error::invalid("rotation is not orthogonal"));
                }
            }
        }
        Ok(Self {
            center,
            semiaxes,
            rotation,
        })
    }

    pub fn axis_aligned(center: Vec<f64>, semiaxes: Vec<f64>) -> Result<Self> {
        let n = center.len();
        let rot = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(center, semiaxes, rot)
    }

    /// Coordinates in the axis frame, relative to the centre.
    pub fn local(&self, x: &[f64]) -> Vec<f64> {
        let n = self.center.len();
        (0..n)
            .map(|k| (0..n).map(|i| self.rotation[i][k] * (x[i] - self.center[i])).sum())
            .collect()
    }

    /// Maps a vector given in the axis frame back to world coordinates
    /// (without translation).
    pub fn rotate(&self, y: &[f64]) -> Vec<f64> {
        self.rotation.iter().map(|row| dot(row, y)).collect()
    }

    /// The boundary point `c + R diag(a) s` for a unit vector `s`.
    pub fn from_sphere(&self, s: &[f64]) -> Vec<f64> {
        let y: Vec<f64> = s.iter().zip(&self.semiaxes).map(|(si, a)| si * a).collect();
        self.rotate(&y).iter().zip(&self.center).map(|(a, c)| a + c).collect()
    }

    fn gauge(&self, x: &[f64]) -> f64 {
        let y = self.local(x);
        y.iter().zip(&self.semiaxes).map(|(yi, a)| (yi / a).powi(2)).sum::<f64>().sqrt()
    }

    /// Image under the linear map `t` (row-major).
    pub fn transformed(&self, t: &[Vec<f64>]) -> Result<Ellipsoid> {
        let n = self.center.len();
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("map dimension mismatch"));
        }
        let tm = DMatrix::from_fn(n, n, |i, j| t[i][j]);
        let a = DMatrix::from_fn(n, n, |i, j| self.rotation[i][j] * self.semiaxes[j]);
        let m = &tm * a;
        let svd = m.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let center: Vec<f64> = t.iter().map(|row| dot(row, &self.center)).collect();
        let semiaxes: Vec<f64> = svd.singular_values.iter().copied().collect();
        let rotation = (0..n).map(|i| (0..n).map(|j| u[(i, j)]).collect()).collect();
        Ellipsoid::new(center, semiaxes, rotation)
    }

    /// The same ellipse as a parameterized planar body (dimension 2 only).
    pub fn to_planar(&self) -> Result<super::SmoothPlanarBody> {
        if self.dim() != 2 {
            return Err(Error::OutOfRange("planar view needs dimension 2".into()));
        }
        // first axis direction; the second axis sign is irrelevant
        let angle = self.rotation[1][0].atan2(self.rotation[0][0]);
        let curve = super::EllipseCurve::with_frame(
            self.semiaxes[0],
            self.semiaxes[1],
            [self.center[0], self.center[1]],
            angle,
        )?;
        super::SmoothPlanarBody::new(curve)
    }

    fn axes_product(&self) -> f64 {
        self.semiaxes.iter().product()
    }
}

/// Affine surface area of an ellipsoid and of its image under a
/// volume-preserving linear map.
pub fn affine_invariance_check(body: &Ellipsoid, t: &[Vec<f64>]) -> Result<(f64, f64)> {
    let n = body.center.len();
    if t.len() != n || t.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("map dimension mismatch"));
    }
    let det = crate::numeric::det(t);
    if (det.abs() - 1.0).abs() > 1e-12 {
        return Err(Error::NotVolumePreserving(det));
    }
    let image = body.transformed(t)?;
    Ok((body.affine_surface_area()?, image.affine_surface_area()?))
}

impl ConvexBody for Ellipsoid {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn name(&self) -> String {
        format!("ellipsoid{}{:?}", self.dim(), self.semiaxes)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        let amin = self.semiaxes.iter().copied().fold(f64::INFINITY, f64::min);
        self.gauge(x) <= 1.0 + tol / amin
    }

    fn support(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let n = self.dim();
        let w: Vec<f64> = (0..n).map(|k| (0..n).map(|i| self.rotation[i][k] * u[i]).sum()).collect();
        let aw: Vec<f64> = w.iter().zip(&self.semiaxes).map(|(wi, a)| wi * a).collect();
        let len = norm(&aw);
        let s: Vec<f64> = aw.iter().map(|v| v / len).collect();
        let x = self.from_sphere(&s);
        (dot(&self.center, u) + len, x)
    }

    fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.axes_product()
    }

    fn surface_area(&self) -> f64 {
        let a = &self.semiaxes;
        match self.dim() {
            2 => simpson_doubling(
                |t: f64| (a[0] * a[0] * t.sin().powi(2) + a[1] * a[1] * t.cos().powi(2)).sqrt(),
                0.0,
                std::f64::consts::TAU,
                1e-12,
            ),
            3 => {
                let inner = |theta: f64| {
                    let (st, ct) = theta.sin_cos();
                    st * simpson_doubling(
                        |phi: f64| {
                            let (sp, cp) = phi.sin_cos();
                            ((st * cp / a[0]).powi(2) + (st * sp / a[1]).powi(2) + (ct / a[2]).powi(2)).sqrt()
                        },
                        0.0,
                        std::f64::consts::TAU,
                        1e-11,
                    )
                };
                self.axes_product() * simpson_doubling(inner, 0.0, std::f64::consts::PI, 1e-10)
            }
            n => {
                // |det A| * E_s[|A^{-T} s|] * |S^{n-1}| by fixed-seed Monte Carlo.
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
                let m = 400_000;
                let mut acc = 0.0;
                for _ in 0..m {
                    let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let r = norm(&g);
                    acc += g.iter().zip(a).map(|(gi, ai)| (gi / r / ai).powi(2)).sum::<f64>().sqrt();
                }
                self.axes_product() * unit_sphere_area(n) * acc / m as f64
            }
        }
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let half: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| (self.rotation[i][k] * self.semiaxes[k]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        (
            self.center.iter().zip(&half).map(|(c, h)| c - h).collect(),
            self.center.iter().zip(&half).map(|(c, h)| c + h).collect(),
        )
    }

    fn centroid(&self) -> Vec<f64> {
        self.center.clone()
    }

    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.local(x);
        let g: Vec<f64> = y.iter().zip(&self.semiaxes).map(|(yi, a)| yi / (a * a)).collect();
        if norm(&g) == 0.0 {
            return Err(Error::OutOfRange("centre has no normal".into()));
        }
        Ok(check_unit(&self.rotate(&g)))
    }

    fn curvature(&self, x: &[f64]) -> Result<f64> {
        let y = self.local(x);
        let n = self.dim() as f64;
        let q: f64 = y.iter().zip(&self.semiaxes).map(|(yi, a)| yi * yi / a.powi(4)).sum();
        let p2: f64 = self.semiaxes.iter().map(|a| a * a).product();
        Ok(1.0 / (p2 * q.powf(0.5 * (n + 1.0))))
    }

    fn affine_surface_area(&self) -> Result<f64> {
        let n = self.dim() as f64;
        Ok(unit_sphere_area(self.dim()) * self.axes_product().powf((n - 1.0) / (n + 1.0)))
    }

    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        let y0 = self.local(from);
        let n = self.dim();
        let yd: Vec<f64> = (0..n).map(|k| (0..n).map(|i| self.rotation[i][k] * dir[i]).sum()).collect();
        let (mut qa, mut qb, mut qc) = (0.0, 0.0, -1.0);
        for k in 0..n {
            let a2 = self.semiaxes[k] * self.semiaxes[k];
            qa += yd[k] * yd[k] / a2;
            qb += 2.0 * y0[k] * yd[k] / a2;
            qc += y0[k] * y0[k] / a2;
        }
        let t = (-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa);
        from.iter().zip(dir).map(|(p, d)| p + t * d).collect()
    }

    fn boundary_distance(&self, x: &[f64]) -> f64 {
        let y = self.local(x);
        let g = self.gauge(x);
        let grad: Vec<f64> = y.iter().zip(&self.semiaxes).map(|(yi, a)| yi / (a * a) / g).collect();
        (g - 1.0).abs() / norm(&grad)
    }

    fn view(&self) -> BodyRef<'_> {
        BodyRef::Ellipsoid(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn sphere_surface_and_volume() {
        let b = Ellipsoid::axis_aligned(vec![0.0; 3], vec![1.0; 3]).unwrap();
        assert_relative_eq!(b.surface_area(), 4.0 * PI, max_relative = 1e-9);
        assert_relative_eq!(b.volume(), 4.0 * PI / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn spheroid_surface_closed_form() {
        // prolate spheroid a = b = 1, c = 2: 2π(1 + c² asin(e)/(c e)), e² = 1 - 1/c²
        let e = Ellipsoid::axis_aligned(vec![0.0; 3], vec![1.0, 1.0, 2.0]).unwrap();
        let ecc = (1.0 - 0.25f64).sqrt();
        let want = 2.0 * PI * (1.0 + 2.0 * ecc.asin() / ecc);
        assert_relative_eq!(e.surface_area(), want, max_relative = 1e-9);
    }

    #[test]
    fn invariance_examples() {
        let disk = Ellipsoid::axis_aligned(vec![0.0; 2], vec![1.0; 2]).unwrap();
        let (a, b) = affine_invariance_check(&disk, &[vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_relative_eq!(a, 2.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(b, 2.0 * PI, max_relative = 1e-12);
        let ball = Ellipsoid::axis_aligned(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let t = vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.5]];
        let (a, b) = affine_invariance_check(&ball, &t).unwrap();
        assert_relative_eq!(a, 4.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(b, 4.0 * PI, max_relative = 1e-12);
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let e = Ellipsoid::axis_aligned(vec![0.0; 2], vec![3.0, 0.2]).unwrap();
        let (a, b) = affine_invariance_check(&e, &id).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            affine_invariance_check(&e, &[vec![2.0, 0.0], vec![0.0, 1.0]]),
            Err(Error::NotVolumePreserving(_))
        ));
    }

    #[test]
    fn shear_keeps_affine_surface_area() {
        let e = Ellipsoid::axis_aligned(vec![1.0, 2.0], vec![2.0, 1.0]).unwrap();
        let shear = vec![vec![1.0, 0.7], vec![0.0, 1.0]];
        let (a, b) = affine_invariance_check(&e, &shear).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
        let img = e.transformed(&shear).unwrap();
        assert_relative_eq!(img.volume(), e.volume(), max_relative = 1e-12);
    }

    #[test]
    fn rotated_support_matches_boundary() {
        let c = 0.6f64.cos();
        let s = 0.6f64.sin();
        let e = Ellipsoid::new(vec![0.5, -0.5], vec![2.0, 0.5], vec![vec![c, -s], vec![s, c]]).unwrap();
        for k in 0..64 {
            let t = k as f64 * 0.1;
            let u = [t.cos(), t.sin()];
            let (h, x) = e.support(&u);
            assert!(e.boundary_distance(&x) < 1e-12);
            assert_relative_eq!(dot(&x, &u), h, max_relative = 1e-12);
            let nrm = e.outer_normal(&x).unwrap();
            assert_relative_eq!(nrm.as_slice(), u.as_slice(), epsilon = 1e-12);
        }
    }
}
