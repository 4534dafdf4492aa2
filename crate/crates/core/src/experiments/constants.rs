//! Closed-form dimensional constants.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{factorial, gamma, ln_gamma, unit_ball_volume, unit_sphere_area};

/// Named constants, each a function of the dimension n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constant {
    /// c(n): normalizer of the uniform random-polytope limit.
    RandomUniform,
    /// cₙ: prefactor of the boundary random-polytope limit.
    RandomBoundary,
    /// Lower bound for the Delone triangulation constant del_{n-1}.
    DelLower,
    /// 1/(2πe), the limit of del_{n-1}/n.
    DelLimit,
    /// Upper bound on the quotient of inscribed and circumscribed best
    /// approximation constants.
    Quotient,
    /// Coefficient vol(B)/(67e²πn) of the arbitrary-position lower bound.
    Boroczky,
    /// Coefficient of flag(P) in the uniform random-polytope rate.
    BaranyBuchta,
    /// ½((n+1)/vol_{n-1}B^{n-1})^{2/(n+1)}: smooth floating-body factor.
    FloatingSmooth,
    /// 1/(n!·n^{n-1}): coefficient of flag(P) in the polytope floating rate.
    FloatingPolytope,
}

impl Constant {
    pub const ALL: [Constant; 9] = [
        Self::RandomUniform,
        Self::RandomBoundary,
        Self::DelLower,
        Self::DelLimit,
        Self::Quotient,
        Self::Boroczky,
        Self::BaranyBuchta,
        Self::FloatingSmooth,
        Self::FloatingPolytope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RandomUniform => "random-uniform",
            Self::RandomBoundary => "random-boundary",
            Self::DelLower => "del-lower",
            Self::DelLimit => "del-limit",
            Self::Quotient => "quotient",
            Self::Boroczky => "boroczky",
            Self::BaranyBuchta => "barany-buchta",
            Self::FloatingSmooth => "floating-smooth",
            Self::FloatingPolytope => "floating-polytope",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::UnknownConstant(name.to_string()))
    }

    /// Smallest dimension where the formula is defined.
    pub fn min_dim(self) -> usize {
        match self {
            Self::RandomUniform | Self::FloatingSmooth | Self::FloatingPolytope | Self::BaranyBuchta => 1,
            _ => 2,
        }
    }

    pub fn eval(self, n: usize) -> Result<f64> {
        if n < self.min_dim() {
            return Err(Error::OutOfRange(format!(
                "{} needs dimension at least {}",
                self.name(),
                self.min_dim()
            )));
        }
        let nf = n as f64;
        Ok(match self {
            Self::RandomUniform => random_uniform(n),
            Self::RandomBoundary => random_boundary(n),
            Self::DelLower => del_lower(n),
            Self::DelLimit => 1.0 / (2.0 * PI * E),
            Self::Quotient => 1.0 + 2.0 * (E - 1.0) * (nf + 1.0).ln() / (nf - 1.0),
            Self::Boroczky => unit_ball_volume(n) / (67.0 * E * E * PI * nf),
            Self::BaranyBuchta => 1.0 / ((nf + 1.0).powi(n as i32 - 1) * factorial(n as u32 - 1)),
            Self::FloatingSmooth => {
                0.5 * ((nf + 1.0) / unit_ball_volume(n - 1)).powf(2.0 / (nf + 1.0))
            }
            Self::FloatingPolytope => 1.0 / (factorial(n as u32) * nf.powi(n as i32 - 1)),
        })
    }
}

/// Evaluates a constant by name.
pub fn constant(name: &str, n: usize) -> Result<f64> {
    Constant::parse(name)?.eval(n)
}

fn random_uniform(n: usize) -> f64 {
    let nf = n as f64;
    let head = 2.0 * (unit_ball_volume(n - 1) / (nf + 1.0)).powf(2.0 / (nf + 1.0));
    let num = (nf + 3.0) * factorial(n as u32 + 1);
    let den = (nf * nf + nf + 2.0) * (nf * nf + 1.0) * gamma((nf * nf + 1.0) / (nf + 1.0));
    head * num / den
}

fn random_boundary(n: usize) -> f64 {
    let nf = n as f64;
    let e = 2.0 / (nf - 1.0);
    // vol_{n-2}(∂B^{n-1}) is the measure of the unit sphere in R^{n-1}
    let sphere = unit_sphere_area(n - 1);
    let ln_num = (nf + 1.0) / (nf - 1.0) * (nf - 1.0).ln() + ln_gamma(nf + 1.0 + e);
    let ln_den = 2f64.ln() + ln_gamma(nf + 2.0) + e * sphere.ln();
    (ln_num - ln_den).exp()
}

/// ((n-1)/(n+1)) / vol_{n-1}(B^{n-1})^{2/(n-1)}, in log space so large n
/// does not underflow.
fn del_lower(n: usize) -> f64 {
    let nf = n as f64;
    let k = nf - 1.0;
    let ln_vol = 0.5 * k * PI.ln() - ln_gamma(0.5 * k + 1.0);
    (k / (nf + 1.0)) * (-(2.0 / k) * ln_vol).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn random_uniform_in_the_plane() {
        // Γ(5/3) = (2/3)Γ(2/3)
        let g53 = 0.902_745_292_950_933_6;
        let want = 2.0 * (2f64 / 3.0).powf(2.0 / 3.0) * 30.0 / (40.0 * g53);
        assert_relative_eq!(constant("random-uniform", 2).unwrap(), want, max_relative = 1e-12);
        assert!((want - 1.2680).abs() < 5e-4);
    }

    #[test]
    fn random_boundary_in_the_plane_is_one_half() {
        assert_relative_eq!(constant("random-boundary", 2).unwrap(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn del_values() {
        assert_relative_eq!(constant("del-lower", 2).unwrap(), 1.0 / 12.0, max_relative = 1e-12);
        let ratio = constant("del-lower", 200).unwrap() / 200.0;
        let lim = constant("del-limit", 2).unwrap();
        assert_relative_eq!(lim, 0.058_549_8, max_relative = 1e-6);
        assert!((ratio / lim - 1.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn quotient_bound() {
        let q2 = constant("quotient", 2).unwrap();
        assert_relative_eq!(q2, 1.0 + 2.0 * (E - 1.0) * 3f64.ln(), max_relative = 1e-15);
        assert!((q2 - 4.776).abs() < 1e-3);
        let mut prev = q2;
        for n in 3..2000 {
            let q = constant("quotient", n).unwrap();
            assert!(q < prev && q > 1.0);
            prev = q;
        }
        assert!(prev < 1.02);
    }

    #[test]
    fn flag_coefficients() {
        // triangle: 6 flags, 6/3 = 2; square: 8 flags, 8/3
        assert_relative_eq!(6.0 * constant("barany-buchta", 2).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(8.0 * constant("barany-buchta", 2).unwrap(), 8.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(8.0 * constant("floating-polytope", 2).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            constant("floating-smooth", 2).unwrap(),
            0.5 * 1.5f64.powf(2.0 / 3.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            constant("boroczky", 2).unwrap(),
            1.0 / (134.0 * E * E),
            max_relative = 1e-14
        );
    }

    #[test]
    fn unknown_names_and_small_dims() {
        assert_eq!(constant("nope", 2), Err(Error::UnknownConstant("nope".into())));
        assert!(constant("quotient", 1).is_err());
        for c in Constant::ALL {
            assert_eq!(Constant::parse(c.name()).unwrap(), c);
        }
    }
}
