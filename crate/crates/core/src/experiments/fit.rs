//! Power-law fits on log-transformed data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{solve, student_t_quantile, student_t_two_sided_p};

/// `value ≈ C · N^p`, optionally times `(ln N)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateModel {
    PurePower,
    PowerWithLog(u32),
}

impl RateModel {
    fn log_power(self) -> f64 {
        match self {
            Self::PurePower => 0.0,
            Self::PowerWithLog(k) => k as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub model: RateModel,
    pub exponent: f64,
    pub constant: f64,
    /// 95% half-width of the exponent.
    pub exponent_half_width: f64,
    /// 95% half-width of ln(constant).
    pub log_constant_half_width: f64,
    pub n_min: f64,
    pub n_max: f64,
    /// Residuals of the log-transformed fit, in input order.
    pub residuals: Vec<f64>,
    pub residual_sd: f64,
}

impl RateFit {
    pub fn predict(&self, n: f64) -> f64 {
        self.constant * n.powf(self.exponent) * n.ln().powf(self.model.log_power())
    }

    pub fn exponent_covers(&self, p: f64) -> bool {
        (self.exponent - p).abs() <= self.exponent_half_width
    }
}

fn check_range(data: &[(f64, f64)]) -> Result<()> {
    if data.iter().any(|&(n, v)| !(n > 1.0 && v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("rate fits need N > 1 and positive finite values"));
    }
    check_n_range(data.iter().map(|d| d.0))
}

/// At least five distinct N spanning 1.5 decades.
pub fn check_n_range(ns: impl IntoIterator<Item = f64>) -> Result<()> {
    let mut ns: Vec<f64> = ns.into_iter().collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    if ns.len() < 5 {
        return Err(Error::InsufficientRange(format!("{} distinct N, need 5", ns.len())));
    }
    let decades = (ns[ns.len() - 1] / ns[0]).log10();
    if decades < 1.5 {
        return Err(Error::InsufficientRange(format!("N spans {decades:.2} decades, need 1.5")));
    }
    Ok(())
}

/// Ordinary least squares of ln v − k ln ln N on ln N.
pub fn rate_fit(data: &[(f64, f64)], model: RateModel) -> Result<RateFit> {
    check_range(data)?;
    let k = model.log_power();
    let xs: Vec<f64> = data.iter().map(|d| d.0.ln()).collect();
    let ys: Vec<f64> = data.iter().map(|d| d.1.ln() - k * d.0.ln().ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - icpt - slope * x).collect();
    let dof = m - 2.0;
    let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / dof;
    let t = student_t_quantile(0.975, dof);
    let se_slope = (s2 / sxx).sqrt();
    let se_icpt = (s2 * (1.0 / m + mx * mx / sxx)).sqrt();
    let ns = data.iter().map(|d| d.0);
    Ok(RateFit {
        model,
        exponent: slope,
        constant: icpt.exp(),
        exponent_half_width: t * se_slope,
        log_constant_half_width: t * se_icpt,
        n_min: ns.clone().fold(f64::INFINITY, f64::min),
        n_max: ns.fold(0.0, f64::max),
        residuals,
        residual_sd: s2.sqrt(),
    })
}

/// Least-squares constant for a fixed exponent and log power: the
/// geometric mean of v / (N^p (ln N)^k).
pub fn constant_for(data: &[(f64, f64)], exponent: f64, log_power: f64) -> f64 {
    let s: f64 = data
        .iter()
        .map(|&(n, v)| v.ln() - exponent * n.ln() - log_power * n.ln().ln())
        .sum();
    (s / data.len() as f64).exp()
}

/// t-test for an extra ln ln N term in the log-linear model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogTermTest {
    /// Fitted coefficient of ln ln N.
    pub coefficient: f64,
    pub stderr: f64,
    pub p_value: f64,
    /// True when the coefficient differs from zero at the 95% level.
    pub significant: bool,
}

/// Fits ln v = a + p ln N + q ln ln N by least squares and tests q = 0.
pub fn log_term_test(data: &[(f64, f64)]) -> Result<LogTermTest> {
    check_range(data)?;
    if data.len() < 4 {
        return Err(Error::InsufficientRange("need at least 4 points".into()));
    }
    let rows: Vec<[f64; 3]> = data.iter().map(|d| [1.0, d.0.ln(), d.0.ln().ln()]).collect();
    let ys: Vec<f64> = data.iter().map(|d| d.1.ln()).collect();
    let mut xtx = vec![vec![0.0; 3]; 3];
    let mut xty = vec![0.0; 3];
    for (r, y) in rows.iter().zip(&ys) {
        for i in 0..3 {
            xty[i] += r[i] * y;
            for j in 0..3 {
                xtx[i][j] += r[i] * r[j];
            }
        }
    }
    let beta = solve(&xtx, &xty).ok_or_else(|| Error::InsufficientRange("singular design".into()))?;
    let dof = (data.len() - 3) as f64;
    let rss: f64 = rows
        .iter()
        .zip(&ys)
        .map(|(r, y)| (y - (0..3).map(|i| r[i] * beta[i]).sum::<f64>()).powi(2))
        .sum();
    let s2 = rss / dof;
    // diagonal entry of (XᵀX)⁻¹ for the last coefficient
    let e2 = solve(&xtx, &[0.0, 0.0, 1.0]).ok_or_else(|| Error::InsufficientRange("singular design".into()))?;
    let stderr = (s2 * e2[2]).sqrt();
    let t = beta[2] / stderr;
    let p_value = student_t_two_sided_p(t, dof);
    Ok(LogTermTest { coefficient: beta[2], stderr, p_value, significant: p_value < 0.05 })
}

/// Limit of y(x) under the model y = L + a φ₁(x) + b φ₂(x), solved
/// exactly through the last three points.
pub fn three_point_extrapolation(xs: &[f64], ys: &[f64], basis: impl Fn(f64) -> [f64; 2]) -> Option<f64> {
    let m = xs.len();
    if m < 3 || ys.len() != m {
        return None;
    }
    let a: Vec<Vec<f64>> = (m - 3..m)
        .map(|i| {
            let b = basis(xs[i]);
            vec![1.0, b[0], b[1]]
        })
        .collect();
    solve(&a, &ys[m - 3..]).map(|s| s[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RandomSource;
    use rand_distr::{Distribution, Normal};

    fn ns() -> Vec<f64> {
        (5..=12).map(|k| 2f64.powi(k)).collect()
    }

    #[test]
    fn exact_power_law() {
        let data: Vec<(f64, f64)> = ns().into_iter().map(|n| (n, 7.0 * n.powi(-2))).collect();
        let f = rate_fit(&data, RateModel::PurePower).unwrap();
        assert!((f.exponent + 2.0).abs() < 1e-12);
        assert!((f.constant - 7.0).abs() < 1e-10);
    }

    #[test]
    fn log_model_recovers_constant() {
        let data: Vec<(f64, f64)> = ns().into_iter().map(|n| (n, 3.0 * n.ln() / n)).collect();
        let f = rate_fit(&data, RateModel::PowerWithLog(1)).unwrap();
        assert!((f.exponent + 1.0).abs() < 1e-10);
        assert!((f.constant - 3.0).abs() < 1e-10);
        assert!((f.predict(100.0) - 3.0 * 100f64.ln() / 100.0).abs() < 1e-12);
    }

    #[test]
    fn intervals_are_calibrated() {
        let normal = Normal::<f64>::new(0.0, 0.05).unwrap();
        let mut hits = 0;
        for rep in 0..100 {
            let mut rng = RandomSource::new(77, rep).rng();
            let data: Vec<(f64, f64)> = ns()
                .into_iter()
                .map(|n| (n, 2.0 * n.powf(-0.5) * normal.sample(&mut rng).exp()))
                .collect();
            if rate_fit(&data, RateModel::PurePower).unwrap().exponent_covers(-0.5) {
                hits += 1;
            }
        }
        assert!(hits >= 90, "{hits}");
    }

    #[test]
    fn insufficient_range() {
        let short: Vec<(f64, f64)> = (10..15).map(|n| (n as f64, 1.0 / n as f64)).collect();
        assert!(matches!(rate_fit(&short, RateModel::PurePower), Err(Error::InsufficientRange(_))));
        let few: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&n| (n, 1.0 / n)).collect();
        assert!(matches!(rate_fit(&few, RateModel::PurePower), Err(Error::InsufficientRange(_))));
    }

    #[test]
    fn log_term_detection() {
        let with_log: Vec<(f64, f64)> = ns().into_iter().map(|n| (n, n.ln().powi(2) / n * (1.0 + 1e-3 * (n.sqrt()).sin()))).collect();
        assert!(log_term_test(&with_log).unwrap().significant);
        let normal = Normal::<f64>::new(0.0, 0.05).unwrap();
        let mut rng = RandomSource::new(5, 0).rng();
        let plain: Vec<(f64, f64)> = ns().into_iter().map(|n| (n, n.powi(-2) * normal.sample(&mut rng).exp())).collect();
        assert!(!log_term_test(&plain).unwrap().significant);
    }

    #[test]
    fn extrapolation_is_exact_on_the_model() {
        let xs = [2.0, 3.0, 5.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 + 2.0 / x - 0.7 / (x * x)).collect();
        let l = three_point_extrapolation(&xs, &ys, |x| [1.0 / x, 1.0 / (x * x)]).unwrap();
        assert!((l - 1.5).abs() < 1e-12);
    }
}
