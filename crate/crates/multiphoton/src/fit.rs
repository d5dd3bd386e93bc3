//! Linear least-squares cosine fits and harmonic content analysis.
//!
//! Fringe fits avoid nonlinear optimization entirely: for each candidate
//! harmonic k the model offset + b cos(k w x) + c sin(k w x) is linear, so a
//! 3x3 normal-equation solve per candidate and a residual comparison across
//! candidates recovers both the period and the harmonic purity.

use serde::Serialize;

use crate::error::{Error, Result};

/// Summary of one least-squares fringe fit.
#[derive(Clone, Debug, Serialize)]
pub struct FitSummary {
    /// Human-readable model string.
    pub model: String,
    pub parameters: Vec<FitParameter>,
    /// Root of the residual sum of squares.
    pub residual_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitParameter {
    pub name: String,
    pub value: f64,
    pub std_error: f64,
}

impl FitSummary {
    pub fn parameter(&self, name: &str) -> Option<&FitParameter> {
        self.parameters.iter().find(|p| p.name == name)
    }
}

/// Result of fitting offset + amplitude cos(k w0 x + phase) with the
/// harmonic k selected by residual minimum.
#[derive(Clone, Debug)]
pub struct CosineFit {
    pub harmonic: usize,
    /// 2 pi / (k w0): the recovered fringe period in x.
    pub period: f64,
    pub offset: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub offset_error: f64,
    pub amplitude_error: f64,
    pub residual_norm: f64,
}

impl CosineFit {
    /// amplitude / offset, the usual fringe visibility.
    pub fn visibility(&self) -> f64 {
        self.amplitude / self.offset
    }

    pub fn summary(&self) -> FitSummary {
        FitSummary {
            model: format!(
                "offset + amplitude*cos({}*x*2pi/period0 + phase)",
                self.harmonic
            ),
            parameters: vec![
                FitParameter {
                    name: "offset".into(),
                    value: self.offset,
                    std_error: self.offset_error,
                },
                FitParameter {
                    name: "amplitude".into(),
                    value: self.amplitude,
                    std_error: self.amplitude_error,
                },
                FitParameter {
                    name: "phase".into(),
                    value: self.phase,
                    std_error: 0.0,
                },
                FitParameter {
                    name: "period".into(),
                    value: self.period,
                    std_error: 0.0,
                },
            ],
            residual_norm: self.residual_norm,
        }
    }
}

struct HarmonicFit {
    offset: f64,
    b: f64,
    c: f64,
    rss: f64,
    covariance: [f64; 3],
}

/// Solves the 3x3 normal equations for regressors (1, cos kwx, sin kwx).
fn fit_single_harmonic(xs: &[f64], ys: &[f64], omega: f64) -> Result<HarmonicFit> {
    let n = xs.len();
    if n < 4 || n != ys.len() {
        return Err(Error::FitFailed("need at least 4 matched samples".into()));
    }
    // accumulate X^T X and X^T y
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let row = [1.0, (omega * x).cos(), (omega * x).sin()];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }
    let inv = invert3(&xtx).ok_or_else(|| Error::FitFailed("singular design matrix".into()))?;
    let mut beta = [0.0f64; 3];
    for i in 0..3 {
        for j in 0..3 {
            beta[i] += inv[i][j] * xty[j];
        }
    }
    let mut rss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let model = beta[0] + beta[1] * (omega * x).cos() + beta[2] * (omega * x).sin();
        rss += (y - model) * (y - model);
    }
    let dof = (n - 3).max(1) as f64;
    let sigma2 = rss / dof;
    Ok(HarmonicFit {
        offset: beta[0],
        b: beta[1],
        c: beta[2],
        rss,
        covariance: [sigma2 * inv[0][0], sigma2 * inv[1][1], sigma2 * inv[2][2]],
    })
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let inv_det = 1.0 / det;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let a = m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
                - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3];
            out[j][i] = a * inv_det; // adjugate transpose
        }
    }
    Some(out)
}

/// Fits offset + amplitude cos(k 2pi x / base_period + phase), trying every
/// k in `harmonics` and keeping the residual minimum.
pub fn fit_cosine(
    xs: &[f64],
    ys: &[f64],
    harmonics: std::ops::RangeInclusive<usize>,
    base_period: f64,
) -> Result<CosineFit> {
    if base_period <= 0.0 {
        return Err(Error::FitFailed("base period must be positive".into()));
    }
    let omega0 = 2.0 * std::f64::consts::PI / base_period;
    let mut best: Option<(usize, HarmonicFit)> = None;
    for k in harmonics {
        if k == 0 {
            continue;
        }
        let fit = fit_single_harmonic(xs, ys, omega0 * k as f64)?;
        let better = match &best {
            None => true,
            Some((_, current)) => fit.rss < current.rss,
        };
        if better {
            best = Some((k, fit));
        }
    }
    let (k, fit) = best.ok_or_else(|| Error::FitFailed("no candidate harmonics".into()))?;
    let amplitude = fit.b.hypot(fit.c);
    let amp_error = if amplitude > 0.0 {
        ((fit.b * fit.b * fit.covariance[1] + fit.c * fit.c * fit.covariance[2]).sqrt()) / amplitude
    } else {
        fit.covariance[1].max(fit.covariance[2]).sqrt()
    };
    Ok(CosineFit {
        harmonic: k,
        period: base_period / k as f64,
        offset: fit.offset,
        amplitude,
        phase: (-fit.c).atan2(fit.b),
        offset_error: fit.covariance[0].sqrt(),
        amplitude_error: amp_error,
        residual_norm: fit.rss.sqrt(),
    })
}

/// Fringe amplitudes sqrt(b_k^2 + c_k^2) for k = 1 ..= k_max from one joint
/// least-squares fit over all harmonics at once. The joint solve keeps the
/// harmonics separated even on grids where the regressors are not mutually
/// orthogonal (e.g. a duplicated period endpoint).
pub fn harmonic_amplitudes(
    xs: &[f64],
    ys: &[f64],
    k_max: usize,
    base_period: f64,
) -> Result<Vec<f64>> {
    let n = xs.len();
    let unknowns = 2 * k_max + 1;
    if n < unknowns || n != ys.len() {
        return Err(Error::FitFailed(format!(
            "need at least {unknowns} matched samples"
        )));
    }
    let omega0 = 2.0 * std::f64::consts::PI / base_period;
    let row_of = |x: f64| {
        let mut row = Vec::with_capacity(unknowns);
        row.push(1.0);
        for k in 1..=k_max {
            row.push((omega0 * k as f64 * x).cos());
            row.push((omega0 * k as f64 * x).sin());
        }
        row
    };
    let mut xtx = vec![vec![0.0f64; unknowns]; unknowns];
    let mut xty = vec![0.0f64; unknowns];
    for (&x, &y) in xs.iter().zip(ys) {
        let row = row_of(x);
        for i in 0..unknowns {
            for j in 0..unknowns {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }
    let beta =
        solve_dense(xtx, xty).ok_or_else(|| Error::FitFailed("singular design matrix".into()))?;
    Ok((1..=k_max)
        .map(|k| beta[2 * k - 1].hypot(beta[2 * k]))
        .collect())
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            let pivot_row = &upper[col];
            for (entry, &p) in lower[0][col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| i as f64 * 2.0 * std::f64::consts::PI / n as f64)
            .collect()
    }

    #[test]
    fn recovers_a_pure_harmonic() {
        let xs = grid(64);
        let ys: Vec<f64> = xs.iter().map(|&x| 0.5 + 0.5 * (3.0 * x).cos()).collect();
        let fit = fit_cosine(&xs, &ys, 1..=6, 2.0 * std::f64::consts::PI).unwrap();
        assert_eq!(fit.harmonic, 3);
        assert_abs_diff_eq!(
            fit.period,
            2.0 * std::f64::consts::PI / 3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(fit.offset, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.amplitude, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.visibility(), 1.0, epsilon = 1e-12);
        assert!(fit.residual_norm < 1e-12);
    }

    #[test]
    fn recovers_phase_and_rejects_wrong_harmonics() {
        let xs = grid(48);
        let phase = 1.1;
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| 2.0 + 0.7 * (2.0 * x + phase).cos())
            .collect();
        let fit = fit_cosine(&xs, &ys, 1..=4, 2.0 * std::f64::consts::PI).unwrap();
        assert_eq!(fit.harmonic, 2);
        assert_abs_diff_eq!(fit.phase, phase, epsilon = 1e-10);

        let amps = harmonic_amplitudes(&xs, &ys, 4, 2.0 * std::f64::consts::PI).unwrap();
        assert_abs_diff_eq!(amps[1], 0.7, epsilon = 1e-12);
        assert!(amps[0] < 1e-12 && amps[2] < 1e-12 && amps[3] < 1e-12);
    }

    #[test]
    fn flat_data_fits_with_zero_amplitude() {
        let xs = grid(32);
        let ys = vec![0.25; 32];
        let fit = fit_cosine(&xs, &ys, 1..=3, 2.0 * std::f64::consts::PI).unwrap();
        assert_abs_diff_eq!(fit.offset, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.amplitude, 0.0, epsilon = 1e-12);
    }
}
