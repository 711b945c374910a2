use serde::Serialize;

use super::SurvivalSeries;
use crate::error::{contract, Result};

/// Deficits `1 − s` below this are treated as rounding noise.
pub const DEFICIT_FLOOR: f64 = 1e-14;
/// Survival values below this are excluded from log fits.
pub const SURVIVAL_FLOOR: f64 = 1e-12;
/// RMS log-residual above which a decay is not called exponential.
pub const EXPONENTIAL_RESIDUAL_TOL: f64 = 0.05;
/// Short-time exponents further than this from 2 are flagged.
pub const QUADRATIC_EXPONENT_TOL: f64 = 0.1;

const MIN_SHORT_TIME_SAMPLES: usize = 4;
const MIN_EXPONENTIAL_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitQuality {
    Ok,
    WindowTooShort,
    NonExponential,
    NonQuadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// `α` for short-time fits, `Γ` for exponential fits.
    pub estimate: f64,
    /// Fitted power `p` of `1 − s ∝ t^p`; absent for exponential fits.
    pub exponent: Option<f64>,
    /// `e^{intercept}` of an exponential fit, i.e. the extrapolated `s(0)`.
    pub prefactor: Option<f64>,
    pub window: (f64, f64),
    pub residual: f64,
    pub samples: usize,
    pub quality_flag: FitQuality,
}

impl FitReport {
    pub fn is_ok(&self) -> bool {
        self.quality_flag == FitQuality::Ok
    }

    fn too_short(window: (f64, f64), samples: usize) -> Self {
        Self {
            estimate: f64::NAN,
            exponent: None,
            prefactor: None,
            window,
            residual: 0.0,
            samples,
            quality_flag: FitQuality::WindowTooShort,
        }
    }
}

/// Ordinary least squares `y ≈ intercept + slope·x`; returns `(slope, intercept, rms)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

fn clip_window(s: &SurvivalSeries, window: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return contract(format!("invalid fit window [{lo}, {hi}]"));
    }
    let (t_end, _) = s.last();
    let clipped = (lo.max(0.0), hi.min(t_end));
    if clipped.0 > clipped.1 {
        return contract(format!("fit window [{lo}, {hi}] lies outside the series range [0, {t_end}]"));
    }
    Ok(clipped)
}

/// Fit `1 − s(t) = α t^p` on a log-log scale over `window`.
pub fn fit_short_time(s: &SurvivalSeries, window: (f64, f64)) -> Result<FitReport> {
    let window = clip_window(s, window)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = s
        .iter()
        .filter(|&(t, v)| t > 0.0 && t >= window.0 && t <= window.1 && 1.0 - v > DEFICIT_FLOOR)
        .map(|(t, v)| (t.ln(), (1.0 - v).ln()))
        .unzip();
    if xs.len() < MIN_SHORT_TIME_SAMPLES {
        return Ok(FitReport::too_short(window, xs.len()));
    }
    let (p, log_alpha, rms) = linear_fit(&xs, &ys);
    let quality_flag = if (p - 2.0).abs() > QUADRATIC_EXPONENT_TOL {
        FitQuality::NonQuadratic
    } else {
        FitQuality::Ok
    };
    Ok(FitReport {
        estimate: log_alpha.exp(),
        exponent: Some(p),
        prefactor: None,
        window,
        residual: rms,
        samples: xs.len(),
        quality_flag,
    })
}

/// Fit `s(t) = A e^{−Γt}` by linear least squares on `log s` over `window`.
pub fn fit_exponential(s: &SurvivalSeries, window: (f64, f64)) -> Result<FitReport> {
    let window = clip_window(s, window)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = s
        .iter()
        .filter(|&(t, v)| t >= window.0 && t <= window.1 && v > SURVIVAL_FLOOR)
        .map(|(t, v)| (t, v.ln()))
        .unzip();
    if xs.len() < MIN_EXPONENTIAL_SAMPLES {
        return Ok(FitReport::too_short(window, xs.len()));
    }
    let (slope, intercept, rms) = linear_fit(&xs, &ys);
    let quality_flag = if rms > EXPONENTIAL_RESIDUAL_TOL {
        FitQuality::NonExponential
    } else {
        FitQuality::Ok
    };
    Ok(FitReport {
        estimate: -slope,
        exponent: None,
        prefactor: Some(intercept.exp()),
        window,
        residual: rms,
        samples: xs.len(),
        quality_flag,
    })
}
