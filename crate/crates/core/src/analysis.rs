//! Fringe metrology on sampled curves: peaks, widths, periods.
//!
//! Phase resolution is measured as the full width at half maximum of the
//! principal peak, and compared with the classical quarter-wave limit
//! `pi/2`. Peaks are refined with a three-point parabola, half-maximum
//! crossings by linear interpolation.

use serde::{Deserialize, Serialize};

use crate::cavity::CLASSICAL_RESOLUTION;
use crate::error::{unresolved, usage, Result};

/// A sampled curve `values[i] = f(phi[i])` on an ascending phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    phi: Vec<f64>,
    values: Vec<f64>,
}

impl Series {
    pub fn new(phi: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if phi.is_empty() {
            return Err(usage("series is empty"));
        }
        if phi.len() != values.len() {
            return Err(usage(format!(
                "series has {} phases but {} values",
                phi.len(),
                values.len()
            )));
        }
        if phi.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(usage("series contains non-finite entries"));
        }
        if phi.windows(2).any(|w| w[1] <= w[0]) {
            return Err(usage("series phases must be strictly ascending"));
        }
        Ok(Self { phi, values })
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Mean grid spacing.
    pub fn spacing(&self) -> f64 {
        if self.len() < 2 {
            0.0
        } else {
            (self.phi[self.len() - 1] - self.phi[0]) / (self.len() - 1) as f64
        }
    }

    fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub phi: f64,
    pub height: f64,
    /// Grid index of the sample the peak was refined from.
    pub index: usize,
}

/// Interior local maxima at or above `min_height`, sorted by phase.
pub fn find_peaks(series: &Series, min_height: f64) -> Result<Vec<Peak>> {
    if min_height.is_nan() || min_height <= 0.0 {
        return Err(usage(format!(
            "min_height must be positive, got {min_height}"
        )));
    }
    let y = series.values();
    let x = series.phi();
    let mut peaks = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        if !(y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            continue;
        }
        let (phi, height) = refine_vertex(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1]);
        if height >= min_height {
            peaks.push(Peak {
                phi,
                height,
                index: i,
            });
        }
    }
    Ok(peaks)
}

/// Vertex of the parabola through three samples, clamped to the bracket.
fn refine_vertex(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> (f64, f64) {
    let denom = y0 - 2.0 * y1 + y2;
    if denom == 0.0 {
        return (x1, y1);
    }
    let offset = (0.5 * (y0 - y2) / denom).clamp(-1.0, 1.0);
    let step = if offset < 0.0 { x1 - x0 } else { x2 - x1 };
    let height = y1 - 0.25 * (y0 - y2) * offset;
    (x1 + offset * step, height.max(y1))
}

/// Full width at half of `peak.height` (baseline zero).
pub fn fwhm(series: &Series, peak: &Peak) -> Result<f64> {
    let x = series.phi();
    let y = series.values();
    if peak.index >= y.len() {
        return Err(usage("peak index outside the series"));
    }
    let half = 0.5 * peak.height;
    let left = (0..peak.index)
        .rev()
        .find(|&j| y[j] < half)
        .map(|j| crossing(x[j], x[j + 1], y[j], y[j + 1], half))
        .ok_or_else(|| unresolved("left half-maximum crossing lies outside the table"))?;
    let right = (peak.index + 1..y.len())
        .find(|&j| y[j] < half)
        .map(|j| crossing(x[j - 1], x[j], y[j - 1], y[j], half))
        .ok_or_else(|| unresolved("right half-maximum crossing lies outside the table"))?;
    Ok(right - left)
}

fn crossing(x0: f64, x1: f64, y0: f64, y1: f64, level: f64) -> f64 {
    x0 + (level - y0) * (x1 - x0) / (y1 - y0)
}

/// Dominant period of the curve, or `None` for a flat curve.
///
/// The first maximum of the normalized autocorrelation locates the period to
/// the nearest lag; it is then refined by minimizing the mean squared
/// difference `mean((f(phi + T) - f(phi))^2)`, which vanishes at the true
/// period regardless of how the grid and the period line up.
pub fn modulation_period(series: &Series) -> Result<Option<f64>> {
    let y = series.values();
    let n = y.len();
    if n < 4 {
        return Err(unresolved("too few samples to estimate a period"));
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let scale = y
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let r0 = autocorrelation(&d, 0);
    if r0 <= 1e-24 * scale * scale {
        return Ok(None);
    }

    let max_lag = n / 2;
    let r: Vec<f64> = (0..=max_lag + 1).map(|k| autocorrelation(&d, k)).collect();
    let threshold = 0.5 * r0;
    let mut dipped = false;
    let mut coarse = None;
    for k in 1..=max_lag {
        if r[k] < threshold {
            dipped = true;
        } else if dipped && r[k] >= r[k - 1] && r[k] > r[k + 1] {
            coarse = Some(k);
            break;
        }
    }
    let coarse = coarse.ok_or_else(|| unresolved("table spans fewer than two periods"))?;

    // Truncated overlap biases the autocorrelation maximum by a few lags.
    let reach = (coarse / 4).max(2);
    let lo = coarse.saturating_sub(reach).max(1);
    let hi = (coarse + reach).min(n - 2);
    let best = (lo..=hi)
        .min_by(|&a, &b| squared_difference(y, a).total_cmp(&squared_difference(y, b)))
        .unwrap_or(coarse);
    let lag = if best > 1 && best + 1 < n {
        let (d0, d1, d2) = (
            squared_difference(y, best - 1),
            squared_difference(y, best),
            squared_difference(y, best + 1),
        );
        let denom = d0 - 2.0 * d1 + d2;
        if denom > 0.0 {
            best as f64 + (0.5 * (d0 - d2) / denom).clamp(-1.0, 1.0)
        } else {
            best as f64
        }
    } else {
        best as f64
    };
    Ok(Some(lag * series.spacing()))
}

fn autocorrelation(d: &[f64], lag: usize) -> f64 {
    let m = d.len() - lag;
    d[..m]
        .iter()
        .zip(&d[lag..])
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / m as f64
}

fn squared_difference(y: &[f64], lag: usize) -> f64 {
    let m = y.len() - lag;
    y[..m]
        .iter()
        .zip(&y[lag..])
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        / m as f64
}

/// Summary of the fringe structure of one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeReport {
    pub peaks: Vec<Peak>,
    /// Principal (highest) peak, if any.
    pub principal: Option<Peak>,
    /// FWHM of the principal peak, radians.
    pub fwhm: Option<f64>,
    /// Dominant modulation period, radians.
    pub period: Option<f64>,
    /// `(pi/2) / fwhm`.
    pub enhancement: Option<f64>,
    /// `2 pi / period`: how many times shorter the fringe wavelength is than
    /// the optical wavelength.
    pub lambda_b_ratio: Option<f64>,
    /// False when the grid spacing exceeds a tenth of the measured FWHM.
    pub grid_adequate: bool,
}

/// Peaks above half the curve maximum count as fringes.
pub const DEFAULT_PEAK_FRACTION: f64 = 0.5;

pub fn enhancement_report(series: &Series) -> Result<FringeReport> {
    let max = series.max_value();
    if max > 0.0 {
        enhancement_report_with(series, DEFAULT_PEAK_FRACTION * max)
    } else {
        enhancement_report_with(series, f64::MIN_POSITIVE)
    }
}

pub fn enhancement_report_with(series: &Series, min_height: f64) -> Result<FringeReport> {
    let peaks = find_peaks(series, min_height)?;
    let principal = peaks
        .iter()
        .copied()
        .reduce(|best, p| if p.height > best.height { p } else { best });
    let fwhm = principal.map(|p| fwhm(series, &p)).transpose()?;
    let period = match modulation_period(series) {
        Ok(p) => p,
        Err(crate::Error::Unresolved(_)) => None,
        Err(e) => return Err(e),
    };
    let grid_adequate = match fwhm {
        Some(w) => series.spacing() <= w / 10.0,
        None => true,
    };
    Ok(FringeReport {
        enhancement: fwhm.map(|w| CLASSICAL_RESOLUTION / w),
        lambda_b_ratio: period.map(|p| std::f64::consts::TAU / p),
        peaks,
        principal,
        fwhm,
        period,
        grid_adequate,
    })
}
