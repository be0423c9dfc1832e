//! The CCD-MZI placed inside a cavity closed by a partially transmitting
//! mirror of amplitude reflectance `r` and transmittance `t = sqrt(1 - r^2)`.
//!
//! Light entering through the mirror crosses the antiphase CCD-MZI once per
//! round trip, and a fraction leaks back out through the mirror after every
//! trip. The `n`-th leaked wave is
//!
//! ```text
//! E_A(n) = (-1)^n     T r^(n-1) cos(2 n phi)
//! E_B(n) = (-1)^(n+1) T r^(n-1) sin(2 n phi),     T = t^2
//! ```
//!
//! for a round-trip phase `delta = pi`. Other round-trip phases multiply the
//! `n`-th order by `e^{i n (delta - pi)}`; any reflection phase of the mirror
//! is taken to be part of `delta`. At `phi = +-(2m+1) pi / 2` every order
//! arrives in phase and the sum approaches `E0 (1 + r)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::grid::SweepGrid;
use crate::interferometer::{ccd_matrix, PhaseSetting};
use crate::optics::{apply, TwoPortField};
use crate::summation::CompensatedComplexSum;

pub const DEFAULT_MAX_ORDER: usize = 5000;
pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_DELTA: f64 = PI;

/// Classical Sagnac phase resolution, a quarter wavelength.
pub const CLASSICAL_RESOLUTION: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityParams {
    r: f64,
    t: f64,
    delta: f64,
    max_order: usize,
    epsilon: f64,
}

impl CavityParams {
    pub fn new(r: f64, delta: f64, max_order: usize, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(domain(format!("reflectance r must lie in [0, 1), got {r}")));
        }
        if !delta.is_finite() {
            return Err(domain(format!(
                "round-trip phase must be finite, got {delta}"
            )));
        }
        if max_order < 1 {
            return Err(usage("max_order must be at least 1"));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(domain(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        Ok(Self {
            r,
            t: (1.0 - r * r).sqrt(),
            delta,
            max_order,
            epsilon,
        })
    }

    /// `delta = pi`, default order cap and truncation threshold.
    pub fn with_reflectance(r: f64) -> Result<Self> {
        Self::new(r, DEFAULT_DELTA, DEFAULT_MAX_ORDER, DEFAULT_EPSILON)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.r, delta, self.max_order, self.epsilon)
    }

    pub fn with_max_order(self, max_order: usize) -> Result<Self> {
        Self::new(self.r, self.delta, max_order, self.epsilon)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(self.r, self.delta, self.max_order, epsilon)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Power transmittance `T = t^2 = 1 - r^2`.
    pub fn transmittance(&self) -> f64 {
        1.0 - self.r * self.r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn envelope(&self, n: usize) -> f64 {
        self.r.powf((n - 1) as f64)
    }
}

/// Fields leaked at ports A and B after `order` round trips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderedField {
    pub order: usize,
    pub e_a: Complex64,
    pub e_b: Complex64,
}

fn alternating_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn ordered_field(n: usize, phi: f64, params: &CavityParams) -> Result<OrderedField> {
    if n < 1 {
        return Err(usage("cavity order starts at 1"));
    }
    Ok(ordered_field_unchecked(n, phi, params))
}

#[inline]
fn ordered_field_unchecked(n: usize, phi: f64, params: &CavityParams) -> OrderedField {
    let weight = alternating_sign(n) * params.transmittance() * params.envelope(n);
    let (s, c) = (2.0 * n as f64 * phi).sin_cos();
    let (mut e_a, mut e_b) = (
        Complex64::new(weight * c, 0.0),
        Complex64::new(-weight * s, 0.0),
    );
    if params.delta != PI {
        let extra = Complex64::cis(n as f64 * (params.delta - PI));
        e_a *= extra;
        e_b *= extra;
    }
    OrderedField { order: n, e_a, e_b }
}

/// Smallest `n` with `r^(n-1) < epsilon`, capped at `max_order`.
pub fn effective_order(params: &CavityParams) -> usize {
    let uncapped = if params.r == 0.0 {
        2
    } else {
        let guess = (params.epsilon.ln() / params.r.ln()).floor();
        let mut n = if guess.is_finite() && guess >= 0.0 {
            guess as usize + 2
        } else {
            2
        };
        while n > 1 && params.envelope(n - 1) < params.epsilon {
            n -= 1;
        }
        while params.envelope(n) >= params.epsilon {
            n += 1;
        }
        n
    };
    uncapped.min(params.max_order)
}

/// Coherent sum of the leaked orders `1..=effective_order`, in ascending order
/// with compensated accumulation.
pub fn amplitude_sum(phi: f64, params: &CavityParams) -> TwoPortField {
    let orders = effective_order(params);
    let mut a = CompensatedComplexSum::new();
    let mut b = CompensatedComplexSum::new();
    for n in 1..=orders {
        let f = ordered_field_unchecked(n, phi, params);
        a.add(f.e_a);
        b.add(f.e_b);
    }
    TwoPortField::new(a.value(), b.value())
}

/// Finesse `pi r / (1 - r^2)`.
pub fn finesse(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("finesse needs r in [0, 1), got {r}")));
    }
    Ok(PI * r / (1.0 - r * r))
}

/// Width at which a sweep still resolves the principal peak,
/// `(pi/2) / (2 N_eff)`.
pub fn fwhm_estimate(params: &CavityParams) -> f64 {
    CLASSICAL_RESOLUTION / (2.0 * effective_order(params) as f64)
}

/// Closed-form `(1/pi) int_0^pi (I_A + I_B) dphi = (1 - r^2)(1 - r^(2 N_eff))`.
pub fn mean_output_intensity(params: &CavityParams) -> f64 {
    let n = effective_order(params) as f64;
    params.transmittance() * (1.0 - params.r.powf(2.0 * n))
}

/// Phases `+-(2m+1) pi / (2n)` at which order `n` reaches its extremum,
/// sorted ascending.
pub fn constructive_phases(m_range: RangeInclusive<u32>, n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(usage("cavity order starts at 1"));
    }
    let mut out: Vec<f64> = m_range
        .flat_map(|m| {
            let x = (2 * m + 1) as f64 * PI / (2 * n) as f64;
            [-x, x]
        })
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Phases `+-m pi / n` where neighbouring orders cancel pairwise.
pub fn destructive_phases(m: u32, n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(usage("cavity order starts at 1"));
    }
    let x = m as f64 * PI / n as f64;
    Ok(if m == 0 { vec![0.0] } else { vec![-x, x] })
}

/// Per-order output obtained by propagating the field through the cavity one
/// round trip at a time: transmission into the cavity, the antiphase CCD-MZI,
/// the round-trip phase, then out-coupling of a `t` fraction and reflection of
/// the remainder.
pub fn roundtrip_oracle(phi: f64, params: &CavityParams) -> Result<Vec<OrderedField>> {
    let trip = ccd_matrix(&PhaseSetting::antiphase(phi)?).scale(Complex64::cis(params.delta));
    let t = Complex64::new(params.t, 0.0);
    let r = Complex64::new(params.r, 0.0);
    let mut inside = TwoPortField::unit_upper().scale(t);
    let orders = effective_order(params);
    let mut out = Vec::with_capacity(orders);
    for n in 1..=orders {
        inside = apply(&trip, inside);
        let leaked = inside.scale(t);
        out.push(OrderedField {
            order: n,
            e_a: leaked.a,
            e_b: leaked.b,
        });
        inside = inside.scale(r);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityRow {
    pub phi: f64,
    pub i_a: f64,
    pub i_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CavityTable {
    pub params: CavityParams,
    pub grid: SweepGrid,
    pub effective_order: usize,
    pub fwhm_estimate: f64,
    /// False when the grid spacing exceeds a tenth of `fwhm_estimate`.
    pub grid_adequate: bool,
    pub rows: Vec<CavityRow>,
}

impl CavityTable {
    pub fn phis(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.phi).collect()
    }

    pub fn i_a(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.i_a).collect()
    }

    pub fn i_b(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.i_b).collect()
    }
}

pub fn intensity_sweep(grid: SweepGrid, params: &CavityParams) -> CavityTable {
    let rows = (0..grid.steps())
        .into_par_iter()
        .map(|i| {
            let phi = grid.point(i);
            let f = amplitude_sum(phi, params);
            CavityRow {
                phi,
                i_a: f.intensity_upper(),
                i_b: f.intensity_lower(),
            }
        })
        .collect();
    let estimate = fwhm_estimate(params);
    CavityTable {
        params: *params,
        grid,
        effective_order: effective_order(params),
        fwhm_estimate: estimate,
        grid_adequate: grid.spacing() <= estimate / 10.0,
        rows,
    }
}
