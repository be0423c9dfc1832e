//! Block D (a single Mach-Zehnder stage) and the cross-coupled double MZI.
//!
//! Block D is `[BS][Theta][BS]` with `Theta = diag(e^{i psi}, e^{i phi})`.
//! Block D' swaps the phase placement, `theta' = diag(e^{i phi}, e^{i psi})`,
//! and the CCD-MZI is D followed by D'. Both blocks are evaluated from their
//! closed-form matrices; the numeric products built from [`crate::optics`]
//! are kept as independent oracles in the tests.
//!
//! The closed form used for the CCD-MZI,
//! `e^{i(phi+psi)} [[cos(phi-psi), sin(phi-psi)], [-sin(phi-psi), cos(phi-psi)]]`,
//! equals the literal six-matrix product times the global phase `-1`.
//! Intensities are unaffected.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::grid::SweepGrid;
use crate::optics::{apply, imaginary_unit, TransferMatrix, TwoPortField};

/// How `psi` is tied to `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    Independent,
    /// `psi = -phi`, the counter-propagating Sagnac configuration.
    Antiphase,
    /// `psi = 0`, the single-phase classical reference.
    PsiZero,
}

/// A pair of phase-shifter settings. Constructors enforce the mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSetting {
    phi: f64,
    psi: f64,
    mode: PhaseMode,
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain(format!("{name} must be finite, got {v}")))
    }
}

impl PhaseSetting {
    pub fn independent(phi: f64, psi: f64) -> Result<Self> {
        Ok(Self {
            phi: finite("phi", phi)?,
            psi: finite("psi", psi)?,
            mode: PhaseMode::Independent,
        })
    }

    pub fn antiphase(phi: f64) -> Result<Self> {
        let phi = finite("phi", phi)?;
        Ok(Self {
            phi,
            psi: -phi,
            mode: PhaseMode::Antiphase,
        })
    }

    pub fn psi_zero(phi: f64) -> Result<Self> {
        Ok(Self {
            phi: finite("phi", phi)?,
            psi: 0.0,
            mode: PhaseMode::PsiZero,
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn mode(&self) -> PhaseMode {
        self.mode
    }

    fn difference(&self) -> f64 {
        self.phi - self.psi
    }
}

/// Output field of a lossless block plus its port intensities (units of I0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockOutput {
    pub field: TwoPortField,
    pub i_upper: f64,
    pub i_lower: f64,
}

impl BlockOutput {
    fn from_field(field: TwoPortField) -> Self {
        Self {
            field,
            i_upper: field.intensity_upper(),
            i_lower: field.intensity_lower(),
        }
    }
}

/// `(1/2) e^{i psi} [[1 - w, i(1 + w)], [i(1 + w), -(1 - w)]]`, `w = e^{i(phi - psi)}`.
pub fn block_d_matrix(p: &PhaseSetting) -> TransferMatrix {
    let i = imaginary_unit();
    let w = Complex64::cis(p.difference());
    let pre = Complex64::cis(p.psi) * 0.5;
    let one = Complex64::new(1.0, 0.0);
    TransferMatrix::new(
        pre * (one - w),
        pre * i * (one + w),
        pre * i * (one + w),
        -pre * (one - w),
    )
}

pub fn ccd_matrix(p: &PhaseSetting) -> TransferMatrix {
    let pre = Complex64::cis(p.phi + p.psi);
    let (s, c) = p.difference().sin_cos();
    TransferMatrix::new(pre * c, pre * s, -pre * s, pre * c)
}

pub fn block_d_output(p: &PhaseSetting, input: TwoPortField) -> Result<BlockOutput> {
    check_input(input)?;
    Ok(BlockOutput::from_field(apply(&block_d_matrix(p), input)))
}

/// `(sin^2((phi-psi)/2), cos^2((phi-psi)/2))` for unit upper-port input.
pub fn block_d_intensities(p: &PhaseSetting) -> (f64, f64) {
    let (s, c) = (0.5 * p.difference()).sin_cos();
    (s * s, c * c)
}

pub fn ccd_output(p: &PhaseSetting, input: TwoPortField) -> Result<BlockOutput> {
    check_input(input)?;
    Ok(BlockOutput::from_field(apply(&ccd_matrix(p), input)))
}

/// `(cos^2(phi-psi), sin^2(phi-psi))` for unit upper-port input.
pub fn ccd_intensities(p: &PhaseSetting) -> (f64, f64) {
    let (s, c) = p.difference().sin_cos();
    (c * c, s * s)
}

fn check_input(input: TwoPortField) -> Result<()> {
    if input.is_finite() {
        Ok(())
    } else {
        Err(domain("input field must be finite"))
    }
}

/// Normalized two-port intensity product `I_upper * I_lower / I0^2`.
///
/// Zero exactly where all light leaves by one port, i.e. at the
/// anticorrelation points; at most `1/4` for a lossless block with unit input.
pub fn g2_metric(i_upper: f64, i_lower: f64) -> Result<f64> {
    if !(i_upper >= 0.0 && i_lower >= 0.0) || !i_upper.is_finite() || !i_lower.is_finite() {
        return Err(domain(format!(
            "intensities must be finite and non-negative, got ({i_upper}, {i_lower})"
        )));
    }
    Ok(i_upper * i_lower)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    BlockD,
    Ccd,
}

/// How a one-dimensional sweep over `phi` chooses `psi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Antiphase,
    PsiZero,
    FixedPsi(f64),
}

impl SweepMode {
    pub fn setting(&self, phi: f64) -> Result<PhaseSetting> {
        match *self {
            SweepMode::Antiphase => PhaseSetting::antiphase(phi),
            SweepMode::PsiZero => PhaseSetting::psi_zero(phi),
            SweepMode::FixedPsi(psi) => PhaseSetting::independent(phi, psi),
        }
    }
}

impl System {
    pub fn intensities(&self, p: &PhaseSetting) -> (f64, f64) {
        match self {
            System::BlockD => block_d_intensities(p),
            System::Ccd => ccd_intensities(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub phi: f64,
    pub i_upper: f64,
    pub i_lower: f64,
    pub g2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub system: System,
    pub mode: SweepMode,
    pub grid: SweepGrid,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn phis(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.phi).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.i_upper).collect()
    }

    pub fn lower(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.i_lower).collect()
    }

    pub fn g2(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.g2).collect()
    }
}

pub fn sweep_1d(system: System, mode: SweepMode, grid: SweepGrid) -> Result<SweepTable> {
    let rows = (0..grid.steps())
        .into_par_iter()
        .map(|i| {
            let phi = grid.point(i);
            let (i_upper, i_lower) = system.intensities(&mode.setting(phi)?);
            Ok(SweepRow {
                phi,
                i_upper,
                i_lower,
                g2: g2_metric(i_upper, i_lower)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        system,
        mode,
        grid,
        rows,
    })
}

/// Upper-port intensity over the `(phi, psi)` plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep2d {
    pub system: System,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    /// Row-major: entry `i * psi.len() + j` is at `(phi[i], psi[j])`.
    pub i_upper: Vec<f64>,
}

impl Sweep2d {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.i_upper[i * self.psi.len() + j]
    }
}

pub fn sweep_2d(system: System, phi_grid: SweepGrid, psi_grid: SweepGrid) -> Result<Sweep2d> {
    let phi = phi_grid.points();
    let psi = psi_grid.points();
    let i_upper = phi
        .par_iter()
        .map(|&f| {
            psi.iter()
                .map(|&s| Ok(system.intensities(&PhaseSetting::independent(f, s)?).0))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Sweep2d {
        system,
        phi,
        psi,
        i_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{beam_splitter, compose, phase_stage, TOLERANCE};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn unit() -> TwoPortField {
        TwoPortField::unit_upper()
    }

    #[test]
    fn block_d_examples() {
        let out = block_d_output(&PhaseSetting::independent(0.0, 0.0).unwrap(), unit()).unwrap();
        assert!(out.field.a.norm() < TOLERANCE);
        assert!((out.field.b - Complex64::new(0.0, 1.0)).norm() < TOLERANCE);
        assert!(out.i_upper.abs() < TOLERANCE && (out.i_lower - 1.0).abs() < TOLERANCE);

        let out = block_d_output(&PhaseSetting::antiphase(FRAC_PI_2).unwrap(), unit()).unwrap();
        assert!((out.i_upper - 1.0).abs() < TOLERANCE && out.i_lower.abs() < TOLERANCE);

        let out = block_d_output(&PhaseSetting::antiphase(FRAC_PI_4).unwrap(), unit()).unwrap();
        assert!((out.i_upper - 0.5).abs() < TOLERANCE && (out.i_lower - 0.5).abs() < TOLERANCE);
    }

    #[test]
    fn block_d_intensity_examples() {
        let (a, b) = block_d_intensities(&PhaseSetting::antiphase(FRAC_PI_2).unwrap());
        assert!((a - 1.0).abs() < TOLERANCE && b.abs() < TOLERANCE);
        for &phi in &[-2.0, -0.3, 0.0, 0.9, 2.5] {
            let p0 = block_d_intensities(&PhaseSetting::psi_zero(phi).unwrap()).0;
            let p1 = block_d_intensities(&PhaseSetting::psi_zero(phi + 2.0 * PI).unwrap()).0;
            assert!((p0 - p1).abs() < TOLERANCE);
            let a0 = block_d_intensities(&PhaseSetting::antiphase(phi).unwrap()).0;
            let a1 = block_d_intensities(&PhaseSetting::antiphase(phi + PI).unwrap()).0;
            assert!((a0 - a1).abs() < TOLERANCE);
        }
        // The classical reference does not repeat after pi.
        let c0 = block_d_intensities(&PhaseSetting::psi_zero(0.5).unwrap()).0;
        let c1 = block_d_intensities(&PhaseSetting::psi_zero(0.5 + PI).unwrap()).0;
        assert!((c0 - c1).abs() > 0.1);
    }

    #[test]
    fn ccd_examples() {
        let out = ccd_output(&PhaseSetting::independent(0.0, 0.0).unwrap(), unit()).unwrap();
        assert!((out.field.a - Complex64::new(1.0, 0.0)).norm() < TOLERANCE);
        assert!(out.field.b.norm() < TOLERANCE);

        let out = ccd_output(&PhaseSetting::antiphase(FRAC_PI_4).unwrap(), unit()).unwrap();
        assert!(out.i_upper.abs() < TOLERANCE && (out.i_lower - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn non_finite_inputs_are_rejected() {
        assert!(PhaseSetting::antiphase(f64::NAN).is_err());
        assert!(PhaseSetting::independent(0.0, f64::INFINITY).is_err());
        let bad = TwoPortField::new(Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0));
        assert!(ccd_output(&PhaseSetting::antiphase(0.1).unwrap(), bad).is_err());
        assert!(block_d_output(&PhaseSetting::antiphase(0.1).unwrap(), bad).is_err());
    }

    #[test]
    fn mode_constructors_enforce_psi() {
        let p = PhaseSetting::antiphase(0.7).unwrap();
        assert_eq!(p.psi(), -0.7);
        assert_eq!(p.mode(), PhaseMode::Antiphase);
        assert_eq!(PhaseSetting::psi_zero(0.7).unwrap().psi(), 0.0);
    }

    #[test]
    fn g2_examples_and_errors() {
        for m in -4..=4 {
            let p = PhaseSetting::antiphase(m as f64 * FRAC_PI_2).unwrap();
            let (a, b) = block_d_intensities(&p);
            assert!(g2_metric(a, b).unwrap() < 1e-24, "m = {m}");
        }
        for &phi in &[0.1, 0.4, 1.3, -2.2] {
            let (a, b) = ccd_intensities(&PhaseSetting::antiphase(phi).unwrap());
            let expected = (4.0 * phi).sin().powi(2) / 4.0;
            assert!((g2_metric(a, b).unwrap() - expected).abs() < TOLERANCE);
        }
        assert!(matches!(g2_metric(-0.1, 0.5), Err(crate::Error::Domain(_))));
        assert!(g2_metric(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn sweeps_are_consistent() {
        let grid = SweepGrid::new(-PI, PI, 41).unwrap();
        let d1 = sweep_1d(System::BlockD, SweepMode::Antiphase, grid).unwrap();
        let d2 = sweep_2d(System::BlockD, grid, SweepGrid::new(-PI, PI, 41).unwrap()).unwrap();
        // psi = -phi is the anti-diagonal of the (phi, psi) plane on a symmetric grid.
        for i in 0..41 {
            assert!((d2.at(i, 40 - i) - d1.rows[i].i_upper).abs() < TOLERANCE);
        }
        assert_eq!(d2.i_upper.len(), 41 * 41);

        // CCD with psi = 0 is cos^2(phi).
        let c0 = sweep_1d(System::Ccd, SweepMode::PsiZero, grid).unwrap();
        for row in &c0.rows {
            assert!((row.i_upper - row.phi.cos().powi(2)).abs() < TOLERANCE);
        }
        let fixed = sweep_1d(System::Ccd, SweepMode::FixedPsi(0.0), grid).unwrap();
        assert_eq!(fixed.upper(), c0.upper());
    }

    #[test]
    fn ccd_antiphase_has_twice_block_d_frequency() {
        for &phi in &[0.1, 0.7, 1.9] {
            let d = block_d_intensities(&PhaseSetting::antiphase(phi).unwrap()).0;
            let d_half_step =
                block_d_intensities(&PhaseSetting::antiphase(phi + FRAC_PI_2).unwrap()).0;
            let c = ccd_intensities(&PhaseSetting::antiphase(phi).unwrap()).0;
            let c_half_step = ccd_intensities(&PhaseSetting::antiphase(phi + FRAC_PI_2).unwrap()).0;
            assert!((c - c_half_step).abs() < TOLERANCE);
            assert!((d - d_half_step).abs() > 1e-3);
        }
    }

    fn block_d_product(p: &PhaseSetting) -> TransferMatrix {
        let bs = beam_splitter();
        compose(&[bs, phase_stage(p.psi(), p.phi()).unwrap(), bs]).unwrap()
    }

    fn ccd_product(p: &PhaseSetting) -> TransferMatrix {
        let bs = beam_splitter();
        let theta = phase_stage(p.psi(), p.phi()).unwrap();
        let theta_prime = phase_stage(p.phi(), p.psi()).unwrap();
        compose(&[bs, theta, bs, bs, theta_prime, bs]).unwrap()
    }

    fn phase() -> impl Strategy<Value = f64> {
        -2.0 * PI..2.0 * PI
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn block_d_closed_form_matches_product(phi in phase(), psi in phase()) {
            let p = PhaseSetting::independent(phi, psi).unwrap();
            prop_assert!(block_d_matrix(&p).max_abs_diff(&block_d_product(&p)) < TOLERANCE);
        }

        #[test]
        fn ccd_closed_form_matches_product_up_to_sign(phi in phase(), psi in phase()) {
            let p = PhaseSetting::independent(phi, psi).unwrap();
            let flipped = ccd_product(&p).scale(Complex64::new(-1.0, 0.0));
            prop_assert!(ccd_matrix(&p).max_abs_diff(&flipped) < TOLERANCE);
            let a = ccd_output(&p, unit()).unwrap();
            let b = apply(&ccd_product(&p), unit());
            prop_assert!((a.i_upper - b.intensity_upper()).abs() < TOLERANCE);
            prop_assert!((a.i_lower - b.intensity_lower()).abs() < TOLERANCE);
        }

        #[test]
        fn intensities_match_amplitudes(phi in phase(), psi in phase()) {
            let p = PhaseSetting::independent(phi, psi).unwrap();
            let d = block_d_output(&p, unit()).unwrap();
            let (ia, ib) = block_d_intensities(&p);
            prop_assert!((d.i_upper - ia).abs() < TOLERANCE && (d.i_lower - ib).abs() < TOLERANCE);
            prop_assert!((d.i_upper + d.i_lower - 1.0).abs() < TOLERANCE);
            let c = ccd_output(&p, unit()).unwrap();
            let (ca, cb) = ccd_intensities(&p);
            prop_assert!((c.i_upper - ca).abs() < TOLERANCE && (c.i_lower - cb).abs() < TOLERANCE);
            prop_assert!((c.i_upper + c.i_lower - 1.0).abs() < TOLERANCE);
        }

        #[test]
        fn antiphase_intensities_are_even(phi in phase()) {
            let plus = PhaseSetting::antiphase(phi).unwrap();
            let minus = PhaseSetting::antiphase(-phi).unwrap();
            prop_assert!((block_d_intensities(&plus).0 - block_d_intensities(&minus).0).abs() < TOLERANCE);
            prop_assert!((ccd_intensities(&plus).0 - ccd_intensities(&minus).0).abs() < TOLERANCE);
        }
    }
}
