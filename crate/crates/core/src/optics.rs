//! Two-port field amplitudes and 2x2 complex transfer matrices.
//!
//! Fields are column vectors `(upper, lower)`. A transfer matrix acts on a
//! field by the ordinary matrix-vector product, so a chain of optics
//! `M1 -> M2 -> M3` (in the order light meets them) has the total matrix
//! `M3 * M2 * M1`. [`compose`] takes the stages in physical order and performs
//! that reversal; `Mul` on [`TransferMatrix`] is the plain matrix product.
//!
//! Amplitudes are normalized to the input field `E0 = 1` unless a caller
//! supplies its own input, so intensities come out in units of `I0 = |E0|^2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, usage, Result};

/// Absolute tolerance for unitarity and equality checks on double precision.
pub const TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex amplitudes at the two ports of a stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPortField {
    /// Upper port (alpha after block D, A after the full CCD-MZI).
    pub a: Complex64,
    /// Lower port (beta or B).
    pub b: Complex64,
}

impl TwoPortField {
    pub const fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// Unit field entering the upper port only, `(E0, 0)` with `E0 = 1`.
    pub const fn unit_upper() -> Self {
        Self { a: ONE, b: ZERO }
    }

    pub fn intensity_upper(&self) -> f64 {
        self.a.norm_sqr()
    }

    pub fn intensity_lower(&self) -> f64 {
        self.b.norm_sqr()
    }

    pub fn total_intensity(&self) -> f64 {
        self.intensity_upper() + self.intensity_lower()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.a * factor, self.b * factor)
    }
}

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub m00: Complex64,
    pub m01: Complex64,
    pub m10: Complex64,
    pub m11: Complex64,
}

impl TransferMatrix {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self { m00, m01, m10, m11 }
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn determinant(&self) -> Complex64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m00.conj(),
            self.m10.conj(),
            self.m01.conj(),
            self.m11.conj(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(
            self.m00 * factor,
            self.m01 * factor,
            self.m10 * factor,
            self.m11 * factor,
        )
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.m00 - other.m00,
            self.m01 - other.m01,
            self.m10 - other.m10,
            self.m11 - other.m11,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }

    /// `M^dagger M = 1` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = *self;
        let mut acc = Self::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix::new(
            self.m00 * rhs.m00 + self.m01 * rhs.m10,
            self.m00 * rhs.m01 + self.m01 * rhs.m11,
            self.m10 * rhs.m00 + self.m11 * rhs.m10,
            self.m10 * rhs.m01 + self.m11 * rhs.m11,
        )
    }
}

impl Mul<TwoPortField> for TransferMatrix {
    type Output = TwoPortField;

    fn mul(self, f: TwoPortField) -> TwoPortField {
        apply(&self, f)
    }
}

/// Symmetric lossless 50/50 beam splitter, `(1/sqrt 2) [[1, i], [i, 1]]`.
pub fn beam_splitter() -> TransferMatrix {
    let d = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let x = Complex64::new(0.0, FRAC_1_SQRT_2);
    TransferMatrix::new(d, x, x, d)
}

/// Diagonal phase shifters, `diag(e^{i upper}, e^{i lower})`.
///
/// Block D uses `phase_stage(psi, phi)`, block D' the swapped
/// `phase_stage(phi, psi)`.
pub fn phase_stage(upper_phase: f64, lower_phase: f64) -> Result<TransferMatrix> {
    if !upper_phase.is_finite() || !lower_phase.is_finite() {
        return Err(domain(format!(
            "phase must be finite, got ({upper_phase}, {lower_phase})"
        )));
    }
    Ok(TransferMatrix::new(
        Complex64::cis(upper_phase),
        ZERO,
        ZERO,
        Complex64::cis(lower_phase),
    ))
}

/// Total matrix of `stages` listed in the order light traverses them.
pub fn compose(stages: &[TransferMatrix]) -> Result<TransferMatrix> {
    let (first, rest) = stages
        .split_first()
        .ok_or_else(|| usage("compose needs at least one stage"))?;
    Ok(rest.iter().fold(*first, |acc, m| *m * acc))
}

pub fn apply(m: &TransferMatrix, f: TwoPortField) -> TwoPortField {
    TwoPortField::new(m.m00 * f.a + m.m01 * f.b, m.m10 * f.a + m.m11 * f.b)
}

pub(crate) const fn imaginary_unit() -> Complex64 {
    I
}
