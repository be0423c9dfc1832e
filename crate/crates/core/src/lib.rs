//! Transfer-matrix models of the cross-coupled double Mach-Zehnder
//! interferometer (CCD-MZI) and of its cavity Sagnac extension.
//!
//! * [`optics`]: complex 2x2 transfer matrices, beam splitter and phase stages.
//! * [`interferometer`]: block D, the full CCD-MZI, the `g2` product metric and sweeps.
//! * [`cavity`]: ordered cavity fields, their coherent sum, finesse and a
//!   round-trip oracle.
//! * [`sagnac`]: rotation rate to phase and back.
//! * [`analysis`]: peaks, FWHM, modulation period and resolution enhancement.
//!
//! All functions are pure; intensities are in units of the input intensity.

pub mod analysis;
pub mod cavity;
pub mod error;
pub mod grid;
pub mod interferometer;
pub mod optics;
pub mod sagnac;
pub mod summation;

pub use analysis::{
    enhancement_report, find_peaks, fwhm, modulation_period, FringeReport, Peak, Series,
};
pub use cavity::{
    amplitude_sum, effective_order, finesse, intensity_sweep, ordered_field, roundtrip_oracle,
    CavityParams, CavityTable, OrderedField,
};
pub use error::{Error, Result};
pub use grid::SweepGrid;
pub use interferometer::{
    block_d_output, ccd_output, g2_metric, sweep_1d, sweep_2d, BlockOutput, PhaseMode,
    PhaseSetting, SweepMode, SweepTable, System,
};
pub use num_complex::Complex64;
pub use optics::{apply, beam_splitter, compose, phase_stage, TransferMatrix, TwoPortField};
pub use sagnac::SagnacGeometry;
