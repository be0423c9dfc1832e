//! Single-table commands: sweeps, the Sagnac calculator and `analyze`.

use std::path::PathBuf;

use pbsi_core::analysis::{enhancement_report, enhancement_report_with, FringeReport, Series};
use pbsi_core::cavity::{
    finesse, intensity_sweep, CavityParams, CavityTable, CLASSICAL_RESOLUTION,
};
use pbsi_core::interferometer::{sweep_1d, SweepTable, System};
use pbsi_core::sagnac::{
    min_detectable_rotation, pbsi_resolution, per_arm_phase, sagnac_phase, sagnac_time_delay,
    SagnacGeometry,
};
use pbsi_core::SweepGrid;
use serde::Serialize;

use crate::config::{CavityConfig, Command, Format, GeometryConfig, GridConfig, RunConfig};
use crate::error::{usage, CliError};
use crate::output::{emit, summary_path, to_json, Table};

pub fn grid(g: &GridConfig) -> Result<SweepGrid, CliError> {
    Ok(SweepGrid::new(g.start, g.end, g.steps)?)
}

pub fn cavity_params(c: &CavityConfig) -> Result<CavityParams, CliError> {
    Ok(CavityParams::new(c.r, c.delta, c.max_order, c.epsilon)?)
}

pub fn sweep_table(t: &SweepTable) -> Table {
    let mut out = Table::new(["phi", "i_a", "i_b", "g2"]);
    for r in &t.rows {
        out.push(vec![r.phi, r.i_upper, r.i_lower, r.g2]);
    }
    out
}

pub fn cavity_table(t: &CavityTable) -> Table {
    let mut out = Table::new(["phi", "i_a", "i_b"]);
    for r in &t.rows {
        out.push(vec![r.phi, r.i_a, r.i_b]);
    }
    out
}

#[derive(Debug, Serialize)]
struct SweepConfigView<'a> {
    command: &'a str,
    mode: String,
    grid: GridConfig,
}

#[derive(Debug, Serialize)]
struct CavityConfigView<'a> {
    command: &'a str,
    cavity: CavityConfig,
    grid: GridConfig,
}

/// Everything derived from a cavity sweep besides the table itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CavitySummary {
    pub effective_order: usize,
    pub finesse: f64,
    pub fwhm_estimate: f64,
    /// Cavity phase resolution `(pi/2) / (2 N_eff)`.
    pub predicted_resolution: f64,
    pub grid_adequate: bool,
    pub report: Option<FringeReport>,
    pub report_error: Option<String>,
}

pub fn cavity_summary(t: &CavityTable) -> Result<CavitySummary, CliError> {
    let series = Series::new(t.phis(), t.i_a())?;
    let (report, report_error) = match enhancement_report(&series) {
        Ok(r) => (Some(r), None),
        Err(e @ pbsi_core::Error::Unresolved(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    Ok(CavitySummary {
        effective_order: t.effective_order,
        finesse: finesse(t.params.r())?,
        fwhm_estimate: t.fwhm_estimate,
        predicted_resolution: pbsi_resolution(CLASSICAL_RESOLUTION, t.effective_order)?,
        grid_adequate: t.grid_adequate && report.as_ref().is_none_or(|r| r.grid_adequate),
        report,
        report_error,
    })
}

pub fn warn_if_coarse(grid_adequate: bool, what: &str) {
    if !grid_adequate {
        eprintln!("warning: {what}: grid spacing exceeds a tenth of the expected peak width");
    }
}

fn sweep(cfg: &RunConfig, system: System) -> Result<Vec<PathBuf>, CliError> {
    let table = sweep_table(&sweep_1d(system, cfg.mode.0, grid(&cfg.grid)?)?);
    let text = match cfg.format {
        Format::Csv => table.to_csv()?,
        Format::Json => to_json(
            &SweepConfigView {
                command: cfg.command.name(),
                mode: cfg.mode.to_string(),
                grid: cfg.grid,
            },
            &table,
        )?,
    };
    Ok(vec![emit(
        cfg.output_path(cfg.format.extension()).as_deref(),
        &text,
    )?])
}

#[derive(Debug, Serialize)]
struct CavityJson<'a> {
    #[serde(flatten)]
    summary: &'a CavitySummary,
    table: &'a Table,
}

fn sweep_cavity(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let params = cavity_params(&cfg.cavity)?;
    let sweep = intensity_sweep(grid(&cfg.grid)?, &params);
    let summary = cavity_summary(&sweep)?;
    warn_if_coarse(summary.grid_adequate, "sweep-cavity");
    let table = cavity_table(&sweep);
    let view = CavityConfigView {
        command: cfg.command.name(),
        cavity: cfg.cavity,
        grid: cfg.grid,
    };
    let path = cfg.output_path(cfg.format.extension());
    match cfg.format {
        Format::Json => {
            let text = to_json(
                &view,
                &CavityJson {
                    summary: &summary,
                    table: &table,
                },
            )?;
            Ok(vec![emit(path.as_deref(), &text)?])
        }
        Format::Csv => {
            let mut written = vec![emit(path.as_deref(), &table.to_csv()?)?];
            if let Some(p) = path {
                written.push(emit(Some(&summary_path(&p)), &to_json(&view, &summary)?)?);
            }
            Ok(written)
        }
    }
}

#[derive(Debug, Serialize)]
struct SagnacConfigView<'a> {
    command: &'a str,
    geometry: GeometryConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SagnacResults {
    pub delta_t: f64,
    pub delta_phi: f64,
    pub per_arm_phase: f64,
    pub min_detectable_rotation: Option<f64>,
    pub cavity_phase_resolution: Option<f64>,
    pub cavity_min_detectable_rotation: Option<f64>,
}

pub fn sagnac_results(g: &GeometryConfig) -> Result<SagnacResults, CliError> {
    let geometry = SagnacGeometry::new(g.area, g.wavelength, g.rotation_rate)?;
    let cavity_resolution = g
        .order
        .map(|n| pbsi_resolution(CLASSICAL_RESOLUTION, n))
        .transpose()?;
    Ok(SagnacResults {
        delta_t: sagnac_time_delay(&geometry),
        delta_phi: sagnac_phase(&geometry),
        per_arm_phase: per_arm_phase(&geometry),
        min_detectable_rotation: g
            .phase_resolution
            .map(|res| min_detectable_rotation(&geometry, res))
            .transpose()?,
        cavity_phase_resolution: cavity_resolution,
        cavity_min_detectable_rotation: cavity_resolution
            .map(|res| min_detectable_rotation(&geometry, res))
            .transpose()?,
    })
}

fn sagnac(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let results = sagnac_results(&cfg.geometry)?;
    let view = SagnacConfigView {
        command: cfg.command.name(),
        geometry: cfg.geometry,
    };
    Ok(vec![emit(
        cfg.output_path("json").as_deref(),
        &to_json(&view, &results)?,
    )?])
}

#[derive(Debug, Serialize)]
struct AnalyzeConfigView<'a> {
    command: &'a str,
    input: String,
    column: &'a str,
    min_height: Option<f64>,
}

#[derive(Debug, Serialize)]
struct AnalyzeResults<'a> {
    report: &'a FringeReport,
}

/// Reads `phi` and `column` from a CSV table with a header row.
pub fn read_series(text: &str, column: &str) -> Result<Series, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| usage(format!("input has no '{name}' column")))
    };
    let (phi_idx, value_idx) = (find("phi")?, find(column)?);
    let mut phi = Vec::new();
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let cell = |idx: usize| -> Result<f64, CliError> {
            let raw = record.get(idx).unwrap_or("").trim();
            raw.parse::<f64>()
                .map_err(|_| usage(format!("row {}: '{raw}' is not a number", line + 1)))
        };
        phi.push(cell(phi_idx)?);
        values.push(cell(value_idx)?);
    }
    Ok(Series::new(phi, values)?)
}

pub fn analyze_text(
    text: &str,
    column: &str,
    min_height: Option<f64>,
) -> Result<FringeReport, CliError> {
    let series = read_series(text, column)?;
    Ok(match min_height {
        Some(h) => enhancement_report_with(&series, h)?,
        None => enhancement_report(&series)?,
    })
}

fn analyze(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| usage("analyze needs --input"))?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| usage(format!("cannot read {}: {e}", input.display())))?;
    let report = analyze_text(&text, &cfg.column, cfg.min_height)?;
    warn_if_coarse(report.grid_adequate, "analyze");
    let view = AnalyzeConfigView {
        command: cfg.command.name(),
        input: input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        column: &cfg.column,
        min_height: cfg.min_height,
    };
    let text = to_json(&view, &AnalyzeResults { report: &report })?;
    Ok(vec![emit(cfg.output_path("json").as_deref(), &text)?])
}

/// Runs one resolved invocation and returns the destinations written.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match cfg.command {
        Command::SweepMzi => sweep(cfg, System::BlockD),
        Command::SweepCcd => sweep(cfg, System::Ccd),
        Command::SweepCavity => sweep_cavity(cfg),
        Command::Sagnac => sagnac(cfg),
        Command::Analyze => analyze(cfg),
        Command::Fig2 => crate::presets::fringe_figure(cfg, System::BlockD),
        Command::Fig3 => crate::presets::fringe_figure(cfg, System::Ccd),
        Command::Fig4 => crate::presets::cavity_figure(cfg),
    }
}
