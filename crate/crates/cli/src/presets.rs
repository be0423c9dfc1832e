//! Figure presets: fixed grids and parameters that reproduce each panel.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use pbsi_core::analysis::{enhancement_report, find_peaks, FringeReport, Peak, Series};
use pbsi_core::cavity::{
    effective_order, intensity_sweep, ordered_field, CavityParams, CavityTable,
};
use pbsi_core::interferometer::{sweep_1d, sweep_2d, SweepMode, SweepTable, System};
use pbsi_core::SweepGrid;
use serde::Serialize;
use serde_json::Value;

use crate::commands::{
    cavity_params, cavity_summary, cavity_table, grid, sweep_table, warn_if_coarse, CavitySummary,
};
use crate::config::{CavityConfig, GridConfig, RunConfig, CAVITY_WINDOW};
use crate::error::CliError;
use crate::output::{emit, to_json, Table};

/// Points per axis of the two-dimensional panel.
pub const PLANE_STEPS: usize = 201;

struct Writer<'a> {
    cfg: &'a RunConfig,
    prefix: &'static str,
    written: Vec<PathBuf>,
    panels: BTreeMap<&'static str, Value>,
}

impl<'a> Writer<'a> {
    fn new(cfg: &'a RunConfig, prefix: &'static str) -> Self {
        Self {
            cfg,
            prefix,
            written: Vec::new(),
            panels: BTreeMap::new(),
        }
    }

    /// Writes `<prefix>_<panel>.csv` and records its summary entry.
    fn table<S: Serialize>(
        &mut self,
        panel: &'static str,
        table: &Table,
        summary: S,
    ) -> Result<(), CliError> {
        let name = format!("{}_{panel}.csv", self.prefix);
        self.written
            .push(emit(Some(&self.cfg.out_dir.join(&name)), &table.to_csv()?)?);
        let mut entry = serde_json::to_value(summary)?;
        if let Value::Object(map) = &mut entry {
            map.insert("file".into(), Value::String(name));
            map.insert("rows".into(), Value::from(table.rows.len()));
        }
        self.panels.insert(panel, entry);
        Ok(())
    }

    fn finish<C: Serialize>(mut self, config: &C) -> Result<Vec<PathBuf>, CliError> {
        #[derive(Serialize)]
        struct Results<'b> {
            panels: &'b BTreeMap<&'static str, Value>,
        }
        let path = self
            .cfg
            .out_dir
            .join(format!("{}_summary.json", self.prefix));
        let text = to_json(
            config,
            &Results {
                panels: &self.panels,
            },
        )?;
        self.written.push(emit(Some(&path), &text)?);
        Ok(self.written)
    }
}

#[derive(Debug, Serialize)]
struct FringeConfigView<'a> {
    command: &'a str,
    system: System,
    panel: &'a str,
    grid: GridConfig,
    plane_steps: usize,
}

#[derive(Debug, Serialize)]
struct FringePanel {
    mode: String,
    i_a: FringeReport,
    g2: FringeReport,
}

fn fringe_panel(t: &SweepTable, mode: &str) -> Result<FringePanel, CliError> {
    let phi = t.phis();
    Ok(FringePanel {
        mode: mode.to_string(),
        i_a: enhancement_report(&Series::new(phi.clone(), t.upper())?)?,
        g2: enhancement_report(&Series::new(phi, t.g2())?)?,
    })
}

/// Panel a: upper-port intensity over the `(phi, psi)` plane; b: antiphase
/// sweep; c: the single-phase reference.
pub fn fringe_figure(cfg: &RunConfig, system: System) -> Result<Vec<PathBuf>, CliError> {
    let prefix = match system {
        System::BlockD => "fig2",
        System::Ccd => "fig3",
    };
    let line = grid(&cfg.grid)?;
    let mut w = Writer::new(cfg, prefix);

    if cfg.wants_panel("a") {
        let axis = SweepGrid::new(-2.0 * PI, 2.0 * PI, PLANE_STEPS)?;
        let plane = sweep_2d(system, axis, axis)?;
        let mut t = Table::new(["phi", "psi", "i_upper"]);
        for (i, &phi) in plane.phi.iter().enumerate() {
            for (j, &psi) in plane.psi.iter().enumerate() {
                t.push(vec![phi, psi, plane.at(i, j)]);
            }
        }
        #[derive(Serialize)]
        struct PlanePanel {
            phi_steps: usize,
            psi_steps: usize,
        }
        w.table(
            "a",
            &t,
            PlanePanel {
                phi_steps: plane.phi.len(),
                psi_steps: plane.psi.len(),
            },
        )?;
    }
    for (panel, mode, label) in [
        ("b", SweepMode::Antiphase, "antiphase"),
        ("c", SweepMode::PsiZero, "psi-zero"),
    ] {
        if cfg.wants_panel(panel) {
            let sweep = sweep_1d(system, mode, line)?;
            let summary = fringe_panel(&sweep, label)?;
            w.table(panel, &sweep_table(&sweep), summary)?;
        }
    }
    w.finish(&FringeConfigView {
        command: cfg.command.name(),
        system,
        panel: &cfg.panel,
        grid: cfg.grid,
        plane_steps: PLANE_STEPS,
    })
}

/// Orders shown in the single-order panels.
pub const LOW_ORDERS: [usize; 3] = [1, 2, 3];
pub const SPREAD_ORDERS: [usize; 3] = [1, 10, 100];

/// Grids used by the cavity figure.
pub const ORDER_GRID: (f64, f64, usize) = (0.0, PI, 20001);
pub const BROAD_GRID: (f64, f64, usize) = (-PI, PI, 8001);
/// Low-finesse comparison panel.
pub const LOW_FINESSE: CavityConfig = CavityConfig {
    r: 0.9,
    delta: PI,
    max_order: 50,
    epsilon: 1e-6,
};
pub const LOW_FINESSE_WINDOW: f64 = 0.3;
/// Lower-port maxima above this height, units of I0, count as sidebands.
pub const SIDEBAND_FLOOR: f64 = 1e-3;

#[derive(Debug, Serialize)]
struct CavityFigureConfig<'a> {
    command: &'a str,
    panel: &'a str,
    cavity: CavityConfig,
    window: GridConfig,
    low_finesse: CavityConfig,
}

/// Summary of a windowed intensity panel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakPanel {
    pub peak_phi: Option<f64>,
    pub peak_intensity: Option<f64>,
    pub fwhm: Option<f64>,
    pub enhancement: Option<f64>,
    /// Lower-port maxima within three FWHM of the principal peak.
    pub sidebands: Vec<Peak>,
    #[serde(flatten)]
    pub cavity: CavitySummary,
}

fn peak_panel(t: &CavityTable) -> Result<PeakPanel, CliError> {
    let cavity = cavity_summary(t)?;
    let report = cavity.report.clone();
    let principal = report.as_ref().and_then(|r| r.principal);
    let sidebands = match principal {
        Some(top) => {
            let lower = Series::new(t.phis(), t.i_b())?;
            let reach = 3.0 * report.as_ref().and_then(|r| r.fwhm).unwrap_or(0.0);
            find_peaks(&lower, SIDEBAND_FLOOR)?
                .into_iter()
                .filter(|p| (p.phi - top.phi).abs() <= reach)
                .collect()
        }
        None => Vec::new(),
    };
    Ok(PeakPanel {
        peak_phi: principal.map(|p| p.phi),
        peak_intensity: principal.map(|p| p.height),
        fwhm: report.as_ref().and_then(|r| r.fwhm),
        enhancement: report.as_ref().and_then(|r| r.enhancement),
        sidebands,
        cavity,
    })
}

fn order_table(orders: &[usize], g: SweepGrid, params: &CavityParams) -> Result<Table, CliError> {
    let mut t = Table::new(
        std::iter::once("phi".to_string()).chain(orders.iter().map(|n| format!("e_a_{n}"))),
    );
    for phi in g.points() {
        let mut row = vec![phi];
        for &n in orders {
            row.push(ordered_field(n, phi, params)?.e_a.re);
        }
        t.push(row);
    }
    Ok(t)
}

#[derive(Debug, Serialize)]
struct OrdersPanel<'a> {
    orders: &'a [usize],
    component: &'static str,
}

/// Cavity figure. b, d: single orders of the upper-port field; c: every
/// order at `pi/2`; e: summed amplitudes near the principal peak; f: the
/// principal peak; g: a deliberately coarse full-period sweep; h: a
/// low-finesse cavity for comparison.
pub fn cavity_figure(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let params = cavity_params(&cfg.cavity)?;
    let window = grid(&cfg.grid)?;
    let mut w = Writer::new(cfg, "fig4");
    let (lo, hi, steps) = ORDER_GRID;
    let order_grid = SweepGrid::new(lo, hi, steps)?;

    for (panel, orders) in [("b", &LOW_ORDERS[..]), ("d", &SPREAD_ORDERS[..])] {
        if cfg.wants_panel(panel) {
            let t = order_table(orders, order_grid, &params)?;
            w.table(
                panel,
                &t,
                OrdersPanel {
                    orders,
                    component: "re",
                },
            )?;
        }
    }
    if cfg.wants_panel("c") {
        let n_eff = effective_order(&params);
        let mut t = Table::new(["n", "e_a_re", "e_a_im", "e_b_re", "e_b_im"]);
        for n in 1..=n_eff {
            let f = ordered_field(n, FRAC_PI_2, &params)?;
            t.push(vec![n as f64, f.e_a.re, f.e_a.im, f.e_b.re, f.e_b.im]);
        }
        #[derive(Serialize)]
        struct OrderList {
            phi: f64,
            effective_order: usize,
        }
        w.table(
            "c",
            &t,
            OrderList {
                phi: FRAC_PI_2,
                effective_order: n_eff,
            },
        )?;
    }
    if cfg.wants_panel("e") {
        let mut t = Table::new(["phi", "e_a_re", "e_a_im", "e_b_re", "e_b_im"]);
        for phi in window.points() {
            let f = pbsi_core::cavity::amplitude_sum(phi, &params);
            t.push(vec![phi, f.a.re, f.a.im, f.b.re, f.b.im]);
        }
        #[derive(Serialize)]
        struct Amplitudes {
            effective_order: usize,
        }
        w.table(
            "e",
            &t,
            Amplitudes {
                effective_order: effective_order(&params),
            },
        )?;
    }
    if cfg.wants_panel("f") {
        let sweep = intensity_sweep(window, &params);
        let summary = peak_panel(&sweep)?;
        warn_if_coarse(summary.cavity.grid_adequate, "fig4 panel f");
        w.table("f", &cavity_table(&sweep), summary)?;
    }
    if cfg.wants_panel("g") {
        let (lo, hi, steps) = BROAD_GRID;
        let sweep = intensity_sweep(SweepGrid::new(lo, hi, steps)?, &params);
        warn_if_coarse(sweep.grid_adequate, "fig4 panel g");
        #[derive(Serialize)]
        struct Broad {
            effective_order: usize,
            fwhm_estimate: f64,
            grid_adequate: bool,
            max_i_a: f64,
        }
        let summary = Broad {
            effective_order: sweep.effective_order,
            fwhm_estimate: sweep.fwhm_estimate,
            grid_adequate: sweep.grid_adequate,
            max_i_a: sweep.rows.iter().map(|r| r.i_a).fold(0.0, f64::max),
        };
        w.table("g", &cavity_table(&sweep), summary)?;
    }
    if cfg.wants_panel("h") {
        let low = cavity_params(&LOW_FINESSE)?;
        let g = SweepGrid::centered(FRAC_PI_2, LOW_FINESSE_WINDOW, window.steps())?;
        let sweep = intensity_sweep(g, &low);
        let summary = peak_panel(&sweep)?;
        w.table("h", &cavity_table(&sweep), summary)?;
    }
    w.finish(&CavityFigureConfig {
        command: cfg.command.name(),
        panel: &cfg.panel,
        cavity: cfg.cavity,
        window: GridConfig {
            start: FRAC_PI_2 - CAVITY_WINDOW,
            end: FRAC_PI_2 + CAVITY_WINDOW,
            steps: cfg.grid.steps,
        },
        low_finesse: LOW_FINESSE,
    })
}
