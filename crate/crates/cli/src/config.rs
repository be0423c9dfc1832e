//! Run configuration and its three layers: command-line flags override a
//! flat `key = value` config file, which overrides the command's preset
//! defaults.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use pbsi_core::cavity::{DEFAULT_DELTA, DEFAULT_EPSILON, DEFAULT_MAX_ORDER};
use pbsi_core::interferometer::SweepMode;
use pbsi_core::sagnac::EARTH_ROTATION_RATE;
use serde::Serialize;

use crate::error::{usage, CliError};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PBSI_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SweepMzi,
    SweepCcd,
    SweepCavity,
    Sagnac,
    Analyze,
    Fig2,
    Fig3,
    Fig4,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SweepMzi => "sweep-mzi",
            Command::SweepCcd => "sweep-ccd",
            Command::SweepCavity => "sweep-cavity",
            Command::Sagnac => "sagnac",
            Command::Analyze => "analyze",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
        }
    }

    fn allowed(&self) -> &'static [&'static str] {
        const OUT: [&str; 2] = ["out", "out-dir"];
        match self {
            Command::SweepMzi | Command::SweepCcd => {
                &["start", "end", "steps", "mode", "format", OUT[0], OUT[1]]
            }
            Command::SweepCavity => &[
                "start",
                "end",
                "steps",
                "r",
                "delta",
                "max-order",
                "epsilon",
                "format",
                OUT[0],
                OUT[1],
            ],
            Command::Sagnac => &[
                "area",
                "wavelength",
                "rotation-rate",
                "phase-resolution",
                "order",
                OUT[0],
                OUT[1],
            ],
            Command::Analyze => &["input", "column", "min-height", OUT[0], OUT[1]],
            Command::Fig2 | Command::Fig3 => &["steps", "panel", OUT[1]],
            Command::Fig4 => &["panel", OUT[1]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// `antiphase`, `psi-zero` or `psi=<radians>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec(pub SweepMode);

impl FromStr for ModeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "antiphase" => Ok(ModeSpec(SweepMode::Antiphase)),
            "psi-zero" => Ok(ModeSpec(SweepMode::PsiZero)),
            other => other
                .strip_prefix("psi=")
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .map(|v| ModeSpec(SweepMode::FixedPsi(v)))
                .ok_or_else(|| {
                    format!("unknown mode '{other}' (expected antiphase, psi-zero or psi=<value>)")
                }),
        }
    }
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SweepMode::Antiphase => write!(f, "antiphase"),
            SweepMode::PsiZero => write!(f, "psi-zero"),
            SweepMode::FixedPsi(v) => write!(f, "psi={v:?}"),
        }
    }
}

/// Every settable key. Unset fields fall through to the next layer.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// First phase of the sweep grid, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    /// Last phase of the sweep grid, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub end: Option<f64>,
    /// Number of grid points (at least 2).
    #[arg(long)]
    pub steps: Option<usize>,
    /// `antiphase`, `psi-zero` or `psi=<radians>`.
    #[arg(long)]
    pub mode: Option<ModeSpec>,
    /// Mirror amplitude reflectance, [0, 1).
    #[arg(long)]
    pub r: Option<f64>,
    /// Round-trip phase, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Highest cavity order summed.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Orders with r^(n-1) below this are dropped.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Sagnac loop area, m^2.
    #[arg(long)]
    pub area: Option<f64>,
    /// Optical wavelength, m.
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Rotation rate, rad/s (positive is counter-clockwise).
    #[arg(long, allow_negative_numbers = true)]
    pub rotation_rate: Option<f64>,
    /// Phase resolution to convert into a rotation rate, radians.
    #[arg(long)]
    pub phase_resolution: Option<f64>,
    /// Effective cavity order used for the cavity phase resolution.
    #[arg(long)]
    pub order: Option<usize>,
    /// Table to analyze (CSV with a header row).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Column of the input table to analyze.
    #[arg(long)]
    pub column: Option<String>,
    /// Lowest peak height reported, units of I0.
    #[arg(long)]
    pub min_height: Option<f64>,
    /// Preset panel (letter) or `all`.
    #[arg(long)]
    pub panel: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file, `-` for standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for default-named outputs.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

macro_rules! layer {
    ($top:expr, $bottom:expr, $($field:ident),*) => {
        Overrides { $($field: $top.$field.or($bottom.$field)),* }
    };
}

impl Overrides {
    /// Field-wise `self` over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        layer!(
            self,
            lower,
            start,
            end,
            steps,
            mode,
            r,
            delta,
            max_order,
            epsilon,
            area,
            wavelength,
            rotation_rate,
            phase_resolution,
            order,
            input,
            column,
            min_height,
            panel,
            format,
            out,
            out_dir
        )
    }

    fn keys_set(&self) -> Vec<&'static str> {
        let flags = [
            ("start", self.start.is_some()),
            ("end", self.end.is_some()),
            ("steps", self.steps.is_some()),
            ("mode", self.mode.is_some()),
            ("r", self.r.is_some()),
            ("delta", self.delta.is_some()),
            ("max-order", self.max_order.is_some()),
            ("epsilon", self.epsilon.is_some()),
            ("area", self.area.is_some()),
            ("wavelength", self.wavelength.is_some()),
            ("rotation-rate", self.rotation_rate.is_some()),
            ("phase-resolution", self.phase_resolution.is_some()),
            ("order", self.order.is_some()),
            ("input", self.input.is_some()),
            ("column", self.column.is_some()),
            ("min-height", self.min_height.is_some()),
            ("panel", self.panel.is_some()),
            ("format", self.format.is_some()),
            ("out", self.out.is_some()),
            ("out-dir", self.out_dir.is_some()),
        ];
        flags
            .into_iter()
            .filter(|(_, set)| *set)
            .map(|(k, _)| k)
            .collect()
    }

    /// Parses a flat `key = value` file; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Overrides, CliError> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| {
                    usage(format!("config line {}: expected key = value", lineno + 1))
                })?;
            o.set(key, value)
                .map_err(|e| usage(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(o)
    }

    pub fn from_config_file(path: &Path) -> Result<Overrides, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_config_text(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            value
                .parse::<T>()
                .map_err(|e| format!("invalid value '{value}' for {key}: {e}"))
        }
        match key {
            "start" => self.start = Some(parse(key, value)?),
            "end" => self.end = Some(parse(key, value)?),
            "steps" => self.steps = Some(parse(key, value)?),
            "mode" => self.mode = Some(parse(key, value)?),
            "r" => self.r = Some(parse(key, value)?),
            "delta" => self.delta = Some(parse(key, value)?),
            "max-order" => self.max_order = Some(parse(key, value)?),
            "epsilon" => self.epsilon = Some(parse(key, value)?),
            "area" => self.area = Some(parse(key, value)?),
            "wavelength" => self.wavelength = Some(parse(key, value)?),
            "rotation-rate" => self.rotation_rate = Some(parse(key, value)?),
            "phase-resolution" => self.phase_resolution = Some(parse(key, value)?),
            "order" => self.order = Some(parse(key, value)?),
            "input" => self.input = Some(PathBuf::from(value)),
            "column" => self.column = Some(value.to_string()),
            "min-height" => self.min_height = Some(parse(key, value)?),
            "panel" => self.panel = Some(value.to_string()),
            "format" => self.format = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "out-dir" => self.out_dir = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityConfig {
    pub r: f64,
    pub delta: f64,
    pub max_order: usize,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryConfig {
    pub area: f64,
    pub wavelength: f64,
    pub rotation_rate: f64,
    pub phase_resolution: Option<f64>,
    pub order: Option<usize>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridConfig,
    pub mode: ModeSpec,
    pub cavity: CavityConfig,
    pub geometry: GeometryConfig,
    pub input: Option<PathBuf>,
    pub column: String,
    pub min_height: Option<f64>,
    pub panel: String,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub out_dir: PathBuf,
}

/// Half-width of the default cavity window around the pi/2 peak.
pub const CAVITY_WINDOW: f64 = 5e-3;

fn preset(command: Command) -> Overrides {
    let fringe_grid = Overrides {
        start: Some(-2.0 * PI),
        end: Some(2.0 * PI),
        steps: Some(4001),
        ..Default::default()
    };
    match command {
        Command::SweepMzi | Command::SweepCcd | Command::Fig2 | Command::Fig3 => fringe_grid,
        Command::SweepCavity | Command::Fig4 => Overrides {
            start: Some(FRAC_PI_2 - CAVITY_WINDOW),
            end: Some(FRAC_PI_2 + CAVITY_WINDOW),
            steps: Some(2001),
            ..Default::default()
        },
        Command::Sagnac | Command::Analyze => Overrides::default(),
    }
}

impl RunConfig {
    /// Layers `flags` over `file` over the command's preset; `env_out_dir`
    /// replaces the built-in default output directory.
    pub fn resolve(
        command: Command,
        flags: Overrides,
        file: Option<Overrides>,
        env_out_dir: Option<PathBuf>,
    ) -> Result<RunConfig, CliError> {
        let allowed = command.allowed();
        for layer in std::iter::once(&flags).chain(file.as_ref()) {
            if let Some(bad) = layer.keys_set().into_iter().find(|k| !allowed.contains(k)) {
                return Err(usage(format!(
                    "--{bad} is not valid for {}",
                    command.name()
                )));
            }
        }
        let o = flags.over(file.unwrap_or_default()).over(preset(command));

        let grid = GridConfig {
            start: o.start.unwrap_or(0.0),
            end: o.end.unwrap_or(PI),
            steps: o.steps.unwrap_or(1001),
        };
        if grid.steps < 2 {
            return Err(usage(format!(
                "--steps must be at least 2, got {}",
                grid.steps
            )));
        }
        let cavity = CavityConfig {
            r: o.r.unwrap_or(0.999),
            delta: o.delta.unwrap_or(DEFAULT_DELTA),
            max_order: o.max_order.unwrap_or(DEFAULT_MAX_ORDER),
            epsilon: o.epsilon.unwrap_or(DEFAULT_EPSILON),
        };
        if !(0.0..1.0).contains(&cavity.r) {
            return Err(usage(format!("--r must lie in [0, 1), got {}", cavity.r)));
        }
        let panel = o.panel.unwrap_or_else(|| "all".to_string());
        let panels: &[&str] = match command {
            Command::Fig2 | Command::Fig3 => &["all", "a", "b", "c"],
            Command::Fig4 => &["all", "b", "c", "d", "e", "f", "g", "h"],
            _ => &["all"],
        };
        if !panels.contains(&panel.as_str()) {
            return Err(usage(format!(
                "unknown panel '{panel}' for {} (expected one of {})",
                command.name(),
                panels.join(", ")
            )));
        }
        if command == Command::Analyze && o.input.is_none() {
            return Err(usage("analyze needs --input"));
        }
        Ok(RunConfig {
            command,
            grid,
            mode: o.mode.unwrap_or(ModeSpec(SweepMode::Antiphase)),
            cavity,
            geometry: GeometryConfig {
                area: o.area.unwrap_or(1.0),
                wavelength: o.wavelength.unwrap_or(633e-9),
                rotation_rate: o.rotation_rate.unwrap_or(EARTH_ROTATION_RATE),
                phase_resolution: o.phase_resolution,
                order: o.order,
            },
            input: o.input,
            column: o.column.unwrap_or_else(|| "i_a".to_string()),
            min_height: o.min_height,
            panel,
            format: o.format.unwrap_or(Format::Csv),
            out: o.out,
            out_dir: o
                .out_dir
                .or(env_out_dir)
                .unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    /// Where a single-file command writes, `None` meaning standard output.
    pub fn output_path(&self, extension: &str) -> Option<PathBuf> {
        match &self.out {
            Some(p) if p.as_os_str() == "-" => None,
            Some(p) => Some(p.clone()),
            None => Some(
                self.out_dir
                    .join(format!("{}.{extension}", self.command.name())),
            ),
        }
    }

    pub fn wants_panel(&self, panel: &str) -> bool {
        self.panel == "all" || self.panel == panel
    }
}
