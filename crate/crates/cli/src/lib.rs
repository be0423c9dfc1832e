//! Command-line front end for `pbsi-core`: parameter sweeps, Sagnac
//! numbers, figure presets and fringe analysis of saved tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::run;
pub use config::{Command, Format, ModeSpec, Overrides, RunConfig, OUTPUT_DIR_ENV};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "pbsi",
    version,
    about = "Cavity Sagnac interferometer sweeps and analysis"
)]
pub struct Cli {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Single Mach-Zehnder block: port intensities and g2 versus phi.
    SweepMzi(Overrides),
    /// Cross-coupled double Mach-Zehnder: port intensities and g2 versus phi.
    SweepCcd(Overrides),
    /// Cavity output intensities versus phi, with a fringe summary.
    SweepCavity(Overrides),
    /// Sagnac delay, phase and minimum detectable rotation.
    Sagnac(Overrides),
    /// Peaks, FWHM, period and enhancement of one column of a saved table.
    Analyze(Overrides),
    /// Single-block fringe figure (panels a, b, c).
    Fig2(Overrides),
    /// Double-block fringe figure (panels a, b, c).
    Fig3(Overrides),
    /// Cavity figure (panels b through h).
    Fig4(Overrides),
}

impl CliCommand {
    pub fn split(self) -> (Command, Overrides) {
        match self {
            CliCommand::SweepMzi(o) => (Command::SweepMzi, o),
            CliCommand::SweepCcd(o) => (Command::SweepCcd, o),
            CliCommand::SweepCavity(o) => (Command::SweepCavity, o),
            CliCommand::Sagnac(o) => (Command::Sagnac, o),
            CliCommand::Analyze(o) => (Command::Analyze, o),
            CliCommand::Fig2(o) => (Command::Fig2, o),
            CliCommand::Fig3(o) => (Command::Fig3, o),
            CliCommand::Fig4(o) => (Command::Fig4, o),
        }
    }
}

/// Resolves the layered configuration for a parsed command line.
pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file = cli
        .config
        .as_deref()
        .map(Overrides::from_config_file)
        .transpose()?;
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    let (command, flags) = cli.command.split();
    RunConfig::resolve(command, flags, file, env_dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("pbsi").chain(args.iter().copied()))
            .map_err(|e| error::usage(e.to_string()))?;
        resolve(cli)
    }

    fn out_dir(dir: &tempfile::TempDir) -> String {
        dir.path().to_str().unwrap().to_string()
    }

    #[test]
    fn sweep_ccd_example_layout() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("ccd.csv");
        let cfg = parse(&[
            "sweep-ccd",
            "--mode",
            "antiphase",
            "--start",
            "0",
            "--end",
            "3.14159265",
            "--steps",
            "1001",
            "--out",
            out.to_str().unwrap(),
        ])
        .unwrap();
        run(&cfg).unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("phi,i_a,i_b,g2"));
        assert_eq!(lines.count(), 1001);
    }

    #[test]
    fn negative_bounds_and_fixed_psi_parse() {
        let cfg = parse(&["sweep-mzi", "--start", "-3", "--mode", "psi=-0.5"]).unwrap();
        assert_eq!(cfg.grid.start, -3.0);
        assert_eq!(cfg.mode.to_string(), "psi=-0.5");
    }

    #[test]
    fn usage_errors_exit_with_one() {
        for args in [
            &["sweep-ccd", "--steps", "1"][..],
            &["sweep-cavity", "--r", "1.5"],
            &["sagnac", "--mode", "antiphase"],
            &["fig4", "--panel", "a"],
            &["sweep-ccd", "--mode", "diagonal"],
            &["analyze"],
        ] {
            assert_eq!(parse(args).unwrap_err().exit_code(), 1, "{args:?}");
        }
        let err = parse(&["sagnac", "--area", "-1", "--out", "-"])
            .and_then(|cfg| run(&cfg))
            .unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn config_file_sits_between_flags_and_presets() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# sweep\nsteps = 11\nend = 1.0\n").unwrap();
        let cfg = parse(&[
            "sweep-mzi",
            "--config",
            path.to_str().unwrap(),
            "--steps",
            "21",
        ])
        .unwrap();
        assert_eq!((cfg.grid.steps, cfg.grid.end), (21, 1.0));
        assert_eq!(cfg.grid.start, -2.0 * std::f64::consts::PI);
    }

    #[test]
    fn cavity_sweep_round_trips_through_analyze() {
        let dir = tempfile::tempdir().unwrap();
        let d = out_dir(&dir);
        run(&parse(&["sweep-cavity", "--r", "0.99", "--out-dir", &d]).unwrap()).unwrap();
        let csv = dir.path().join("sweep-cavity.csv");
        let summary: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(dir.path().join("sweep-cavity.summary.json")).unwrap(),
        )
        .unwrap();
        run(&parse(&["analyze", "--input", csv.to_str().unwrap(), "--out-dir", &d]).unwrap())
            .unwrap();
        let analyzed: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("analyze.json")).unwrap())
                .unwrap();
        assert_eq!(summary["schema_version"], 1);
        assert!(summary["results"]["report"]["fwhm"].is_f64());
        assert_eq!(summary["results"]["report"], analyzed["results"]["report"]);
    }

    #[test]
    fn unresolved_analysis_exits_with_two() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("ramp.csv");
        fs::write(&input, "phi,i_a\n0.0,0.0\n1.0,0.6\n2.0,1.0\n3.0,0.9\n").unwrap();
        let err = parse(&["analyze", "--input", input.to_str().unwrap(), "--out", "-"])
            .and_then(|cfg| run(&cfg))
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn fringe_presets_write_panels_and_are_deterministic() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for dir in [&a, &b] {
            let written =
                run(&parse(&["fig3", "--steps", "801", "--out-dir", &out_dir(dir)]).unwrap())
                    .unwrap();
            assert_eq!(written.len(), 4);
        }
        for name in [
            "fig3_a.csv",
            "fig3_b.csv",
            "fig3_c.csv",
            "fig3_summary.json",
        ] {
            assert_eq!(
                fs::read(a.path().join(name)).unwrap(),
                fs::read(b.path().join(name)).unwrap(),
                "{name}"
            );
        }
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(a.path().join("fig3_summary.json")).unwrap())
                .unwrap();
        let ratio = summary["results"]["panels"]["b"]["g2"]["lambda_b_ratio"]
            .as_f64()
            .unwrap();
        assert!((ratio - 8.0).abs() < 1e-2, "{ratio}");
        assert_eq!(summary["results"]["panels"]["a"]["rows"], 201 * 201);
    }

    #[test]
    fn single_cavity_panel() {
        let dir = tempfile::tempdir().unwrap();
        run(&parse(&["fig4", "--panel", "f", "--out-dir", &out_dir(&dir)]).unwrap()).unwrap();
        let summary: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(dir.path().join("fig4_summary.json")).unwrap(),
        )
        .unwrap();
        let peak = summary["results"]["panels"]["f"]["peak_intensity"]
            .as_f64()
            .unwrap();
        assert!((3.9..=4.0).contains(&peak), "{peak}");
        assert_eq!(
            summary["results"]["panels"]["f"]["sidebands"]
                .as_array()
                .unwrap()
                .len(),
            2
        );
        assert!(!dir.path().join("fig4_g.csv").exists());
    }

    #[test]
    fn sagnac_json_keys() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.json");
        let cfg = parse(&[
            "sagnac",
            "--area",
            "1",
            "--wavelength",
            "633e-9",
            "--rotation-rate",
            "7.292e-5",
            "--out",
            out.to_str().unwrap(),
        ])
        .unwrap();
        run(&cfg).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        let dt = v["results"]["delta_t"].as_f64().unwrap();
        let dphi = v["results"]["delta_phi"].as_f64().unwrap();
        assert!((dt / 3.245e-21 - 1.0).abs() < 1e-3);
        assert!((dphi / 9.66e-6 - 1.0).abs() < 1e-2);
    }
}
