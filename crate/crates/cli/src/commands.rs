//! Subcommand dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use squo_core::{factorization_field, find_factorization, point, sweep, ScanResult};

use crate::config::{split_overrides, Format, RunConfig};
use crate::error::CliError;
use crate::figures::{column_name, Preset};
use crate::output::{candidates_json, float_json, format_float, scan_json, write_csv, write_table, CsvRow};

/// Ground-state entanglement and single-qubit excitation energies of
/// anisotropic spin-1/2 chains.
///
/// Any configuration field can be overridden with a dotted flag, for
/// example `--model.delta_y 0.4` or `--scan.steps=101`.
#[derive(Debug, Parser)]
#[command(name = "squo", version)]
pub struct Cli {
    /// JSON configuration file applied on top of the defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single field `model.h`.
    Point,
    /// Sweep the field over `[scan.h_min, scan.h_max]`.
    Sweep,
    /// Locate the factorizing field inside `[scan.h_min, scan.h_max]`.
    Factorize,
    /// Regenerate the data behind a figure (fig1a ... fig4b).
    Figures { preset: String },
}

/// Outcome of parsing the command line.
pub enum Parsed {
    Run(Cli, Vec<(String, String)>),
    /// Help or version text, to be printed as is.
    Info(String),
}

pub fn parse(args: Vec<String>) -> Result<Parsed, CliError> {
    let (rest, overrides) = split_overrides(args)?;
    match Cli::try_parse_from(rest) {
        Ok(cli) => Ok(Parsed::Run(cli, overrides)),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp
            | clap::error::ErrorKind::DisplayVersion
            | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                Ok(Parsed::Info(e.render().to_string()))
            }
            _ => Err(CliError::Validation {
                field: None,
                message: e.render().to_string().trim().to_string(),
            }),
        },
    }
}

pub fn run(cli: &Cli, overrides: &[(String, String)], out: &mut dyn Write) -> Result<(), CliError> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Point => run_point(&RunConfig::load(&RunConfig::default(), config, overrides)?, out),
        Command::Sweep => run_sweep(&RunConfig::load(&RunConfig::default(), config, overrides)?, out),
        Command::Factorize => run_factorize(&RunConfig::load(&RunConfig::default(), config, overrides)?, out),
        Command::Figures { preset } => {
            let preset: Preset = preset.parse()?;
            let cfg = RunConfig::load(&preset.base_config(), config, overrides)?;
            run_figures(preset, &cfg, out)
        }
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Encode(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| CliError::Encode(e.to_string()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn json_bytes(value: &Value) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Encode(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(rows: &[CsvRow]) -> Result<Vec<u8>, CliError> {
    let mut bytes = Vec::new();
    write_csv(&mut bytes, rows)?;
    Ok(bytes)
}

fn run_point(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let row = CsvRow::from(&point(&cfg.model, &cfg.solver, &cfg.tolerances)?);
    if let Some(path) = &cfg.output.path {
        let bytes = match cfg.output.format {
            Format::Csv => csv_bytes(&[row])?,
            Format::Json => json_bytes(&row.to_json())?,
        };
        write_file(path, &bytes)?;
    }
    print_json(out, &row.to_json())
}

fn run_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    if cfg.scan.steps < 2 {
        return Err(CliError::validation(
            "scan.steps",
            format!("scan.steps: a sweep needs at least 2 points, got {}", cfg.scan.steps),
        ));
    }
    let result = sweep(&cfg.model, &cfg.scan, &cfg.solver, &cfg.tolerances)?;
    let rows: Vec<CsvRow> = result.rows.iter().map(CsvRow::from).collect();
    let bytes = match cfg.output.format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&scan_json(&result))?,
    };
    match &cfg.output.path {
        Some(path) => {
            write_file(path, &bytes)?;
            let mut summary = summary_json(&result);
            summary["rows"] = json!(rows.len());
            summary["path"] = json!(path.display().to_string());
            print_json(out, &summary)
        }
        None => out.write_all(&bytes).map_err(|e| CliError::Encode(e.to_string())),
    }
}

fn summary_json(result: &ScanResult) -> Value {
    json!({
        "h_f_detected": result.h_f_detected,
        "h_f_formula": result.h_f_formula,
        "critical_candidates": candidates_json(&result.critical_candidates),
    })
}

fn run_factorize(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let bracket = (cfg.scan.h_min, cfg.scan.h_max);
    let h_f = find_factorization(&cfg.model, bracket, cfg.scan.tol_h, &cfg.solver, &cfg.tolerances)?;
    let formula = factorization_field(cfg.model.delta_y, cfg.model.delta_z);
    let report = json!({
        "h_f_detected": h_f,
        "h_f_formula": formula,
        "difference": (h_f - formula).abs(),
        "bracket": [bracket.0, bracket.1],
        "n_sites": cfg.model.n_sites,
    });
    if let Some(path) = &cfg.output.path {
        write_file(path, &json_bytes(&report)?)?;
    }
    print_json(out, &report)
}

const FIGURE_NOTE: &str = "Finite chain with periodic boundaries. Curves reproduce the \
thermodynamic-limit results qualitatively; near critical fields the finite-size values are \
smoothed and shifted.";

fn run_figures(preset: Preset, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    if cfg.scan.steps < 2 {
        return Err(CliError::validation(
            "scan.steps",
            format!("scan.steps: a figure needs at least 2 points, got {}", cfg.scan.steps),
        ));
    }
    let dir = cfg.output.path.clone().unwrap_or_else(|| PathBuf::from("figures"));
    let result = sweep(&cfg.model, &cfg.scan, &cfg.solver, &cfg.tolerances)?;

    let columns = preset.columns();
    let mut header = vec!["h"];
    header.extend(columns.iter().map(|&c| column_name(c)));
    let records = result.rows.iter().map(|row| {
        let mut fields = vec![format_float(row.h)];
        fields.extend(columns.iter().map(|&c| format_float(row.get(c))));
        fields
    });
    let mut table = Vec::new();
    write_table(&mut table, &header, records)?;

    let data_path = dir.join(format!("{preset}.csv"));
    let meta_path = dir.join(format!("{preset}.json"));
    let meta = json!({
        "preset": preset.name(),
        "model": preset.model_label(),
        "n_sites": cfg.model.n_sites,
        "delta_y": cfg.model.delta_y,
        "delta_z": cfg.model.delta_z,
        "boundary": cfg.model.boundary,
        "h_min": cfg.scan.h_min,
        "h_max": cfg.scan.h_max,
        "steps": cfg.scan.steps,
        "columns": header,
        "data": data_path.file_name().map(|n| n.to_string_lossy().into_owned()),
        "h_f_detected": result.h_f_detected,
        "h_f_formula": float_json(result.h_f_formula),
        "critical_candidates": candidates_json(&result.critical_candidates),
        "note": FIGURE_NOTE,
    });
    write_file(&data_path, &table)?;
    write_file(&meta_path, &json_bytes(&meta)?)?;
    print_json(
        out,
        &json!({
            "preset": preset.name(),
            "data": data_path.display().to_string(),
            "metadata": meta_path.display().to_string(),
            "rows": result.rows.len(),
        }),
    )
}
