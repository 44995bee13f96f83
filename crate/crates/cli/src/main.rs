//! `sgn`: closure queries, regime classification, traveling-wave profiles,
//! PDE experiments, limit studies and the summary table.

mod config;
mod error;
mod experiments;
mod fmt;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::config::{ClassifyCfg, ClosureBatch, ClosureCfg, LimitCfg, ProfileCfg, SimulateCfg, TableCfg};
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "sgn", version, about = "Dissipative SGN traveling waves and dam-break experiments")]
struct Cli {
    /// JSON config for the command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for sweeps (defaults to the number of cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Accept speeds that fail the Lax check.
    #[arg(long, global = true)]
    allow_nonlax: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Inline values that override the config file.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    zeta_l: Option<f64>,
    #[arg(long)]
    w_l: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

impl Overrides {
    fn into_map(self) -> Map<String, Value> {
        [
            ("zeta_l", self.zeta_l),
            ("w_l", self.w_l),
            ("s", self.s),
            ("eps", self.eps),
            ("delta", self.delta),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), Value::from(v))))
        .collect()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Right state, jump constants and admissibility for one or many closures.
    Closure(Overrides),
    /// Damping, threshold and regime of the reduced ODE.
    Classify(Overrides),
    /// Traveling-wave profile files.
    Profile {
        #[command(flatten)]
        params: Overrides,
    },
    /// PDE runs with snapshots and a manifest.
    Simulate {
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Error functional between dissipative and non-dissipative runs.
    CompareEps {
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Oscillation widths of traveling waves as dispersion shrinks.
    LimitStudy,
    /// Summary table of characteristic values.
    Table(Overrides),
}

fn emit(out: Option<&Path>, name: &str, format: Format, report: &Value, rows: &[Value], columns: &[&str]) -> CliResult<()> {
    let text = match format {
        Format::Json => fmt::to_json(report),
        Format::Csv => {
            let mut buf = Vec::new();
            fmt::write_csv(&mut buf, columns, rows)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
    };
    match out {
        Some(dir) => {
            experiments::ensure_dir(dir)?;
            let ext = if format == Format::Json { "json" } else { "csv" };
            experiments::write_text(&dir.join(format!("{name}.{ext}")), &text)
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("writing stdout", e)),
    }
}

fn required_out(out: Option<&Path>) -> CliResult<&Path> {
    out.ok_or_else(|| CliError::Usage("this command writes files and needs --out <dir>".into()))
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let cfg_path = cli.config.as_deref();
    let out = cli.out.as_deref();
    let nonlax = cli.allow_nonlax;
    match cli.command {
        Command::Closure(ov) => {
            let value = config::load(cfg_path, ov.into_map())?;
            if value.get("closures").is_some() {
                let batch: ClosureBatch = config::parse(value, config::CLOSURE_BATCH)?;
                let mut reports = Vec::new();
                for (k, c) in batch.closures.iter().enumerate() {
                    let r = report::closure_report(c, nonlax).map_err(|e| match e {
                        CliError::Numerical(inner) => CliError::Numerical(sgn_core::Error::InvalidParameter {
                            name: "closures",
                            reason: format!("entry {k}: {inner}"),
                        }),
                        other => other,
                    })?;
                    reports.push(r);
                }
                let rows: Vec<Value> = reports.iter().map(report::closure_row).collect();
                emit(out, "closures", cli.format, &Value::Array(reports), &rows, report::CLOSURE_COLUMNS)
            } else {
                let cfg: ClosureCfg = config::parse(value, config::CLOSURE)?;
                let r = report::closure_report(&cfg, nonlax)?;
                let rows = [report::closure_row(&r)];
                emit(out, "closure", cli.format, &r, &rows, report::CLOSURE_COLUMNS)
            }
        }
        Command::Classify(ov) => {
            let cfg: ClassifyCfg = config::parse(config::load(cfg_path, ov.into_map())?, config::CLASSIFY)?;
            let r = report::classify_report(&cfg, nonlax)?;
            let row = serde_json::json!({
                "c": r["c"], "c_squared": r["c_squared"], "threshold_c2": r["threshold_c2"],
                "regime": r["regime"], "zeta_r": r["zeta_r"], "zeta_c": r["zeta_c"], "zeta_bar": r["zeta_bar"],
            });
            let cols = ["c", "c_squared", "threshold_c2", "regime", "zeta_r", "zeta_c", "zeta_bar"];
            emit(out, "classify", cli.format, &r, &[row], &cols)
        }
        Command::Profile { params } => {
            let out = required_out(out)?;
            let cfg: ProfileCfg = config::parse(config::load(cfg_path, params.into_map())?, config::PROFILE)?;
            experiments::cmd_profile(&cfg, nonlax, out).map(|_| ())
        }
        Command::Simulate { delta, eps } => {
            let out = required_out(out)?;
            let ov = Overrides {
                delta,
                eps,
                ..Overrides::default()
            };
            let cfg: SimulateCfg = config::parse(config::load(cfg_path, ov.into_map())?, config::SIMULATE)?;
            experiments::cmd_simulate(&cfg, nonlax, out).map(|_| ())
        }
        Command::CompareEps { delta } => {
            let ov = Overrides {
                delta,
                ..Overrides::default()
            };
            let cfg: SimulateCfg = config::parse(config::load(cfg_path, ov.into_map())?, config::SIMULATE)?;
            let rows = experiments::cmd_compare_eps(&cfg, nonlax)?;
            let report = serde_json::json!({"config": cfg, "rows": rows});
            emit(out, "compare_eps", cli.format, &report, &rows, experiments::COMPARE_COLUMNS)
        }
        Command::LimitStudy => {
            let cfg: LimitCfg = config::parse(config::load(cfg_path, Map::new())?, config::LIMIT)?;
            let rows = experiments::cmd_limit_study(&cfg, nonlax)?;
            let report = serde_json::json!({"config": cfg, "rows": rows});
            emit(out, "limit_study", cli.format, &report, &rows, experiments::LIMIT_COLUMNS)
        }
        Command::Table(ov) => {
            let cfg: TableCfg = config::parse(config::load(cfg_path, ov.into_map())?, config::TABLE)?;
            let r = report::table_report(&cfg, nonlax)?;
            emit(out, "table", cli.format, &r, &[r["row"].clone()], report::TABLE_COLUMNS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", fmt::to_json(&e.to_json()));
            ExitCode::from(e.exit_code())
        }
    }
}
