use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use magnomech::checks::run_checks;
use magnomech::config::RunConfig;
use magnomech::dynamics::Mat6;
use magnomech::figures::{compute_figure, FigureData, FigureId};
use magnomech::output::{render, write_table, Format};
use magnomech::sweep::{run_sweep, to_table, SweepRow, SweepSpec};
use magnomech::{Error, Result};

#[derive(Parser)]
#[command(
    name = "magnomech",
    version,
    about = "Steady-state entanglement sweeps for a cavity magnomechanical system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sweep points (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a TOML or JSON config.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every drift and diffusion matrix as JSON.
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
    /// Reproduce a built-in figure: fig2, fig3a, fig3b, fig4, fig5a, fig5b, fig6.
    Figure {
        id: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Output directory, one file per dataset.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
    /// Run the built-in invariant checks.
    Check,
}

fn matrix_json(m: &Mat6) -> Value {
    Value::Array(
        (0..6)
            .map(|i| json!((0..6).map(|j| m[(i, j)]).collect::<Vec<_>>()))
            .collect(),
    )
}

fn dump_rows(dataset: Option<&str>, spec: &SweepSpec, rows: &[SweepRow]) -> Vec<Value> {
    rows.iter()
        .map(|r| {
            let (a, d) = r.point.matrices();
            let axes: serde_json::Map<String, Value> = spec
                .axes
                .iter()
                .zip(&r.axis_values)
                .map(|(ax, v)| (ax.axis.name().to_string(), json!(v)))
                .collect();
            let mut obj = json!({
                "axes": axes,
                "stable": r.stable,
                "max_real_part": r.point.verdict.max_real_part,
                "A": matrix_json(a),
                "D": matrix_json(d),
            });
            if let Some(name) = dataset {
                obj["dataset"] = json!(name);
            }
            obj
        })
        .collect()
}

fn write_dump(path: &Path, entries: Vec<Value>) -> Result<()> {
    let text = serde_json::to_string_pretty(&Value::Array(entries)).expect("JSON values serialize");
    fs::write(path, text + "\n").map_err(|e| Error::Io {
        path: path.into(),
        source: e,
    })
}

fn sweep(config: &Path, format: Format, out: Option<&Path>, dump: Option<&Path>) -> Result<()> {
    let cfg = RunConfig::from_path(config)?;
    let spec = cfg
        .sweep
        .ok_or_else(|| Error::Config(format!("{} has no [sweep] section", config.display())))?;
    let rows = run_sweep(&spec, &cfg.params, cfg.drive.as_ref())?;
    let table = to_table(&spec, &rows);
    match out {
        Some(path) => write_table(&table, format, path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(render(&table, format).as_bytes())
                .map_err(|e| Error::Io {
                    path: "<stdout>".into(),
                    source: e,
                })?;
        }
    }
    if let Some(path) = dump {
        write_dump(path, dump_rows(None, &spec, &rows))?;
    }
    Ok(())
}

fn figure(id: &str, format: Format, out: &Path, dump: Option<&Path>) -> Result<()> {
    let id = FigureId::from_name(id)?;
    let data: Vec<FigureData> = compute_figure(id)?;
    for fd in &data {
        let path = out.join(format!("{}.{}", fd.dataset.name, format.extension()));
        write_table(&to_table(&fd.dataset.spec, &fd.rows), format, &path)?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(path) = dump {
        let entries = data
            .iter()
            .flat_map(|fd| dump_rows(Some(&fd.dataset.name), &fd.dataset.spec, &fd.rows))
            .collect();
        write_dump(path, entries)?;
    }
    Ok(())
}

fn check() -> ExitCode {
    let outcomes = run_checks();
    for c in &outcomes {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if outcomes.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Sweep {
            config,
            format,
            out,
            dump_matrices,
        } => sweep(
            config,
            (*format).into(),
            out.as_deref(),
            dump_matrices.as_deref(),
        ),
        Command::Figure {
            id,
            format,
            out,
            dump_matrices,
        } => figure(id, (*format).into(), out, dump_matrices.as_deref()),
        Command::Check => return check(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
