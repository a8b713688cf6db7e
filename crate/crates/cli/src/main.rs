// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oamwalk::io::{self, config::Format, config::Mode, OutputTarget};
use oamwalk::Error;

#[derive(Parser)]
#[command(name = "oamwalk", version, about = "Quantum walks in the OAM space of light")]
struct Cli {
    #[command(subcommand)]
    command: Command,
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

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir` in the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides `output.format` in the configuration.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Accepted for uniformity; walk results are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn target(&self) -> OutputTarget {
        OutputTarget {
            dir: self.out.clone(),
            format: self.format.map(Format::from),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Single-photon walk: final and intermediate OAM distributions.
    Walk(RunArgs),
    /// Two-photon walk: joint distributions and inequality tests.
    TwoPhoton(RunArgs),
    /// Radial-mode numerics.
    Modes {
        #[command(subcommand)]
        command: ModesCommand,
    },
    /// Analysis of measured data.
    Analyze {
        #[command(subcommand)]
        command: AnalyzeCommand,
    },
    /// Run every point of the configuration's ranged parameter.
    Sweep(RunArgs),
}

#[derive(Subcommand)]
enum ModesCommand {
    /// LG expansion coefficients of the q-plate output, m = 0..=m-max.
    Coeffs {
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        #[arg(long, default_value_t = 3)]
        p_max: u32,
        /// Write `coeffs.csv` here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Fiber coupling efficiency of flattened LG modes, m = −m-max..=m-max.
    Coupling {
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        /// Fiber mode radius in units of the beam waist.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Test the correlation bounds on a coincidence-count file.
    Counts {
        /// CSV with header pol1,m1,pol2,m2,counts.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Keep (p,q) and (q,p) as separate cells.
        #[arg(long)]
        no_merge: bool,
        /// Bootstrap samples for a cross-check of each σ.
        #[arg(long)]
        bootstrap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit_table(
    out: Option<&Path>,
    name: &str,
    format: Format,
    header: &[&str],
    rows: &[Vec<String>],
) -> oamwalk::Result<()> {
    match (out, format) {
        (Some(dir), Format::Csv) => {
            std::fs::create_dir_all(dir)?;
            io::write_csv(&dir.join(format!("{name}.csv")), header, rows)
        }
        (Some(dir), Format::Json) => {
            std::fs::create_dir_all(dir)?;
            let json = table_json(header, rows);
            std::fs::write(dir.join(format!("{name}.json")), json)?;
            Ok(())
        }
        (None, Format::Csv) => {
            println!("{}", header.join(","));
            for row in rows {
                println!("{}", row.join(","));
            }
            Ok(())
        }
        (None, Format::Json) => {
            print!("{}", table_json(header, rows));
            Ok(())
        }
    }
}

// Rows as an array of objects; cells are numbers, so they are emitted verbatim.
fn table_json(header: &[&str], rows: &[Vec<String>]) -> String {
    let objects: Vec<String> = rows
        .iter()
        .map(|row| {
            let fields: Vec<String> = header
                .iter()
                .zip(row)
                .map(|(h, v)| format!("\"{h}\": {v}"))
                .collect();
            format!("  {{{}}}", fields.join(", "))
        })
        .collect();
    format!("[\n{}\n]\n", objects.join(",\n"))
}

fn dispatch(cli: Cli) -> oamwalk::Result<()> {
    match cli.command {
        Command::Walk(args) => io::run(&args.config, &args.target(), Some(Mode::Single)).map(drop),
        Command::TwoPhoton(args) => {
            io::run(&args.config, &args.target(), Some(Mode::TwoPhoton)).map(drop)
        }
        Command::Sweep(args) => io::sweep(&args.config, &args.target()).map(drop),
        Command::Modes { command } => match command {
            ModesCommand::Coeffs {
                m_max,
                p_max,
                out,
                format,
            } => emit_table(
                out.as_deref(),
                "coeffs",
                format.into(),
                &["m", "p", "c", "power"],
                &io::radial_coeff_rows(m_max, p_max),
            ),
            ModesCommand::Coupling {
                m_max,
                sigma,
                out,
                format,
            } => {
                if !(sigma > 0.0) {
                    return Err(Error::Config(format!("--sigma must be positive, got {sigma}")));
                }
                emit_table(
                    out.as_deref(),
                    "coupling",
                    format.into(),
                    &["m", "efficiency"],
                    &io::coupling_rows(m_max, sigma)?,
                )
            }
        },
        Command::Analyze { command } => match command {
            AnalyzeCommand::Counts {
                input,
                out,
                format,
                no_merge,
                bootstrap,
                seed,
            } => {
                let table = io::ingest_counts(&input, !no_merge)?;
                let analysis = io::analyze_counts(&table, bootstrap.map(|n| (n, seed)))?;
                match out {
                    Some(dir) => io::write_counts_analysis(&dir, &analysis, format.into()),
                    None => {
                        println!("{}", serde_json::to_string_pretty(&analysis)?);
                        Ok(())
                    }
                }
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
