//! Command-line front end: chart validation, presentation dumps, the
//! verification suites, de Rham matrices, and corpus management.

use clap::{Parser, Subcommand};
use loggeo::chart::LogChart;
use loggeo::ctx::ChartData;
use loggeo::error::Error;
use loggeo::limits::Limits;
use loggeo::omega::Flavor;
use loggeo::report::{run_suite, Suite};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "loggeo",
    about = "Exact verification of combinatorial log-differential structures on charted monoid data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a chart and run its structural validation.
    Validate {
        /// Path to a chart file, or the name of a built-in chart.
        chart: String,
    },
    /// Print the presentation of a power of the differential module.
    Omega {
        chart: String,
        /// Power degree.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Flavor: "ext" (exterior) or "antisym".
        #[arg(long, default_value = "ext")]
        flavor: String,
    },
    /// Run a verification suite and emit the report.
    Verify {
        chart: String,
        /// One of: ideals, compositions, derham, pd, crystal, all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest diagonal level to verify.
        #[arg(long)]
        n_max: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record real wall times (reports are then not byte-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Emit the matrices of the exterior derivative in the free basis.
    Derham {
        chart: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Corpus management.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Run every suite over the whole built-in corpus and write one
    /// combined report.
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List the built-in charts.
    List,
}

fn load_chart(spec: &str) -> Result<LogChart, Error> {
    let path = std::path::Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return LogChart::from_file_str(&text);
    }
    match loggeo::corpus::load_builtin(spec) {
        Some(chart) => chart,
        None => Err(Error::Chart(format!(
            "no such file, and no built-in chart named {spec:?}"
        ))),
    }
}

fn chart_data(spec: &str) -> Result<Arc<ChartData>, Error> {
    let chart = load_chart(spec)?;
    Ok(ChartData::new(chart, Limits::from_env()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let limits = Limits::from_env();
    match cli.command {
        Command::Validate { chart } => {
            let chart = load_chart(&chart)?;
            let diags = chart.validate(&limits)?;
            if diags.is_empty() {
                println!("chart {} is valid", chart.name);
                Ok(ExitCode::SUCCESS)
            } else {
                for d in &diags {
                    println!("violation: {d}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Omega { chart, n, flavor } => {
            let data = chart_data(&chart)?;
            let flavor = match flavor.as_str() {
                "ext" | "exterior" => Flavor::Exterior,
                "antisym" | "antisymmetric" => Flavor::Antisymmetric,
                other => {
                    return Err(Error::Chart(format!(
                        "unknown flavor {other:?}; use ext or antisym"
                    )))
                }
            };
            let power = data.power(n, flavor)?;
            let labels = data.chart.omega1_labels();
            let gens: Vec<String> = power
                .tuples
                .iter()
                .map(|t| {
                    if t.is_empty() {
                        "1".to_string()
                    } else {
                        t.iter()
                            .map(|&i| labels[i].to_string())
                            .collect::<Vec<_>>()
                            .join(" ^ ")
                    }
                })
                .collect();
            let rels: Vec<Vec<String>> = power
                .pres
                .relations
                .iter()
                .map(|v| v.iter().map(|p| p.to_string()).collect())
                .collect();
            let doc = serde_json::json!({
                "chart": data.chart.name,
                "degree": n,
                "flavor": match flavor { Flavor::Exterior => "exterior", Flavor::Antisymmetric => "antisymmetric" },
                "generators": gens,
                "relations": rels,
                "base_relations": data.chart.full_relations().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            chart,
            suite,
            n_max,
            out,
            timings,
        } => {
            let suite = Suite::parse(&suite)
                .ok_or_else(|| Error::Chart(format!("unknown suite {suite:?}")))?;
            let data = chart_data(&chart)?;
            let n_max = n_max.unwrap_or(limits.n_max);
            let report = run_suite(&data, suite, n_max, timings)?;
            let text = report.to_canonical_json();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            for check in &report.checks {
                eprintln!("[{}] {}", check.status, check.id);
            }
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Derham { chart, max_degree } => {
            let data = chart_data(&chart)?;
            let matrices = loggeo::derham::derham_matrices(&data, max_degree)?;
            let docs: Vec<serde_json::Value> = matrices
                .iter()
                .map(|m| {
                    serde_json::json!({
                        "degree": m.degree,
                        "columns": m.col_labels,
                        "rows": m.row_labels,
                        "entries": m.entries.iter().map(|row| {
                            row.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                        }).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "chart": data.chart.name,
                "basis": data.chart.omega1_basis.as_ref().map(|b| b.basis.clone()),
                "matrices": docs,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { command } => match command {
            CorpusCommand::List => {
                for (name, description) in loggeo::corpus::list_corpus() {
                    println!("{name:24} {description}");
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Report {
            out,
            format,
            timings,
        } => {
            if format != "json" {
                return Err(Error::Chart(format!("unknown report format {format:?}")));
            }
            let mut charts = Vec::new();
            let mut pass = 0usize;
            let mut fail = 0usize;
            let mut skipped = 0usize;
            for (name, _) in loggeo::corpus::list_corpus() {
                let data = chart_data(name)?;
                let report = run_suite(&data, Suite::All, limits.n_max, timings)?;
                pass += report.totals.pass;
                fail += report.totals.fail;
                skipped += report.totals.skipped;
                charts.push(serde_json::to_value(&report)?);
            }
            let doc = serde_json::json!({
                "artifact_version": env!("CARGO_PKG_VERSION"),
                "suite": "all",
                "charts": charts,
                "totals": {"pass": pass, "fail": fail, "skipped": skipped},
            });
            std::fs::write(&out, serde_json::to_string_pretty(&doc)?)?;
            eprintln!(
                "report written to {} (pass {pass}, fail {fail}, skipped {skipped})",
                out.display()
            );
            if fail == 0 {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
