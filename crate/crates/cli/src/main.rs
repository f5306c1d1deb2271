//! `gaugelab` command line: list, run and summarize scenarios.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use gaugelab::params::ParamMap;
use gaugelab::scenarios::{self, Outcome, Report, Status, WriteOptions, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "gaugelab", version, about = "Gauge transformation experiments on a lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List scenarios and their claims.
    List,
    /// Run a scenario (or `all`) and write its report.
    Run {
        scenario: String,
        /// Flat TOML parameter file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default `out/<scenario>`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write field dumps (potentials, states).
        #[arg(long)]
        dump_fields: bool,
        /// Write a_pure, a_phys and a0_phys dumps.
        #[arg(long)]
        dump_decomposition: bool,
        /// Write operators as (row, col, re, im) triplets.
        #[arg(long)]
        export_operators: bool,
    },
    /// Summarize the reports under a directory.
    Report { dir: PathBuf },
}

fn print_report(r: &Report) {
    println!("{} [{}]", r.scenario, if r.passed { "PASS" } else { "FAIL" });
    for c in &r.claims {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        let bounds = match (c.lower, c.upper) {
            (Some(l), Some(u)) => format!("in [{l:e}, {u:e}]"),
            (Some(l), None) => format!(">= {l:e}"),
            (None, Some(u)) => format!("<= {u:e}"),
            (None, None) => String::new(),
        };
        let measured = c.measured.map_or("-".to_string(), |m| format!("{m:e}"));
        println!("  {status:4}  {:34} {measured:>24} {bounds}", c.id);
        if let Some(note) = &c.note {
            println!("        {note}");
        }
    }
}

fn write(outcome: &Outcome, dir: &Path, opts: WriteOptions) -> anyhow::Result<()> {
    outcome
        .write(dir, opts)
        .with_context(|| format!("writing results to {}", dir.display()))?;
    Ok(())
}

fn run(
    scenario: &str,
    config: Option<&Path>,
    out: Option<&Path>,
    seed: u64,
    opts: WriteOptions,
) -> anyhow::Result<bool> {
    let params = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ParamMap::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ParamMap::new(),
    };
    if scenario == "all" {
        if config.is_some() {
            bail!("--config applies to a single scenario");
        }
        let names: Vec<&str> = scenarios::registry().iter().map(|s| s.name()).collect();
        let root = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("out"));
        let mut ok = true;
        for (name, result) in names.iter().zip(scenarios::run_all(&names, &params, seed)) {
            let outcome = result.with_context(|| format!("scenario {name}"))?;
            write(&outcome, &root.join(name), opts)?;
            print_report(&outcome.report);
            ok &= outcome.report.passed;
        }
        return Ok(ok);
    }
    let outcome = scenarios::run(scenario, &params, seed).with_context(|| format!("scenario {scenario}"))?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| Path::new("out").join(scenario));
    write(&outcome, &dir, opts)?;
    print_report(&outcome.report);
    println!("  wrote {} ({:.1} s)", dir.display(), outcome.wall_seconds);
    Ok(outcome.report.passed)
}

fn collect_reports(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let direct = dir.join("report.json");
    if direct.is_file() {
        return Ok(vec![direct]);
    }
    let mut found = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path().join("report.json");
        if path.is_file() {
            found.push(path);
        }
    }
    found.sort();
    if found.is_empty() {
        bail!("no report.json under {}", dir.display());
    }
    Ok(found)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            for s in scenarios::registry() {
                println!("{:30} {}", s.name(), s.summary());
                for c in s.claims() {
                    println!("    {:34} {}", c.id, c.summary);
                }
            }
            Ok(true)
        }
        Command::Run {
            scenario,
            config,
            out,
            seed,
            dump_fields,
            dump_decomposition,
            export_operators,
        } => run(
            &scenario,
            config.as_deref(),
            out.as_deref(),
            seed,
            WriteOptions {
                fields: dump_fields,
                decomposition: dump_decomposition,
                operators: export_operators,
            },
        ),
        Command::Report { dir } => collect_reports(&dir).and_then(|paths| {
            let mut ok = true;
            for p in paths {
                let r = Report::read(&p).with_context(|| format!("reading {}", p.display()))?;
                print_report(&r);
                ok &= r.passed;
            }
            Ok(ok)
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
