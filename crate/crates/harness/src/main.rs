use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use planeperc::config::{sample_spec, ExperimentSpec, KeyValues};
use planeperc::experiments::{run, write_traces};
use planeperc::oracle::{run_suite, standard_cases, write_results};
use planeperc::render::{render, render_with_dual};
use planeperc::stats::{write_rows, write_summary};
use planeperc::Result;
use planeperc_core::clusters::label;
use planeperc_core::lattice::BondConfig;
use planeperc_core::samplers::sample;

#[derive(Parser)]
#[command(name = "planeperc", version, about = "Square-lattice percolation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one configuration and write it, its clusters and two drawings.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run an experiment file and write rows.csv and summary.csv.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare sampler draws with exactly enumerated laws.
    Oracle {
        /// Draws for the small boxes.
        #[arg(long, default_value_t = 1_000_000)]
        draws: u64,
        /// Draws for the parity measures on the 4 x 4 torus.
        #[arg(long, default_value_t = 500_000_000)]
        torus_draws: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Draw a saved configuration as a plain PBM file.
    Render {
        /// Configuration in the text format written by `sample`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also draw the dual configuration to this file.
        #[arg(long)]
        dual: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Failed(String),
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn execute(command: Command) -> Result<Status> {
    match command {
        Command::Sample { config, seed, out } => {
            let mut kv = KeyValues::parse(&fs::read_to_string(&config)?)?;
            if let Some(s) = seed {
                kv.set("seed", s.to_string());
            }
            let spec = sample_spec(&kv)?;
            let c = sample(&spec)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("sample.txt"), c.to_text())?;
            label(&c).write_csv(create(&out, "clusters.csv")?)?;
            render_with_dual(&c, &out.join("primal.pbm"), &out.join("dual.pbm"))?;
            println!("{} on {} (seed {}) -> {}", spec.model, spec.region, spec.seed, out.display());
            Ok(Status::Ok)
        }
        Command::Experiment {
            config,
            seed,
            out,
            threads,
        } => {
            let mut kv = KeyValues::parse(&fs::read_to_string(&config)?)?;
            if let Some(s) = seed {
                kv.set("seed", s.to_string());
            }
            let mut spec = ExperimentSpec::from_key_values(&kv)?;
            if threads.is_some() {
                spec.threads = threads;
            }
            let out = out.or(spec.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
            let result = run(&spec)?;
            fs::create_dir_all(&out)?;
            write_rows(&result.rows, create(&out, "rows.csv")?)?;
            write_summary(&result.summary, create(&out, "summary.csv")?)?;
            if !result.traces.is_empty() {
                write_traces(&result.traces, create(&out, "traces.csv")?)?;
            }
            write_summary(&result.summary, io::stdout().lock())?;
            if result.violations.total() > 0 {
                return Ok(Status::Failed(format!(
                    "invariant violated in {}: {}",
                    spec.id,
                    result.violations.describe()
                )));
            }
            Ok(Status::Ok)
        }
        Command::Oracle {
            draws,
            torus_draws,
            seed,
            out,
            threads,
        } => {
            let results = run_suite(&standard_cases(draws, torus_draws), seed, threads)?;
            fs::create_dir_all(&out)?;
            write_results(&results, create(&out, "oracle.csv")?)?;
            write_results(&results, io::stdout().lock())?;
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.name.as_str())
                .collect();
            if failed.is_empty() {
                Ok(Status::Ok)
            } else {
                Ok(Status::Failed(format!(
                    "total variation too large for: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Render { input, out, dual } => {
            let c = BondConfig::from_text(&fs::read_to_string(&input)?)?;
            match dual {
                Some(d) => render_with_dual(&c, &out, &d)?,
                None => render(&c, &out)?,
            }
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed(reason)) => {
            eprintln!("{reason}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
