//! Command-line front end: sample systems, color them, sweep experiments,
//! verify certificates, and collect girth statistics.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use discrepancy::experiment::{self, Algorithm, ExperimentConfig, TrialRecord};
use discrepancy::sampler::{sample_subset, sample_t_sparse, SampleConfig};
use discrepancy::set_system::{Coloring, SetSystem};

#[derive(Parser)]
#[command(
    name = "disc",
    about = "low-discrepancy coloring of sparse set systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AlgorithmArg {
    Auto,
    Bf,
    Lll,
    Lattice,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Auto => Algorithm::Auto,
            AlgorithmArg::Bf => Algorithm::BeckFiala,
            AlgorithmArg::Lll => Algorithm::Lll,
            AlgorithmArg::Lattice => Algorithm::Lattice,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random t-sparse set system and write it as text.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Color a system (read from a file, or stdin when `-`).
    Color {
        input: String,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
        algorithm: AlgorithmArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Color only a random subset Y of the elements, each kept with
        /// this probability.
        #[arg(long)]
        subset_prob: Option<f64>,
        /// Seed for drawing Y; defaults to `seed`.
        #[arg(long)]
        subset_seed: Option<u64>,
        /// Coloring output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the sweeps described by a config file and emit CSV.
    Experiment {
        config: String,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a coloring against a discrepancy bound. Exit 0 iff it holds.
    Verify {
        system: String,
        coloring: String,
        #[arg(long)]
        bound: i64,
    },
    /// Sample instances and report the girth of the large-set graph.
    GirthStats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: &str) -> io::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
    }
}

fn write_output(out: &Option<String>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}

fn report(record: &TrialRecord) {
    println!("algorithm: {}", record.algorithm.name());
    println!("path: {}", record.path);
    println!("disc: {}", record.disc);
    if let Some(th) = record.threshold {
        println!("threshold: {th}");
    }
    println!("fallback: {}", record.fallback);
    println!("resamples: {}", record.resamples);
    match record.girth {
        Some(g) => println!("girth: {g}"),
        None => println!("girth: inf"),
    }
    println!("wall_ms: {}", record.wall_ms);
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { n, m, t, seed, out } => {
            let sys = sample_t_sparse(&SampleConfig { n, m, t, seed })?;
            write_output(&out, &sys.to_text())?;
        }
        Command::Color {
            input,
            algorithm,
            seed,
            subset_prob,
            subset_seed,
            out,
        } => {
            let sys = SetSystem::from_text(&read_input(&input)?)?;
            let subset: Vec<usize> = match subset_prob {
                Some(p) => {
                    if !(0.0..=1.0).contains(&p) {
                        return Err("subset-prob must lie in [0, 1]".into());
                    }
                    sample_subset(sys.n(), p, subset_seed.unwrap_or(seed))
                }
                None => (0..sys.n()).collect(),
            };
            let (chi, record) = experiment::run_trial(&sys, &subset, algorithm.into(), seed)?;
            report(&record);
            write_output(&out, &chi.to_text())?;
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::from_text(&read_input(&config)?)?;
            let csv = experiment::run_experiment(&cfg)?;
            write_output(&out, &csv)?;
        }
        Command::Verify {
            system,
            coloring,
            bound,
        } => {
            let sys = SetSystem::from_text(&read_input(&system)?)?;
            let chi = Coloring::from_text(&read_input(&coloring)?)?;
            if chi.n() != sys.n() {
                return Err(format!(
                    "coloring is over {} elements but the system has {}",
                    chi.n(),
                    sys.n()
                )
                .into());
            }
            let (ok, witness, disc) = experiment::verify(&sys, &chi, bound);
            println!("disc: {disc}");
            println!("bound: {bound}");
            if ok {
                println!("verdict: ok");
            } else {
                println!("verdict: violated");
                if let Some(i) = witness {
                    println!("witness_set: {i}");
                }
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::GirthStats {
            n,
            m,
            t,
            trials,
            seed,
        } => {
            let stats = experiment::girth_stats(n, m, t, trials, seed)?;
            let finite = stats.iter().filter(|g| g.is_some()).count();
            for (trial, g) in stats.iter().enumerate() {
                match g {
                    Some(v) => println!("trial {trial}: girth {v}"),
                    None => println!("trial {trial}: girth inf"),
                }
            }
            let frac = if trials == 0 {
                0.0
            } else {
                finite as f64 / trials as f64
            };
            println!("finite_fraction: {frac}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
