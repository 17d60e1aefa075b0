mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use abelian_core::Config;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "abelian", version, about = "Decide vanishing of zero-dimensional and hyperelliptic Abelian integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monodromy generators of P around its critical values and infinity.
    Monodromy(Io),
    /// Divisor lattice D(G), covering pairs, Ψ-table and witnessing decompositions.
    Lattice(Io),
    /// Pairings, V_δ decomposition and orthogonal members of a cycle.
    AnalyzeCycle(Io),
    /// Basis of Z_δ for a cycle, or of the moment-problem solutions for intervals.
    Solve(Io),
    /// Case of Σ v_i Q(x_i) ≡ 0 with its pullback certificate.
    Classify(Io),
    /// Exact, Puiseux and numeric verdicts for one Q.
    Verify(Io),
    /// Level cycles and solution space of a weighted interval system.
    MomentProblem(Io),
    /// Common-factor and 0-cycle tests for an oval family.
    HyperCheck(Io),
    /// I(t) and I'(t) on an oval family.
    HyperIntegrate(Io),
    /// Limit of J_t(z) at a Morse point against the 0-cycle formula.
    Main4Check(Io),
    /// SVG drawing of the constellation of P.
    PlotConstellation(Io),
}

#[derive(Args)]
struct Io {
    /// Input JSON file.
    input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config; its fields take precedence over the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    precision_bits: Option<u32>,
    #[arg(long)]
    track_step: Option<f64>,
    #[arg(long)]
    collision_tol: Option<f64>,
    #[arg(long)]
    oracle_tol: Option<f64>,
    #[arg(long)]
    degree_bound: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<Config, commands::Failure> {
        let mut cfg = Config::default();
        if let Some(v) = self.precision_bits {
            cfg.precision_bits = v;
        }
        if let Some(v) = self.track_step {
            cfg.track_step = v;
        }
        if let Some(v) = self.collision_tol {
            cfg.collision_tol = v;
        }
        if self.oracle_tol.is_some() {
            cfg.oracle_tol = self.oracle_tol;
        }
        if self.degree_bound.is_some() {
            cfg.degree_bound = self.degree_bound;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| commands::Failure::input(format!("{}: {e}", path.display())))?;
            let overrides: serde_json::Map<String, serde_json::Value> =
                serde_json::from_str(&text).map_err(|e| commands::Failure::input(format!("{}: {e}", path.display())))?;
            let mut merged = serde_json::to_value(&cfg).expect("config serializes");
            for (k, v) in overrides {
                merged[k] = v;
            }
            cfg = serde_json::from_value(merged).map_err(|e| commands::Failure::input(format!("{}: {e}", path.display())))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), commands::Failure> {
    let (io, cmd): (&Io, fn(&[u8], &Config) -> Result<commands::Output, commands::Failure>) = match &cli.command {
        Command::Monodromy(io) => (io, commands::monodromy),
        Command::Lattice(io) => (io, commands::lattice),
        Command::AnalyzeCycle(io) => (io, commands::analyze_cycle),
        Command::Solve(io) => (io, commands::solve),
        Command::Classify(io) => (io, commands::classify),
        Command::Verify(io) => (io, commands::verify),
        Command::MomentProblem(io) => (io, commands::moment_problem),
        Command::HyperCheck(io) => (io, commands::hyper_check),
        Command::HyperIntegrate(io) => (io, commands::hyper_integrate),
        Command::Main4Check(io) => (io, commands::main4_check),
        Command::PlotConstellation(io) => (io, commands::plot_constellation),
    };
    let cfg = io.config.resolve()?;
    let input = std::fs::read(&io.input).map_err(|e| commands::Failure::input(format!("{}: {e}", io.input.display())))?;
    let text = cmd(&input, &cfg)?.render(&cfg);
    match &io.output {
        Some(path) => std::fs::write(path, text).map_err(|e| commands::Failure::compute(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
