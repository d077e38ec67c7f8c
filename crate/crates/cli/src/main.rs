//! `gaussqec` command-line interface.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaussqec::lattice::{Matter, Variant};
use gaussqec::QecError;

use settings::{EngineChoice, Settings};

/// Exit codes beyond clap's own 2 for usage errors.
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;
pub const EXIT_ENGINE_LIMIT: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "gaussqec", version, about = "Gauss-law-aided error correction for Z2 lattice gauge theories")]
struct Cli {
    /// TOML file with run settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Qubit counts for a scheme.
    Count {
        #[command(flatten)]
        flags: Flags,
        /// Every scheme of the selected dimension.
        #[arg(long)]
        all: bool,
        /// Also print the role to qubit-range layout.
        #[arg(long)]
        layout: bool,
    },
    /// Exhaustive fault sweeps, gadget analysis and lookup regeneration.
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Accepted difference text for the lookups compared against their
        /// clean row.
        #[arg(long)]
        accept_diffs: Option<PathBuf>,
    },
    /// Monte Carlo logical failure rates.
    Sample {
        #[command(flatten)]
        flags: Flags,
        /// Physical error rates (comma separated).
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        /// Shots per rate.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Textual circuit for a scheme.
    Emit {
        #[command(flatten)]
        flags: Flags,
        /// prep, cycle or full.
        #[arg(long)]
        round: Option<String>,
    },
    /// Regenerate the decode lookups and diff them against the references.
    Tables {
        #[command(flatten)]
        flags: Flags,
        /// Where to write the difference text.
        #[arg(long)]
        diff_out: Option<PathBuf>,
    },
    /// Random Clifford circuits on both engines.
    Crosscheck {
        #[command(flatten)]
        flags: Flags,
        /// Number of random circuits.
        #[arg(long)]
        circuits: Option<u64>,
    },
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Lattice dimension, 1 or 2.
    #[arg(long)]
    dim: Option<u8>,
    /// pure, nondynamical or dynamical.
    #[arg(long, value_parser = parse_matter)]
    matter: Option<Matter>,
    /// doubled, compressed or full-ancilla.
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    /// 1D size (2N sites and links).
    #[arg(long)]
    n: Option<usize>,
    /// 2D size along x (2Nx sites per row).
    #[arg(long)]
    nx: Option<usize>,
    /// 2D size along y (2Ny rows).
    #[arg(long)]
    ny: Option<usize>,
    /// Master seed for sampling and random circuits.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    engine: Option<EngineChoice>,
    /// JSON-lines output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_matter(s: &str) -> Result<Matter, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown matter '{s}'"))
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown variant '{s}'"))
}

impl Flags {
    fn settings(&self) -> Settings {
        Settings {
            dim: self.dim,
            matter: self.matter,
            variant: self.variant,
            n: self.n,
            nx: self.nx,
            ny: self.ny,
            seed: self.seed,
            engine: self.engine,
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

/// Marks errors caused by configuration rather than by a run.
#[derive(Debug)]
pub struct ConfigError(pub anyhow::Error);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn classify(e: &anyhow::Error) -> (u8, &'static str) {
    if e.downcast_ref::<ConfigError>().is_some() {
        return (EXIT_CONFIG, "config error");
    }
    match e.chain().find_map(|c| c.downcast_ref::<QecError>()) {
        Some(QecError::EngineLimit { .. }) => (EXIT_ENGINE_LIMIT, "engine limit"),
        Some(QecError::Config(_) | QecError::UnsupportedScheme(_) | QecError::Parse { .. }) => (EXIT_CONFIG, "config error"),
        _ => (EXIT_RUNTIME, "error"),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (section, flags, extra) = match &cli.cmd {
        Cmd::Count { flags, .. } => ("count", flags, Settings::default()),
        Cmd::Verify { flags, accept_diffs } => {
            ("verify", flags, Settings { accept_diffs: accept_diffs.clone(), ..Default::default() })
        }
        Cmd::Sample { flags, p, shots } => ("sample", flags, Settings { p: p.clone(), shots: *shots, ..Default::default() }),
        Cmd::Emit { flags, round } => ("emit", flags, Settings { round: round.clone(), ..Default::default() }),
        Cmd::Tables { flags, diff_out } => ("tables", flags, Settings { diff_out: diff_out.clone(), ..Default::default() }),
        Cmd::Crosscheck { flags, circuits } => ("crosscheck", flags, Settings { circuits: *circuits, ..Default::default() }),
    };
    let mut s = match &cli.config {
        Some(path) => Settings::load(path, section).map_err(ConfigError)?,
        None => Settings::default(),
    };
    s.overlay(&flags.settings());
    s.overlay(&extra);
    if cli.workers.is_some() {
        s.workers = cli.workers;
    }
    if let Some(w) = s.workers {
        if w == 0 {
            return Err(ConfigError(anyhow::anyhow!("workers must be positive")).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global()?;
    }
    match cli.cmd {
        Cmd::Count { all, layout, .. } => commands::count(&s, all, layout),
        Cmd::Verify { .. } => commands::verify(&s),
        Cmd::Sample { .. } => commands::sample(&s),
        Cmd::Emit { .. } => commands::emit(&s),
        Cmd::Tables { .. } => commands::tables(&s),
        Cmd::Crosscheck { .. } => commands::crosscheck(&s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATION),
        Err(e) => {
            let (code, kind) = classify(&e);
            eprintln!("gaussqec: {kind}: {e:#}");
            ExitCode::from(code)
        }
    }
}
