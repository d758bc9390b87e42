use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use modp_cli::{
    cmd_counts, cmd_decomp_check, cmd_export_qasm, cmd_run, cmd_sweep, ExperimentConfig, RawConfig,
};

#[derive(Parser)]
#[command(name = "modp", version)]
#[command(about = "Build, simulate, sample and analyse MOD_p quantum finite automaton circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and sampled acceptance for word lengths 0..=m-max (CSV)
    Run(Flags),
    /// Write the circuit for a^m as OpenQASM 2.0
    ExportQasm(Flags),
    /// Sweep every d-element k-set and summarise the maximum error (CSV)
    Sweep(Flags),
    /// Gate counts after basis transpilation (CSV)
    Counts(Flags),
    /// Compare the controlled-rotation decompositions (CSV)
    DecompCheck(Flags),
}

#[derive(Args)]
struct Flags {
    /// key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Prime modulus
    #[arg(long)]
    p: Option<String>,
    /// Comma-separated multipliers
    #[arg(long)]
    k: Option<String>,
    /// single, naive_plain, naive_improved, naive_alternating, optimized or parallel
    #[arg(long)]
    variant: Option<String>,
    /// Word length for export-qasm and counts
    #[arg(long)]
    m: Option<String>,
    /// Longest word length for run and decomp-check
    #[arg(long)]
    m_max: Option<String>,
    #[arg(long)]
    shots: Option<String>,
    /// Depolarizing probability after one-qubit gates
    #[arg(long)]
    noise_p1: Option<String>,
    /// Depolarizing probability after multi-qubit gates
    #[arg(long)]
    noise_p2: Option<String>,
    /// Per-bit readout flip probability
    #[arg(long)]
    noise_readout: Option<String>,
    /// legacy or modern
    #[arg(long)]
    basis: Option<String>,
    /// Fuse runs of equal Ry rotations
    #[arg(long)]
    fuse: bool,
    #[arg(long)]
    seed: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// ancilla_toffoli, barenco or margolus
    #[arg(long)]
    decomp: Option<String>,
    /// Set size for sweep
    #[arg(long)]
    d: Option<String>,
    /// parallel, direct_sum or optimized
    #[arg(long)]
    scheme: Option<String>,
    /// distinct or multiset
    #[arg(long)]
    enumeration: Option<String>,
    /// Directory for per-length shot results as JSON (run only)
    #[arg(long)]
    shots_dir: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                RawConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => RawConfig::default(),
        };
        let mut flags = RawConfig::default();
        let pairs = [
            ("p", &self.p),
            ("k", &self.k),
            ("variant", &self.variant),
            ("m", &self.m),
            ("m_max", &self.m_max),
            ("shots", &self.shots),
            ("noise_p1", &self.noise_p1),
            ("noise_p2", &self.noise_p2),
            ("noise_readout", &self.noise_readout),
            ("basis", &self.basis),
            ("seed", &self.seed),
            ("decomp", &self.decomp),
            ("d", &self.d),
            ("scheme", &self.scheme),
            ("enumeration", &self.enumeration),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.as_str())?;
            }
        }
        if self.fuse {
            flags.set("fuse", "true")?;
        }
        for (key, path) in [("out", &self.out), ("shots_dir", &self.shots_dir)] {
            if let Some(path) = path {
                flags.set(key, path.to_string_lossy())?;
            }
        }
        ExperimentConfig::resolve(&file.merged(flags))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (flags, run): (&Flags, fn(&ExperimentConfig) -> Result<String>) = match &cli.command {
        Command::Run(f) => (f, |cfg| {
            let output = cmd_run(cfg)?;
            if let Some(dir) = &cfg.shots_dir {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for (m, r) in &output.shots {
                    let path = dir.join(format!("m{m}.json"));
                    fs::write(&path, r.to_json())
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
            Ok(output.csv)
        }),
        Command::ExportQasm(f) => (f, cmd_export_qasm),
        Command::Sweep(f) => (f, cmd_sweep),
        Command::Counts(f) => (f, cmd_counts),
        Command::DecompCheck(f) => (f, cmd_decomp_check),
    };
    let cfg = flags.resolve()?;
    let text = run(&cfg)?;
    emit(cfg.out.as_deref(), &text)
}
