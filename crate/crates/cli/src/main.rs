use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fbcli::{run, Command, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "fb", version, about = "Frobenius Betti numbers, Hilbert-Kunz estimates and syzygies over F_p[x]/I")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Problem file (`-` reads stdin).
    #[arg(short, long)]
    input: PathBuf,
    /// Homological index i.
    #[arg(long, default_value_t = 0)]
    idx: usize,
    /// Largest Frobenius exponent e.
    #[arg(long, default_value_t = 3)]
    emax: u32,
    /// Resolution length.
    #[arg(long, default_value_t = 3)]
    steps: usize,
    /// Use the exact one-dimensional decision procedure (`beta`).
    #[arg(long)]
    exact: bool,
    /// Cross-check each level with the degreewise oracle up to this degree (`beta`).
    #[arg(long)]
    degree_bound: Option<i64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, env = "FB_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the per-level table here (sequence commands only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Abort when a Groebner basis exceeds this many elements.
    #[arg(long)]
    max_gb_size: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Minimal free resolution of M.
    Resolve(Common),
    /// Hilbert-Kunz sequence of the ideal J (or the maximal ideal).
    Hk(Common),
    /// Frobenius Betti sequence beta_i^F(M).
    Beta(Common),
    /// Frobenius mu sequence.
    Mu(Common),
    /// One-dimensional diagnosis of beta_i^F(M).
    Diagnose1(Common),
    /// Lengths and dimensions of syzygy modules with law checks.
    Syz(Common),
    /// Cross-checks identities and finite projective dimension certificates.
    Verify(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Resolve(c) => (Command::Resolve, c),
        Cmd::Hk(c) => (Command::Hk, c),
        Cmd::Beta(c) => (Command::Beta, c),
        Cmd::Mu(c) => (Command::Mu, c),
        Cmd::Diagnose1(c) => (Command::Diagnose1, c),
        Cmd::Syz(c) => (Command::Syz, c),
        Cmd::Verify(c) => (Command::Verify, c),
    };
    let text = if c.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&c.input)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("fb: cannot read {}: {e}", c.input.display());
            return ExitCode::from(2);
        }
    };
    let mut opts = RunOptions {
        idx: c.idx,
        emax: c.emax,
        steps: c.steps,
        exact: c.exact,
        degree_bound: c.degree_bound,
        threads: c.threads,
        cache_dir: c.cache_dir,
        seed: c.seed,
        ..RunOptions::default()
    };
    if let Some(n) = c.max_gb_size {
        opts.max_gb_size = n;
    }
    let out = match run(command, &text, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("fb: {}", e.message);
            return ExitCode::from(e.code as u8);
        }
    };
    for w in &out.envelope.warnings {
        eprintln!("fb: warning: {w}");
    }
    let json = out.envelope.to_json();
    let written = match &c.json {
        Some(p) => std::fs::write(p, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    let written = written.and_then(|_| match (&c.csv, &out.csv) {
        (Some(p), Some(csv)) => std::fs::write(p, csv),
        _ => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("fb: write failed: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
