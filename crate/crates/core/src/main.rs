use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use opineq::campaign::{
    dk_probe, read_jsonl, run_conjecture, summarize, summary_path, verify, write_summary_csv,
    ConfigFile, Suite, CSV_HEADER,
};
use opineq::Error;

#[derive(Parser)]
#[command(
    name = "opineq",
    version,
    about = "Randomized checks of norm inequalities for matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a theorem suite and write JSONL records plus a CSV summary.
    Verify(Flags),
    /// Search for non-positive conjecture matrices.
    Conjecture {
        #[command(flatten)]
        flags: Flags,
        /// Draw complex values and use the Hermitian analogue of the matrix.
        #[arg(long)]
        experimental_complex: bool,
    },
    /// Probe D_k membership of a self-adjoint matrix.
    DkProbe(Flags),
    /// Re-summarize an existing JSONL record file.
    Report {
        input: PathBuf,
        /// CSV destination; defaults to `<input>.summary.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct Flags {
    /// heinz, agm, cpr, zhan, cor23, cor24, t2, finalcor, characterizations, dk, conjecture.
    #[arg(long)]
    suite: Option<String>,
    /// Matrix dimension, 1 to 12.
    #[arg(long)]
    dim: Option<usize>,
    /// Random instances; each is checked at every parameter value and norm.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated selectors: op, fro, tr, schatten:p, kyfan:k.
    #[arg(long)]
    norms: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Condition number bound for sampled positive matrices.
    #[arg(long)]
    cond: Option<f64>,
    /// Zhan / corollary parameter t (at most 2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Option<Vec<f64>>,
    /// Zhan exponent r in [0.5, 1.5].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r: Option<Vec<f64>>,
    /// D_k and conjecture parameter k.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k: Option<Vec<f64>>,
    /// Schatten exponents for finalcor.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p: Option<Vec<f64>>,
    /// Conjecture matrix size.
    #[arg(long)]
    n: Option<usize>,
    /// Explicit nonzero spectrum for dk-probe.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eigs: Option<Vec<f64>>,
    /// Random starts for the D_k minimizer.
    #[arg(long)]
    starts: Option<usize>,
    /// Subgradient iterations per start.
    #[arg(long)]
    iters: Option<usize>,
    /// JSONL output; the CSV summary goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with the same keys as these flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write zero wall times so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl Flags {
    fn into_config(self, implied_suite: Option<Suite>) -> opineq::Result<ConfigFile> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            suite: self.suite,
            dim: self.dim,
            count: self.count,
            seed: self.seed,
            norms: self.norms,
            tol: self.tol,
            cond: self.cond,
            t: self.t,
            r: self.r,
            k: self.k,
            p: self.p,
            n: self.n,
            eigs: self.eigs,
            starts: self.starts,
            iters: self.iters,
            out: self.out,
            no_timing: self.no_timing.then_some(true),
        };
        let mut merged = base.overridden_by(flags);
        if let Some(s) = implied_suite {
            match merged.suite.as_deref() {
                Some(given) if given != s.name() => {
                    return Err(Error::ConfigInvalid(format!(
                        "suite '{given}' does not match this subcommand"
                    )))
                }
                _ => merged.suite = Some(s.name().into()),
            }
        }
        Ok(merged)
    }
}

fn print_json<T: serde::Serialize>(items: &[T]) -> opineq::Result<()> {
    let mut out = std::io::stdout().lock();
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn run(cli: Cli) -> opineq::Result<ExitCode> {
    match cli.command {
        Command::Verify(flags) => {
            let cfg = flags.into_config(None)?.resolve()?;
            if cfg.suite == Suite::Conjecture {
                print_json(&run_conjecture(&cfg, false)?)?;
                return Ok(ExitCode::SUCCESS);
            }
            let outcome = verify(&cfg)?;
            if cfg.out.is_none() {
                println!("{CSV_HEADER}");
                for row in &outcome.rows {
                    println!("{}", row.csv_line());
                }
            }
            eprintln!(
                "{}: {} records, {} failing",
                cfg.suite, outcome.records, outcome.failures
            );
            if outcome.failures > 0 && !cfg.suite.is_probe() {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Conjecture {
            flags,
            experimental_complex,
        } => {
            let cfg = flags.into_config(Some(Suite::Conjecture))?.resolve()?;
            print_json(&run_conjecture(&cfg, experimental_complex)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DkProbe(flags) => {
            let cfg = flags.into_config(Some(Suite::Dk))?.resolve()?;
            print_json(&dk_probe(&cfg)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, out } => {
            let rows = summarize(&read_jsonl(&input)?);
            let path = out.unwrap_or_else(|| summary_path(&input));
            write_summary_csv(&rows, &path)?;
            println!("{CSV_HEADER}");
            let mut failures = 0;
            for row in &rows {
                println!("{}", row.csv_line());
                failures += row.fail;
            }
            eprintln!("{} groups, {failures} failing records", rows.len());
            Ok(ExitCode::SUCCESS)
        }
    }
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
