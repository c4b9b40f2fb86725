use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use wfa_aak_cli::{approximate, render_report, run_suites, CliError, Mode, Suite, VerifyOptions, WfaDocument};

/// Weighted finite automata: evaluation, Hankel-norm approximation and
/// numerical checks of the Fock-space identities.
#[derive(Parser)]
#[command(name = "wfa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f(word). Use "" or ε for the empty word.
    Eval { file: PathBuf, word: String },
    /// Approximate with at most K states; writes the report to stdout.
    Approximate {
        file: PathBuf,
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Aak)]
        mode: Mode,
        /// Prefix/suffix length of the evaluation block.
        #[arg(long)]
        length: Option<usize>,
        /// Relative tolerance for the optimality certificate.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Where to write the approximating automaton.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run verification suites; without FILE a seeded random automaton is used.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Omit the timestamp line so reruns are byte-identical.
        #[arg(long)]
        no_timestamp: bool,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Eval { file, word } => {
            let doc = WfaDocument::read(&file)?;
            let w = doc.parse_word(&word)?;
            println!("{}", doc.to_wfa()?.evaluate(&w)?);
            Ok(true)
        }
        Command::Approximate { file, k, mode, length, tol, output } => {
            let doc = WfaDocument::read(&file)?;
            let (out, report) = approximate(&doc, k, mode, length, tol)?;
            if let Some(path) = output {
                out.write(&path)?;
            }
            print!("{}", report.to_text());
            Ok(report.certificate.is_none_or(|c| c.attained))
        }
        Command::Verify { file, suite, degree, seed, alphabet_size, trials, no_timestamp } => {
            let doc = file.as_deref().map(WfaDocument::read).transpose()?;
            let opts = VerifyOptions { suite, degree, seed, alphabet_size, trials };
            let results = run_suites(doc.as_ref(), &opts)?;
            let ts = (!no_timestamp).then(|| {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
                format!("unix {secs}")
            });
            print!("{}", render_report(&results, ts.as_deref()));
            Ok(results.iter().all(|r| r.pass))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("wfa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
