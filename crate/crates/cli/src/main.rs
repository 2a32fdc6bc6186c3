use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vaserstein::complete::generalized_completion;
use vaserstein::io::{parse_cert, parse_epi, parse_matrix, parse_module, write_matrix, write_symbol, SymbolRecord};
use vaserstein::oracle::symbol_map_report;
use vaserstein::projmod::{ProjModule, Trivialization};
use vaserstein::symbol::generalized_symbol;
use vaserstein::witt::{verify_equiv, WittRep};
use vaserstein::{ring_parse, Error, Matrix, Ring};

mod selftest;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "vaserstein", version, about = "Pfaffians, Vaserstein symbols, completions and finite-ring oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Pfaffian of a skew matrix file.
    Pfaffian {
        #[arg(long)]
        ring: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Generalized Vaserstein symbol of an epimorphism P₀ ⊕ R → R.
    Symbol {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        epi: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an equivalence certificate between two Pfaffian-unit forms.
    /// Exits 2 when the certificate does not check.
    Verify {
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Completion of (a₀, a_R²) to a determinant-one automorphism.
    Complete {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        epi: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force orbit report for a small finite ring.
    Oracle {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// include wall-clock timings (makes the report nondeterministic)
        #[arg(long)]
        timings: bool,
    },
    /// Randomized identity suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// instances per identity
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

enum Failure {
    Domain(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Verification(_) => Failure::Verification(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_ring(expected: Option<&str>, found: &Ring, what: &Path) -> CliResult<()> {
    if let Some(spec) = expected {
        let r = ring_parse(spec)?;
        if r != *found {
            return Err(Failure::Domain(format!("{} is over {found}, not {r}", what.display())));
        }
    }
    Ok(())
}

fn load_matrix(path: &Path, ring: Option<&str>) -> CliResult<Matrix> {
    let m = parse_matrix(&read(path)?)?;
    check_ring(ring, m.ring(), path)?;
    Ok(m)
}

/// Module and trivialization; free modules of rank 2 default to e₁∧e₂.
fn load_module(path: &Path) -> CliResult<(ProjModule, Trivialization)> {
    let (module, triv) = parse_module(&read(path)?)?;
    match triv {
        Some(t) => Ok((module, t)),
        None if module.is_free_ambient() && module.ambient() == 2 => {
            let t = Trivialization::standard(module.ring(), 1);
            Ok((module, t))
        }
        None => Err(Failure::Domain(format!("{}: module has no trivialization (w, lambda)", path.display()))),
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Pfaffian { ring, input } => {
            let m = load_matrix(&input, ring.as_deref())?;
            println!("{}", m.pfaffian()?);
        }
        Command::Symbol { module, epi, out } => {
            let (base, triv) = load_module(&module)?;
            let epi = parse_epi(&read(&epi)?, &base)?;
            let s = generalized_symbol(&base, &triv, &epi)?;
            let rec = SymbolRecord { triple: s.triple, xi: s.witt.matrix().clone(), pfaffian: s.witt.pfaffian().clone() };
            emit(out.as_deref(), &write_symbol(&rec))?;
            if out.is_some() {
                println!("pfaffian {}", rec.pfaffian);
            }
        }
        Command::Verify { ring, left, right, cert } => {
            let m = WittRep::new(load_matrix(&left, ring.as_deref())?)?;
            let n = WittRep::new(load_matrix(&right, ring.as_deref())?)?;
            let c = parse_cert(&read(&cert)?)?;
            check_ring(ring.as_deref(), c.word.ring(), &cert)?;
            if m.ring() != n.ring() || c.word.ring() != m.ring() {
                return Err(Failure::Domain("inputs are over different rings".into()));
            }
            if !verify_equiv(&m, &n, &c)? {
                return Err(Failure::Verification("certificate does not carry the right form to the left one".into()));
            }
            println!("ok");
        }
        Command::Complete { module, epi, out } => {
            let (base, triv) = load_module(&module)?;
            let epi = parse_epi(&read(&epi)?, &base)?;
            let c = generalized_completion(&base, &triv, &epi)?;
            emit(out.as_deref(), &write_matrix(&c.matrix))?;
        }
        Command::Oracle { ring, out, timings } => {
            let report = symbol_map_report(&ring_parse(&ring)?)?;
            emit(out.as_deref(), &report.render(timings))?;
            if out.is_some() {
                println!("{}", report.summary());
            }
        }
        Command::Selftest { seed, count } => {
            let failures = selftest::run(seed, count);
            if failures > 0 {
                return Err(Failure::Verification(format!("{failures} identities failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
