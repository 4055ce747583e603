//! `hurwitz`: universal series, stratum degrees, the P table and the
//! verification sweep from the command line.
//!
//! Exit codes: 0 success, 1 computation or verification failure, 2 usage.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hurwitz_core::exactring::ZRule;
use hurwitz_core::permoracle::{oracle_for_stratum, DEFAULT_SHEET_LIMIT};
use hurwitz_core::unfolding::{stratum_report, FamilySpec, MultisingularityType};
use hurwitz_core::universal::UniversalTables;
use hurwitz_core::verify::{run_verify, VerifyConfig};
use hurwitz_core::Error;

const MAX_UNIVERSAL_CODIM: u32 = 6;

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Universal multisingularity classes, Lyashko-Looijenga degrees and double Hurwitz numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the universal generating series up to a codimension.
    Universal(UniversalArgs),
    /// Degree pipeline for one primitive stratum.
    Stratum(StratumArgs),
    /// Interpolated P polynomials of the Laurent family.
    Table(TableArgs),
    /// Run the verification suite and the oracle sweep.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Contribution {
    All,
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "0")]
    Zero,
}

#[derive(Args)]
struct UniversalArgs {
    #[arg(long, default_value_t = 2)]
    codim: u32,
    #[arg(long, value_enum, default_value_t = Contribution::All)]
    contribution: Contribution,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Laurent,
    Polynomial,
}

#[derive(Args)]
struct StratumArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Pole order k (Laurent).
    #[arg(short = 'k')]
    k: Option<u32>,
    /// Pole order l (Laurent).
    #[arg(short = 'l')]
    l: Option<u32>,
    /// Degree parameter n (polynomial family A_n).
    #[arg(short = 'n')]
    n: Option<u32>,
    /// Parts of the multisingularity, e.g. `2,1`; empty for the generic stratum.
    #[arg(long, default_value = "")]
    mu: String,
    /// Also count with the permutation oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    /// Largest |m| in the table.
    #[arg(long, default_value_t = 3)]
    max_codim: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZRuleArg {
    Shifted,
    Plain,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    max_sheets: usize,
    #[arg(long, default_value_t = 4)]
    max_codim: u32,
    /// Oracle cache file (line-delimited JSON).
    #[arg(long, env = "HURWITZ_ORACLE_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ZRuleArg::Shifted, hide = true)]
    z_rule: ZRuleArg,
}

enum Failure {
    Usage(String),
    Compute(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::TooManySheets { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn family(args: &StratumArgs) -> Result<FamilySpec, Failure> {
    let f = match args.family {
        FamilyKind::Laurent => {
            if args.n.is_some() {
                return Err(Failure::Usage("-n applies to the polynomial family".into()));
            }
            match (args.k, args.l) {
                (Some(k), Some(l)) => FamilySpec::laurent(k, l)?,
                _ => return Err(Failure::Usage("the Laurent family needs -k and -l".into())),
            }
        }
        FamilyKind::Polynomial => {
            if args.k.is_some() || args.l.is_some() {
                return Err(Failure::Usage("-k and -l apply to the Laurent family".into()));
            }
            match args.n {
                Some(n) => FamilySpec::polynomial(n)?,
                None => return Err(Failure::Usage("the polynomial family needs -n".into())),
            }
        }
    };
    Ok(f)
}

fn run_universal(args: &UniversalArgs) -> Result<String, Failure> {
    if args.codim > MAX_UNIVERSAL_CODIM {
        return Err(Failure::Usage(format!("--codim must be <= {MAX_UNIVERSAL_CODIM}")));
    }
    let tables = UniversalTables::build(args.codim)?;
    Ok(output::universal(&tables, args.contribution, args.format))
}

fn run_stratum(args: &StratumArgs) -> Result<String, Failure> {
    let f = family(args)?;
    let mu = MultisingularityType::parse(&args.mu)?;
    let mut report = stratum_report(f, &mu)?;
    if args.oracle {
        let oracle = match oracle_for_stratum(f, &mu) {
            Ok((_, c)) => c,
            Err(Error::ImpossibleProfile(_)) => hurwitz_core::exactring::int(0),
            Err(e) => return Err(e.into()),
        };
        report.flags.oracle_match = Some(oracle == report.hurwitz);
    }
    output::stratum(&report, args.format).map_err(Failure::Compute)
}

fn run_table(args: &TableArgs) -> Result<String, Failure> {
    let (text, err) = output::table(args.max_codim, args.format);
    match err {
        None => Ok(text),
        Some(e) => {
            print!("{text}");
            Err(Failure::Compute(e))
        }
    }
}

fn run_verify_cmd(args: &VerifyArgs) -> Result<String, Failure> {
    if args.max_sheets > DEFAULT_SHEET_LIMIT {
        return Err(Failure::Usage(format!("--max-sheets must be <= {DEFAULT_SHEET_LIMIT}")));
    }
    if args.max_codim > MAX_UNIVERSAL_CODIM {
        return Err(Failure::Usage(format!("--max-codim must be <= {MAX_UNIVERSAL_CODIM}")));
    }
    let cfg = VerifyConfig {
        max_sheets: args.max_sheets,
        max_codim: args.max_codim,
        cache: args.cache.clone(),
        z_rule: match args.z_rule {
            ZRuleArg::Shifted => ZRule::ShiftedWeight,
            ZRuleArg::Plain => ZRule::PlainWeight,
        },
    };
    let report = run_verify(&cfg)?;
    let text = report.to_text();
    if report.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Universal(a) => run_universal(a),
        Command::Stratum(a) => run_stratum(a),
        Command::Table(a) => run_table(a),
        Command::Verify(a) => run_verify_cmd(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}
