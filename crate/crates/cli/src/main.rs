use clap::{Args, Parser, Subcommand, ValueEnum};
use heightlab::cert::{Format, Report};
use heightlab::exactcore::rational::{parse_rational, Rational};
use heightlab_cli as reports;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "heightlab", version, about = "Certified height and dynamics verification reports")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
    /// Record wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Height lower bounds for periodic points of the cubic Hénon-type map.
    PerA3 {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
        r: u32,
        /// 3-adic lifting precision.
        #[arg(long, default_value_t = 8)]
        prec: u32,
    },
    /// Finite-field census and trace statistics.
    TraceScan {
        #[arg(long, value_parser = ["1", "3"])]
        m: String,
    },
    /// Powers of the mod-3 Jacobian and invertibility.
    JacobianTable {
        #[arg(long, default_value_t = 8)]
        lmax: usize,
    },
    /// The rational maps f_{d,p} of the projective plane.
    P2 {
        #[command(subcommand)]
        op: P2Op,
    },
    /// Backward orbit of the fixed point of f_{4,2}.
    Backorbit {
        #[arg(long, default_value_t = 12)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        degmax: usize,
    },
    /// Lyapunov exponents and height-bound arithmetic.
    Cohyp {
        #[command(subcommand)]
        op: CohypOp,
    },
    /// Full suite with default parameters.
    All {
        #[arg(long, default_value_t = reports::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct Family {
    #[arg(long, default_value_t = 4)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    p: u64,
}

#[derive(Subcommand)]
enum P2Op {
    /// Degrees of the first n iterates, common factors removed.
    Degseq {
        #[command(flatten)]
        fam: Family,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = reports::DEFAULT_SEED)]
        seed: u64,
    },
    /// Indeterminacy points.
    Indet {
        #[command(flatten)]
        fam: Family,
    },
    /// Images of the contracted coordinate lines.
    Contracted {
        #[command(flatten)]
        fam: Family,
        #[arg(long, default_value_t = reports::DEFAULT_SEED)]
        seed: u64,
    },
    /// Exact preimages of seeded sample points.
    Preimages {
        #[command(flatten)]
        fam: Family,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = reports::DEFAULT_SEED)]
        seed: u64,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum CohypOp {
    /// Lyapunov exponents and hyperbolicity class.
    Lyapunov {
        /// Comma-separated dynamical degrees d_1,...,d_k.
        #[arg(long, default_value = "4,2")]
        degrees: String,
    },
    /// Height bound for periodic points.
    Bound {
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "2")]
        alpha: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1/2")]
        beta: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "-3")]
        c: Rational,
    },
    /// The periodic bound with c = -k h + C.
    Family {
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "2")]
        alpha: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1/2")]
        beta: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1")]
        k: Rational,
        #[arg(long = "C", value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        big_c: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1")]
        h: Rational,
    },
    /// Check the recursive height inequality on an orbit.
    Recineq {
        /// Comma-separated heights sampled every m steps.
        #[arg(long, allow_hyphen_values = true, default_value = "1,2,4,8,16")]
        heights: String,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "2")]
        alpha: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        beta: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        c: Rational,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

fn run(cmd: Command) -> heightlab::Result<Report> {
    match cmd {
        Command::PerA3 { r, prec } => reports::per_a3(r, prec),
        Command::TraceScan { m } => reports::trace_scan(if m == "1" { 1 } else { 3 }),
        Command::JacobianTable { lmax } => reports::jacobian_table(lmax),
        Command::P2 { op } => match op {
            P2Op::Degseq { fam, n, seed } => reports::p2_degseq(fam.d, fam.p, n, seed),
            P2Op::Indet { fam } => reports::p2_indet(fam.d, fam.p),
            P2Op::Contracted { fam, seed } => reports::p2_contracted(fam.d, fam.p, seed),
            P2Op::Preimages { fam, samples, seed } => reports::p2_preimages(fam.d, fam.p, samples, seed),
        },
        Command::Backorbit { steps, degmax } => reports::backorbit_report(steps, degmax),
        Command::Cohyp { op } => match op {
            CohypOp::Lyapunov { degrees } => reports::cohyp_lyapunov(&reports::parse_list(&degrees)?),
            CohypOp::Bound { alpha, beta, c } => reports::cohyp_bound(&alpha, &beta, &c),
            CohypOp::Family { alpha, beta, k, big_c, h } => reports::cohyp_family(&alpha, &beta, &k, &big_c, &h),
            CohypOp::Recineq { heights, alpha, beta, c, m } => {
                reports::cohyp_recineq(&reports::parse_list(&heights)?, &alpha, &beta, &c, m)
            }
        },
        Command::All { seed } => reports::all(seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let bytes = report.emit(format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
