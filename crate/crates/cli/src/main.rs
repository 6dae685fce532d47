mod commands;
mod figures;
mod table;

use clap::{Parser, Subcommand, ValueEnum};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use table::Format;

#[derive(Parser, Debug)]
#[command(
    name = "pcot",
    version,
    about = "Period functions of divisor-sum q-series, cotangent sums, the smoothed second moment of zeta and Voronoi summation",
    after_help = "Exit status: 0 success, 1 a verify suite failed, 2 bad input, 3 precision or convergence failure."
)]
pub struct Cli {
    /// Working precision in bits, overriding each command's default
    #[arg(long, global = true, env = "PCOT_PREC_BITS")]
    pub prec_bits: Option<u32>,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table to this file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cotangent sum c_a(h/k) = k^a sum cot(pi m h/k) zeta(-a, m/k)
    Cotsum {
        /// Real part of the shift a
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Imaginary part of a
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a_im: f64,
        /// Numerator
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        /// Denominator, positive
        #[arg(long)]
        k: i64,
        #[arg(long, value_enum, default_value_t = CotMethod::Auto)]
        method: CotMethod,
    },
    /// The period function psi_a, its smooth part g_a, or the q-series S_a
    Period {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_re: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_im: f64,
        #[arg(long, value_enum, default_value_t = PeriodWhat::Psi)]
        what: PeriodWhat,
    },
    /// Taylor data at z = 1: the a_m of (pi i/2)(1+z) psi_0(1+z), or g_a^{(m)}(1)/m!
    Taylor {
        /// Print a_M
        #[arg(long)]
        am: Option<usize>,
        /// With --am, print every a_m for 2 <= m <= M
        #[arg(long)]
        upto: bool,
        /// Shift for the g_a table
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Last index of the g_a table
        #[arg(long)]
        mmax: Option<usize>,
    },
    /// The exact formula for int_0^inf |zeta(1/2+it)|^2 e^{-delta t} dt
    Moment {
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta_im: f64,
        /// Also run the direct quadrature (real delta only)
        #[arg(long)]
        oracle: bool,
    },
    /// Voronoi summation checks
    Voronoi {
        #[arg(long, value_enum, default_value_t = VoronoiKind::Extended)]
        kind: VoronoiKind,
        /// delta for the extended identity and the Gaussian example
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Correction coefficients c_0..c_N for the extended identity
        #[arg(long)]
        terms: Option<usize>,
        /// List the correction coefficients instead of the summary
        #[arg(long)]
        coeffs: bool,
        #[arg(long, value_enum, default_value_t = WeightKind::Gaussian)]
        weight: WeightKind,
        #[arg(long, value_enum, default_value_t = PairKind::Gaussian)]
        pair: PairKind,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z_re: f64,
        #[arg(long, default_value_t = 1.0)]
        z_im: f64,
    },
    /// Estermann function D(s, a, h/k)
    Estermann {
        #[arg(long, allow_hyphen_values = true)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long)]
        k: i64,
        /// Also report the functional-equation residual
        #[arg(long)]
        fe: bool,
    },
    /// Data for figures 1-5 as (h, k, value, err) rows
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        /// Denominator for figures 1 (default 541) and 4 (default 307)
        #[arg(long)]
        k: Option<i64>,
        /// Largest denominator for figures 2, 3 (default 100) and 5 (default 50)
        #[arg(long)]
        kmax: Option<i64>,
    },
    /// Run an identity over a range of inputs and report the worst residual
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 30)]
        kmax: i64,
        /// Shifts for the reciprocity suite
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        a: Vec<f64>,
        /// Pass threshold for the worst residual
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CotMethod {
    /// Closed forms at integer a, the direct sum otherwise
    Auto,
    /// The defining sum over m
    Direct,
    /// Reciprocity descent
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeriodWhat {
    Psi,
    G,
    S,
    /// Residual of the period relation at z
    Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VoronoiKind {
    Extended,
    Classical,
    Gaussian,
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    /// e^{-(x/10)^2}
    Gaussian,
    /// e^{-((x-20)/5)^2}
    Shifted,
    /// Smooth bump on [1, 6]
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairKind {
    /// F(s) = Gamma(s/2)/(2 Gamma(s))
    Gaussian,
    /// Mellin transform of a bump on [1, 2]
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Reciprocity,
    Dedekind,
    Stieltjes,
    Estermann,
    Voronoi,
}

fn emit(cli: &Cli, t: &table::Table) -> io::Result<()> {
    match &cli.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            t.write(&mut w, cli.format)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            t.write(&mut w, cli.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("pcot: {e}");
            return ExitCode::from(2);
        }
    }
    let (table, passed) = match commands::run(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("pcot: {e}");
            return ExitCode::from(match e.class() {
                pcot_core::ErrorClass::Domain => 2,
                pcot_core::ErrorClass::Numerical => 3,
            });
        }
    };
    if let Err(e) = emit(&cli, &table) {
        eprintln!("pcot: {e}");
        return ExitCode::from(1);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
