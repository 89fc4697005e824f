use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maasslab::{Complex64, Family};

mod commands;
mod output;

use output::Outcome;

#[derive(Parser, Debug)]
#[command(
    name = "maasslab",
    version,
    about = "Harmonic Maass-Eisenstein series: expansions, Hecke and xi checks, p-adic limits"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Default truncation.
    #[arg(long, global = true, env = "MAASSLAB_TRUNC", default_value_t = 100)]
    trunc: u64,
    /// Default p-adic precision (digits).
    #[arg(long, global = true, env = "MAASSLAB_PREC", default_value_t = 10)]
    prec: u32,
    /// Tolerance override for floating-point checks.
    #[arg(long, global = true, env = "MAASSLAB_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print a truncated expansion.
    Expand(FormArgs),
    /// Run one of the checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run the acceptance suite.
    Selftest {
        /// Reduced ranges.
        #[arg(long)]
        quick: bool,
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an expansion at points of the upper half-plane.
    Eval {
        #[command(flatten)]
        form: FormArgs,
        /// Point as "x,y" for z = x + iy; repeatable.
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_z)]
        z: Vec<Complex64>,
    },
}

/// Selects an expansion either by family parameters or from a JSON dump.
#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct FormArgs {
    /// G, H, Gp, Hp, Eis, EisP or Cohen.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// G and Gp: the form G(z, -2k).
    #[arg(long)]
    pub k: Option<i64>,
    /// Eis and EisP: the weight.
    #[arg(long)]
    pub k2: Option<i64>,
    /// H and Hp: H(z, -r + 1/2); Cohen: H_r of weight r + 1/2.
    #[arg(long)]
    pub r: Option<i64>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Truncation (defaults to --trunc).
    #[arg(long)]
    pub n: Option<u64>,
    /// Read the expansion from a JSON dump instead.
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// f | T = lambda f with T(p) or T(p^2) by weight.
    Hecke {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        range: Option<u64>,
        /// Eigenvalue as a symbolic scalar; defaults to the family's.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// xi(f) against the Eisenstein series of the dual weight.
    Xi {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        range: Option<u64>,
    },
    /// xi commutes with the Hecke operators up to a power of p.
    Intertwine {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        range: Option<u64>,
    },
    /// E_n(s) from Gauss sums against its closed form.
    #[command(allow_negative_numbers = true)]
    Zagier {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        s: i64,
        /// Number of Dirichlet coefficients.
        #[arg(long = "M", alias = "m-max", default_value_t = 50)]
        m_max: usize,
        /// Include the per-coefficient table.
        #[arg(long)]
        table: bool,
    },
    /// Congruence of two p-adic Eisenstein series and the matching G^(p).
    Congruence {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k1: i64,
        #[arg(long)]
        k2: i64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        range: Option<u64>,
    },
    /// Convergence of a family along k_i = k0 + (p-1) p^i.
    Limit {
        #[arg(long, value_parser = parse_limit_family)]
        family: maasslab::congruence::LimitFamily,
        #[arg(long)]
        k0: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        #[arg(long, default_value_t = 100)]
        range: u64,
    },
    /// xi of the weight-0 limit against the weight 2 p-adic Eisenstein series.
    Serre {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        #[arg(long, default_value_t = 50)]
        range: u64,
    },
    /// Kummer congruence for zeta^(p), or the twisted one with --d.
    #[command(allow_negative_numbers = true)]
    Kummer {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        a: u32,
        /// Discriminant of the twisting character.
        #[arg(long)]
        d: Option<i64>,
    },
    /// G^(p)(z) = G(z) - G(pz) on the sigma level.
    Stabilization {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        range: Option<u64>,
    },
    /// Finite-difference residual of the weight-kappa Laplacian.
    Laplacian {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_z)]
        z: Vec<Complex64>,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Transformation residual under a matrix of SL2(Z).
    Modularity {
        #[command(flatten)]
        form: FormArgs,
        /// S, T or "a,b,c,d".
        #[arg(long, default_value = "S", allow_hyphen_values = true, value_parser = parse_matrix)]
        matrix: [i64; 4],
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_z)]
        z: Vec<Complex64>,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: maasslab::Error| e.to_string())
}

fn parse_limit_family(s: &str) -> Result<maasslab::congruence::LimitFamily, String> {
    match s {
        "G" | "Gp" => Ok(maasslab::congruence::LimitFamily::G),
        "H" | "Hp" => Ok(maasslab::congruence::LimitFamily::H),
        _ => Err(format!("expected G or H, got {s:?}")),
    }
}

fn parse_z(s: &str) -> Result<Complex64, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{x:?}: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{y:?}: {e}"))?;
    if y.is_nan() || y <= 0.0 {
        return Err(format!("Im z = {y} must be positive"));
    }
    Ok(Complex64::new(x, y))
}

fn parse_matrix(s: &str) -> Result<[i64; 4], String> {
    match s {
        "S" => Ok(maasslab::numeric::S_MATRIX),
        "T" => Ok(maasslab::numeric::T_MATRIX),
        _ => {
            let v: Vec<i64> = s
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let m: [i64; 4] = v.try_into().map_err(|_| "expected four entries a,b,c,d".to_string())?;
            if m[0] * m[3] - m[1] * m[2] != 1 {
                return Err(format!("{s} does not have determinant 1"));
            }
            Ok(m)
        }
    }
}

/// Global settings shared by every command.
pub struct RunConfig {
    pub trunc: u64,
    pub prec: u32,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub const EXACT_TOL: f64 = 1e-8;
    pub const NUMERIC_TOL: f64 = 1e-5;

    pub fn exact_tol(&self) -> f64 {
        self.tol.unwrap_or(Self::EXACT_TOL)
    }

    pub fn numeric_tol(&self) -> f64 {
        self.tol.unwrap_or(Self::NUMERIC_TOL)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(maasslab::Error),
}

impl From<maasslab::Error> for CliError {
    fn from(e: maasslab::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use maasslab::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Domain(_) | E::Precondition(_) | E::Parse(_) | E::Io(_)) => 2,
            CliError::Core(E::Resource(_) | E::Pole { .. }) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig {
        trunc: cli.trunc,
        prec: cli.prec,
        tol: cli.tol,
    };
    if cfg.trunc == 0 {
        return Err(CliError::Usage("truncation must be positive".into()));
    }
    match cli.cmd {
        Cmd::Expand(form) => commands::expand(&form, &cfg),
        Cmd::Eval { form, z } => commands::eval(&form, &z, &cfg),
        Cmd::Selftest { quick, .. } => Ok(commands::selftest(quick)),
        Cmd::Verify(v) => match v {
            VerifyCmd::Hecke { form, range, lambda } => commands::hecke(&form, range, lambda.as_deref(), &cfg),
            VerifyCmd::Xi { form, range } => commands::xi(&form, range, &cfg),
            VerifyCmd::Intertwine { form, range } => commands::intertwine(&form, range, &cfg),
            VerifyCmd::Zagier { n, s, m_max, table } => commands::zagier(n, s, m_max, table, &cfg),
            VerifyCmd::Congruence { p, k1, k2, a, range } => {
                commands::congruence(p, k1, k2, a, range.unwrap_or(cfg.trunc))
            }
            VerifyCmd::Limit {
                family,
                k0,
                p,
                depth,
                range,
            } => commands::limit(family, k0, p, depth, range, &cfg),
            VerifyCmd::Serre { p, depth, range } => commands::serre(p, depth, range, &cfg),
            VerifyCmd::Kummer { p, n, m, a, d } => commands::kummer(p, n, m, a, d),
            VerifyCmd::Stabilization { k, p, range } => commands::stabilization(k, p, range.unwrap_or(cfg.trunc)),
            VerifyCmd::Laplacian { form, z, h } => commands::laplacian(&form, &z, h, &cfg),
            VerifyCmd::Modularity { form, matrix, z } => commands::modularity(&form, matrix, &z, &cfg),
        },
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Cmd::Selftest { json: true, .. } = cli.cmd {
        cli.format = Format::Json;
    }
    let (format, out) = (cli.format, cli.out.clone());
    match run(cli) {
        Ok(outcome) => {
            let body = match outcome.render(format) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(e.exit_code());
                }
            };
            let written = match &out {
                Some(path) => std::fs::write(path, body.as_bytes()),
                None => std::io::stdout().lock().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("cannot write output: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
