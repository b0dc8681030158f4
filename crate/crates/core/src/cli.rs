//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a numerical failure, 2 on bad usage.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{delta_expansion, expansion_terms, p_polynomials};
use crate::certify::{certify_default, certify_interval, IntervalBound};
use crate::dimension::{cover_zero_scan, delta_estimate, dimension_ladder, k_default, s_k, CoverZeroReport};
use crate::error::Error;
use crate::geodesic_oracle::{euler_product, log_det_reconstruction, Character};
use crate::hyperbolic::check_width;
use crate::transfer::{build_matrix, determinant, Sign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// One row of the published comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub w: f64,
    /// Value as printed.
    pub printed: f64,
    /// Number of printed decimal places.
    pub decimals: u32,
    /// Phillips–Sarnak estimate, center and half-width.
    pub ps_center: f64,
    pub ps_width: f64,
}

pub const REFERENCE_TABLE: [ReferenceRow; 9] = [
    ReferenceRow {
        w: 2.5,
        printed: 0.82,
        decimals: 2,
        ps_center: 0.816,
        ps_width: 0.002,
    },
    ReferenceRow {
        w: 3.0,
        printed: 0.752,
        decimals: 3,
        ps_center: 0.753,
        ps_width: 0.003,
    },
    ReferenceRow {
        w: 4.0,
        printed: 0.6837,
        decimals: 4,
        ps_center: 0.683,
        ps_width: 0.005,
    },
    ReferenceRow {
        w: 6.0,
        printed: 0.622970,
        decimals: 6,
        ps_center: 0.621,
        ps_width: 0.001,
    },
    ReferenceRow {
        w: 8.0,
        printed: 0.593957,
        decimals: 6,
        ps_center: 0.595,
        ps_width: 0.004,
    },
    ReferenceRow {
        w: 10.0,
        printed: 0.5766067,
        decimals: 7,
        ps_center: 0.575,
        ps_width: 0.007,
    },
    ReferenceRow {
        w: 16.0,
        printed: 0.5501100,
        decimals: 7,
        ps_center: 0.550,
        ps_width: 0.005,
    },
    ReferenceRow {
        w: 40.0,
        printed: 0.521821511,
        decimals: 9,
        ps_center: 0.520,
        ps_width: 0.007,
    },
    ReferenceRow {
        w: 100.0,
        printed: 0.509279417381,
        decimals: 12,
        ps_center: 0.509,
        ps_width: 0.002,
    },
];

/// Slack added to the Phillips–Sarnak half-widths.
pub const PS_SLACK: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "hecke", version, about = "Hausdorff dimension of Hecke triangle groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// s_k(w) with a ladder error estimate
    Dim(DimArgs),
    /// The nine-row comparison table
    Table(TableArgs),
    /// Determinant vs geodesic log-det vs Euler product
    Validate(ValidateArgs),
    /// Large-w expansion of δ(w)
    Asympt(AsymptArgs),
    /// Certified interval for δ(w), w ≥ 3
    Certify(CertifyArgs),
    /// Zeros of the twisted factors for the abelian covers
    Covers(CoversArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long = "w", required = true, allow_negative_numbers = true)]
    pub w: Vec<f64>,
    /// Truncation; defaults to a value scaled to w
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 15)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub w: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Matrix truncation for the determinant
    #[arg(long, default_value_t = 30)]
    pub k: usize,
    /// Highest trace order in the log-det reconstruction
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Largest letter for the log-det reconstruction
    #[arg(long, default_value_t = 200)]
    pub m: u32,
    /// Word length cap for the Euler product
    #[arg(long, default_value_t = 3)]
    pub euler_nmax: usize,
    /// Largest letter for the Euler product
    #[arg(long, default_value_t = 50)]
    pub euler_m: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AsymptArgs {
    #[arg(long = "w", required = true)]
    pub w: Vec<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long = "w", required = true)]
    pub w: Vec<f64>,
    /// A-priori lower bound for δ; bootstrapped from s_k when absent
    #[arg(long)]
    pub prior: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CoversArgs {
    #[arg(long)]
    pub w: f64,
    #[arg(long = "n", required = true)]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimRow {
    pub w: f64,
    pub k: usize,
    pub s_k: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimReport {
    pub rows: Vec<DimRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub w: f64,
    pub s_k: f64,
    pub printed: f64,
    pub ps_center: f64,
    pub ps_width: f64,
    pub ps_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub k: usize,
    pub rows: Vec<TableRow>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub w: f64,
    pub s: f64,
    pub theta: f64,
    pub determinant: Complex64,
    pub log_det: Complex64,
    pub euler: Complex64,
    pub det_vs_log_det: f64,
    pub det_vs_euler: f64,
    pub log_det_vs_euler: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptRow {
    pub w: f64,
    pub expansion: f64,
    /// 1/2, 1/w, P_1(log w)/w², …, P_4(log w)/w⁵
    pub terms: Vec<f64>,
    pub s_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptReport {
    /// Ascending coefficients of P_1 … P_4 in t = log w.
    pub p_polynomials: Vec<Vec<f64>>,
    pub rows: Vec<AsymptRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub intervals: Vec<IntervalBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoversReport {
    pub scans: Vec<CoverZeroReport>,
}

/// Twelve significant digits, '.' as decimal separator.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{}{}{}i", fmt_num(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_num(z.im.abs()))
}

enum Failure {
    Usage(String),
    Numeric(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn emit_json<T: Serialize>(out: &mut dyn Write, report: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(report).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn emit_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> CmdResult {
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.join(","))?;
    }
    Ok(())
}

fn cmd_dim(a: &DimArgs, out: &mut dyn Write) -> CmdResult {
    for &w in &a.w {
        check_width(w)?;
    }
    let rows =
        a.w.par_iter()
            .map(|&w| {
                let k = a.k.unwrap_or_else(|| k_default(w));
                let ladder = dimension_ladder(w, k.saturating_sub(3).max(2), k)?;
                Ok(DimRow {
                    w,
                    k,
                    s_k: ladder.estimate,
                    error_estimate: ladder.error_estimate,
                })
            })
            .collect::<crate::Result<Vec<_>>>()?;
    let report = DimReport { rows };
    match a.format {
        Format::Json => emit_json(out, &report),
        Format::Csv => emit_csv(
            out,
            &["w", "k", "s_k", "error_estimate"],
            &report
                .rows
                .iter()
                .map(|r| vec![fmt_num(r.w), r.k.to_string(), fmt_num(r.s_k), fmt_num(r.error_estimate)])
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            for r in &report.rows {
                writeln!(
                    out,
                    "w = {}  k = {}  s_k = {}  error ≈ {}",
                    fmt_num(r.w),
                    r.k,
                    fmt_num(r.s_k),
                    fmt_num(r.error_estimate)
                )?;
            }
            Ok(())
        }
    }
}

/// s_k(w) against the reference table.
pub fn table_report(k: usize) -> crate::Result<TableReport> {
    let rows = REFERENCE_TABLE
        .par_iter()
        .map(|r| {
            let s = s_k(k, r.w)?.s_k;
            Ok(TableRow {
                w: r.w,
                s_k: s,
                printed: r.printed,
                ps_center: r.ps_center,
                ps_width: r.ps_width,
                ps_pass: (s - r.ps_center).abs() <= r.ps_width + PS_SLACK,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let all_pass = rows.iter().all(|r| r.ps_pass);
    Ok(TableReport { k, rows, all_pass })
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> CmdResult {
    if a.k < 1 {
        return Err(Failure::Usage("k must be at least 1".into()));
    }
    let report = table_report(a.k)?;
    match a.format {
        Format::Json => emit_json(out, &report),
        Format::Csv => emit_csv(
            out,
            &["w", "s_k", "printed", "ps_center", "ps_width", "ps_pass"],
            &report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_num(r.w),
                        fmt_num(r.s_k),
                        fmt_num(r.printed),
                        fmt_num(r.ps_center),
                        fmt_num(r.ps_width),
                        r.ps_pass.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            writeln!(
                out,
                "{:>6}  {:>16}  {:>14}  {:>13}  PS",
                "w",
                format!("s_{}(w)", report.k),
                "printed",
                "Phillips-Sarnak"
            )?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{:>6}  {:>16}  {:>14}  {:>7} ± {:<5}  {}",
                    fmt_num(r.w),
                    fmt_num(r.s_k),
                    fmt_num(r.printed),
                    fmt_num(r.ps_center),
                    fmt_num(r.ps_width),
                    if r.ps_pass { "ok" } else { "MISS" }
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> CmdResult {
    check_width(a.w)?;
    if !(a.s > 0.5) {
        return Err(Failure::Usage(format!("s must exceed 1/2 (got {})", a.s)));
    }
    let chi = Character::new(Sign::Plus, a.theta)?;
    let s = Complex64::new(a.s, 0.0);
    let det = determinant(&build_matrix(a.k, s, a.w, a.theta)?, Sign::Plus)?.value;
    let (log_det, euler) = rayon::join(
        || log_det_reconstruction(s, a.w, chi, a.nmax, a.m),
        || euler_product(s, a.w, chi, f64::INFINITY, a.euler_nmax, a.euler_m),
    );
    let (log_det, euler) = (log_det?.value, euler?.value);
    let report = ValidateReport {
        w: a.w,
        s: a.s,
        theta: a.theta,
        determinant: det,
        log_det,
        euler,
        det_vs_log_det: (det - log_det).norm(),
        det_vs_euler: (det - euler).norm(),
        log_det_vs_euler: (log_det - euler).norm(),
    };
    match a.format {
        Format::Json => emit_json(out, &report),
        Format::Csv => emit_csv(
            out,
            &[
                "w",
                "s",
                "theta",
                "determinant",
                "log_det",
                "euler",
                "det_vs_log_det",
                "det_vs_euler",
                "log_det_vs_euler",
            ],
            &[vec![
                fmt_num(report.w),
                fmt_num(report.s),
                fmt_num(report.theta),
                fmt_complex(report.determinant),
                fmt_complex(report.log_det),
                fmt_complex(report.euler),
                fmt_num(report.det_vs_log_det),
                fmt_num(report.det_vs_euler),
                fmt_num(report.log_det_vs_euler),
            ]],
        ),
        Format::Text => {
            writeln!(
                out,
                "w = {}  s = {}  theta = {}",
                fmt_num(report.w),
                fmt_num(report.s),
                fmt_num(report.theta)
            )?;
            writeln!(out, "determinant   {}", fmt_complex(report.determinant))?;
            writeln!(out, "log-det       {}", fmt_complex(report.log_det))?;
            writeln!(out, "euler product {}", fmt_complex(report.euler))?;
            writeln!(out, "|det - logdet| = {}", fmt_num(report.det_vs_log_det))?;
            writeln!(out, "|det - euler|  = {}", fmt_num(report.det_vs_euler))?;
            writeln!(out, "|logdet - euler| = {}", fmt_num(report.log_det_vs_euler))?;
            Ok(())
        }
    }
}

fn cmd_asympt(a: &AsymptArgs, out: &mut dyn Write) -> CmdResult {
    let p = p_polynomials(4)?;
    let rows =
        a.w.par_iter()
            .map(|&w| {
                Ok(AsymptRow {
                    w,
                    expansion: delta_expansion(w)?,
                    terms: expansion_terms(w)?,
                    s_k: delta_estimate(w)?,
                })
            })
            .collect::<crate::Result<Vec<_>>>()?;
    let report = AsymptReport { p_polynomials: p, rows };
    match a.format {
        Format::Json => emit_json(out, &report),
        Format::Csv => emit_csv(
            out,
            &["w", "expansion", "s_k", "difference"],
            &report
                .rows
                .iter()
                .map(|r| vec![fmt_num(r.w), fmt_num(r.expansion), fmt_num(r.s_k), fmt_num(r.s_k - r.expansion)])
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            for (j, pj) in report.p_polynomials.iter().enumerate() {
                let mut line = String::new();
                for (d, &c) in pj.iter().enumerate().rev() {
                    let sign = if c < 0.0 { "-" } else { "+" };
                    let mono = match d {
                        0 => String::new(),
                        1 => "·t".to_string(),
                        _ => format!("·t^{d}"),
                    };
                    if line.is_empty() {
                        line = format!("{}{mono}", fmt_num(c));
                    } else {
                        line += &format!(" {sign} {}{mono}", fmt_num(c.abs()));
                    }
                }
                writeln!(out, "P{}(t) = {line}", j + 1)?;
            }
            for r in &report.rows {
                writeln!(
                    out,
                    "w = {}  expansion = {}  s_k = {}  difference = {}",
                    fmt_num(r.w),
                    fmt_num(r.expansion),
                    fmt_num(r.s_k),
                    fmt_num(r.s_k - r.expansion)
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> CmdResult {
    let intervals =
        a.w.par_iter()
            .map(|&w| match a.prior {
                Some(p) => certify_interval(w, p),
                None => certify_default(w),
            })
            .collect::<crate::Result<Vec<_>>>()?;
    let report = CertifyReport { intervals };
    match a.format {
        Format::Json => emit_json(out, &report),
        Format::Csv => emit_csv(
            out,
            &["w", "lower", "upper", "epsilon_used", "delta_prior", "delta_ladder"],
            &report
                .intervals
                .iter()
                .map(|b| {
                    vec![
                        fmt_num(b.w),
                        fmt_num(b.lower),
                        fmt_num(b.upper),
                        fmt_num(b.epsilon_used),
                        fmt_num(b.delta_prior),
                        fmt_num(b.delta_ladder),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            for b in &report.intervals {
                writeln!(
                    out,
                    "w = {}: {} < δ < {}  (ε = {}, prior {}, s_k = {})",
                    fmt_num(b.w),
                    fmt_num(b.lower),
                    fmt_num(b.upper),
                    fmt_num(b.epsilon_used),
                    fmt_num(b.delta_prior),
                    fmt_num(b.delta_ladder)
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_covers(a: &CoversArgs, out: &mut dyn Write) -> CmdResult {
    if a.n.contains(&0) {
        return Err(Failure::Usage("cover degree n must be positive".into()));
    }
    let scans =
        a.n.iter()
            .map(|&n| cover_zero_scan(a.w, n, a.eps, a.k))
            .collect::<crate::Result<Vec<_>>>()?;
    let report = CoversReport { scans };
    match a.format {
        Format::Json => emit_json(out, &report),
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &report.scans {
                for f in &r.factors {
                    for z in &f.zeros {
                        rows.push(vec![
                            r.n.to_string(),
                            f.a.to_string(),
                            f.sign.symbol().to_string(),
                            fmt_num(f.theta),
                            fmt_num(*z),
                        ]);
                    }
                }
            }
            emit_csv(out, &["n", "a", "sign", "theta", "zero"], &rows)
        }
        Format::Text => {
            for r in &report.scans {
                writeln!(
                    out,
                    "n = {}: δ = {}, {} zero(s) in ({}, {}]",
                    r.n,
                    fmt_num(r.delta),
                    r.count_in_window,
                    fmt_num(r.delta - r.epsilon),
                    fmt_num(r.delta)
                )?;
                for f in r.factors.iter().filter(|f| !f.zeros.is_empty()) {
                    let zs: Vec<String> = f.zeros.iter().map(|z| fmt_num(*z)).collect();
                    writeln!(out, "  a = {} ({}): {}", f.a, f.sign.symbol(), zs.join(", "))?;
                }
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Dim(a) => cmd_dim(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Asympt(a) => cmd_asympt(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Covers(a) => cmd_covers(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NUMERIC
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NUMERIC
        }
    }
}
