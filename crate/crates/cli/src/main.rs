//! `qhyper`: bases, verification sweeps and Barnes integrals for the
//! q-hypergeometric equation at `q = exp(2 pi i / N)`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qhyper::barnes::{contour_integral, residue_sum, verify_theorem3, QuadConfig, Theorem3Report};
use qhyper::basis::Theorem2Report;
use qhyper::{barnes_closed_form, case_of, evaluate, latex, verify_theorem2};
use qhyper::{BasisDocument, CaseTag, Error, Params, ParamsJson};
use rayon::prelude::*;
use serde::Serialize;

const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(name = "qhyper", version, about = "q-hypergeometric equation at roots of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the solution basis for one parameter tuple.
    Basis {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification sweep.
    Verify {
        #[arg(value_enum)]
        which: Theorem,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7", allow_hyphen_values = true)]
        x: Vec<f64>,
    },
    /// Compare the contour integral, the residue sum and the closed form.
    Integral {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7", allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    alpha: u32,
    #[arg(long)]
    beta: u32,
    #[arg(long)]
    gamma: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Error> {
        Params::new(self.n, self.alpha, self.beta, self.gamma)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "N-min", default_value_t = 2)]
    n_min: u32,
    #[arg(long = "N-max", default_value_t = 8)]
    n_max: u32,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    beta: Option<u32>,
    #[arg(long)]
    gamma: Option<u32>,
    #[arg(long = "case", value_enum)]
    case: Option<CaseArg>,
    #[arg(long = "condition2-only")]
    condition2_only: bool,
    /// Worker threads; QHYPER_JOBS takes precedence.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Thm2,
    Thm3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    #[value(name = "CASE1", alias = "case1")]
    Case1,
    #[value(name = "CASE2", alias = "case2")]
    Case2,
    #[value(name = "CASE3", alias = "case3")]
    Case3,
}

impl CaseArg {
    fn tag(self) -> CaseTag {
        match self {
            CaseArg::Case1 => CaseTag::Case1,
            CaseArg::Case2 => CaseTag::Case2,
            CaseArg::Case3 => CaseTag::Case3,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConvergent(_) | Error::SingularX => EXIT_PRECONDITION,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| invalid(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn cmd_basis(args: &ParamArgs, format: Format, out: Option<&PathBuf>) -> Result<u8, Failure> {
    let p = args.params()?;
    let doc = BasisDocument::new(&p);
    let text = match format {
        Format::Json => to_json(&doc),
        Format::Latex => {
            let (psi1, psi2) = doc.elements()?;
            let (n, a, b, g) = p.tuple();
            let mut lines = vec![
                format!("% N = {n}, alpha = {a}, beta = {b}, gamma = {g}, {}", doc.case),
                format!("\\Psi_1 = {}", latex::solution_element(&psi1)),
                format!("\\Psi_2 = {}", latex::solution_element(&psi2)),
            ];
            if doc.typo_resolution.applicable {
                lines.push(format!("% {}", doc.typo_resolution.note));
            }
            lines.join("\n")
        }
    };
    emit(&text, out)?;
    Ok(0)
}

fn jobs(requested: Option<usize>) -> Result<usize, Failure> {
    let chosen = match std::env::var("QHYPER_JOBS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| invalid(format!("QHYPER_JOBS must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => requested,
    };
    match chosen {
        Some(0) => Err(invalid("the number of jobs must be positive")),
        Some(n) => Ok(n),
        // rayon picks the core count
        None => Ok(0),
    }
}

fn sweep_tuples(s: &SweepArgs) -> Result<Vec<Params>, Failure> {
    if s.n_min < 2 || s.n_min > s.n_max {
        return Err(invalid(format!(
            "need 2 <= N-min <= N-max, got {}..{}",
            s.n_min, s.n_max
        )));
    }
    for (name, v) in [("alpha", s.alpha), ("beta", s.beta), ("gamma", s.gamma)] {
        if let Some(v) = v {
            if v < 1 || v > s.n_max {
                return Err(invalid(format!("{name} = {v} outside 1..={}", s.n_max)));
            }
        }
    }
    let mut out = Vec::new();
    for n in s.n_min..=s.n_max {
        for a in 1..=n {
            for b in 1..=a {
                for g in 1..=n {
                    let keep = s.alpha.is_none_or(|v| v == a)
                        && s.beta.is_none_or(|v| v == b)
                        && s.gamma.is_none_or(|v| v == g);
                    if !keep {
                        continue;
                    }
                    let p = Params::new(n, a, b, g)?;
                    if s.case.is_some_and(|c| c.tag() != case_of(&p)) {
                        continue;
                    }
                    if s.condition2_only && !p.satisfies_condition2() {
                        continue;
                    }
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Thm2Summary {
    theorem: &'static str,
    tuples: usize,
    passed: usize,
    failures: Vec<Theorem2Report>,
}

#[derive(Serialize)]
struct Thm3Summary {
    theorem: &'static str,
    tuples: usize,
    passed: usize,
    skipped_condition2: usize,
    tol: f64,
    max_deviation: f64,
    failures: Vec<Theorem3Report>,
}

fn check_samples(xs: &[f64]) -> Result<Vec<Complex64>, Failure> {
    if xs.is_empty() {
        return Err(invalid("at least one sample point is required"));
    }
    Ok(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be positive, got {tol}")))
    }
}

fn cmd_verify(which: Theorem, s: &SweepArgs, tol: f64, xs: &[f64]) -> Result<u8, Failure> {
    check_tol(tol)?;
    let xs = check_samples(xs)?;
    let tuples = sweep_tuples(s)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(s.jobs)?)
        .build()
        .map_err(|e| invalid(e.to_string()))?;
    if tuples.is_empty() {
        eprintln!("warning: 0 tuples match the sweep");
    }
    let (text, ok) = match which {
        Theorem::Thm2 => {
            let reports: Vec<Theorem2Report> =
                pool.install(|| tuples.par_iter().map(verify_theorem2).collect());
            let passed = reports.iter().filter(|r| r.pass()).count();
            let summary = Thm2Summary {
                theorem: "thm2",
                tuples: reports.len(),
                passed,
                failures: reports.into_iter().filter(|r| !r.pass()).collect(),
            };
            (to_json(&summary), summary.failures.is_empty())
        }
        Theorem::Thm3 => {
            let (usable, skipped): (Vec<Params>, Vec<Params>) =
                tuples.into_iter().partition(Params::satisfies_condition2);
            if usable.is_empty() && !skipped.is_empty() {
                eprintln!("warning: 0 tuples satisfy alpha + beta + gamma <= N");
            }
            let reports: Vec<Theorem3Report> =
                pool.install(|| usable.par_iter().map(|p| verify_theorem3(p, &xs, tol)).collect());
            let max_deviation = reports
                .iter()
                .flat_map(|r| r.entries.iter().map(|e| e.max_deviation))
                .fold(0.0, f64::max);
            let passed = reports.iter().filter(|r| r.pass()).count();
            let summary = Thm3Summary {
                theorem: "thm3",
                tuples: reports.len(),
                passed,
                skipped_condition2: skipped.len(),
                tol,
                max_deviation,
                failures: reports.into_iter().filter(|r| !r.pass()).collect(),
            };
            (to_json(&summary), summary.failures.is_empty())
        }
    };
    emit(&text, s.out.as_ref())?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct IntegralSample {
    x: [f64; 2],
    integral: [f64; 2],
    error_estimate: f64,
    converged: bool,
    residue_sum: [f64; 2],
    closed_form: [f64; 2],
    integral_vs_closed: f64,
    residue_vs_closed: f64,
    integral_vs_residue: f64,
    pass: bool,
}

#[derive(Serialize)]
struct IntegralDocument {
    params: ParamsJson,
    case: CaseTag,
    tol: f64,
    samples: Vec<IntegralSample>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn cmd_integral(args: &ParamArgs, xs: &[f64], tol: f64, out: Option<&PathBuf>) -> Result<u8, Failure> {
    check_tol(tol)?;
    let p = args.params()?;
    let xs = check_samples(xs)?;
    let closed = barnes_closed_form(&p)?;
    let cfg = QuadConfig {
        abs_tol: (tol * 1e-3).min(1e-10),
        ..QuadConfig::default()
    };
    let mut samples = Vec::new();
    for x in xs {
        let est = contour_integral(&p, x, &cfg)?;
        let res = residue_sum(&p, x)?;
        let cf = evaluate(&closed, x)?;
        let (ic, rc, ir) = ((est.value - cf).norm(), (res - cf).norm(), (est.value - res).norm());
        samples.push(IntegralSample {
            x: pair(x),
            integral: pair(est.value),
            error_estimate: est.error_estimate,
            converged: est.converged,
            residue_sum: pair(res),
            closed_form: pair(cf),
            integral_vs_closed: ic,
            residue_vs_closed: rc,
            integral_vs_residue: ir,
            pass: ic.max(rc).max(ir) <= tol,
        });
    }
    let ok = samples.iter().all(|s| s.pass);
    let doc = IntegralDocument {
        params: p.to_json(),
        case: case_of(&p),
        tol,
        samples,
    };
    emit(&to_json(&doc), out)?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Basis { params, format, out } => cmd_basis(params, *format, out.as_ref()),
        Command::Verify { which, sweep, tol, x } => cmd_verify(*which, sweep, *tol, x),
        Command::Integral {
            params,
            x,
            tol,
            out,
        } => cmd_integral(params, x, *tol, out.as_ref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
