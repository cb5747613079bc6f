//! Numeric side of the Barnes-type integral
//!
//! `Psi(x) = <alpha><beta>/(<1><gamma>) * int_C q^{xz} <z+1+N><z+gamma> / (<z+alpha><z+beta>) dz`.
//!
//! With integer parameters every `<.>` ratio telescopes through
//! `<z+1>/<z> = 1/(1 - q^z)`, so the integrand is a finite product of factors
//! `(1 - q^{z+j})^{-e_j}` times `q^{xz}` and the double sine never needs to be
//! evaluated.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{prefactor, residue_data, residue_sum_element, ResidueData, ResidueKind};
use crate::basis::barnes_closed_form;
use crate::error::{Error, Result};
use crate::qspace::{evaluate, Params, ParamsJson};
use crate::quad;

/// `Phi(z) / q^{xz} = prod_j (1 - q^{z+j})^{-e_j}` for `j` in `0..=N`.
#[derive(Debug, Clone)]
pub struct FactorList {
    params: Params,
    exponents: BTreeMap<u32, i32>,
}

impl FactorList {
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Nonzero exponents `e_j`.
    pub fn exponents(&self) -> &BTreeMap<u32, i32> {
        &self.exponents
    }

    pub fn exponent(&self, j: u32) -> i32 {
        self.exponents.get(&j).copied().unwrap_or(0)
    }

    /// `sum_j e_j`, the net number of denominator factors.
    pub fn total_exponent(&self) -> i32 {
        self.exponents.values().sum()
    }

    /// Pole order of the integrand at the integer `k` (zero or negative when
    /// there is no pole).
    pub fn pole_order(&self, k: i64) -> i32 {
        let n = self.params.n() as i64;
        self.exponents
            .iter()
            .filter(|(j, _)| (k + **j as i64).rem_euclid(n) == 0)
            .map(|(_, e)| *e)
            .sum()
    }
}

/// Telescopes `<z+1+N>/<z+alpha>` over `[alpha, N]` and `<z+gamma>/<z+beta>`
/// over the gap between `beta` and `gamma`.
pub fn reduce_integrand(p: &Params) -> FactorList {
    let mut exponents = BTreeMap::new();
    let mut bump = |j: u32, e: i32| {
        let slot = exponents.entry(j).or_insert(0);
        *slot += e;
    };
    for j in p.alpha()..=p.n() {
        bump(j, 1);
    }
    if p.gamma() > p.beta() {
        for j in p.beta()..p.gamma() {
            bump(j, 1);
        }
    } else {
        for j in p.gamma()..p.beta() {
            bump(j, -1);
        }
    }
    exponents.retain(|_, e| *e != 0);
    FactorList {
        params: p.clone(),
        exponents,
    }
}

// ln(1 - e^{i phi}) without overflow for large |Im phi|.
fn ln_one_minus_exp_i(phi: Complex64) -> Complex64 {
    let u = (Complex64::i() * phi).exp();
    let r = (-phi.im).exp();
    if r < 0.5 {
        (Complex64::new(1.0, 0.0) - u).ln()
    } else if r > 2.0 {
        // 1 - u = -u (1 - 1/u)
        let inv_u = (-Complex64::i() * phi).exp();
        Complex64::i() * phi + (inv_u - 1.0).ln()
    } else {
        // 1 - e^{i phi} = -2i sin(phi/2) e^{i phi/2}
        let half = phi * 0.5;
        let s = half.sin();
        if s.norm() < 5e-15 {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        (Complex64::new(0.0, -2.0) * s).ln() + Complex64::i() * half
    }
}

/// `Phi(z) = q^{xz} prod_j (1 - q^{z+j})^{-e_j}` with `q^{xz} = exp(2 pi i x z / N)`.
pub fn integrand_eval(f: &FactorList, x: Complex64, z: Complex64) -> Result<Complex64> {
    let n = f.params.n() as f64;
    let scale = 2.0 * PI / n;
    let mut log = Complex64::i() * scale * x * z;
    // each factor has period N in z; reducing the integer part exactly keeps
    // full relative accuracy next to the poles
    let whole = z.re.round();
    let frac = Complex64::new(z.re - whole, z.im);
    for (j, e) in &f.exponents {
        let m = (whole as i64 + *j as i64).rem_euclid(f.params.n() as i64);
        let phi = (frac + m as f64) * scale;
        let term = ln_one_minus_exp_i(phi);
        if !term.re.is_finite() {
            if *e > 0 {
                return Err(Error::EvaluationAtPole);
            }
            return Ok(Complex64::new(0.0, 0.0));
        }
        log -= term * *e as f64;
    }
    Ok(log.exp())
}

/// Exact residues computed directly from the factorization: at a simple
/// pole `-2 pi i res = N prod_{others} (1 - q^{k+j})^{-e_j} q^{kx}`; at a
/// double pole `D_k` is the product over the regular factors and
/// `E_k = 1 - sum_{regular} e_j q^{k+j}/(1 - q^{k+j})`.
pub fn direct_residues(f: &FactorList) -> Vec<ResidueData> {
    let p = &f.params;
    let field = p.field();
    let n = p.n() as i64;
    let mut out = Vec::new();
    for k in 0..n {
        let order = f.pole_order(k);
        if order <= 0 {
            continue;
        }
        let mut prod = field.one();
        let mut log_sum = field.zero();
        for (j, e) in &f.exponents {
            let m = k + *j as i64;
            if m.rem_euclid(n) == 0 {
                continue;
            }
            let fac = field.one_minus_zeta_pow(m);
            let finv = fac.inv().expect("regular factor");
            prod = &prod * &fac.pow(-(*e as i64)).expect("regular factor");
            let ld = &field.zeta_pow(m) * &finv;
            log_sum = &log_sum + &ld.scale(&crate::cyclofield::Rational::from_integer((*e as i64).into()));
        }
        let kind = match order {
            1 => ResidueKind::Simple {
                value: &prod * &field.from_int(n),
            },
            2 => ResidueKind::Double {
                d: prod,
                e: &field.one() - &log_sum,
            },
            _ => unreachable!("each residue class occurs at most twice"),
        };
        out.push(ResidueData { k: k as usize, kind });
    }
    out
}

/// `res_{z=k} Phi(z)` evaluated from exact residue data.
pub fn residue_value(p: &Params, r: &ResidueData, x: Complex64) -> Complex64 {
    let n = p.n() as f64;
    let qkx = (Complex64::i() * 2.0 * PI * r.k as f64 * x / n).exp();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    match &r.kind {
        ResidueKind::Simple { value } => -value.to_complex() * qkx / two_pi_i,
        ResidueKind::Double { d, e } => n / two_pi_i * d.to_complex() * (x - e.to_complex()) * qkx,
    }
}

/// Central-difference estimate of the residue at a double pole `k`:
/// the derivative of `(z - k)^2 Phi(z)` at `z = k`.
pub fn numeric_double_residue(f: &FactorList, x: Complex64, k: i64, h: f64) -> Result<Complex64> {
    let g = |z: Complex64| -> Result<Complex64> {
        let dz = z - k as f64;
        Ok(dz * dz * integrand_eval(f, x, z)?)
    };
    let zk = Complex64::new(k as f64, 0.0);
    Ok((g(zk + h)? - g(zk - h)?) / (2.0 * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Half-length of the integration window on `Re z = -1/2`; chosen from the
    /// decay rates of the integrand when `None`.
    pub truncation: Option<f64>,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            truncation: None,
            abs_tol: 1e-11,
            max_evals: 400_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Window `[lower, upper]` in the imaginary direction.
    pub window: (f64, f64),
}

fn require_strip(x: Complex64) -> Result<()> {
    if !(x.re > 0.0 && x.re < 1.0) {
        return Err(Error::NotConvergent(format!(
            "Re x = {} outside the strip (0, 1)",
            x.re
        )));
    }
    Ok(())
}

fn require_condition2(p: &Params) -> Result<()> {
    if !p.satisfies_condition2() {
        let (n, a, b, g) = p.tuple();
        return Err(Error::NotConvergent(format!(
            "alpha + beta = {} exceeds N - gamma = {}",
            a + b,
            n as i64 - g as i64
        )));
    }
    Ok(())
}

/// Prefactor times the integral along `Re z = -1/2` (upwards).
pub fn contour_integral(p: &Params, x: Complex64, cfg: &QuadConfig) -> Result<IntegralEstimate> {
    require_condition2(p)?;
    require_strip(x)?;
    if !(cfg.abs_tol > 0.0) || cfg.truncation.is_some_and(|t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("tolerance and truncation must be positive".into()));
    }
    let f = reduce_integrand(p);
    let n = p.n() as f64;
    // |Phi(-1/2 + it)| ~ exp(-rate_up t) as t -> +inf, exp(rate_down t) as t -> -inf
    let rate_up = 2.0 * PI * x.re / n;
    let rate_down = 2.0 * PI * (f.total_exponent() as f64 - x.re) / n;
    let along = |t: f64| -> Complex64 {
        integrand_eval(&f, x, Complex64::new(-0.5, t))
            .map(|v| v * Complex64::i())
            .unwrap_or_else(|_| Complex64::new(f64::NAN, f64::NAN))
    };
    let tail = |t: f64, rate: f64| along(t).norm() / rate;
    let target = cfg.abs_tol / 10.0;
    let pick = |rate: f64, sign: f64| -> f64 {
        if let Some(t) = cfg.truncation {
            return t;
        }
        let mut t = ((1.0 / (target * rate)).ln() / rate).max(4.0);
        for _ in 0..20 {
            if tail(sign * t, rate) <= target {
                break;
            }
            t *= 1.5;
        }
        t
    };
    let upper = pick(rate_up, 1.0);
    let lower = pick(rate_down, -1.0);
    let tails = tail(upper, rate_up) + tail(-lower, rate_down);
    let pieces = ((upper + lower) / (n / 4.0).max(1.0)).ceil() as usize;
    let r = quad::integrate(along, -lower, upper, pieces, cfg.abs_tol, cfg.max_evals);
    let pre = prefactor(p).to_complex();
    let mut error = (r.error_estimate + tails) * pre.norm();
    if !r.converged {
        error *= 10.0;
    }
    Ok(IntegralEstimate {
        value: r.value * pre,
        error_estimate: error,
        evaluations: r.evaluations,
        converged: r.converged,
        window: (-lower, upper),
    })
}

/// `(-2 pi i / (1 - q^{Nx})) * prefactor * sum_k res_{z=k} Phi(z)`.
pub fn residue_sum(p: &Params, x: Complex64) -> Result<Complex64> {
    let w = (Complex64::i() * 2.0 * PI * x).exp();
    if (Complex64::new(1.0, 0.0) - w).norm() < 1e-12 {
        return Err(Error::SingularX);
    }
    let e = residue_sum_element(p)?;
    evaluate(&e, x).map_err(|err| match err {
        Error::EvaluationAtPole => Error::SingularX,
        other => other,
    })
}

/// Same residue sum, accumulated numerically pole by pole from the exact data.
pub fn residue_sum_numeric(p: &Params, x: Complex64) -> Result<Complex64> {
    let w = (Complex64::i() * 2.0 * PI * x).exp();
    let denom = Complex64::new(1.0, 0.0) - w;
    if denom.norm() < 1e-12 {
        return Err(Error::SingularX);
    }
    let sum: Complex64 = residue_data(p)?
        .iter()
        .map(|r| residue_value(p, r, x))
        .sum();
    Ok(Complex64::new(0.0, -2.0 * PI) / denom * prefactor(p).to_complex() * sum)
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Entry {
    pub params: ParamsJson,
    pub x: [f64; 2],
    pub integral: [f64; 2],
    pub residue_sum: [f64; 2],
    pub closed_form: [f64; 2],
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub params: ParamsJson,
    pub entries: Vec<Theorem3Entry>,
    pub errors: Vec<String>,
}

impl Theorem3Report {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.entries.iter().all(|e| e.pass)
    }
}

/// Compares the contour integral, the residue sum and the closed form
/// pairwise at every sample point.
pub fn verify_theorem3(p: &Params, xs: &[Complex64], tol: f64) -> Theorem3Report {
    let mut report = Theorem3Report {
        params: p.to_json(),
        entries: Vec::new(),
        errors: Vec::new(),
    };
    let closed = match barnes_closed_form(p) {
        Ok(c) => c,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    let cfg = QuadConfig {
        abs_tol: (tol * 1e-3).min(1e-10),
        ..QuadConfig::default()
    };
    for &x in xs {
        let run = || -> Result<Theorem3Entry> {
            let integral = contour_integral(p, x, &cfg)?.value;
            let residue = residue_sum(p, x)?;
            let cf = evaluate(&closed, x)?;
            let max_deviation = [(integral - cf).norm(), (residue - cf).norm(), (integral - residue).norm()]
                .into_iter()
                .fold(0.0, f64::max);
            Ok(Theorem3Entry {
                params: p.to_json(),
                x: pair(x),
                integral: pair(integral),
                residue_sum: pair(residue),
                closed_form: pair(cf),
                max_deviation,
                pass: max_deviation <= tol,
            })
        };
        match run() {
            Ok(entry) => report.entries.push(entry),
            Err(e) => report.errors.push(format!("x = {x}: {e}")),
        }
    }
    report
}
