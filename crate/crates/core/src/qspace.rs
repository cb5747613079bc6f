//! The solution space: finite sums `sum_j x^j R_j(v)` where `v` stands for
//! `q^x` and each `R_j` is a rational function of `v` over Q(q).
//!
//! The shift `D: x -> x + 1` acts as `x -> x + 1`, `v -> q v`. Since `q^N = 1`
//! the variable `w = v^N` is fixed by `D`, and rational functions of `w` play
//! the role of quasi-constants.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclofield::{CycloField, CycloNum};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Equation parameters `(N, alpha, beta, gamma)`, normalized so that
/// `beta <= alpha`.
#[derive(Clone)]
pub struct Params {
    field: Arc<CycloField>,
    alpha: u32,
    beta: u32,
    gamma: u32,
    swapped: bool,
}

impl Params {
    pub fn new(n: u32, alpha: u32, beta: u32, gamma: u32) -> Result<Params> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("N must be at least 2, got {n}")));
        }
        for (name, val) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(1..=n).contains(&val) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {val} outside 1..={n}"
                )));
            }
        }
        let swapped = beta > alpha;
        let (alpha, beta) = if swapped { (beta, alpha) } else { (alpha, beta) };
        Ok(Params {
            field: CycloField::new(n)?,
            alpha,
            beta,
            gamma,
            swapped,
        })
    }

    pub fn n(&self) -> u32 {
        self.field.order()
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    /// Whether the caller passed `beta > alpha` and the pair was exchanged.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// `q^k`.
    pub fn q(&self, k: i64) -> CycloNum {
        self.field.zeta_pow(k)
    }

    /// The convergence constraint `alpha + beta <= N - gamma`.
    pub fn satisfies_condition2(&self) -> bool {
        self.alpha + self.beta + self.gamma <= self.n()
    }

    pub fn tuple(&self) -> (u32, u32, u32, u32) {
        (self.n(), self.alpha, self.beta, self.gamma)
    }

    pub fn to_json(&self) -> ParamsJson {
        ParamsJson {
            n: self.n(),
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            swapped: self.swapped,
        }
    }
}

impl PartialEq for Params {
    fn eq(&self, other: &Self) -> bool {
        self.tuple() == other.tuple()
    }
}

impl Eq for Params {}

impl fmt::Debug for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, a, b, g) = self.tuple();
        write!(f, "Params(N={n}, alpha={a}, beta={b}, gamma={g})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub swapped: bool,
}

/// `sum_j x^j R_j(v)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SolutionElement {
    field: Arc<CycloField>,
    terms: BTreeMap<usize, RatFunc>,
}

impl SolutionElement {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        SolutionElement {
            field: Arc::clone(field),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_ratfunc(RatFunc::one(field))
    }

    /// `x^j * r`.
    pub fn term(j: usize, r: RatFunc) -> Self {
        let mut e = Self::zero(r.field());
        if !r.is_zero() {
            e.terms.insert(j, r);
        }
        e
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        Self::term(0, r)
    }

    /// The formal variable `x`.
    pub fn x(field: &Arc<CycloField>) -> Self {
        Self::term(1, RatFunc::one(field))
    }

    /// `c * q^{kx}`, i.e. `c * v^k`; negative `k` allowed.
    pub fn q_pow_x(c: CycloNum, k: i64) -> Self {
        Self::from_ratfunc(RatFunc::monomial(c, k))
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn terms(&self) -> &BTreeMap<usize, RatFunc> {
        &self.terms
    }

    /// Coefficient of `x^j`.
    pub fn coeff(&self, j: usize) -> RatFunc {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `x`; `None` for zero.
    pub fn x_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, j: usize, r: RatFunc) {
        if r.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&j) {
            Some(old) => &old + &r,
            None => r,
        };
        if !sum.is_zero() {
            self.terms.insert(j, sum);
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        self.map_coeffs(|r| r.scale(c))
    }

    pub fn mul_ratfunc(&self, f: &RatFunc) -> Self {
        self.map_coeffs(|r| r * f)
    }

    /// Multiplies by `q^{kx} = v^k`.
    pub fn mul_v_pow(&self, k: i64) -> Self {
        self.map_coeffs(|r| r.mul_var_pow(k))
    }

    /// Multiplies by `x^k`.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        SolutionElement {
            field: Arc::clone(&self.field),
            terms: self.terms.iter().map(|(j, r)| (j + k, r.clone())).collect(),
        }
    }

    fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(j, r)| (*j, f(r)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        SolutionElement {
            field: Arc::clone(&self.field),
            terms,
        }
    }

    /// Parses the JSON transfer form; coefficients are re-normalized.
    pub fn from_json(doc: &SolutionElementJson) -> Result<Self> {
        let field = CycloField::new(doc.n)?;
        let mut out = Self::zero(&field);
        for t in &doc.terms {
            let parse = |cs: &[Vec<String>]| -> Result<Poly> {
                let coeffs = cs
                    .iter()
                    .map(|c| CycloNum::from_strings(&field, c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Poly::from_coeffs(&field, coeffs))
            };
            let r = RatFunc::new(parse(&t.num)?, parse(&t.den)?)?;
            out.add_term(t.j, r);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SolutionElementJson {
        let poly = |p: &Poly| p.coeffs().iter().map(CycloNum::to_strings).collect();
        SolutionElementJson {
            n: self.order(),
            terms: self
                .terms
                .iter()
                .map(|(j, r)| TermJson {
                    j: *j,
                    num: poly(r.num()),
                    den: poly(r.den()),
                })
                .collect(),
        }
    }
}

impl fmt::Debug for SolutionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SolutionElement[N={}](", self.order())?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for SolutionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (j, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{{{r}}}")?,
                1 => write!(f, "x*{{{r}}}")?,
                _ => write!(f, "x^{j}*{{{r}}}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionElementJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub j: usize,
    pub num: Vec<Vec<String>>,
    pub den: Vec<Vec<String>>,
}

impl Add for &SolutionElement {
    type Output = SolutionElement;
    fn add(self, rhs: &SolutionElement) -> SolutionElement {
        let mut out = self.clone();
        for (j, r) in &rhs.terms {
            out.add_term(*j, r.clone());
        }
        out
    }
}

impl Sub for &SolutionElement {
    type Output = SolutionElement;
    fn sub(self, rhs: &SolutionElement) -> SolutionElement {
        self + &(-rhs)
    }
}

impl Neg for &SolutionElement {
    type Output = SolutionElement;
    fn neg(self) -> SolutionElement {
        self.map_coeffs(|r| -r)
    }
}

impl Mul for &SolutionElement {
    type Output = SolutionElement;
    fn mul(self, rhs: &SolutionElement) -> SolutionElement {
        let mut out = SolutionElement::zero(&self.field);
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SolutionElement {
            type Output = SolutionElement;
            fn $m(self, rhs: SolutionElement) -> SolutionElement {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `D e(x) = e(x + 1)`: `x -> x + 1` and `v -> q v`.
pub fn shift_d(e: &SolutionElement) -> SolutionElement {
    let field = e.field();
    let q = field.zeta_pow(1);
    let mut out = SolutionElement::zero(field);
    for (j, r) in e.terms() {
        let shifted = r.subst_scaled(&q);
        for i in 0..=*j {
            let c = binomial(*j, i);
            let coeff = if i == *j {
                shifted.clone()
            } else {
                shifted.scale(&field.from_rational(c.into()))
            };
            out.add_term(i, coeff);
        }
    }
    out
}

// e - s1 * De + s2 * D^2 e
fn second_order(
    e: &SolutionElement,
    de: &SolutionElement,
    d2e: &SolutionElement,
    s1: &CycloNum,
    s2: &CycloNum,
) -> SolutionElement {
    &(e - &de.scale(s1)) + &d2e.scale(s2)
}

/// `L = (1 - D)(1 - q^{gamma-1} D) - q^x (1 - q^alpha D)(1 - q^beta D)`.
pub fn apply_l(p: &Params, e: &SolutionElement) -> SolutionElement {
    let de = shift_d(e);
    let d2e = shift_d(&de);
    let (a, b, g) = (p.alpha as i64, p.beta as i64, p.gamma as i64);
    let left = second_order(e, &de, &d2e, &(&p.q(0) + &p.q(g - 1)), &p.q(g - 1));
    let right = second_order(e, &de, &d2e, &(&p.q(a) + &p.q(b)), &p.q(a + b));
    &left - &right.mul_v_pow(1)
}

/// The operator multiplying `x^j P_t` in the expansion of `L(x^t P_t)`,
/// `t - j = k`:
/// `2^k (q^{gamma-1} - q^{alpha+beta} q^x) D^2 - ((1 + q^{gamma-1}) - q^x (q^alpha + q^beta)) D`,
/// so that `L(sum_t x^t P_t)` has `x^j` coefficient
/// `L P_j + sum_{t>j} C(t, t-j) L_{t-j} P_t`.
pub fn apply_lk(p: &Params, k: u32, e: &SolutionElement) -> SolutionElement {
    let de = shift_d(e);
    let d2e = shift_d(&de);
    let (a, b, g) = (p.alpha as i64, p.beta as i64, p.gamma as i64);
    let field = p.field();
    let two_k = field.from_rational(BigInt::from(2).pow(k).into());
    let d2_const = &two_k * &p.q(g - 1);
    let d2_lin = &two_k * &p.q(a + b);
    let d2_part = &d2e.scale(&d2_const) - &d2e.scale(&d2_lin).mul_v_pow(1);
    let d1_const = &p.q(0) + &p.q(g - 1);
    let d1_lin = &p.q(a) + &p.q(b);
    let d1_part = &de.scale(&d1_const) - &de.scale(&d1_lin).mul_v_pow(1);
    &d2_part - &d1_part
}

/// `e1 * D e2 - D e1 * e2`.
pub fn casoratian(e1: &SolutionElement, e2: &SolutionElement) -> SolutionElement {
    &(e1 * &shift_d(e2)) - &(&shift_d(e1) * e2)
}

/// Value at `x = x0` with the principal embedding `v = exp(2 pi i x0 / N)`.
pub fn evaluate(e: &SolutionElement, x0: Complex64) -> Result<Complex64> {
    let n = e.order() as f64;
    let v = (Complex64::new(0.0, 2.0 * PI / n) * x0).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, r) in e.terms() {
        acc += x0.powu(*j as u32) * r.eval_complex(v)?;
    }
    Ok(acc)
}

/// Coefficients `g_{jk}(w)` with `e = sum_{j,k} g_{jk}(v^N) x^j v^k`,
/// `0 <= k < N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiDecomposition {
    field: Arc<CycloField>,
    entries: BTreeMap<(usize, usize), RatFunc>,
}

impl QuasiDecomposition {
    /// `g_{jk}` as a rational function of `w`.
    pub fn get(&self, j: usize, k: usize) -> RatFunc {
        self.entries
            .get(&(j, k))
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    /// Nonzero entries keyed by `(j, k)`.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), RatFunc> {
        &self.entries
    }

    /// The `N` quasi-constant coefficients of `x^j`.
    pub fn row(&self, j: usize) -> Vec<RatFunc> {
        (0..self.field.order() as usize).map(|k| self.get(j, k)).collect()
    }

    pub fn recompose(&self) -> SolutionElement {
        let n = self.field.order() as usize;
        let mut out = SolutionElement::zero(&self.field);
        for ((j, k), g) in &self.entries {
            out.add_term(*j, g.inflate(n).mul_var_pow(*k as i64));
        }
        out
    }
}

fn deflate(p: &Poly, n: usize) -> Option<Poly> {
    if p.coeffs().iter().enumerate().any(|(i, c)| i % n != 0 && !c.is_zero()) {
        return None;
    }
    let coeffs = p.coeffs().iter().step_by(n).cloned().collect();
    Some(Poly::from_coeffs(p.field(), coeffs))
}

/// Splits a polynomial by exponent class modulo `n`.
fn split_by_residue(p: &Poly, n: usize) -> Vec<Poly> {
    let field = p.field();
    let mut parts = vec![Vec::new(); n];
    for (i, c) in p.coeffs().iter().enumerate() {
        let part = &mut parts[i % n];
        part.resize(i / n, field.zero());
        part.push(c.clone());
    }
    parts.into_iter().map(|c| Poly::from_coeffs(field, c)).collect()
}

/// `R(v) = sum_k g_k(v^N) v^k`.
fn decompose_ratfunc(r: &RatFunc) -> Vec<RatFunc> {
    let field = r.field();
    let n = field.order() as usize;
    let (num, den) = match deflate(r.den(), n) {
        Some(dw) => (r.num().clone(), dw),
        None => {
            // multiply through by the conjugates d(q^m v); the product is
            // invariant under v -> q v
            let mut num = r.num().clone();
            let mut full = r.den().clone();
            for m in 1..n as i64 {
                let conj = r.den().subst_scaled(&field.zeta_pow(m));
                num = &num * &conj;
                full = &full * &conj;
            }
            (num, deflate(&full, n).expect("norm lies in Q(q)[v^N]"))
        }
    };
    split_by_residue(&num, n)
        .into_iter()
        .map(|part| RatFunc::new(part, den.clone()).expect("nonzero denominator"))
        .collect()
}

pub fn decompose_quasi(e: &SolutionElement) -> QuasiDecomposition {
    let mut entries = BTreeMap::new();
    for (j, r) in e.terms() {
        for (k, g) in decompose_ratfunc(r).into_iter().enumerate() {
            if !g.is_zero() {
                entries.insert((*j, k), g);
            }
        }
    }
    QuasiDecomposition {
        field: Arc::clone(e.field()),
        entries,
    }
}

/// Whether `e` is fixed by `D`, i.e. lies in the quasi-constant field.
pub fn is_quasi_constant(e: &SolutionElement) -> bool {
    shift_d(e) == *e
}
