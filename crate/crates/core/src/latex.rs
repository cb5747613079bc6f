//! LaTeX rendering in `x^j q^{kx}` notation with quasi-constant coefficients
//! written as rational functions of `q^{Nx}`.

use num_traits::{One, Signed, Zero};

use crate::cyclofield::{CycloNum, Rational};
use crate::poly::Poly;
use crate::qspace::{decompose_quasi, SolutionElement};
use crate::ratfunc::RatFunc;

fn rational(r: &Rational) -> String {
    let a = r.abs();
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

/// Field element as a polynomial in `q`, e.g. `1 - q - \frac{1}{2}q^{2}`.
pub fn cyclo(c: &CycloNum) -> String {
    let mut out = String::new();
    for (i, r) in c.coeffs().iter().enumerate().filter(|(_, r)| !r.is_zero()) {
        if out.is_empty() {
            if r.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if r.is_negative() { " - " } else { " + " });
        }
        let mag = r.abs();
        let power = match i {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{{{i}}}"),
        };
        if i == 0 || !mag.is_one() {
            out.push_str(&rational(r));
        }
        out.push_str(&power);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn is_single_term(c: &CycloNum) -> bool {
    c.coeffs().iter().filter(|r| !r.is_zero()).count() == 1
}

fn wrapped(c: &CycloNum) -> String {
    if is_single_term(c) {
        cyclo(c)
    } else {
        format!("\\left({}\\right)", cyclo(c))
    }
}

/// Polynomial in `w = q^{Nx}`.
fn poly_in_w(p: &Poly, n: u32) -> String {
    let mut parts = Vec::new();
    for (m, c) in p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let var = match m {
            0 => String::new(),
            _ => format!("q^{{{}x}}", m as u32 * n),
        };
        let part = match (m, c.is_one()) {
            (0, _) => wrapped(c),
            (_, true) => var,
            (_, false) => format!("{}{var}", wrapped(c)),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn quasi_constant(r: &RatFunc, n: u32) -> String {
    if r.is_polynomial() {
        poly_in_w(r.num(), n)
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            poly_in_w(r.num(), n),
            poly_in_w(r.den(), n)
        )
    }
}

pub fn solution_element(e: &SolutionElement) -> String {
    let n = e.order();
    let dec = decompose_quasi(e);
    let mut terms = Vec::new();
    for ((j, k), g) in dec.entries() {
        let x = match j {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{{{j}}}"),
        };
        let qk = match k {
            0 => String::new(),
            1 => "q^{x}".to_string(),
            _ => format!("q^{{{k}x}}"),
        };
        let monomial = format!("{x}{qk}");
        let coeff = if g.is_one() && !monomial.is_empty() {
            String::new()
        } else if monomial.is_empty() || (g.is_polynomial() && g.num().coeffs().len() == 1) {
            quasi_constant(g, n)
        } else {
            format!("\\left({}\\right)", quasi_constant(g, n))
        };
        terms.push(format!("{coeff}{monomial}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
