//! Dense univariate polynomials over Q(q).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::cyclofield::{CycloField, CycloNum};
use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending degree. No trailing zeros are
/// stored, so the zero polynomial has an empty coefficient list.
#[derive(Clone)]
pub struct Poly {
    field: Arc<CycloField>,
    coeffs: Vec<CycloNum>,
}

impl Poly {
    pub fn zero(field: &Arc<CycloField>) -> Poly {
        Poly {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: CycloNum) -> Poly {
        Poly::monomial(c, 0)
    }

    /// `c * var^deg`.
    pub fn monomial(c: CycloNum, deg: usize) -> Poly {
        let field = Arc::clone(c.field());
        if c.is_zero() {
            return Poly::zero(&field);
        }
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Poly { field, coeffs }
    }

    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<CycloNum>) -> Poly {
        let mut p = Poly {
            field: Arc::clone(field),
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycloNum::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> CycloNum {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&CycloNum> {
        self.coeffs.last()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        self.valuation().is_some() && self.valuation() == self.degree()
    }

    pub fn scale(&self, c: &CycloNum) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `var^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    /// Divides by `var^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.is_zero() || self.valuation().unwrap() >= k);
        Poly {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    /// `p(c * var)`.
    pub fn subst_scaled(&self, c: &CycloNum) -> Poly {
        let mut pow = self.field.one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &pow);
            pow = &pow * c;
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// `p(var^n)`.
    pub fn inflate(&self, n: usize) -> Poly {
        let Some(d) = self.degree() else {
            return self.clone();
        };
        let mut coeffs = vec![self.field.zero(); d * n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[i * n] = a.clone();
        }
        Poly {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if !l.is_one() => {
                self.scale(&l.inv().expect("leading coefficient is nonzero"))
            }
            _ => self.clone(),
        }
    }

    pub fn divrem(&self, den: &Poly) -> Result<(Poly, Poly)> {
        let dd = den.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let lead_inv = den.coeffs[dd].inv()?;
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            if rem[i + dd].is_zero() {
                continue;
            }
            let c = &rem[i + dd] * &lead_inv;
            for (j, dj) in den.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] = &rem[i + j] - &(&c * dj);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((
            Poly::from_coeffs(&self.field, quot),
            Poly::from_coeffs(&self.field, rem),
        ))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, den: &Poly) -> Poly {
        let (q, r) = self.divrem(den).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return Poly::one(&self.field);
        }
        if self.is_monomial() || other.is_monomial() {
            let k = self.valuation().unwrap().min(other.valuation().unwrap());
            return Poly::monomial(self.field.one(), k);
        }
        if self.field.prime_image().certifies_coprime(self, other) {
            return Poly::one(&self.field);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.monic(), other.monic())
        } else {
            (other.monic(), self.monic())
        };
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r.monic());
        }
        a
    }

    /// Evaluates with the complex embedding of the coefficients.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
    }

    /// Sum of coefficient magnitudes times `|z|^i`, a scale for cancellation checks.
    pub fn eval_abs_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.to_complex().norm())
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[N={}](", self.field.order())?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*v")?,
                _ => write!(f, "({c})*v^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(&self.field, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(&self.field, coeffs)
    }
}
