//! Exact arithmetic in the cyclotomic field Q(q), q = exp(2 pi i / N).
//!
//! Elements are polynomials in `q` with rational coefficients, reduced modulo
//! the N-th cyclotomic polynomial. Reduction happens after every operation so
//! that two equal field elements always carry identical coefficient vectors.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp::PrimeImage;

pub type Rational = BigRational;

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Result<Vec<BigInt>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "cyclotomic order must be at least 2, got {n}"
        )));
    }
    let mut known: BTreeMap<u32, Vec<BigInt>> = BTreeMap::new();
    for d in (1..=n).filter(|d| n % d == 0) {
        // x^d - 1
        let mut rem = vec![BigInt::zero(); d as usize + 1];
        rem[0] = -BigInt::one();
        rem[d as usize] = BigInt::one();
        for (e, phi) in known.iter().filter(|(e, _)| d % **e == 0) {
            debug_assert!(*e < d);
            rem = int_exact_div(&rem, phi);
        }
        known.insert(d, rem);
    }
    Ok(known.remove(&n).expect("n divides itself"))
}

// Exact division by a monic integer polynomial.
fn int_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// The field Q(q) for a fixed order N.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u32,
    modulus: Vec<BigInt>,
    image: OnceLock<PrimeImage>,
}

impl CycloField {
    pub fn new(order: u32) -> Result<Arc<Self>> {
        let modulus = cyclotomic_poly(order)?;
        Ok(Arc::new(CycloField {
            order,
            modulus,
            image: OnceLock::new(),
        }))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q, i.e. Euler's totient of N.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub(crate) fn prime_image(&self) -> &PrimeImage {
        self.image.get_or_init(|| PrimeImage::new(self.order))
    }

    pub fn zero(self: &Arc<Self>) -> CycloNum {
        CycloNum {
            field: Arc::clone(self),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloNum {
        self.from_rational(Rational::one())
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloNum {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(self: &Arc<Self>, r: Rational) -> CycloNum {
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    /// `q^k`, with `k` reduced modulo N.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycloNum {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        self.reduce(poly)
    }

    /// `1 - q^k`.
    pub fn one_minus_zeta_pow(self: &Arc<Self>, k: i64) -> CycloNum {
        &self.one() - &self.zeta_pow(k)
    }

    /// Builds an element from an arbitrary-length polynomial in `q`.
    pub fn from_poly(self: &Arc<Self>, poly: Vec<Rational>) -> CycloNum {
        self.reduce(poly)
    }

    fn reduce(self: &Arc<Self>, mut poly: Vec<Rational>) -> CycloNum {
        let deg = self.degree();
        for i in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            // q^i = -sum_{j<deg} m_j q^{i-deg+j}
            for (j, m) in self.modulus[..deg].iter().enumerate() {
                if !m.is_zero() {
                    poly[i - deg + j] -= &c * Rational::from_integer(m.clone());
                }
            }
        }
        poly.resize(deg, Rational::zero());
        CycloNum {
            field: Arc::clone(self),
            coeffs: poly,
        }
    }
}

/// An element of Q(q) in canonical reduced form.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

/// `q^k` in the field of order `n`.
pub fn zeta_pow(n: u32, k: i64) -> Result<CycloNum> {
    Ok(CycloField::new(n)?.zeta_pow(k))
}

/// The q-Pochhammer symbol `(x)_n = prod_{j=0}^{n-1} (1 - q^j x)`.
///
/// `(q)_n` is `q_pochhammer(&q, n)`.
pub fn q_pochhammer(x: &CycloNum, n: i64) -> Result<CycloNum> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "q-Pochhammer length must be non-negative, got {n}"
        )));
    }
    let field = x.field();
    let one = field.one();
    Ok((0..n).fold(one.clone(), |acc, j| {
        &acc * &(&one - &(&field.zeta_pow(j) * x))
    }))
}

/// `(q)_n`.
pub fn q_factorial(field: &Arc<CycloField>, n: i64) -> Result<CycloNum> {
    q_pochhammer(&field.zeta_pow(1), n)
}

impl CycloNum {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Coefficients in ascending powers of `q`; length equals the field degree.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &CycloNum) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::IncompatibleOrders {
                left: self.field.order,
                right: other.field.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> CycloNum {
        CycloNum {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against the
    /// cyclotomic modulus.
    pub fn inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(r.recip()));
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|m| Rational::from_integer(m.clone()))
            .collect();
        // invariant: s * self == r (mod modulus)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (quot, rem) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because the modulus is irreducible
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(self.field.reduce(s))
    }

    pub fn pow(&self, e: i64) -> Result<CycloNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Complex embedding `q -> exp(2 pi i / N)`, in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * PI * i as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// Serialized coefficients, `"+p/q"` or `"-p/q"` in lowest terms.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_string).collect()
    }

    pub fn from_strings(field: &Arc<CycloField>, items: &[String]) -> Result<CycloNum> {
        if items.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coefficients for order {}, got {}",
                field.degree(),
                field.order,
                items.len()
            )));
        }
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloNum {
            field: Arc::clone(field),
            coeffs,
        })
    }
}

pub(crate) fn rational_to_string(r: &Rational) -> String {
    let sign = if r.is_negative() { '-' } else { '+' };
    format!("{sign}{}/{}", r.numer().abs(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qpoly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = den.len() - 1;
    let lead = den[dd].recip();
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] * &lead;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    rem.truncate(dd);
    (trim(quot), trim(rem))
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[N={}]({self})", self.field.order)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}*q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn assert_same(a: &CycloNum, b: &CycloNum) {
    assert_eq!(
        a.field.order, b.field.order,
        "cyclotomic order mismatch in arithmetic"
    );
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        assert_same(self, rhs);
        CycloNum {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        assert_same(self, rhs);
        CycloNum {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        assert_same(self, rhs);
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let deg = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                prod[i + j] += a * b;
            }
        }
        self.field.reduce(prod)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(2).unwrap(), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(3).unwrap(), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4).unwrap(), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6).unwrap(), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12).unwrap(), ints(&[1, 0, -1, 0, 1]));
        assert!(matches!(cyclotomic_poly(1), Err(Error::InvalidParameter(_))));
        assert!(matches!(cyclotomic_poly(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cyclotomic_poly_divides_x_n_minus_one() {
        for n in 2..40u32 {
            let phi = cyclotomic_poly(n).unwrap();
            assert!(phi.last().unwrap().is_one());
            let mut xn = vec![BigInt::zero(); n as usize + 1];
            xn[0] = -BigInt::one();
            xn[n as usize] = BigInt::one();
            // int_exact_div asserts exactness in debug builds
            let quot = int_exact_div(&xn, &phi);
            assert_eq!(quot.len() + phi.len() - 1, n as usize + 1);
        }
    }

    #[test]
    fn degree_is_totient() {
        let totient = |n: u32| (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
        for n in 2..60 {
            assert_eq!(CycloField::new(n).unwrap().degree(), totient(n), "N={n}");
        }
    }

    #[test]
    fn zeta_powers() {
        let f = CycloField::new(4).unwrap();
        let z = f.zeta_pow(1);
        assert_eq!(z.coeffs(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(f.zeta_pow(2), f.from_int(-1));
        assert_eq!(f.zeta_pow(4), f.one());
        assert_eq!(f.zeta_pow(-1), f.zeta_pow(3));
        assert!((z.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        for n in 2..20 {
            let f = CycloField::new(n).unwrap();
            assert_eq!(f.zeta_pow(0), f.one());
            assert_eq!(f.zeta_pow(n as i64), f.one());
            for k in 0..n as i64 {
                assert!((&f.zeta_pow(k) * &f.zeta_pow(n as i64 - k)).is_one());
            }
        }
    }

    #[test]
    fn inverse_of_one_minus_i() {
        let f = CycloField::new(4).unwrap();
        let x = f.one_minus_zeta_pow(1);
        let inv = f.one().try_div(&x).unwrap();
        assert_eq!(inv.coeffs(), &[rat(1, 2), rat(1, 2)]);
        let expect = Complex64::new(1.0, 0.0) / Complex64::new(1.0, -1.0);
        assert!((inv.to_complex() - expect).norm() < 1e-15);
    }

    #[test]
    fn error_paths() {
        let f4 = CycloField::new(4).unwrap();
        let f5 = CycloField::new(5).unwrap();
        assert_eq!(
            f4.one().try_add(&f5.one()),
            Err(Error::IncompatibleOrders { left: 4, right: 5 })
        );
        assert_eq!(f4.one().try_div(&f4.zero()), Err(Error::DivisionByZero));
        assert!(matches!(
            q_pochhammer(&f4.one(), -1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn pochhammer_basics() {
        let f = CycloField::new(7).unwrap();
        let x = &f.zeta_pow(3) + &f.from_int(2);
        assert!(q_pochhammer(&x, 0).unwrap().is_one());
        assert_eq!(q_pochhammer(&x, 1).unwrap(), &f.one() - &x);
        let full = q_factorial(&f, 6).unwrap();
        assert_eq!(full, f.from_int(7));
        assert!((full.to_complex() - Complex64::new(7.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn string_round_trip_and_sign() {
        let f = CycloField::new(3).unwrap();
        let x = f.from_poly(vec![rat(-3, 6), rat(0, 1), rat(5, 1)]);
        let s = x.to_strings();
        assert_eq!(s, vec!["-11/2".to_string(), "-5/1".to_string()]);
        assert_eq!(CycloNum::from_strings(&f, &s).unwrap(), x);
        assert!(CycloNum::from_strings(&f, &s[..1]).is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn display() {
        let f = CycloField::new(5).unwrap();
        let x = &f.one_minus_zeta_pow(1) - &f.zeta_pow(2).scale(&rat(1, 2));
        assert_eq!(x.to_string(), "1 - q - 1/2*q^2");
        assert_eq!(f.zero().to_string(), "0");
    }
}
