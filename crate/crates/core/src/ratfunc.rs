//! Rational functions in one variable over Q(q).
//!
//! In the solution space the variable is `v = q^x`; quasi-constants are the
//! rational functions of `w = v^N`, which reuse this type with `w` as the
//! variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::cyclofield::{CycloField, CycloNum};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> RatFunc {
        debug_assert!(!den.is_zero());
        let field = Arc::clone(num.field());
        if num.is_zero() {
            return RatFunc::zero(&field);
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else if g.is_monomial() {
                let k = g.valuation().unwrap();
                (num.shift_down(k), den.shift_down(k))
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let lead = den.lead().unwrap();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.inv().expect("nonzero leading coefficient");
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> RatFunc {
        RatFunc {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let field = Arc::clone(p.field());
        RatFunc {
            num: p,
            den: Poly::one(&field),
        }
    }

    pub fn constant(c: CycloNum) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// `c * var^k` for any integer `k`.
    pub fn monomial(c: CycloNum, k: i64) -> RatFunc {
        let field = Arc::clone(c.field());
        if c.is_zero() {
            return RatFunc::zero(&field);
        }
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFunc {
                num: Poly::constant(c),
                den: Poly::monomial(field.one(), k.unsigned_abs() as usize),
            }
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn scale(&self, c: &CycloNum) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.inv()?)
    }

    /// `f(c * var)`.
    pub fn subst_scaled(&self, c: &CycloNum) -> RatFunc {
        RatFunc::normalized(self.num.subst_scaled(c), self.den.subst_scaled(c))
    }

    /// `f(var^n)`.
    pub fn inflate(&self, n: usize) -> RatFunc {
        RatFunc {
            num: self.num.inflate(n),
            den: self.den.inflate(n),
        }
    }

    /// Multiplies by `var^k` for any integer `k`.
    pub fn mul_var_pow(&self, k: i64) -> RatFunc {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let u = k.unsigned_abs() as usize;
        if k > 0 {
            let dv = self.den.valuation().unwrap();
            let c = dv.min(u);
            RatFunc {
                num: self.num.shift_up(u - c),
                den: self.den.shift_down(c),
            }
        } else {
            let nv = self.num.valuation().unwrap();
            let c = nv.min(u);
            RatFunc {
                num: self.num.shift_down(c),
                den: self.den.shift_up(u - c),
            }
        }
    }

    /// Numeric value at `var = z`.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(z);
        let scale = self.den.eval_abs_bound(z);
        if !(d.norm() > 1e-13 * scale) {
            return Err(Error::EvaluationAtPole);
        }
        Ok(self.num.eval_complex(z) / d)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            // coprime denominators leave a reduced sum
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return RatFunc::zero(self.field());
            }
            return RatFunc::normalized(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&g);
        let d2 = rhs.den.div_exact(&g);
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RatFunc::normalized(num, &self.den * &d2)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        // cross-cancel before multiplying; both inputs are already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1), rhs.den.div_exact(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lead = den.lead().unwrap();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.inv().expect("nonzero leading coefficient");
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
