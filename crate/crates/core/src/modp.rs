//! Reduction of Q(q) into a prime field `F_p` with `p = 1 (mod N)`, where `q`
//! maps to a fixed primitive N-th root of unity. Used to certify that two
//! polynomials are coprime without running Euclid over Q(q).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cyclofield::CycloNum;
use crate::poly::Poly;

#[derive(Debug, PartialEq, Eq)]
pub(crate) struct PrimeImage {
    p: u64,
    // r^i for 0 <= i < N
    powers: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

// Deterministic Miller-Rabin for n < 2^32.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2, 3, 5, 7, 11, 13] {
        if n % small == 0 {
            return n == small;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeImage {
    pub(crate) fn new(order: u32) -> PrimeImage {
        let n = order as u64;
        let mut k = (1u64 << 31) / n;
        let p = loop {
            let cand = k * n + 1;
            if is_prime(cand) {
                break cand;
            }
            k += 1;
        };
        let factors = prime_factors(n);
        let root = (2..p)
            .map(|a| pow_mod(a, (p - 1) / n, p))
            .find(|&r| factors.iter().all(|&l| pow_mod(r, n / l, p) != 1))
            .expect("F_p has a primitive N-th root when N divides p - 1");
        let mut powers = Vec::with_capacity(order as usize);
        let mut acc = 1;
        for _ in 0..order {
            powers.push(acc);
            acc = mul_mod(acc, root, p);
        }
        PrimeImage { p, powers }
    }

    /// `None` when a denominator is divisible by `p`.
    pub(crate) fn reduce(&self, c: &CycloNum) -> Option<u64> {
        let p = BigInt::from(self.p);
        let mut acc = 0;
        for (r, pw) in c.coeffs().iter().zip(&self.powers) {
            let num = r.numer().mod_floor(&p).to_u64()?;
            if num == 0 {
                continue;
            }
            let den = r.denom().mod_floor(&p).to_u64()?;
            if den == 0 {
                return None;
            }
            let v = mul_mod(num, inv_mod(den, self.p), self.p);
            acc = (acc + mul_mod(v, *pw, self.p)) % self.p;
        }
        Some(acc)
    }

    fn reduce_poly(&self, f: &Poly) -> Option<Vec<u64>> {
        let out: Vec<u64> = f.coeffs().iter().map(|c| self.reduce(c)).collect::<Option<_>>()?;
        // a vanishing leading coefficient would drop the degree
        (out.last() != Some(&0)).then_some(out)
    }

    /// True only if `a` and `b` are certainly coprime over Q(q).
    pub(crate) fn certifies_coprime(&self, a: &Poly, b: &Poly) -> bool {
        let (Some(x), Some(y)) = (self.reduce_poly(a), self.reduce_poly(b)) else {
            return false;
        };
        self.gcd_degree(x, y) == 0
    }

    fn gcd_degree(&self, mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
        let p = self.p;
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        trim(&mut a);
        trim(&mut b);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let lead_inv = inv_mod(*b.last().unwrap(), p);
            while a.len() >= b.len() {
                let c = mul_mod(*a.last().unwrap(), lead_inv, p);
                let shift = a.len() - b.len();
                for (i, bi) in b.iter().enumerate() {
                    a[shift + i] = (a[shift + i] + p - mul_mod(c, *bi, p)) % p;
                }
                trim(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclofield::CycloField;

    #[test]
    fn root_has_exact_order() {
        for n in [2u32, 3, 4, 6, 7, 12, 30] {
            let img = PrimeImage::new(n);
            assert!(is_prime(img.p));
            assert_eq!((img.p - 1) % n as u64, 0);
            let r = img.powers.get(1).copied().unwrap_or(1);
            assert_eq!(pow_mod(r, n as u64, img.p), 1);
            for m in 1..n as u64 {
                assert_ne!(pow_mod(r, m, img.p), 1);
            }
        }
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let f = CycloField::new(9).unwrap();
        let img = PrimeImage::new(9);
        let a = &f.one_minus_zeta_pow(2) * &f.from_int(3);
        let b = f.one_minus_zeta_pow(5).inv().unwrap();
        let (ra, rb) = (img.reduce(&a).unwrap(), img.reduce(&b).unwrap());
        assert_eq!(img.reduce(&(&a * &b)).unwrap(), ra * rb % img.p);
        assert_eq!(img.reduce(&(&a + &b)).unwrap(), (ra + rb) % img.p);
    }

    #[test]
    fn coprimality_certificates() {
        let f = CycloField::new(5).unwrap();
        let img = PrimeImage::new(5);
        let lin = |c: i64| Poly::from_coeffs(&f, vec![f.zeta_pow(c), f.one()]);
        assert!(img.certifies_coprime(&lin(1), &lin(2)));
        let shared = &lin(1) * &lin(3);
        assert!(!img.certifies_coprime(&shared, &(&lin(3) * &lin(4))));
    }
}
