#![allow(dead_code)]

use std::sync::Arc;

use qhyper::case_of;
use qhyper::poly::Poly;
use qhyper::{apply_l, decompose_quasi, CaseTag, CycloField, CycloNum, Params, RatFunc, SolutionElement};
use rand::Rng;

/// Every valid tuple `1 <= beta <= alpha <= N`, `1 <= gamma <= N` for `N` in range.
pub fn tuples(n_lo: u32, n_hi: u32) -> Vec<Params> {
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        for a in 1..=n {
            for b in 1..=a {
                for g in 1..=n {
                    out.push(Params::new(n, a, b, g).unwrap());
                }
            }
        }
    }
    out
}

pub fn tuples_in_case(n_lo: u32, n_hi: u32, case: CaseTag) -> Vec<Params> {
    tuples(n_lo, n_hi).into_iter().filter(|p| case_of(p) == case).collect()
}

pub fn condition2_tuples(n_lo: u32, n_hi: u32) -> Vec<Params> {
    tuples(n_lo, n_hi).into_iter().filter(Params::satisfies_condition2).collect()
}

/// Runs `f` over `items` on all cores, keeping input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

pub fn random_cyclo(field: &Arc<CycloField>, rng: &mut impl Rng) -> CycloNum {
    let k = rng.gen_range(0..field.order() as i64);
    let c = rng.gen_range(-3..=3i64);
    let d = rng.gen_range(-2..=2i64);
    &(&field.zeta_pow(k) * &field.from_int(c)) + &field.from_int(d)
}

/// Random element of the degree-zero subspace: `sum_k f_k(v^N) v^k` with
/// `f_k` polynomials of degree at most one, sometimes over `1 - c v^N`.
pub fn random_p(field: &Arc<CycloField>, rng: &mut impl Rng) -> SolutionElement {
    let n = field.order() as usize;
    let coeffs: Vec<CycloNum> = (0..2 * n)
        .map(|_| if rng.gen_bool(0.6) { random_cyclo(field, rng) } else { field.zero() })
        .collect();
    let num = Poly::from_coeffs(field, coeffs);
    let den = if rng.gen_bool(0.3) {
        let c = field.from_int(rng.gen_range(2..=5));
        &Poly::one(field) - &Poly::monomial(c, n)
    } else {
        Poly::one(field)
    };
    SolutionElement::from_ratfunc(RatFunc::new(num, den).unwrap())
}

/// The `N` quasi-constant coefficients of a degree-zero element.
pub fn coefficients(e: &SolutionElement) -> Vec<RatFunc> {
    decompose_quasi(e).row(0)
}

/// Rank of a matrix over the quasi-constant field by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<RatFunc>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][c].inv().unwrap();
        let head: Vec<RatFunc> = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..cols {
                    rows[i][j] = &rows[i][j] - &(&factor * &head[j]);
                }
            }
        }
        rows[r] = head;
        r += 1;
    }
    r
}

/// Brute-force image test: `z` lies in `L` of the degree-zero subspace iff
/// appending it as a column leaves the rank of the matrix of `L` on the
/// basis `v^0, ..., v^{N-1}` unchanged.
pub fn in_image_bruteforce(p: &Params, z: &[RatFunc]) -> bool {
    let f = p.field();
    let n = p.n() as usize;
    let columns: Vec<Vec<RatFunc>> = (0..n)
        .map(|k| coefficients(&apply_l(p, &SolutionElement::q_pow_x(f.one(), k as i64))))
        .collect();
    let matrix: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    let augmented: Vec<Vec<RatFunc>> = matrix
        .iter()
        .zip(z)
        .map(|(row, zi)| {
            let mut r = row.clone();
            r.push(zi.clone());
            r
        })
        .collect();
    rank(matrix) == rank(augmented)
}
