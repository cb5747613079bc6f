//! Exact solutions of the q-hypergeometric difference equation
//!
//! `L Psi = 0`, `L = (1 - D)(1 - q^{gamma-1} D) - q^x (1 - q^alpha D)(1 - q^beta D)`,
//! `D Psi(x) = Psi(x + 1)`, at `q = exp(2 pi i / N)` with integer parameters
//! `1 <= alpha, beta, gamma <= N`.
//!
//! - [`cyclofield`]: exact arithmetic in Q(q).
//! - [`qspace`]: the solution space of `x`-polynomials with rational
//!   coefficients in `v = q^x`, the operators `D`, `L`, `L_k`.
//! - [`basis`]: the explicit solution basis, the image criterion and the
//!   closed forms of the Barnes-type function.
//! - [`barnes`]: the Barnes integrand, numeric contour integration and
//!   residues.

pub mod barnes;
pub mod basis;
pub mod cyclofield;
pub mod error;
pub mod latex;
mod modp;
pub mod poly;
pub mod qspace;
pub mod quad;
pub mod ratfunc;

pub use basis::{
    barnes_closed_form, c_coefficient, BasisDocument, case_of, coeff_a, coeff_b, image_membership_case1,
    prefactor, psi1, psi2, residue_data, verify_theorem2, CaseTag, ResidueData, ResidueKind,
};
pub use cyclofield::{cyclotomic_poly, q_pochhammer, zeta_pow, CycloField, CycloNum, Rational};
pub use error::{Error, Result};
pub use qspace::{
    apply_l, apply_lk, casoratian, decompose_quasi, evaluate, shift_d, Params, ParamsJson,
    SolutionElement,
};
pub use ratfunc::RatFunc;
