//! Floating-point evaluation, multiplier systems, the completion of `H_g`, Rademacher
//! sums and numeric transformation checks.

mod completion;
mod multiplier;
mod numeric;
mod rademacher;

pub use completion::{completion_hat_h, shadow_integral};
pub use multiplier::{
    dedekind_epsilon, dedekind_sum, jac_power, jac_quarter, kronecker, multiplier_xi, psi, rho, varsigma,
    MultiplierValue, Phase,
};
pub use numeric::{check_jacobi_transform, inverse_eta_slash_residual, theta_sum, ClassEvaluator, NumericSeries};
pub use rademacher::{enumerate_cosets, gen_exp, rademacher_box_sum, rademacher_sum};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::genus::GenusError;
use crate::group::GroupError;
use crate::mock::MockError;
use crate::series::{ExactSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Mock(#[from] MockError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error(transparent)]
    Recipe(#[from] crate::forms::RecipeError),
    #[error("point outside the expansion region: {0}")]
    Region(String),
    #[error("tail bound {bound:e} exceeds tolerance {tol:e}")]
    Tail { bound: f64, tol: f64 },
    #[error("{0} is not in Gamma_0({1})")]
    NotInGroup(GroupElement, i64),
    #[error("quadrature error estimate {0:e} above tolerance")]
    Quadrature(f64),
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

/// `e(x) = exp(2 pi i x)`.
pub fn e(x: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * x).exp()
}

/// `e(x)` for real `x`.
pub fn e_real(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// A value with a crude bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail: f64,
}

/// Evaluates a `q` or `(q, y)` series at `q = e(tau)`, `y = e(z)`.
pub fn eval_series(s: &ExactSeries, tau: Complex64, z: Option<Complex64>) -> Result<Evaluation> {
    NumericSeries::from_exact(s)?.eval(tau, z)
}

/// An element of `SL_2(Z)`. Entries are machine integers; products are overflow-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        (a.checked_mul(d)? - b.checked_mul(c)? == 1).then_some(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn t(m: i64) -> Self {
        Self { a: 1, b: m, c: 0, d: 1 }
    }

    pub fn s() -> Self {
        Self { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = |x: i64, y: i64, u: i64, v: i64| x.checked_mul(y).and_then(|p| u.checked_mul(v).and_then(|q| p.checked_add(q)));
        Self {
            a: f(self.a, o.a, self.b, o.c).expect("entry overflow"),
            b: f(self.a, o.b, self.b, o.d).expect("entry overflow"),
            c: f(self.c, o.a, self.d, o.c).expect("entry overflow"),
            d: f(self.c, o.b, self.d, o.d).expect("entry overflow"),
        }
    }

    /// Completes a coprime lower row `(c, d)` to a unit-determinant matrix.
    pub fn from_lower_row(c: i64, d: i64) -> Option<Self> {
        let (g, x, y) = ext_gcd(d, c);
        if g.abs() != 1 {
            return None;
        }
        // a d - b c = 1 with a = x/g, b = -y/g
        Self::new(x * g, -y * g, c, d)
    }

    pub fn in_gamma0(&self, n: i64) -> bool {
        self.c % n == 0
    }

    /// `(a tau + b) / (c tau + d)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    /// `c tau + d`.
    pub fn cocycle(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }
}

/// `(g, x, y)` with `a x + b y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A random element of `Gamma_0(n)` with lower row `c = n k`, `1 <= k <= c_mult`,
/// `|d| <= d_max`, translated by `T^m` for `|m| <= 5`.
pub fn random_gamma0<R: Rng>(rng: &mut R, n: i64, c_mult: i64, d_max: i64) -> GroupElement {
    loop {
        let c = n * rng.gen_range(1..=c_mult) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let d = rng.gen_range(-d_max..=d_max);
        if let Some(g) = GroupElement::from_lower_row(c, d) {
            return GroupElement::t(rng.gen_range(-5..=5)).mul(&g);
        }
    }
}

/// A point where `tau` and `gamma tau` have comparable imaginary parts `s/|c|` and `1/(s|c|)`.
pub fn balanced_point(g: &GroupElement, s: f64, shift: f64) -> Complex64 {
    if g.c == 0 {
        return Complex64::new(shift, s);
    }
    Complex64::new(-(g.d as f64) / g.c as f64 + shift, s / (g.c as f64).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::eta;
    use rand::SeedableRng;

    #[test]
    fn completion_of_lower_rows() {
        for c in -12..=12i64 {
            for d in -12..=12i64 {
                match GroupElement::from_lower_row(c, d) {
                    Some(g) => {
                        assert_eq!(g.a * g.d - g.b * g.c, 1);
                        assert_eq!((g.c, g.d), (c, d));
                    }
                    None => assert_ne!(crate::num::gcd(c, d).abs(), 1),
                }
            }
        }
    }

    #[test]
    fn constant_and_inverse_pairs() {
        let one = ExactSeries::one(crate::series::Signature::q());
        let v = eval_series(&one, Complex64::new(0.3, 0.7), None).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        let e24 = eta(30).pow(24).unwrap();
        let inv = e24.inv().unwrap();
        let tau = Complex64::new(0.1, 0.9);
        let p = eval_series(&e24, tau, None).unwrap().value * eval_series(&inv, tau, None).unwrap().value;
        assert!((p - 1.0).norm() < 1e-10, "{p}");
    }

    #[test]
    fn eta_at_i_is_stable_under_doubling() {
        let tau = Complex64::new(0.0, 1.0);
        let a = eval_series(&eta(30), tau, None).unwrap();
        let b = eval_series(&eta(60), tau, None).unwrap();
        assert!(a.value.re > 0.0 && a.value.im.abs() < 1e-14);
        assert!((a.value - b.value).norm() < 1e-14);
        // Gamma(1/4) / (2 pi^{3/4})
        assert!((a.value.re - 0.768_225_422_326_056_7).abs() < 1e-12);
    }

    #[test]
    fn random_gamma0_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 4, 23] {
            for _ in 0..20 {
                let g = random_gamma0(&mut rng, n, 2, 30);
                assert!(g.in_gamma0(n));
                assert_eq!(g.a * g.d - g.b * g.c, 1);
            }
        }
    }
}
