use std::f64::consts::PI;

use num_complex::Complex64;

use crate::forms::{e2, eta, f2, t_tilde};
use crate::group::load_group_data;
use crate::num::to_f64;
use crate::series::{ExactSeries, SeriesError};

use super::multiplier::{jac_power, rho};
use super::{e, AnalyticError, Evaluation, GroupElement, Result};

/// A `q` or `(q, y)` series with floating-point coefficients.
#[derive(Debug, Clone)]
pub struct NumericSeries {
    /// `(q exponent, y exponent, coefficient)`, sorted by `q` exponent.
    terms: Vec<(f64, f64, f64)>,
    /// The series is known for `q` exponents below this.
    q_hi: Option<f64>,
    has_y: bool,
    region: bool,
}

impl NumericSeries {
    pub fn from_exact(s: &ExactSeries) -> Result<Self> {
        let sig = s.signature();
        let qi = sig.var_index('q').ok_or_else(|| SeriesError::Unsupported("no q variable".into()))?;
        let yi = sig.var_index('y');
        if sig.nvars() != 1 + usize::from(yi.is_some()) {
            return Err(SeriesError::Unsupported("only q and (q, y) series evaluate".into()).into());
        }
        let vars = sig.vars();
        let mut terms: Vec<(f64, f64, f64)> = s
            .terms()
            .map(|(ex, c)| {
                let qe = ex[qi] as f64 / vars[qi].den as f64;
                let ye = yi.map_or(0.0, |i| ex[i] as f64 / vars[i].den as f64);
                (qe, ye, to_f64(c))
            })
            .collect();
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let region = sig.orders().len() > 1;
        // the first order functional is the q exponent in every supported signature
        let q_hi = s.bounds()[0].hi.map(|h| h as f64 / crate::series::UNIT as f64);
        Ok(Self { terms, q_hi, has_y: yi.is_some(), region })
    }

    /// Partial sum at `q = e(tau)`, `y = e(z)`, with a crude tail bound: the top unit
    /// slice of the window continued geometrically in `|q|`.
    pub fn eval(&self, tau: Complex64, z: Option<Complex64>) -> Result<Evaluation> {
        if tau.im <= 0.0 {
            return Err(AnalyticError::Region(format!("Im tau = {} is not positive", tau.im)));
        }
        let z = match (self.has_y, z) {
            (true, Some(z)) => z,
            (true, None) => return Err(AnalyticError::Region("series needs a z argument".into())),
            (false, _) => Complex64::new(0.0, 0.0),
        };
        if self.region && !(0.0 < z.im && z.im < tau.im) {
            return Err(AnalyticError::Region(format!("need 0 < Im z < Im tau, got z = {z}, tau = {tau}")));
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut top = 0.0;
        for &(qe, ye, c) in &self.terms {
            let t = e(tau * qe + z * ye) * c;
            value += t;
            if self.q_hi.is_some_and(|h| qe >= h - 1.0) {
                top += t.norm();
            }
        }
        let r = (-2.0 * PI * tau.im).exp();
        let tail = if self.q_hi.is_some() { top * r / (1.0 - r) } else { 0.0 };
        Ok(Evaluation { value, tail })
    }

    pub fn value(&self, tau: Complex64, z: Option<Complex64>) -> Result<Complex64> {
        Ok(self.eval(tau, z)?.value)
    }
}

/// Terms `|n| <= m` needed for a theta sum to reach `e^{-40}` at `(tau, z)`.
fn theta_range(tau: Complex64, z: Complex64) -> i64 {
    let (v, w) = (tau.im, z.im.abs());
    let a = PI * v;
    let b = 2.0 * PI * w;
    ((b + (b * b + 4.0 * a * 40.0).sqrt()) / (2.0 * a)).ceil() as i64 + 2
}

/// `theta_i(tau, z)` from its defining sum; `theta_1` carries the factor `-i`.
pub fn theta_sum(i: u8, tau: Complex64, z: Complex64) -> Complex64 {
    let m = theta_range(tau, z);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -m..=m {
        let (x, sign) = match i {
            1 => (n as f64 + 0.5, if n % 2 == 0 { 1.0 } else { -1.0 }),
            2 => (n as f64 + 0.5, 1.0),
            3 => (n as f64, 1.0),
            _ => (n as f64, if n % 2 == 0 { 1.0 } else { -1.0 }),
        };
        acc += e(tau * (x * x / 2.0) + z * x) * sign;
    }
    if i == 1 {
        acc * Complex64::new(0.0, -1.0)
    } else {
        acc
    }
}

/// Numeric forms attached to one class, from exact series of a fixed order.
#[derive(Debug, Clone)]
pub struct ClassEvaluator {
    pub label: String,
    pub chi: i64,
    pub order: i64,
    shape: Vec<(u32, u32)>,
    eta: NumericSeries,
    /// `(chi/24)(-2 E2 + 48 F2) - T~_g`, the numerator of `H_g eta^3`.
    h_numerator: NumericSeries,
    t_tilde: NumericSeries,
}

impl ClassEvaluator {
    pub fn new(label: &str, order: i64) -> Result<Self> {
        let class = load_group_data()?.class(label)?;
        let tt = t_tilde(label, order)?;
        let h = e2(order).scale(&crate::num::int(-2)).add(&f2(order).scale(&crate::num::int(48)))?;
        let num = h.scale(&crate::num::rat(class.chi, 24)).sub(&tt)?;
        Ok(Self {
            label: label.to_string(),
            chi: class.chi,
            order,
            shape: class.shape.clone(),
            eta: NumericSeries::from_exact(&eta(order))?,
            h_numerator: NumericSeries::from_exact(&num)?,
            t_tilde: NumericSeries::from_exact(&tt)?,
        })
    }

    pub fn eta(&self, tau: Complex64) -> Result<Complex64> {
        self.eta.value(tau, None)
    }

    /// `eta_g(tau) = prod_i eta(i tau)^{l_i}`.
    pub fn eta_g(&self, tau: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for &(i, l) in &self.shape {
            acc *= self.eta(tau * i as f64)?.powi(l as i32);
        }
        Ok(acc)
    }

    /// `H_g(tau)`.
    pub fn h_g(&self, tau: Complex64) -> Result<Complex64> {
        Ok(self.h_numerator.value(tau, None)? / self.eta(tau)?.powi(3))
    }

    pub fn t_tilde(&self, tau: Complex64) -> Result<Complex64> {
        self.t_tilde.value(tau, None)
    }

    /// `Z_g(tau, z) = (chi/12) phi_{0,1} + T~_g phi_{-2,1}` with the Jacobi forms from theta sums.
    pub fn z_g(&self, tau: Complex64, z: Complex64) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut phi01 = zero;
        for i in 2..=4u8 {
            phi01 += (theta_sum(i, tau, z) / theta_sum(i, tau, zero)).powi(2);
        }
        phi01 *= 4.0;
        let phim21 = -theta_sum(1, tau, z).powi(2) / self.eta(tau)?.powi(6);
        Ok(phi01 * (self.chi as f64 / 12.0) + self.t_tilde(tau)? * phim21)
    }
}

/// `|rho(g) e(-c z^2 / (c tau + d)) Z_g(g tau, z / (c tau + d)) - Z_g(tau, z)|`, both
/// sides from `eval`, which maps `(tau, z)` to `Z_g(tau, z)`.
pub fn check_jacobi_transform<F>(label: &str, g: &GroupElement, tau: Complex64, z: Complex64, eval: F) -> Result<f64>
where
    F: Fn(Complex64, Complex64) -> Result<Complex64>,
{
    let class = load_group_data()?.class(label)?;
    let n = class.order as i64;
    if !g.in_gamma0(n) {
        return Err(AnalyticError::NotInGroup(*g, n));
    }
    let j = g.cocycle(tau);
    let lhs = rho(n, class.h as i64, g).value() * e(-(z * z) * g.c as f64 / j) * eval(g.act(tau), z / j)?;
    Ok((lhs - eval(tau, z)?).norm())
}

/// `|xi_g(g) (1/eta_g)(g tau) jac(g, tau)^{-k_g/2} eta_g(tau) - 1|`.
pub fn inverse_eta_slash_residual(ev: &ClassEvaluator, g: &GroupElement, tau: Complex64) -> Result<f64> {
    let class = load_group_data()?.class(&ev.label)?;
    let xi = super::multiplier_xi(&ev.label, g)?;
    let lhs = xi.value() / ev.eta_g(g.act(tau))? * jac_power(g, tau, -(class.weight as f64));
    Ok((lhs * ev.eta_g(tau)? - 1.0).norm())
}
