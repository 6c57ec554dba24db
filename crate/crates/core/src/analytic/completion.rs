use num_complex::Complex64;
use quadrature::double_exponential;

use crate::forms::eta;

use super::{AnalyticError, ClassEvaluator, NumericSeries, Result};

/// `sum_{n>=0} (2n+1) e^{-2 pi ((2n+1)^2/8 - 1/8) v}`, so that
/// `|eta(tau)^3| <= C e^{-pi v / 4}` for `Im tau >= v`.
fn eta_cubed_constant(v: f64) -> f64 {
    let mut acc = 0.0;
    for n in 0..200 {
        let k = (2 * n + 1) as f64;
        let t = k * (-2.0 * std::f64::consts::PI * (k * k - 1.0) / 8.0 * v).exp();
        acc += t;
        if t < 1e-18 {
            break;
        }
    }
    acc
}

/// `int_0^inf conj(eta(tau + i t)^3) (2v + t)^{-1/2} dt` with `v = Im tau`.
///
/// The integral runs to a cutoff `T` where the analytic tail bound drops below
/// `tol / 10`; the double-exponential rule must meet `tol / 10` on each part.
pub fn shadow_integral(tau: Complex64, tol: f64) -> Result<Complex64> {
    let v = tau.im;
    if v <= 0.0 {
        return Err(AnalyticError::Region(format!("Im tau = {v} is not positive")));
    }
    // enough terms of eta^3 that the truncation is below tol at Im >= v
    let order = ((40.0 / (2.0 * std::f64::consts::PI * v)).ceil() as i64).max(8);
    let cube = NumericSeries::from_exact(&eta(order).pow(3)?)?;
    let c = eta_cubed_constant(v);
    // tail: int_T^inf C e^{-pi (v + t)/4} (2v + t)^{-1/2} dt <= C e^{-pi (v + T)/4} (4/pi) (2v + T)^{-1/2}
    let tail = |t: f64| c * (-std::f64::consts::PI * (v + t) / 4.0).exp() * 4.0 / std::f64::consts::PI / (2.0 * v + t).sqrt();
    let mut cutoff = 1.0;
    while tail(cutoff) > tol / 10.0 {
        cutoff *= 1.5;
    }
    let f = |t: f64| -> Complex64 {
        let w = tau + Complex64::new(0.0, t);
        let val = cube.value(w, None).expect("Im stays positive");
        val.conj() / (2.0 * v + t).sqrt()
    };
    let re = double_exponential::integrate(|t| f(t).re, 0.0, cutoff, tol / 10.0);
    let im = double_exponential::integrate(|t| f(t).im, 0.0, cutoff, tol / 10.0);
    let err = re.error_estimate.max(im.error_estimate);
    if err > tol / 10.0 {
        return Err(AnalyticError::Quadrature(err));
    }
    Ok(Complex64::new(re.integral, im.integral))
}

/// `Ĥ_g(tau) = H_g(tau) + (chi/2) int_0^inf conj(eta(tau + i t)^3) (2v + t)^{-1/2} dt`.
pub fn completion_hat_h(ev: &ClassEvaluator, tau: Complex64, tol: f64) -> Result<Complex64> {
    let h = ev.h_g(tau)?;
    if ev.chi == 0 {
        return Ok(h);
    }
    Ok(h + shadow_integral(tau, tol)? * (ev.chi as f64 / 2.0))
}
