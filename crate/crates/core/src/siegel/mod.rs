//! Borcherds lifts `Phi_g` of the twisted genera and their behaviour at `z = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::forms::eta_product;
use crate::genus::{disc_coeff, order_for_discriminant, twisted_genus, GenusError, JacobiGenus};
use crate::group::{load_group_data, GroupError};
use crate::num::{format_rational, int, rat, Rational};
use crate::series::{binomial_factor_pow, Bound, ExactSeries, Exponent, SeriesError, Signature, Variable, UNIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiegelError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{label}: c(-1) is not the same over all powers of g")]
    PolarMismatch { label: String },
    #[error("y-moment {moment} is {value} at p^{m} q^{n}: no double zero at z = 0")]
    NoDoubleZero { moment: u32, m: i64, n: i64, value: String },
    #[error("non-integral coefficient {value} at {at}")]
    NonIntegral { value: String, at: String },
}

pub type Result<T> = std::result::Result<T, SiegelError>;

/// `Phi_g` in `(p, q, y)`, known through `p^{p_max} q^{q_max}` and exact in `y`.
#[derive(Debug, Clone)]
pub struct SiegelProduct {
    pub label: String,
    pub p_max: i64,
    pub q_max: i64,
    pub series: ExactSeries,
}

/// `(p, q)` with the orders of the Siegel window.
pub fn pq_signature() -> Signature {
    Signature::new(
        vec![Variable { name: 'p', den: 1 }, Variable { name: 'q', den: 24 }],
        vec![[1, 0, 0], [0, 1, 0]],
    )
    .expect("valid signature")
}

fn pqy(m: i64, n: i64, l: i64) -> Exponent {
    [m, n * UNIT, 2 * l]
}

/// Genera `Z_{g^k}` for `k` up to `k_max`, keyed by `k`.
fn power_genera(label: &str, k_max: i64, order: i64) -> Result<BTreeMap<i64, Arc<JacobiGenus>>> {
    let g = load_group_data()?;
    let mut out = BTreeMap::new();
    for k in 1..=k_max.max(1) {
        let target = &g.power_class(label, k as u32)?.label;
        out.insert(k, twisted_genus(target, order)?);
    }
    Ok(out)
}

fn coeff_d(z: &JacobiGenus, d: i64) -> Result<Rational> {
    if d < -1 {
        return Ok(Rational::zero());
    }
    Ok(disc_coeff(z, d)?)
}

/// `pqy prod_{(m,n,l)>0} exp(-sum_k c_{g^k}(4mn - l^2) (p^m q^n y^l)^k / k)`.
pub fn borcherds_product(label: &str, p_max: i64, q_max: i64) -> Result<SiegelProduct> {
    let sig = Signature::pqy();
    // the pqy prefactor leaves p^{<p_max} q^{<q_max} for the exponential
    let (hp, hq) = (p_max, q_max);
    let order = order_for_discriminant(4 * (hp - 1).max(0) * (hq - 1).max(0));
    let k_max = hp.max(hq);
    let genera = power_genera(label, k_max, order)?;

    // (m, n) = (0, 0): only l = -1 has 4mn - l^2 >= -1
    let polar = coeff_d(&genera[&1], -1)?;
    for z in genera.values() {
        if coeff_d(z, -1)? != polar {
            return Err(SiegelError::PolarMismatch { label: label.to_string() });
        }
    }
    let mut terms: Vec<(Exponent, Rational)> = Vec::new();
    for m in 0..hp {
        for n in 0..hq {
            if m == 0 && n == 0 {
                continue;
            }
            let lmax = ((4 * m * n + 1) as f64).sqrt() as i64 + 1;
            for l in -lmax..=lmax {
                let d = 4 * m * n - l * l;
                let mut k = 1;
                while k * m < hp && k * n < hq {
                    let c = coeff_d(&genera[&k], d)?;
                    if !c.is_zero() {
                        terms.push((pqy(k * m, k * n, k * l), -c * rat(1, k)));
                    }
                    k += 1;
                }
            }
        }
    }
    let hi = [Some(hp * UNIT), Some(hq * UNIT)];
    let log = ExactSeries::from_terms(sig.clone(), vec![Bound::new(hi[0], 0), Bound::new(hi[1], 0)], terms)?;
    let mut s = log.exp()?;
    s = s.mul(&polar_factor(&sig, &polar)?)?;
    let series = s.mul_monomial(&pqy(1, 1, 1), &int(1));
    Ok(SiegelProduct { label: label.to_string(), p_max, q_max, series })
}

/// `(1 - y^{-1})^c` for the integer `c = c_g(-1)`.
fn polar_factor(sig: &Signature, c: &Rational) -> Result<ExactSeries> {
    let base = ExactSeries::polynomial(sig.clone(), [([0; 3], int(1)), (pqy(0, 0, -1), int(-1))]);
    let e = c.to_i64().filter(|_| c.is_integer()).ok_or_else(|| SiegelError::NonIntegral {
        value: format_rational(c),
        at: "c(-1)".into(),
    })?;
    Ok(base.pow(e)?)
}

/// `pqy (1 - y^{-1})^2 prod_{(m,n) != 0} (1 - p^m q^n y^l)^{c(4mn - l^2)}`, the product
/// form with integer exponents, for the untwisted genus.
pub fn product_form_1a(p_max: i64, q_max: i64) -> Result<ExactSeries> {
    let sig = Signature::pqy();
    let (hp, hq) = (p_max, q_max);
    let hi = [Some(hp * UNIT), Some(hq * UNIT)];
    let z = twisted_genus("1A", order_for_discriminant(4 * (hp - 1).max(0) * (hq - 1).max(0)))?;
    let mut acc = ExactSeries::one(sig.clone()).truncate(&hi);
    for m in 0..hp {
        for n in 0..hq {
            if m == 0 && n == 0 {
                continue;
            }
            let lmax = ((4 * m * n + 1) as f64).sqrt() as i64 + 1;
            for l in -lmax..=lmax {
                let c = coeff_d(&z, 4 * m * n - l * l)?;
                if c.is_zero() {
                    continue;
                }
                let e = c.to_i64().expect("small exponent");
                acc = acc.mul(&binomial_factor_pow(&sig, &hi, &pqy(m, n, l), e)?)?;
            }
        }
    }
    let acc = acc.mul(&polar_factor(&sig, &coeff_d(&z, -1)?)?)?;
    Ok(acc.mul_monomial(&pqy(1, 1, 1), &int(1)))
}

/// `lim_{z -> 0} (2 pi i z)^{-2} Phi`: half the second `y`-moment at each `p^m q^n`,
/// after checking that the zeroth and first moments vanish.
pub fn double_zero_limit(s: &SiegelProduct) -> Result<ExactSeries> {
    let mut moments: BTreeMap<(i64, i64), [Rational; 3]> = BTreeMap::new();
    for (e, c) in s.series.terms() {
        let l = e[2] / 2;
        let entry = moments.entry((e[0], e[1])).or_insert_with(|| [Rational::zero(), Rational::zero(), Rational::zero()]);
        entry[0] += c.clone();
        entry[1] += c.clone() * int(l);
        entry[2] += c.clone() * int(l * l);
    }
    let mut terms = Vec::new();
    for ((m, n24), mo) in moments {
        for j in 0..2 {
            if !mo[j].is_zero() {
                return Err(SiegelError::NoDoubleZero {
                    moment: j as u32,
                    m,
                    n: n24 / UNIT,
                    value: format_rational(&mo[j]),
                });
            }
        }
        terms.push(([m, n24, 0], mo[2].clone() * rat(1, 2)));
    }
    let hi = s.series.bounds();
    let bounds = vec![Bound::new(hi[0].hi, hi[0].lo), Bound::new(hi[1].hi, hi[1].lo)];
    Ok(ExactSeries::from_terms(pq_signature(), bounds, terms)?)
}

/// `eta_g(tau) eta_g(sigma)` with `p = e(sigma)`, `q = e(tau)`.
pub fn eta_pair(label: &str, p_max: i64, q_max: i64) -> Result<ExactSeries> {
    let g = load_group_data()?;
    let class = g.class(label)?;
    let top = p_max.max(q_max) + 1;
    let eg = eta_product(class, top);
    let coeffs: Vec<(i64, Rational)> = eg.terms().map(|(e, c)| (e[0] / UNIT, c.clone())).collect();
    let mut terms = Vec::new();
    for (a, ca) in &coeffs {
        for (b, cb) in &coeffs {
            terms.push(([*a, b * UNIT, 0], ca.clone() * cb.clone()));
        }
    }
    let bounds = vec![Bound::new(Some((p_max + 1) * UNIT), UNIT), Bound::new(Some((q_max + 1) * UNIT), UNIT)];
    Ok(ExactSeries::from_terms(pq_signature(), bounds, terms)?)
}

/// Coefficients at `p^m q^n y^l` and `p^n q^m y^l` that differ.
pub fn exchange_asymmetries(s: &SiegelProduct) -> Vec<Exponent> {
    let mut out = Vec::new();
    for (e, c) in s.series.terms() {
        let (m, n) = (e[0], e[1] / UNIT);
        let swapped = [n, m * UNIT, e[2]];
        match s.series.coeff(&swapped) {
            Ok(v) if v == *c => {}
            Ok(_) => out.push(*e),
            Err(_) => {}
        }
    }
    out
}

/// The first non-integral coefficient, if any.
pub fn first_non_integral(s: &ExactSeries) -> Option<(Exponent, Rational)> {
    s.terms().find(|(_, c)| !c.is_integer()).map(|(e, c)| (*e, c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_block_at_1a() {
        let s = borcherds_product("1A", 2, 2).unwrap();
        // pq (y - 2 + y^{-1})
        assert_eq!(s.series.coeff(&pqy(1, 1, 1)).unwrap(), int(1));
        assert_eq!(s.series.coeff(&pqy(1, 1, 0)).unwrap(), int(-2));
        assert_eq!(s.series.coeff(&pqy(1, 1, -1)).unwrap(), int(1));
        assert!(s.series.coeff(&pqy(1, 1, 2)).unwrap().is_zero());
        assert_eq!(s.series.coeff(&pqy(2, 1, 0)).unwrap(), s.series.coeff(&pqy(1, 2, 0)).unwrap());
    }

    #[test]
    fn exp_form_matches_product_form() {
        let a = borcherds_product("1A", 4, 4).unwrap();
        let b = product_form_1a(4, 4).unwrap();
        assert_eq!(a.series, b);
        assert!(exchange_asymmetries(&a).is_empty());
        assert!(first_non_integral(&a.series).is_none());
    }

    #[test]
    fn double_zero_factorises() {
        for label in ["1A", "2A", "3A", "4B"] {
            let s = borcherds_product(label, 3, 3).unwrap();
            let lim = double_zero_limit(&s).unwrap();
            assert_eq!(lim, eta_pair(label, 3, 3).unwrap(), "{label}");
        }
    }

    #[test]
    fn missing_double_zero_is_reported() {
        let mut s = borcherds_product("2B", 2, 2).unwrap();
        s.series = s.series.add(&ExactSeries::monomial(Signature::pqy(), pqy(1, 1, 0), int(1))).unwrap();
        assert!(matches!(double_zero_limit(&s), Err(SiegelError::NoDoubleZero { moment: 0, .. })));
    }
}
