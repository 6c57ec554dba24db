use crate::num::{int, Rational};
use crate::series::{q24, ExactSeries, Exponent, PhasedSeries, Result, Signature, UNIT};

use super::eta::euler_product;

/// Window of a two-variable series: the `q` order, plus the `y`-shifted order in the
/// region signature.
fn hi_for(sig: &Signature, q_order: i64, region_order: Option<i64>) -> Vec<Option<i64>> {
    let mut hi = vec![Some(q_order * UNIT)];
    if sig.orders().len() > 1 {
        hi.push(region_order.map(|r| r * UNIT));
    }
    hi
}

/// Product of the binomial factors `1 + s x^e`, truncated to the window.
fn product(sig: &Signature, hi: &[Option<i64>], factors: &[(Exponent, i64)]) -> Result<ExactSeries> {
    let zero = [0i64; 3];
    let mut acc: Option<ExactSeries> = None;
    for (e, s) in factors {
        if *e == zero {
            continue;
        }
        // a factor whose varying term lies beyond the window is 1 there
        let nonneg = (0..hi.len()).all(|i| sig.value(i, e) >= 0);
        let beyond = (0..hi.len()).any(|i| hi[i].is_some_and(|h| sig.value(i, e) >= h));
        if nonneg && beyond {
            continue;
        }
        let f = ExactSeries::polynomial(sig.clone(), [(zero, int(1)), (*e, int(*s))]);
        let f = f.truncate(hi);
        acc = Some(match acc {
            None => f,
            Some(a) => a.mul(&f)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ExactSeries::one(sig.clone()).truncate(hi)))
}

fn qy(sig: &Signature, q24n: i64, y2: i64) -> Exponent {
    let mut e = [0i64; 3];
    e[sig.var_index('q').expect("q variable")] = q24n;
    e[sig.var_index('y').expect("y variable")] = y2;
    e
}

/// `theta_i(tau, z)` in a `(q, y)` signature, as a phase times a rational series.
///
/// `q_order` truncates the `q` exponent; `region_order` truncates the second
/// functional when `sig` is the region signature.
pub fn theta(i: u8, sig: &Signature, q_order: i64, region_order: Option<i64>) -> Result<PhasedSeries> {
    let hi = hi_for(sig, q_order, region_order);
    let hi_q = q_order + 1;
    let mut factors = Vec::new();
    for n in 1..=hi_q {
        factors.push((qy(sig, n * UNIT, 0), -1));
    }
    let (prefactor, phase) = match i {
        1 | 2 => {
            let s = if i == 1 { -1 } else { 1 };
            for n in 1..=hi_q {
                factors.push((qy(sig, n * UNIT, 2), s));
                factors.push((qy(sig, (n - 1) * UNIT, -2), s));
            }
            (Some(qy(sig, 3, 1)), if i == 1 { 3 } else { 0 })
        }
        3 | 4 => {
            let s = if i == 3 { 1 } else { -1 };
            for n in 1..=hi_q {
                factors.push((qy(sig, n * UNIT - 12, 2), s));
                factors.push((qy(sig, n * UNIT - 12, -2), s));
            }
            (None, 0)
        }
        _ => return Err(crate::series::SeriesError::Unsupported(format!("theta index {i}"))),
    };
    // the product is computed on a window shifted back by the prefactor
    let shift = prefactor.map(|e| sig.values(&e)).unwrap_or_else(|| vec![0; hi.len()]);
    let inner_hi: Vec<Option<i64>> = hi.iter().zip(&shift).map(|(h, s)| h.map(|x| x - s)).collect();
    let mut p = product(sig, &inner_hi, &factors)?;
    if let Some(e) = prefactor {
        p = p.mul_monomial(&e, &int(1));
    }
    Ok(PhasedSeries::new(phase, p.truncate(&hi)))
}

/// `theta_i(tau, 0)` for `i` in 2..=4, a one-variable series known below `q^order`.
pub fn theta_null(i: u8, order: i64) -> Result<ExactSeries> {
    let sig = Signature::q();
    let hi = [Some(order * UNIT)];
    let euler = euler_product(order + 1).truncate(&hi);
    let mut factors = Vec::new();
    let (prefactor, scale): (i64, Rational) = match i {
        2 => {
            for n in 1..=order + 1 {
                factors.push((q24(n * UNIT), 1));
                factors.push((q24(n * UNIT), 1));
            }
            (3, int(2))
        }
        3 | 4 => {
            let s = if i == 3 { 1 } else { -1 };
            for n in 1..=order + 1 {
                factors.push((q24(n * UNIT - 12), s));
                factors.push((q24(n * UNIT - 12), s));
            }
            (0, int(1))
        }
        _ => return Err(crate::series::SeriesError::Unsupported(format!("theta null {i}"))),
    };
    let inner = [Some(order * UNIT - prefactor)];
    let p = product(&sig, &inner, &factors)?.mul(&euler.truncate(&inner))?;
    Ok(p.mul_monomial(&q24(prefactor), &scale).truncate(&hi))
}

/// `theta_1` stripped of its phase: `theta_1 = -i * magnitude`.
pub fn theta1_magnitude(sig: &Signature, q_order: i64, region_order: Option<i64>) -> Result<ExactSeries> {
    Ok(theta(1, sig, q_order, region_order)?.magnitude().clone())
}

/// `theta_1(tau, z)^2 = -P^2`, phase folded.
pub fn theta1_squared(sig: &Signature, q_order: i64, region_order: Option<i64>) -> Result<ExactSeries> {
    let t = theta(1, sig, q_order, region_order)?;
    t.mul(&t)?.into_series()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    /// `theta_3(tau, z) = sum_n q^{n^2/2} y^n`.
    #[test]
    fn theta3_matches_sum_form() {
        let sig = Signature::qy();
        let t = theta(3, &sig, 12, None).unwrap().into_series().unwrap();
        for n2 in 0..24i64 {
            for l in -6..=6i64 {
                let e = [n2 * 12, 2 * l, 0];
                let expect = if l * l == n2 { int(1) } else { int(0) };
                assert_eq!(t.coeff(&e).unwrap(), expect, "q^{}/2 y^{}", n2, l);
            }
        }
        assert_eq!(t.coeff_at(&[Rational::new(1.into(), 2.into()), int(1)]).unwrap(), int(1));
    }

    /// `theta_1 = -i sum_n (-1)^n q^{(n+1/2)^2/2} y^{n+1/2}`.
    #[test]
    fn theta1_matches_sum_form() {
        let sig = Signature::qy();
        let p = theta1_magnitude(&sig, 10, None).unwrap();
        for n in -6i64..6 {
            let q = (2 * n + 1) * (2 * n + 1) * 3; // (n+1/2)^2/2 in 1/24 units
            if q >= 240 {
                continue;
            }
            let e = [q, 2 * n + 1, 0];
            assert_eq!(p.coeff(&e).unwrap(), int(if n % 2 == 0 { 1 } else { -1 }));
        }
        let leading = [3, -1, 0];
        assert_eq!(p.coeff(&leading).unwrap(), int(-1));
    }

    #[test]
    fn theta1_vanishes_at_zero() {
        let p = theta1_magnitude(&Signature::qy(), 8, None).unwrap();
        assert!(p.specialize_to_one('y').unwrap().is_empty());
    }

    #[test]
    fn theta1_squared_leading_block() {
        // -q^{1/4} y^{-1} (1 - y)^2 (1 + O(q))
        let t2 = theta1_squared(&Signature::qy(), 2, None).unwrap();
        assert_eq!(t2.coeff(&[6, -2, 0]).unwrap(), int(-1));
        assert_eq!(t2.coeff(&[6, 0, 0]).unwrap(), int(2));
        assert_eq!(t2.coeff(&[6, 2, 0]).unwrap(), int(-1));
        assert!(t2.coeff(&[6, 4, 0]).unwrap().is_zero());
        // every q-order of the block is divisible by (1 - y)^2: zero value and slope at y = 1
        for q in [6, 30] {
            let row: Vec<(i64, Rational)> =
                t2.terms().filter(|(e, _)| e[0] == q).map(|(e, c)| (e[1] / 2, c.clone())).collect();
            let m0: Rational = row.iter().map(|(_, c)| c.clone()).sum();
            let m1: Rational = row.iter().map(|(l, c)| c * int(*l)).sum();
            assert!(m0.is_zero() && m1.is_zero());
        }
    }

    #[test]
    fn theta_nulls() {
        let t2 = theta_null(2, 4).unwrap();
        assert_eq!(t2.coeff(&q24(3)).unwrap(), int(2));
        let t3 = theta_null(3, 5).unwrap();
        for (e, v) in [(0, 1), (12, 2), (24, 0), (48, 2), (96, 0), (108, 2)] {
            assert_eq!(t3.coeff(&q24(e)).unwrap(), int(v));
        }
        for i in 2..=4u8 {
            let full = theta(i, &Signature::qy(), 6, None).unwrap().into_series().unwrap();
            let at0 = full.specialize_to_one('y').unwrap();
            assert!(at0.agrees_with(&theta_null(i, 6).unwrap()).unwrap(), "theta {i}");
        }
    }

    #[test]
    fn region_theta_has_single_leading_term() {
        let sig = Signature::qy_region();
        let p = theta1_magnitude(&sig, 4, Some(4)).unwrap();
        assert_eq!(p.bounds()[0].lo, 3);
        assert_eq!(p.bounds()[1].lo, -9);
        let (m, c) = p.leading_term().unwrap();
        assert_eq!((m, c), ([3, -1, 0], int(-1)));
    }
}
