use crate::group::ClassRecord;
use crate::num::int;
use crate::series::{q24, ExactSeries, Result, Signature, UNIT};

/// `prod_{n>=1} (1 - q^n)`, known below `q^order`.
pub fn euler_product(order: i64) -> ExactSeries {
    let sig = Signature::q();
    let hi = [Some(order.max(1) * UNIT)];
    let mut acc = ExactSeries::one(sig.clone()).truncate(&hi);
    for n in 1..order {
        let f = ExactSeries::polynomial(sig.clone(), [(q24(0), int(1)), (q24(n * UNIT), int(-1))]);
        acc = acc.mul(&f).expect("same signature");
    }
    acc
}

/// `eta(tau)`, known below `q^order`.
pub fn eta(order: i64) -> ExactSeries {
    eta_quotient(&[(1, 1)], order).expect("eta is a unit series")
}

/// `prod_k eta(k tau)^{e_k}` for `(k, e_k)` pairs, known below `q^order`.
pub fn eta_quotient(factors: &[(u32, i32)], order: i64) -> Result<ExactSeries> {
    let shift: i64 = factors.iter().map(|&(k, e)| k as i64 * e as i64).sum();
    // the product part has integer exponents; it must be known below q^{order - shift/24}
    let need = order * UNIT - shift;
    let inner = need.div_euclid(UNIT) + i64::from(need.rem_euclid(UNIT) != 0);
    let inner = inner.max(1);
    let base = euler_product(inner);
    let mut acc = ExactSeries::one(Signature::q()).truncate(&[Some(inner * UNIT)]);
    for &(k, e) in factors {
        let f = base.dilate('q', k as i64)?.truncate(&[Some(inner * UNIT)]);
        acc = acc.mul(&f.pow(e as i64)?)?;
    }
    Ok(acc.mul_monomial(&q24(shift), &int(1)).truncate(&[Some(order * UNIT)]))
}

/// `eta_g(tau) = prod eta(i tau)^{l}` over the cycle shape.
pub fn eta_product(class: &ClassRecord, order: i64) -> ExactSeries {
    let factors: Vec<(u32, i32)> = class.shape.iter().map(|&(i, l)| (i, l as i32)).collect();
    eta_quotient(&factors, order).expect("eta products are unit series")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::load_group_data;
    use crate::num::Rational;
    use num_traits::Zero;

    /// Euler's pentagonal number theorem.
    fn pentagonal(order: i64) -> Vec<i64> {
        let mut c = vec![0i64; order as usize];
        for k in -(order)..=order {
            let e = k * (3 * k - 1) / 2;
            if (0..order).contains(&e) {
                c[e as usize] += if k % 2 == 0 { 1 } else { -1 };
            }
        }
        c
    }

    #[test]
    fn product_matches_pentagonal_series() {
        let p = euler_product(60);
        for (n, v) in pentagonal(60).into_iter().enumerate() {
            assert_eq!(p.coeff_int(&[n as i64]).unwrap(), int(v));
        }
    }

    #[test]
    fn eta_leading_terms() {
        let e = eta(5);
        assert_eq!(e.coeff(&q24(1)).unwrap(), int(1));
        assert_eq!(e.coeff(&q24(25)).unwrap(), int(-1));
        assert!(e.coeff(&q24(0)).unwrap().is_zero());
        let one = e.mul(&e.inv().unwrap()).unwrap();
        assert!(one.agrees_with(&ExactSeries::one(Signature::q())).unwrap());
    }

    #[test]
    fn eta_products_start_at_q() {
        let g = load_group_data().unwrap();
        for c in &g.classes {
            let s = eta_product(c, 4);
            assert_eq!(s.coeff_int(&[1]).unwrap(), int(1), "{}", c.label);
            assert_eq!(s.bounds()[0].hi, Some(4 * UNIT));
        }
        let inv2a = eta_product(g.class("2A").unwrap(), 3).inv().unwrap();
        assert_eq!(inv2a.coeff_int(&[0]).unwrap(), int(8));
        let inv23 = eta_product(g.class("23AB").unwrap(), 5).inv().unwrap();
        assert_eq!(inv23.coeff_int(&[2]).unwrap(), int(3));
    }

    #[test]
    fn eta_quotient_with_negative_powers() {
        // eta(tau)^2 / eta(2tau) = sum_n (-1)^n q^{n^2}
        let s = eta_quotient(&[(1, 2), (2, -1)], 30).unwrap();
        for n in 0..30 {
            let r = (n as f64).sqrt() as i64;
            let expect: Rational = if r * r == n {
                if r == 0 { int(1) } else { int(if r % 2 == 0 { 2 } else { -2 }) }
            } else {
                Rational::zero()
            };
            assert_eq!(s.coeff_int(&[n]).unwrap(), expect, "n={n}");
        }
    }
}
