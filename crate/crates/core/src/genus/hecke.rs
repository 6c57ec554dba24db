use std::collections::BTreeMap;

use num_traits::Zero;

use crate::group::load_group_data;
use crate::num::{divisors, rat, Rational};
use crate::series::{binomial_factor_pow, Bound, ExactSeries, Exponent, Signature, UNIT};

use super::{disc_coeff, order_for_discriminant, twisted_genus, GenusError, JacobiGenus, Result};

/// `sum_{a | (N, M, L)} (1/a) c_a(N M / a^2, L / a)` for `M < out_order`, where
/// `c_a(n, l)` is the `q^n y^l` coefficient of the form attached to `a`.
pub fn hecke_with<F>(n: i64, out_order: i64, mut coeff: F) -> Result<ExactSeries>
where
    F: FnMut(i64, i64, i64) -> Result<Rational>,
{
    let divs = divisors(n as u64);
    let mut terms: Vec<(Exponent, Rational)> = Vec::new();
    for m in 0..out_order {
        let lmax = ((4 * n * m + n * n) as f64).sqrt() as i64 + 1;
        for l in -lmax..=lmax {
            let mut acc = Rational::zero();
            for &a in &divs {
                let a = a as i64;
                if m % a != 0 || l % a != 0 {
                    continue;
                }
                let c = coeff(a, n * m / (a * a), l / a)?;
                acc += c * rat(1, a);
            }
            terms.push(([m * UNIT, 2 * l, 0], acc));
        }
    }
    Ok(ExactSeries::from_terms(Signature::qy(), vec![Bound::new(Some(out_order * UNIT), 0)], terms)?)
}

/// The largest output order `T_N` supports from a form known below `q^order`.
fn out_order(n: i64, order: i64) -> i64 {
    (order - 1).div_euclid(n) + 1
}

/// `(T_N phi)(tau, z) = (1/N) sum_{ad=N, b mod d} phi((a tau + b)/d, a z)`.
pub fn hecke(z: &JacobiGenus, n: i64) -> Result<ExactSeries> {
    hecke_with(n, out_order(n, z.order()), |_, m, l| z.coeff(m, l))
}

/// The twisted Hecke operator, with `Z_{g^a}` in place of `Z_g`, known below `q^out`.
pub fn equivariant_hecke(label: &str, n: i64, out: i64) -> Result<ExactSeries> {
    let g = load_group_data()?;
    let order = n * (out - 1) + 1;
    let mut forms = BTreeMap::new();
    for a in divisors(n as u64) {
        let target = g.power_class(label, a as u32)?.label.clone();
        forms.insert(a as i64, twisted_genus(&target, order)?);
    }
    hecke_with(n, out, |a, m, l| forms[&a].coeff(m, l))
}

/// `exp(sum_N p^N T_N Z_g)`, in `(p, q, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricProductSeries {
    pub label: String,
    pub series: ExactSeries,
}

fn pqy_window(p_max: i64, q_max: i64) -> [Option<i64>; 2] {
    [Some((p_max + 1) * UNIT), Some((q_max + 1) * UNIT)]
}

/// The second-quantised twisted genus, known through `p^{p_max} q^{q_max}`.
pub fn symmetric_product(label: &str, p_max: i64, q_max: i64) -> Result<SymmetricProductSeries> {
    let sig = Signature::pqy();
    let mut terms = Vec::new();
    for n in 1..=p_max {
        let t = equivariant_hecke(label, n, q_max + 1)?;
        for (e, c) in t.terms() {
            terms.push(([n, e[0], e[1]], c.clone()));
        }
    }
    let hi = pqy_window(p_max, q_max);
    let bounds = vec![Bound::new(hi[0], UNIT), Bound::new(hi[1], 0)];
    let log = ExactSeries::from_terms(sig, bounds, terms)?;
    Ok(SymmetricProductSeries { label: label.to_string(), series: log.exp()? })
}

/// `prod_{n>0, m>=0, l} (1 - p^n q^m y^l)^{-c(4nm - l^2)}` for the untwisted genus.
pub fn product_form_1a(p_max: i64, q_max: i64) -> Result<ExactSeries> {
    let sig = Signature::pqy();
    let hi = pqy_window(p_max, q_max);
    let z = twisted_genus("1A", order_for_discriminant(4 * p_max * q_max))?;
    let mut acc = ExactSeries::one(sig.clone()).truncate(&hi);
    for n in 1..=p_max {
        for m in 0..=q_max {
            let lmax = ((4 * n * m + 1) as f64).sqrt() as i64 + 1;
            for l in -lmax..=lmax {
                let d = 4 * n * m - l * l;
                if d < -1 || d.rem_euclid(4) == 1 || d.rem_euclid(4) == 2 {
                    continue;
                }
                let c = disc_coeff(&z, d)?;
                if c.is_zero() {
                    continue;
                }
                let e = c.to_integer();
                let e = i64::try_from(&e).map_err(|_| GenusError::Depth(format!("exponent {e} too large")))?;
                let f = binomial_factor_pow(&sig, &hi, &[n, m * UNIT, 2 * l], -e)?;
                acc = acc.mul(&f)?;
            }
        }
    }
    Ok(acc)
}

/// `prod_{n>=1} (1 - p^n)^{-24}` in the signature of a `y = 1` specialization.
pub fn euler_characteristic_product(sig: &Signature, p_max: i64, q_max: i64) -> Result<ExactSeries> {
    let hi = pqy_window(p_max, q_max);
    let mut acc = ExactSeries::one(sig.clone()).truncate(&hi);
    for n in 1..=p_max {
        acc = acc.mul(&binomial_factor_pow(sig, &hi, &[n, 0, 0], -24)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::zg_via_generators;
    use super::*;
    use crate::num::int;
    use num_complex::Complex64;
    use num_traits::ToPrimitive;
    use std::f64::consts::PI;

    /// Sums `phi((a tau + b)/d, a z)` over all triples with complex roots of unity.
    fn brute_force(z: &JacobiGenus, n: i64, out: i64) -> BTreeMap<(i64, i64, i64), Complex64> {
        let mut acc: BTreeMap<(i64, i64, i64), Complex64> = BTreeMap::new();
        for a in 1..=n {
            if n % a != 0 {
                continue;
            }
            let d = n / a;
            for b in 0..d {
                for (e, c) in z.series.terms() {
                    let (m, l) = (e[0] / UNIT, e[1] / 2);
                    // q-exponent a m / d, kept as a reduced fraction key
                    let (num, den) = (a * m, d);
                    if num >= out * den {
                        continue;
                    }
                    let phase = Complex64::from_polar(1.0, 2.0 * PI * (m * b) as f64 / d as f64);
                    let g = crate::num::gcd(num, den).max(1);
                    *acc.entry((num / g, den / g, a * l)).or_default() += phase * c.to_f64().unwrap() / n as f64;
                }
            }
        }
        acc
    }

    #[test]
    fn hecke_matches_substitution_oracle() {
        let z = zg_via_generators("1A", 9).unwrap();
        for n in 1..=4 {
            let t = hecke(&z, n).unwrap();
            let out = t.bounds()[0].hi.unwrap() / UNIT;
            for ((num, den, l), v) in brute_force(&z, n, out) {
                if den != 1 {
                    assert!(v.norm() < 1e-6, "fractional exponent survives for N={n}: {v}");
                    continue;
                }
                let exact = t.coeff_int(&[num, l]).unwrap().to_f64().unwrap();
                assert!((v.re - exact).abs() < 1e-6 && v.im.abs() < 1e-6, "N={n} q^{num} y^{l}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn hecke_identity_and_untwisted_equivariant() {
        let z = zg_via_generators("1A", 7).unwrap();
        assert_eq!(hecke(&z, 1).unwrap(), z.series);
        for n in 1..=3 {
            let a = hecke(&z, n).unwrap();
            let b = equivariant_hecke("1A", n, a.bounds()[0].hi.unwrap() / UNIT).unwrap();
            assert_eq!(a, b);
        }
        let z2 = zg_via_generators("2A", 4).unwrap();
        assert_eq!(equivariant_hecke("2A", 1, 4).unwrap(), z2.series);
    }

    #[test]
    fn equivariant_uses_power_classes() {
        // at q^0 y^0 only a = 1, 2 contribute: c_{2A}(0) + c_{1A}(0)/2
        let t = equivariant_hecke("2A", 2, 2).unwrap();
        assert_eq!(t.coeff_int(&[0, 0]).unwrap(), int(4) + rat(20, 2));
    }

    #[test]
    fn symmetric_product_low_blocks() {
        let s = symmetric_product("1A", 2, 2).unwrap().series;
        assert_eq!(s.coeff_int(&[0, 0, 0]).unwrap(), int(1));
        let z = zg_via_generators("1A", 3).unwrap();
        for (e, c) in z.series.terms() {
            assert_eq!(s.coeff(&[1, e[0], e[1]]).unwrap(), *c);
        }
        let flat = s.specialize_to_one('y').unwrap();
        assert_eq!(flat.coeff_int(&[2, 0]).unwrap(), int(324));
    }

    #[test]
    fn exponential_and_product_forms_agree() {
        let exp_form = symmetric_product("1A", 3, 3).unwrap().series;
        let prod_form = product_form_1a(3, 3).unwrap();
        assert_eq!(exp_form, prod_form);
        let flat = exp_form.specialize_to_one('y').unwrap();
        let euler = euler_characteristic_product(flat.signature(), 3, 3).unwrap();
        assert_eq!(flat, euler);
    }
}
