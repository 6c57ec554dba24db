use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::num::int;
use crate::series::{ExactSeries, Result, Signature, UNIT};

use super::eta::eta;
use super::theta::{theta, theta1_squared, theta_null};

/// The weight 0 and weight -2 index-1 weak Jacobi generators, known below `q^order`.
#[derive(Debug, Clone)]
pub struct JacobiBasis {
    pub order: i64,
    pub phi_0_1: ExactSeries,
    pub phi_m2_1: ExactSeries,
}

/// `(theta_i(tau, z) / theta_i(tau, 0))^2` in the `(q, y)` signature.
pub fn theta_ratio_squared(i: u8, order: i64) -> Result<ExactSeries> {
    let sig = Signature::qy();
    let num = theta(i, &sig, order, None)?.into_series()?;
    let den = theta_null(i, order)?.embed(&sig)?;
    let r = num.mul(&den.inv()?)?;
    r.square()
}

impl JacobiBasis {
    pub fn compute(order: i64) -> Result<Self> {
        let sig = Signature::qy();
        let hi = [Some(order * UNIT)];
        let mut phi0 = ExactSeries::zero(sig.clone()).truncate(&hi);
        for i in 2..=4u8 {
            // theta_2 carries q^{1/8}, so the ratio is computed one order deeper
            phi0 = phi0.add(&theta_ratio_squared(i, order + 1)?.truncate(&hi))?;
        }
        let phi0 = phi0.scale(&int(4));
        let e6 = eta(order + 1).pow(6)?.embed(&sig)?;
        let phim2 = theta1_squared(&sig, order + 1, None)?.mul(&e6.inv()?)?.neg().truncate(&[Some(order * UNIT)]);
        Ok(Self { order, phi_0_1: phi0, phi_m2_1: phim2 })
    }
}

static BASIS: OnceLock<Mutex<BTreeMap<i64, Arc<JacobiBasis>>>> = OnceLock::new();

/// Cached generators; the largest computed basis is reused by truncation.
pub fn jacobi_generators(order: i64) -> Result<Arc<JacobiBasis>> {
    let cache = BASIS.get_or_init(|| Mutex::new(BTreeMap::new()));
    {
        let guard = cache.lock().expect("basis cache poisoned");
        if let Some((_, b)) = guard.range(order..).next() {
            if b.order == order {
                return Ok(b.clone());
            }
            let hi = [Some(order * UNIT)];
            return Ok(Arc::new(JacobiBasis {
                order,
                phi_0_1: b.phi_0_1.truncate(&hi),
                phi_m2_1: b.phi_m2_1.truncate(&hi),
            }));
        }
    }
    let b = Arc::new(JacobiBasis::compute(order)?);
    cache.lock().expect("basis cache poisoned").insert(order, b.clone());
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn generator_values_at_zero() {
        let b = jacobi_generators(8).unwrap();
        let p0 = b.phi_0_1.specialize_to_one('y').unwrap();
        assert!(p0.agrees_with(&ExactSeries::constant(Signature::q(), int(12))).unwrap());
        assert!(b.phi_m2_1.specialize_to_one('y').unwrap().is_empty());
        for (l, v) in [(-1, 1), (0, 10), (1, 1)] {
            assert_eq!(b.phi_0_1.coeff_int(&[0, l]).unwrap(), int(v));
        }
        // phi_{-2,1} = y - 2 + y^{-1} + O(q)
        for (l, v) in [(-1, 1), (0, -2), (1, 1)] {
            assert_eq!(b.phi_m2_1.coeff_int(&[0, l]).unwrap(), int(v));
        }
        assert!(b.phi_0_1.coeff_int(&[0, 2]).unwrap().is_zero());
    }

    #[test]
    fn basis_reaches_its_order() {
        let b = JacobiBasis::compute(5).unwrap();
        assert_eq!(b.phi_0_1.bounds()[0].hi, Some(5 * UNIT));
        assert_eq!(b.phi_m2_1.bounds()[0].hi, Some(5 * UNIT));
    }

    #[test]
    fn cache_truncates_larger_bases() {
        let big = jacobi_generators(6).unwrap();
        let small = jacobi_generators(4).unwrap();
        assert_eq!(small.phi_0_1, big.phi_0_1.truncate(&[Some(4 * UNIT)]));
        assert_eq!(small.phi_0_1.bounds()[0].hi, Some(4 * UNIT));
    }
}
