//! Twisted elliptic genera `Z_g`, their discriminant coefficients, Hecke operators and
//! the second-quantised genus.

mod hecke;

pub use hecke::{
    equivariant_hecke, euler_characteristic_product, hecke, hecke_with, product_form_1a, symmetric_product,
    SymmetricProductSeries,
};

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use thiserror::Error;

use crate::forms::{jacobi_generators, recipe::RecipeError, t_tilde};
use crate::group::{load_group_data, GroupError};
use crate::mock::{self, mock_hg, theta1_squared_over_eta_cubed, MockError, RegionWindow};
use crate::num::{format_rational, int, rat, Rational};
use crate::series::{Bound, ExactSeries, Exponent, SeriesError, Signature, UNIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Mock(#[from] MockError),
    #[error("discriminant {0} is not 0 or 3 mod 4")]
    Discriminant(i64),
    #[error("no representative of discriminant {d} inside q^{order} for {label}")]
    NoRepresentative { label: String, d: i64, order: i64 },
    #[error("{label}: coefficients of discriminant {d} disagree: {found}")]
    NotWellDefined { label: String, d: i64, found: String },
    #[error("{label}: non-integral coefficient {value} at {at}")]
    NonIntegral { label: String, value: String, at: String },
    #[error("insufficient depth: {0}")]
    Depth(String),
}

pub type Result<T> = std::result::Result<T, GenusError>;

/// A weak Jacobi form of weight 0 and index 1 in `(q, y)`, exact in `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiGenus {
    pub label: String,
    pub chi: i64,
    pub series: ExactSeries,
}

impl JacobiGenus {
    /// Known for `q^n` with `n < order`.
    pub fn order(&self) -> i64 {
        self.series.bounds()[0].hi.map_or(i64::MAX, |h| h.div_euclid(UNIT))
    }

    pub fn coeff(&self, n: i64, l: i64) -> Result<Rational> {
        Ok(self.series.coeff_int(&[n, l])?)
    }

    /// `Z(tau, 0)`.
    pub fn at_z_zero(&self) -> Result<ExactSeries> {
        Ok(self.series.specialize_to_one('y')?)
    }
}

fn check_integral(label: &str, s: &ExactSeries) -> Result<()> {
    for (e, c) in s.terms() {
        if !c.is_integer() {
            return Err(GenusError::NonIntegral {
                label: label.to_string(),
                value: format_rational(c),
                at: s.signature().render_exponent(e),
            });
        }
    }
    Ok(())
}

/// `Z_g = (chi/12) phi_{0,1} + T~_g phi_{-2,1}`, known below `q^order`.
pub fn zg_via_generators(label: &str, order: i64) -> Result<JacobiGenus> {
    let g = load_group_data()?;
    let class = g.class(label)?;
    let basis = jacobi_generators(order)?;
    let tt = t_tilde(label, order)?.embed(&Signature::qy())?;
    let s = basis.phi_0_1.scale(&rat(class.chi, 12)).add(&tt.mul(&basis.phi_m2_1)?)?;
    check_integral(label, &s)?;
    Ok(JacobiGenus { label: label.to_string(), chi: class.chi, series: s })
}

static GENERA: OnceLock<Mutex<BTreeMap<String, Arc<JacobiGenus>>>> = OnceLock::new();

/// Cached [`zg_via_generators`]; a deeper cached genus is reused by truncation.
pub fn twisted_genus(label: &str, order: i64) -> Result<Arc<JacobiGenus>> {
    let cache = GENERA.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(z) = cache.lock().expect("genus cache poisoned").get(label) {
        if z.order() >= order {
            if z.order() == order {
                return Ok(z.clone());
            }
            let s = z.series.truncate(&[Some(order * UNIT)]);
            return Ok(Arc::new(JacobiGenus { series: s, ..(**z).clone() }));
        }
    }
    let z = Arc::new(zg_via_generators(label, order)?);
    cache.lock().expect("genus cache poisoned").insert(label.to_string(), z.clone());
    Ok(z)
}

/// The K3 elliptic genus `8 sum_{i=2,3,4} (theta_i(tau, z) / theta_i(tau, 0))^2`.
pub fn k3_genus_via_thetas(order: i64) -> Result<JacobiGenus> {
    let sig = Signature::qy();
    let hi = [Some(order * UNIT)];
    let mut acc = ExactSeries::zero(sig).truncate(&hi);
    for i in 2..=4u8 {
        acc = acc.add(&crate::forms::jacobi::theta_ratio_squared(i, order + 1)?.truncate(&hi))?;
    }
    Ok(JacobiGenus { label: "1A".into(), chi: 24, series: acc.scale(&int(8)) })
}

/// `(theta_1^2 / eta^3)(chi mu + H_g)` in the region `|q| < |y| < 1`.
pub fn zg_via_characters(label: &str, win: RegionWindow) -> Result<ExactSeries> {
    let g = load_group_data()?;
    let class = g.class(label)?;
    let w = win.widened();
    let t = theta1_squared_over_eta_cubed(w)?;
    let region = Signature::qy_region();
    let h = mock_hg(label, w.q + 1)?.series.embed(&region)?;
    let inner = mock::appell_mu(w)?.scale(&int(class.chi)).add(&h)?;
    Ok(mock::fit_window(t.mul(&inner)?, win)?)
}

/// A `(q, y)` genus as a region series: each `q`-level is a Laurent polynomial, and
/// index 1 gives `n + l >= -1`, so the second functional is untruncated.
pub fn genus_in_region(z: &JacobiGenus) -> Result<ExactSeries> {
    let hi = z.series.bounds()[0].hi;
    let bounds = vec![Bound::new(hi, 0), Bound::exact(-UNIT)];
    Ok(ExactSeries::from_terms(Signature::qy_region(), bounds, z.series.terms().map(|(e, c)| (*e, c.clone())))?)
}

/// Exponents where two series disagree, over the window both know.
pub fn disagreements(a: &ExactSeries, b: &ExactSeries) -> Result<Vec<Exponent>> {
    let mut keys: Vec<Exponent> = a.terms().map(|(e, _)| *e).chain(b.terms().map(|(e, _)| *e)).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = Vec::new();
    for e in keys {
        if a.inside(&e) && b.inside(&e) && a.coeff(&e)? != b.coeff(&e)? {
            out.push(e);
        }
    }
    Ok(out)
}

/// `Z / (theta_1^2 / eta^3) - chi mu`, which is `H_g` when the decomposition holds.
pub fn mu_remainder(z: &JacobiGenus, win: RegionWindow) -> Result<ExactSeries> {
    let w = win.widened();
    let t = theta1_squared_over_eta_cubed(w.widened())?;
    let zr = genus_in_region(z)?;
    let q = zr.mul(&t.inv()?)?;
    let s = q.sub(&mock::appell_mu(w)?.scale(&int(z.chi)))?;
    Ok(mock::fit_window(s, win)?)
}

/// The `(n, l)` pairs with `4n - l^2 = d`, `0 <= n < order`.
pub fn representatives(d: i64, order: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut l = 0i64;
    loop {
        let num = d + l * l;
        if num >= 4 * order {
            break;
        }
        if num >= 0 && num % 4 == 0 {
            out.push((num / 4, l));
            if l != 0 {
                out.push((num / 4, -l));
            }
        }
        l += 1;
    }
    out
}

/// `c_g(D)`, checked to agree over every in-window representative.
pub fn disc_coeff(z: &JacobiGenus, d: i64) -> Result<Rational> {
    if d.rem_euclid(4) != 0 && d.rem_euclid(4) != 3 {
        return Err(GenusError::Discriminant(d));
    }
    let reps = representatives(d, z.order());
    let mut value: Option<Rational> = None;
    for (n, l) in &reps {
        let c = z.coeff(*n, *l)?;
        match &value {
            None => value = Some(c),
            Some(v) if *v != c => {
                return Err(GenusError::NotWellDefined {
                    label: z.label.clone(),
                    d,
                    found: format!("{} at (n, l) = ({n}, {l}) vs {}", format_rational(&c), format_rational(v)),
                })
            }
            _ => {}
        }
    }
    value.ok_or_else(|| GenusError::NoRepresentative { label: z.label.clone(), d, order: z.order() })
}

/// Checks that every coefficient of `z` depends only on `4n - l^2` and vanishes below -1.
pub fn check_discriminant_property(z: &JacobiGenus) -> Result<usize> {
    let mut by_disc: BTreeMap<i64, Rational> = BTreeMap::new();
    let order = z.order();
    let mut checked = 0;
    for n in 0..order {
        let lmax = ((4 * n + 1) as f64).sqrt() as i64 + 2;
        for l in -lmax..=lmax {
            let d = 4 * n - l * l;
            let c = z.coeff(n, l)?;
            checked += 1;
            if d < -1 {
                if !c.is_zero() {
                    return Err(GenusError::NotWellDefined {
                        label: z.label.clone(),
                        d,
                        found: format!("nonzero {} below the index bound", format_rational(&c)),
                    });
                }
                continue;
            }
            let v = by_disc.entry(d).or_insert_with(|| c.clone());
            if *v != c {
                return Err(GenusError::NotWellDefined { label: z.label.clone(), d, found: format!("({n}, {l})") });
            }
        }
    }
    // nothing outside the scanned y-range
    for (e, _) in z.series.terms() {
        let (n, l) = (e[0] / UNIT, e[1] / 2);
        if 4 * n - l * l < -1 {
            return Err(GenusError::NotWellDefined { label: z.label.clone(), d: 4 * n - l * l, found: "stray term".into() });
        }
    }
    Ok(checked)
}

/// Order needed to read `c_g(D)` for all `D <= dmax`.
pub fn order_for_discriminant(dmax: i64) -> i64 {
    dmax.div_euclid(4) + 2
}

/// Virtual-module multiplicities from `c_g(k)` over all classes.
pub fn khat_decomposition(k: i64) -> Result<Vec<(String, Rational)>> {
    let g = load_group_data()?;
    let order = order_for_discriminant(k);
    let mut values = BTreeMap::new();
    for c in &g.classes {
        let z = twisted_genus(&c.label, order)?;
        values.insert(c.label.clone(), disc_coeff(&z, k)?);
    }
    let tv = g.trace_vector(|c| values[&c.label].clone());
    Ok(g.decompose(&tv)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_discriminant_coefficients() {
        let z = zg_via_generators("1A", 4).unwrap();
        for (d, v) in [(-1, 2), (0, 20), (3, -128), (4, 216), (7, -1026), (8, 1616)] {
            assert_eq!(disc_coeff(&z, d).unwrap(), int(v), "D={d}");
        }
        assert!(matches!(disc_coeff(&z, 5), Err(GenusError::Discriminant(5))));
        assert!(matches!(disc_coeff(&z, 40), Err(GenusError::NoRepresentative { .. })));
        let z2a = zg_via_generators("2A", 3).unwrap();
        let z2b = zg_via_generators("2B", 3).unwrap();
        assert_eq!(disc_coeff(&z2a, 0).unwrap(), int(4));
        assert_eq!(disc_coeff(&z2b, 0).unwrap(), int(-4));
    }

    #[test]
    fn theta_form_matches_generators() {
        let a = k3_genus_via_thetas(6).unwrap();
        let b = zg_via_generators("1A", 6).unwrap();
        assert_eq!(a.series, b.series);
        assert!(a.at_z_zero().unwrap().agrees_with(&ExactSeries::constant(Signature::q(), int(24))).unwrap());
    }

    #[test]
    fn polar_row() {
        let g = load_group_data().unwrap();
        for c in &g.classes {
            let z = zg_via_generators(&c.label, 2).unwrap();
            assert_eq!(disc_coeff(&z, -1).unwrap(), int(2), "{}", c.label);
            check_discriminant_property(&z).unwrap();
        }
    }

    #[test]
    fn character_route_for_2b() {
        let win = RegionWindow::new(3, 7);
        let zr = zg_via_characters("2B", win).unwrap();
        let zg = genus_in_region(&zg_via_generators("2B", 4).unwrap()).unwrap();
        assert!(disagreements(&zr, &zg).unwrap().is_empty());
    }

    #[test]
    fn identity_decomposes_into_mu_and_h() {
        let z = zg_via_generators("1A", 8).unwrap();
        let rem = mu_remainder(&z, RegionWindow::new(4, 6)).unwrap();
        assert!(rem.terms().all(|(e, _)| e[1] == 0), "{rem:?}");
        let h = crate::mock::mock_h(4).unwrap().series.embed(&Signature::qy_region()).unwrap();
        assert!(disagreements(&rem, &h).unwrap().is_empty());
        assert_eq!(rem.coeff(&[-3, 0, 0]).unwrap(), int(-2));
    }

    #[test]
    fn representatives_cover_both_signs() {
        assert_eq!(representatives(-1, 3), vec![(0, 1), (0, -1), (2, 3), (2, -3)]);
        assert_eq!(representatives(0, 2), vec![(0, 0), (1, 2), (1, -2)]);
    }
}
