//! Mock modular forms `H_g`, the Appell-Lerch sum and the N=4 characters.

mod appell;

pub use appell::{
    appell_mu, appell_sum, fit_window, n4_character, region_at_y_one, theta1_squared_over_eta_cubed, CharacterKind,
    RegionWindow,
};

use num_traits::Zero;
use thiserror::Error;

use crate::forms::{e2, eta, f2, recipe::RecipeError, t_tilde};
use crate::group::{load_group_data, GroupData, GroupError};
use crate::num::{int, rat, Rational};
use crate::series::{q24, ExactSeries, SeriesError, UNIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MockError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("coefficient of q^({n}-1/8) in H_{label} is not an integer: {value}")]
    NonIntegral { label: String, n: i64, value: String },
    #[error("window too small: {0}")]
    Window(String),
}

pub type Result<T> = std::result::Result<T, MockError>;

/// A weight 1/2 mock modular form `q^{-1/8}(c_0 + c_1 q + ...)`.
#[derive(Debug, Clone)]
pub struct MockForm {
    pub label: String,
    /// Shadow multiplicity.
    pub chi: i64,
    /// Known for `q^{n-1/8}` with `n <= depth`.
    pub depth: i64,
    pub series: ExactSeries,
}

impl MockForm {
    /// Coefficient of `q^{n - 1/8}`.
    pub fn coefficient(&self, n: i64) -> Result<Rational> {
        Ok(self.series.coeff(&q24(n * UNIT - 3))?)
    }

    pub fn coefficients(&self) -> Result<Vec<Rational>> {
        (0..=self.depth).map(|n| self.coefficient(n)).collect()
    }
}

/// Window bound (exclusive, in 1/24 units) for a mock form of the given depth.
fn mock_hi(depth: i64) -> i64 {
    depth * UNIT - 3 + 1
}

/// `(-2 E2 + 48 F2) / eta^3`, through `q^{depth - 1/8}`.
pub fn mock_h(depth: i64) -> Result<MockForm> {
    let order = depth + 1;
    let num = e2(order).scale(&int(-2)).add(&f2(order).scale(&int(48)))?;
    let s = num.mul(&eta(order).pow(3)?.inv()?)?;
    let s = s.truncate(&[Some(mock_hi(depth))]);
    check_window(&s, depth)?;
    Ok(MockForm { label: "1A".into(), chi: 24, depth, series: s })
}

fn check_window(s: &ExactSeries, depth: i64) -> Result<()> {
    if s.bounds()[0].hi.is_some_and(|h| h < mock_hi(depth)) {
        return Err(MockError::Window(format!("series known below {:?}", s.bounds()[0].hi)));
    }
    Ok(())
}

/// `H_g = (chi/24) H - T~_g / eta^3`.
pub fn mock_hg(label: &str, depth: i64) -> Result<MockForm> {
    let g = load_group_data()?;
    let class = g.class(label)?;
    let order = depth + 1;
    let h = mock_h(depth)?;
    let tt = t_tilde(label, order)?;
    let corr = tt.mul(&eta(order).pow(3)?.inv()?)?;
    let s = h.series.scale(&rat(class.chi, 24)).sub(&corr)?.truncate(&[Some(mock_hi(depth))]);
    check_window(&s, depth)?;
    let form = MockForm { label: label.to_string(), chi: class.chi, depth, series: s };
    for n in 0..=depth {
        let c = form.coefficient(n)?;
        if !c.is_integer() {
            return Err(MockError::NonIntegral {
                label: label.to_string(),
                n,
                value: crate::num::format_rational(&c),
            });
        }
    }
    Ok(form)
}

/// Traces of `g` on `K_n` for all columns, from the `q^{n-1/8}` coefficients.
pub fn kn_traces(g: &GroupData, forms: &[MockForm], n: i64) -> Result<crate::group::TraceVector> {
    let mut err = None;
    let tv = g.trace_vector(|c| {
        let f = forms.iter().find(|f| f.label == c.label);
        match f.map(|f| f.coefficient(n)) {
            Some(Ok(v)) => v,
            Some(Err(e)) => {
                err = Some(e);
                Rational::zero()
            }
            None => {
                err = Some(MockError::Window(format!("no form for {}", c.label)));
                Rational::zero()
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(tv),
    }
}

/// All 21 `H_g` through the given depth.
pub fn all_mock_forms(depth: i64) -> Result<Vec<MockForm>> {
    use rayon::prelude::*;
    let g = load_group_data()?;
    g.classes.par_iter().map(|c| mock_hg(&c.label, depth)).collect()
}

/// Irreducible multiplicities of `K_n`.
pub fn kn_decomposition(n: i64) -> Result<Vec<(String, Rational)>> {
    let g = load_group_data()?;
    let forms = all_mock_forms(n)?;
    let tv = kn_traces(g, &forms, n)?;
    Ok(g.decompose(&tv)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_leading_coefficients() {
        let h = mock_h(5).unwrap();
        let expect = [-2, 90, 462, 1540, 4554, 11592];
        for (n, v) in expect.iter().enumerate() {
            assert_eq!(h.coefficient(n as i64).unwrap(), int(*v));
        }
        assert!(h.coefficient(6).is_err());
    }

    #[test]
    fn h2a_coefficients() {
        let h = mock_hg("2A", 5).unwrap();
        let expect = [-2, -6, 14, -28, 42, -56];
        for (n, v) in expect.iter().enumerate() {
            assert_eq!(h.coefficient(n as i64).unwrap(), int(*v));
        }
        assert_eq!(mock_hg("23AB", 1).unwrap().coefficient(1).unwrap(), int(-2));
    }

    #[test]
    fn identity_form_is_h() {
        let a = mock_hg("1A", 6).unwrap();
        let b = mock_h(6).unwrap();
        assert_eq!(a.series, b.series);
    }

    #[test]
    fn k1_is_45_plus_dual() {
        let m = kn_decomposition(1).unwrap();
        for (label, v) in m {
            let expect = if label == "45" || label == "45b" { 1 } else { 0 };
            assert_eq!(v, int(expect), "{label}");
        }
    }
}
