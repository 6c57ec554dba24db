//! The Appell-Lerch sum and N=4 characters, expanded in `|q| < |y| < 1`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::forms::{eta, theta1_magnitude};
use crate::num::{int, Rational};
use crate::series::{q24, Bound, ExactSeries, Exponent, Signature, UNIT};

use super::{MockError, Result};

/// Integer orders of a region series: `q^a y^b` is known when `a < q` and `a + b < region`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionWindow {
    pub q: i64,
    pub region: i64,
}

impl RegionWindow {
    pub fn new(q: i64, region: i64) -> Self {
        Self { q, region }
    }

    pub fn hi(&self) -> [Option<i64>; 2] {
        [Some(self.q * UNIT), Some(self.region * UNIT)]
    }

    pub fn widened(&self) -> Self {
        Self { q: self.q + 1, region: self.region + 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterKind {
    /// Massless, isospin 0.
    MasslessZero,
    /// Massless, isospin 1/2.
    MasslessHalf,
    /// Massive, `h = n + 1/4`, `n >= 1`.
    Massive(i64),
}

fn qy(q_num: i64, y_half: i64) -> Exponent {
    [q_num, y_half, 0]
}

/// Truncates to `win`, failing if some factor left the window short.
pub fn fit_window(s: ExactSeries, win: RegionWindow) -> Result<ExactSeries> {
    let s = s.truncate(&win.hi());
    for (b, want) in s.bounds().iter().zip(win.hi()) {
        if b.hi < want {
            return Err(MockError::Window(format!("region series known below {:?}, wanted {:?}", b.hi, want)));
        }
    }
    Ok(s)
}

/// `sum_l (-1)^l y^l q^{l(l+1)/2} / (1 - y q^l)`, each geometric factor expanded for
/// `|q| < |y| < 1`.
pub fn appell_sum(win: RegionWindow) -> Result<ExactSeries> {
    let sig = Signature::qy_region();
    let (hq, hr) = (win.q, win.region);
    let mut terms: Vec<(Exponent, Rational)> = Vec::new();
    // l >= 0: sum_k y^{l+k} q^{l(l+1)/2 + l k}
    let mut l = 0i64;
    while l * (l + 1) / 2 < hq {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let mut k = 0i64;
        loop {
            let a = l * (l + 1) / 2 + l * k;
            let b = l + k;
            if a >= hq || a + b >= hr {
                break;
            }
            terms.push((qy(a * UNIT, 2 * b), int(sign)));
            k += 1;
        }
        l += 1;
    }
    // l = -m: (-1)^{m+1} sum_{k>=1} y^{-m-k} q^{m(m-1)/2 + m k}
    let mut m = 1i64;
    while m * (m + 1) / 2 < hq {
        let sign = if m % 2 == 0 { -1 } else { 1 };
        let mut k = 1i64;
        loop {
            let a = m * (m - 1) / 2 + m * k;
            let b = -m - k;
            if a >= hq {
                break;
            }
            if a + b < hr {
                terms.push((qy(a * UNIT, 2 * b), int(sign)));
            }
            k += 1;
        }
        m += 1;
    }
    let bounds = vec![Bound::new(Some(hq * UNIT), 0), Bound::new(Some(hr * UNIT), -UNIT)];
    Ok(ExactSeries::from_terms(sig, bounds, terms)?)
}

/// `theta_1(tau, z)` up to its phase: `theta_1 = -i P`, `theta_1^2 = -P^2`.
fn theta1_p(win: RegionWindow) -> Result<ExactSeries> {
    Ok(theta1_magnitude(&Signature::qy_region(), win.q, Some(win.region))?)
}

fn eta_cubed_inverse(win: RegionWindow) -> Result<ExactSeries> {
    Ok(eta(win.q).pow(-3)?.embed(&Signature::qy_region())?)
}

/// The Appell-Lerch sum `mu(tau, z)` in the region signature.
pub fn appell_mu(win: RegionWindow) -> Result<ExactSeries> {
    let w = win.widened();
    let p = theta1_p(w)?;
    let s = appell_sum(w)?.mul(&p.inv()?)?;
    fit_window(s.mul_monomial(&qy(0, 1), &int(1)), win)
}

/// `theta_1(tau, z)^2 / eta(tau)^3` in the region signature.
pub fn theta1_squared_over_eta_cubed(win: RegionWindow) -> Result<ExactSeries> {
    // squaring P loses 9/24 of the region window, the eta factor another 3/24
    let w = win.widened().widened();
    let p = theta1_p(w)?;
    fit_window(p.square()?.neg().mul(&eta_cubed_inverse(w)?)?, win)
}

/// `theta_1^2 / eta^3` and `mu`, each on a widened window.
fn character_parts(win: RegionWindow) -> Result<(ExactSeries, ExactSeries)> {
    let w = win.widened();
    Ok((theta1_squared_over_eta_cubed(w)?, appell_mu(w)?))
}

/// An N=4 superconformal character at central charge 6.
pub fn n4_character(kind: CharacterKind, win: RegionWindow) -> Result<ExactSeries> {
    let (t, mu) = character_parts(win)?;
    let s = match kind {
        CharacterKind::MasslessZero => t.mul(&mu)?,
        CharacterKind::MasslessHalf => {
            let first = t.mul_monomial(&q24(-3), &int(1));
            first.sub(&t.mul(&mu)?.scale(&int(2)))?
        }
        CharacterKind::Massive(n) => {
            if n < 1 {
                return Err(MockError::Window(format!("massive level {n}")));
            }
            t.mul_monomial(&q24(n * UNIT - 3), &int(1))
        }
    };
    fit_window(s, win)
}

/// Sets `y = 1` in a region series.
///
/// At each `q`-level the coefficients form a Laurent polynomial in `y` only if the
/// window contains its whole support. A level counts as closed when the top `margin`
/// integer steps of the region window below its bound carry no terms. The result is
/// known below the first level that is not closed.
pub fn region_at_y_one(s: &ExactSeries, margin: i64) -> Result<ExactSeries> {
    let b = s.bounds();
    let (Some(hq), Some(hr)) = (b[0].hi, b[1].hi) else {
        return Err(MockError::Window("region series must be truncated in both orders".into()));
    };
    let mut sums: BTreeMap<i64, Rational> = BTreeMap::new();
    let mut open: Option<i64> = None;
    for (e, c) in s.terms() {
        let f1 = e[0] + 12 * e[1];
        if f1 >= hr - margin * UNIT {
            open = Some(open.map_or(e[0], |o: i64| o.min(e[0])));
        }
        *sums.entry(e[0]).or_insert_with(Rational::zero) += c.clone();
    }
    let hi = open.map_or(hq, |o| o.min(hq));
    let lo = b[0].lo;
    let terms = sums.into_iter().map(|(a, c)| (q24(a), c));
    Ok(ExactSeries::from_terms(Signature::q(), vec![Bound::new(Some(hi), lo)], terms)?)
}
