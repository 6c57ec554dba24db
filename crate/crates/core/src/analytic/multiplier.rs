use std::f64::consts::PI;

use num_complex::Complex64;

use crate::group::{load_group_data, ClassRecord};

use super::{e_real, AnalyticError, GroupElement, Result};

/// The phase `num/den` of a root of unity, reduced with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    pub num: i64,
    pub den: i64,
}

impl Phase {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero phase denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = gcd_i128(num, den).max(1);
        Self { num: (num / g) as i64, den: (den / g) as i64 }
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (self.num as i128, self.den as i128);
        let (c, d) = (o.num as i128, o.den as i128);
        Self::new(a * d + c * b, b * d)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.num as i128 * k as i128, self.den as i128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A unimodular multiplier: an exact root of unity when possible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierValue {
    Root(Phase),
    Numeric(Complex64),
}

impl MultiplierValue {
    pub fn one() -> Self {
        Self::Root(Phase::zero())
    }

    pub fn root(num: i128, den: i128) -> Self {
        Self::Root(Phase::new(num, den))
    }

    pub fn value(&self) -> Complex64 {
        match self {
            Self::Root(p) => e_real(p.to_f64()),
            Self::Numeric(z) => *z,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Self::Root(a), Self::Root(b)) => Self::Root(a.add(b)),
            _ => Self::Numeric(self.value() * o.value()),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        match self {
            Self::Root(p) => Self::Root(p.scale(k)),
            Self::Numeric(z) => Self::Numeric(z.powi(k as i32)),
        }
    }

    pub fn phase(&self) -> Option<Phase> {
        match self {
            Self::Root(p) => Some(*p),
            Self::Numeric(_) => None,
        }
    }
}

/// `s(d, c) = sum_{m=1}^{c-1} ((m/c)) ((m d/c))` for `c > 0`, as `(num, 4 c^2)`.
fn dedekind_sum_parts(d: i64, c: i64) -> (i128, i128) {
    debug_assert!(c > 0);
    // ((x/c)) = (2r - c) / 2c for residue r != 0, and 0 otherwise
    let (c1, dm) = (c as i128, d.rem_euclid(c) as i128);
    let mut acc: i128 = 0;
    for m in 1..c1 {
        let r = (m * dm) % c1;
        if r != 0 {
            acc += (2 * m - c1) * (2 * r - c1);
        }
    }
    (acc, 4 * c1 * c1)
}

/// The Dedekind sum `s(d, c)` for `c > 0`, as a reduced fraction.
pub fn dedekind_sum(d: i64, c: i64) -> (i64, i64) {
    assert!(c > 0, "Dedekind sum needs c > 0");
    let (n, den) = dedekind_sum_parts(d, c);
    let g = gcd_i128(n, den).max(1);
    ((n / g) as i64, (den / g) as i64)
}

/// The multiplier system `epsilon` of `eta`: `epsilon(g) eta(g tau) jac(g, tau)^{1/4} = eta(tau)`.
pub fn dedekind_epsilon(g: &GroupElement) -> MultiplierValue {
    if g.c < 0 || (g.c == 0 && g.d < 0) {
        // the principal branch of (c tau + d)^{-1/2} gives epsilon(g) = epsilon(-g) e(-1/4)
        return dedekind_epsilon(&g.neg()).mul(&MultiplierValue::root(-1, 4));
    }
    if g.c == 0 {
        return MultiplierValue::root(-(g.b as i128), 24);
    }
    let c = g.c as i128;
    let (sn, sd) = dedekind_sum_parts(g.d, g.c);
    // -(a + d)/(24 c) + s/2 + 1/8 over the common denominator 24 c^2 (sd = 4 c^2)
    let den = 24 * c * c;
    let num = -(g.a as i128 + g.d as i128) * c + sn * 3 + 3 * c * c;
    debug_assert_eq!(sd, 4 * c * c);
    MultiplierValue::root(num, den)
}

/// The Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a.abs() == 1);
    }
    let mut res = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            res = -res;
        }
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            res = -res;
        }
        n >>= tz;
    }
    // Jacobi symbol (a / n) for odd n > 0
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// The character `varsigma_g` of `eta_g`: trivial for even weight, the Kronecker symbol
/// `(-N_g / d)` for odd weight. For odd `d > 0` this is `(N_g/d)(-1)^{(d-1)/2}`.
pub fn varsigma(class: &ClassRecord, g: &GroupElement) -> i32 {
    if class.weight % 2 == 0 {
        return 1;
    }
    kronecker(-(class.level as i64), g.d)
}

/// `rho_{n|h}(g) = e(-c d / (n h))`.
pub fn rho(n: i64, h: i64, g: &GroupElement) -> MultiplierValue {
    MultiplierValue::root(-(g.c as i128) * g.d as i128, n as i128 * h as i128)
}

fn class_in_group(label: &str, g: &GroupElement) -> Result<&'static ClassRecord> {
    let class = load_group_data()?.class(label)?;
    let n = class.order as i64;
    if !g.in_gamma0(n) {
        return Err(AnalyticError::NotInGroup(*g, n));
    }
    Ok(class)
}

/// `xi_g = rho_{n_g|h_g} varsigma_g` on `Gamma_0(n_g)`.
pub fn multiplier_xi(label: &str, g: &GroupElement) -> Result<MultiplierValue> {
    let class = class_in_group(label, g)?;
    let r = rho(class.order as i64, class.h as i64, g);
    let s = if varsigma(class, g) < 0 { MultiplierValue::root(1, 2) } else { MultiplierValue::one() };
    Ok(r.mul(&s))
}

/// `psi = epsilon^{-3} rho_{n_g|h_g}`, the multiplier of the completed `H_g`.
pub fn psi(label: &str, g: &GroupElement) -> Result<MultiplierValue> {
    let class = class_in_group(label, g)?;
    Ok(dedekind_epsilon(g).pow(-3).mul(&rho(class.order as i64, class.h as i64, g)))
}

/// `jac(g, tau)^{w/2} = (c tau + d)^{-w}` on the principal branch, with `arg = -pi`
/// for `c = 0, d < 0`.
pub fn jac_power(g: &GroupElement, tau: Complex64, w: f64) -> Complex64 {
    let j = g.cocycle(tau);
    let arg = if g.c == 0 && g.d < 0 { -PI } else { j.arg() };
    Complex64::from_polar(j.norm().powf(-w), -w * arg)
}

/// `jac(g, tau)^{1/4} = (c tau + d)^{-1/2}`.
pub fn jac_quarter(g: &GroupElement, tau: Complex64) -> Complex64 {
    jac_power(g, tau, 0.5)
}
