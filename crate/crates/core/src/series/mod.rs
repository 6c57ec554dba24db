//! Exact truncated Laurent/Puiseux series in up to three formal variables.
//!
//! A series carries a [`Signature`] (its variables with their exponent
//! lattices, plus a list of *order functionals*) and one [`Bound`] per
//! functional. Coefficients are exact for every exponent `e` with
//! `F_i(e) < hi_i` for all truncated functionals `F_i`; every term of the
//! underlying (infinite) series, known or not, satisfies `F_i(e) >= lo_i`.
//!
//! Functional values are measured in units of 1/24, the common refinement of
//! all lattices in use.

mod ops;
mod phase;

pub use ops::binomial_factor_pow;
pub use phase::PhasedSeries;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::num::{format_rational, int, Rational};

/// Functional values are integers in this unit (1/24).
pub const UNIT: i64 = 24;
pub const MAX_VARS: usize = 3;

/// Exponent numerators; variable `v` has exponent `e[v] / den_v`.
pub type Exponent = [i64; MAX_VARS];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("exponent {0} is not on the lattice of variable {1}")]
    OffLattice(String, char),
    #[error("coefficient at {0} lies outside the guaranteed window")]
    OutOfWindow(String),
    #[error("term at {0} lies below the declared lower bound")]
    BelowLowerBound(String),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("exponential needs a series with only small terms: {0}")]
    NotSmall(String),
    #[error("binomial base monomial is constant")]
    ConstantBase,
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("phase i^{0} cannot be folded into rational coefficients")]
    OddPhase(u8),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: char,
    /// Lattice denominator: exponents are multiples of `1/den`.
    pub den: i64,
}

/// Variables plus order functionals (integer weight vectors).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    vars: Vec<Variable>,
    orders: Vec<Exponent>,
}

impl Signature {
    pub fn new(vars: Vec<Variable>, orders: Vec<Exponent>) -> Result<Self> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(SeriesError::Unsupported(format!("{} variables", vars.len())));
        }
        for v in &vars {
            if v.den <= 0 || UNIT % v.den != 0 {
                return Err(SeriesError::Unsupported(format!("lattice 1/{} for {}", v.den, v.name)));
            }
        }
        for w in &orders {
            if w[vars.len()..].iter().any(|&x| x != 0) || w.iter().all(|&x| x == 0) {
                return Err(SeriesError::Unsupported(format!("order weights {w:?}")));
            }
        }
        Ok(Self { vars, orders })
    }

    /// One variable `q` on the 1/24 lattice, ordered by its exponent.
    pub fn q() -> Self {
        Self::new(vec![Variable { name: 'q', den: 24 }], vec![[1, 0, 0]]).unwrap()
    }

    /// `(q, y)`, truncated in `q` only: each `q`-order is a full Laurent polynomial in `y`.
    pub fn qy() -> Self {
        Self::new(
            vec![Variable { name: 'q', den: 24 }, Variable { name: 'y', den: 2 }],
            vec![[1, 0, 0]],
        )
        .unwrap()
    }

    /// `(q, y)` expanded in the region `|q| < |y| < 1`: ordered by the exponents of
    /// `q/y` and `y`, i.e. by `a` and `a + b` for a monomial `q^a y^b`.
    pub fn qy_region() -> Self {
        Self::new(
            vec![Variable { name: 'q', den: 24 }, Variable { name: 'y', den: 2 }],
            vec![[1, 0, 0], [1, 1, 0]],
        )
        .unwrap()
    }

    /// `(p, q, y)` truncated in `p` and `q`, Laurent in `y`.
    pub fn pqy() -> Self {
        Self::new(
            vec![
                Variable { name: 'p', den: 1 },
                Variable { name: 'q', den: 24 },
                Variable { name: 'y', den: 2 },
            ],
            vec![[1, 0, 0], [0, 1, 0]],
        )
        .unwrap()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn orders(&self) -> &[Exponent] {
        &self.orders
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: char) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Value of functional `i` at `e`, in units of 1/24.
    pub fn value(&self, i: usize, e: &Exponent) -> i64 {
        let w = &self.orders[i];
        self.vars
            .iter()
            .enumerate()
            .map(|(v, var)| w[v] * e[v] * (UNIT / var.den))
            .sum()
    }

    pub fn values(&self, e: &Exponent) -> Vec<i64> {
        (0..self.orders.len()).map(|i| self.value(i, e)).collect()
    }

    /// Converts rational exponents into lattice numerators.
    pub fn exponent(&self, exps: &[Rational]) -> Result<Exponent> {
        if exps.len() != self.vars.len() {
            return Err(SeriesError::SignatureMismatch(format!(
                "{} exponents for {} variables",
                exps.len(),
                self.vars.len()
            )));
        }
        let mut e = [0i64; MAX_VARS];
        for (v, (x, var)) in exps.iter().zip(&self.vars).enumerate() {
            let scaled = x * int(var.den);
            if !scaled.is_integer() {
                return Err(SeriesError::OffLattice(format_rational(x), var.name));
            }
            e[v] = crate::num::to_i64(&scaled)
                .ok_or_else(|| SeriesError::OffLattice(format_rational(x), var.name))?;
        }
        Ok(e)
    }

    /// Integer exponents, one per variable.
    pub fn int_exponent(&self, exps: &[i64]) -> Result<Exponent> {
        let r: Vec<Rational> = exps.iter().map(|&x| int(x)).collect();
        self.exponent(&r)
    }

    pub fn render_exponent(&self, e: &Exponent) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .map(|(v, var)| {
                format!("{}^{}", var.name, format_rational(&Rational::new(e[v].into(), var.den.into())))
            })
            .collect();
        parts.join(" ")
    }
}

/// Window of one order functional, in units of 1/24.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bound {
    /// Coefficients are known for `F < hi`; `None` means no truncation.
    pub hi: Option<i64>,
    /// Every term satisfies `F >= lo`.
    pub lo: i64,
}

impl Bound {
    pub fn new(hi: Option<i64>, lo: i64) -> Self {
        Self { hi, lo }
    }

    /// Known below integer order `hi`, supported from integer order `lo`.
    pub fn orders(hi: i64, lo: i64) -> Self {
        Self { hi: Some(hi * UNIT), lo: lo * UNIT }
    }

    pub fn exact(lo: i64) -> Self {
        Self { hi: None, lo }
    }
}

fn min_hi(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_hi(a: Option<i64>, d: i64) -> Option<i64> {
    a.map(|x| x + d)
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExactSeries {
    sig: Signature,
    bounds: Vec<Bound>,
    terms: BTreeMap<Exponent, Rational>,
}

impl fmt::Debug for ExactSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactSeries[{:?}; ", self.bounds)?;
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) {}", format_rational(c), self.sig.render_exponent(e))?;
        }
        write!(f, "]")
    }
}

impl ExactSeries {
    /// Builds a series from terms. Terms beyond the window are dropped, terms below a
    /// lower bound are rejected.
    pub fn from_terms<I>(sig: Signature, bounds: Vec<Bound>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        if bounds.len() != sig.orders.len() {
            return Err(SeriesError::SignatureMismatch(format!(
                "{} bounds for {} orders",
                bounds.len(),
                sig.orders.len()
            )));
        }
        let mut s = Self { sig, bounds, terms: BTreeMap::new() };
        for (e, c) in terms {
            if c.is_zero() || !s.inside(&e) {
                continue;
            }
            if s.below(&e) {
                return Err(SeriesError::BelowLowerBound(s.sig.render_exponent(&e)));
            }
            *s.terms.entry(e).or_insert_with(Rational::zero) += c;
        }
        s.terms.retain(|_, c| !c.is_zero());
        Ok(s)
    }

    /// An exact (untruncated) finite series.
    pub fn polynomial<I>(sig: Signature, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut map: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let bounds = (0..sig.orders.len())
            .map(|i| Bound::exact(map.keys().map(|e| sig.value(i, e)).min().unwrap_or(0)))
            .collect();
        Self { sig, bounds, terms: map }
    }

    pub fn constant(sig: Signature, c: Rational) -> Self {
        Self::polynomial(sig, [([0; MAX_VARS], c)])
    }

    pub fn one(sig: Signature) -> Self {
        Self::constant(sig, Rational::one())
    }

    pub fn zero(sig: Signature) -> Self {
        Self::polynomial(sig, [])
    }

    pub fn monomial(sig: Signature, e: Exponent, c: Rational) -> Self {
        Self::polynomial(sig, [(e, c)])
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact series: no truncation on any functional.
    pub fn is_exact(&self) -> bool {
        self.bounds.iter().all(|b| b.hi.is_none())
    }

    /// Inside the window where coefficients are guaranteed.
    pub fn inside(&self, e: &Exponent) -> bool {
        self.bounds
            .iter()
            .enumerate()
            .all(|(i, b)| b.hi.map_or(true, |h| self.sig.value(i, e) < h))
    }

    /// Strictly below some lower bound, hence certainly zero.
    pub fn below(&self, e: &Exponent) -> bool {
        self.bounds.iter().enumerate().any(|(i, b)| self.sig.value(i, e) < b.lo)
    }

    /// Coefficient at lattice exponent `e`. Out-of-window queries are an error.
    pub fn coeff(&self, e: &Exponent) -> Result<Rational> {
        if self.below(e) {
            return Ok(Rational::zero());
        }
        if !self.inside(e) {
            return Err(SeriesError::OutOfWindow(self.sig.render_exponent(e)));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    /// Coefficient at rational exponents, one per variable.
    pub fn coeff_at(&self, exps: &[Rational]) -> Result<Rational> {
        let e = self.sig.exponent(exps)?;
        self.coeff(&e)
    }

    /// Coefficient at integer exponents, one per variable.
    pub fn coeff_int(&self, exps: &[i64]) -> Result<Rational> {
        let e = self.sig.int_exponent(exps)?;
        self.coeff(&e)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(SeriesError::SignatureMismatch(format!("{:?} vs {:?}", self.sig, other.sig)));
        }
        Ok(())
    }

    /// Shrinks the window to `hi` (per functional; `None` keeps the current bound).
    pub fn truncate(&self, hi: &[Option<i64>]) -> Self {
        let bounds: Vec<Bound> = self
            .bounds
            .iter()
            .zip(hi.iter().chain(std::iter::repeat(&None)))
            .map(|(b, h)| Bound { hi: min_hi(b.hi, *h), lo: b.lo })
            .collect();
        let mut out = Self { sig: self.sig.clone(), bounds, terms: BTreeMap::new() };
        out.terms = self.terms.iter().filter(|(e, _)| out.inside(e)).map(|(e, c)| (*e, c.clone())).collect();
        out
    }

    /// Raises the lower bound of functional `i` to the smallest known value, which is
    /// sound only when `i` is the sole truncated functional.
    pub fn tighten(&mut self) {
        let truncated: Vec<usize> = (0..self.bounds.len()).filter(|&i| self.bounds[i].hi.is_some()).collect();
        for i in 0..self.bounds.len() {
            if truncated.iter().any(|&j| j != i) {
                continue;
            }
            let known = self.terms.keys().map(|e| self.sig.value(i, e)).min();
            let cap = self.bounds[i].hi;
            let lo = match (known, cap) {
                (Some(k), Some(h)) => k.min(h),
                (Some(k), None) => k,
                (None, Some(h)) => h,
                (None, None) => continue,
            };
            self.bounds[i].lo = self.bounds[i].lo.max(lo);
        }
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            let mut z = self.clone();
            z.terms.clear();
            return z;
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let bounds: Vec<Bound> = self
            .bounds
            .iter()
            .zip(&other.bounds)
            .map(|(a, b)| Bound { hi: min_hi(a.hi, b.hi), lo: a.lo.min(b.lo) })
            .collect();
        let mut out = Self { sig: self.sig.clone(), bounds, terms: BTreeMap::new() };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if out.inside(e) {
                *out.terms.entry(*e).or_insert_with(Rational::zero) += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplication by `c * x^e`; exact, shifts the window.
    pub fn mul_monomial(&self, e: &Exponent, c: &Rational) -> Self {
        let shift = self.sig.values(e);
        let bounds = self
            .bounds
            .iter()
            .zip(&shift)
            .map(|(b, d)| Bound { hi: add_hi(b.hi, *d), lo: b.lo + d })
            .collect();
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(k, v)| (add_exp(k, e), v * c)).collect()
        };
        Self { sig: self.sig.clone(), bounds, terms }
    }

    /// Cauchy product within the guaranteed window
    /// `hi = min(hi_a + lo_b, hi_b + lo_a)`, `lo = lo_a + lo_b`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let bounds: Vec<Bound> = self
            .bounds
            .iter()
            .zip(&other.bounds)
            .map(|(a, b)| Bound {
                hi: min_hi(add_hi(a.hi, b.lo), add_hi(b.hi, a.lo)),
                lo: a.lo + b.lo,
            })
            .collect();
        let mut out = Self { sig: self.sig.clone(), bounds, terms: BTreeMap::new() };
        let his: Vec<Option<i64>> = out.bounds.iter().map(|b| b.hi).collect();
        let lead = his.iter().position(|h| h.is_some());

        let mut rhs: Vec<(Vec<i64>, &Exponent, &Rational)> =
            other.terms.iter().map(|(e, c)| (self.sig.values(e), e, c)).collect();
        if let Some(k) = lead {
            rhs.sort_by_key(|(v, _, _)| v[k]);
        }
        for (ea, ca) in &self.terms {
            let va = self.sig.values(ea);
            'inner: for (vb, eb, cb) in &rhs {
                for (i, h) in his.iter().enumerate() {
                    if let Some(h) = h {
                        if va[i] + vb[i] >= *h {
                            if Some(i) == lead {
                                break 'inner;
                            }
                            continue 'inner;
                        }
                    }
                }
                let e = add_exp(ea, eb);
                let prod = ca * *cb;
                match out.terms.get_mut(&e) {
                    Some(acc) => *acc += prod,
                    None => {
                        out.terms.insert(e, prod);
                    }
                }
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn square(&self) -> Result<Self> {
        self.mul(self)
    }

    /// Integer power; negative powers go through [`ExactSeries::inv`].
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut result = Self::one(self.sig.clone());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.square()?;
            }
        }
        Ok(result)
    }

    /// Applies `f` to every exponent, keeping coefficients.
    pub(crate) fn map_exponents(&self, sig: Signature, bounds: Vec<Bound>, f: impl Fn(&Exponent) -> Exponent) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            *terms.entry(f(e)).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        Self { sig, bounds, terms }
    }

    /// Keeps only terms satisfying `keep`; the window is unchanged.
    pub fn filter_terms(&self, keep: impl Fn(&Exponent) -> bool) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| keep(e));
        out
    }

    /// Sum of `S(e) = sum of truncated functional values` for ordering recurrences.
    pub(crate) fn weight(&self, e: &Exponent) -> i64 {
        self.bounds
            .iter()
            .enumerate()
            .filter(|(_, b)| b.hi.is_some())
            .map(|(i, _)| self.sig.value(i, e))
            .sum()
    }

    /// Compares coefficientwise on the window where both sides are known.
    /// Returns the first differing exponent.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Exponent>> {
        self.check_compatible(other)?;
        for e in self.terms.keys().chain(other.terms.keys()) {
            if self.inside(e) && other.inside(e) && self.coeff(e)? != other.coeff(e)? {
                return Ok(Some(*e));
            }
        }
        Ok(None)
    }

    /// Equality on the common guaranteed window.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }
}

pub(crate) fn add_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale_exp(a: &Exponent, k: i64) -> Exponent {
    [a[0] * k, a[1] * k, a[2] * k]
}

/// `q^{n/24}` as a one-variable exponent.
pub fn q24(n: i64) -> Exponent {
    [n, 0, 0]
}

/// A one-variable `q`-series known below integer order `hi`, from `(numerator over 24, coeff)` pairs.
pub fn q_series<I>(hi: i64, lo24: i64, terms: I) -> Result<ExactSeries>
where
    I: IntoIterator<Item = (i64, Rational)>,
{
    ExactSeries::from_terms(
        Signature::q(),
        vec![Bound::new(Some(hi * UNIT), lo24)],
        terms.into_iter().map(|(n, c)| (q24(n), c)),
    )
}
