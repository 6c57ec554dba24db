use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::Zero;

use crate::num::{format_rational, int, Rational};

/// `a + b·i·sqrt(n)` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticValue {
    pub a: Rational,
    pub b: Rational,
    /// `None` for a rational value.
    pub n: Option<u32>,
}

impl QuadraticValue {
    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), n: None }
    }

    pub fn new(a: Rational, b: Rational, n: u32) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Self { a, b, n: Some(n) }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), n: self.n }
    }

    /// `|x|^2 = a^2 + n b^2`.
    pub fn norm(&self) -> Rational {
        let n = self.n.map_or(0, i64::from);
        &self.a * &self.a + int(n) * &self.b * &self.b
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let n = self.n.map_or(0.0, f64::from);
        num_complex::Complex64::new(crate::num::to_f64(&self.a), crate::num::to_f64(&self.b) * n.sqrt())
    }

    fn field(&self, other: &Self) -> Option<u32> {
        match (self.n, other.n) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing different quadratic fields");
                Some(x)
            }
            (x, None) | (None, x) => x,
        }
    }
}

impl Add for &QuadraticValue {
    type Output = QuadraticValue;
    fn add(self, o: &QuadraticValue) -> QuadraticValue {
        let n = self.field(o);
        QuadraticValue::new(&self.a + &o.a, &self.b + &o.b, n.unwrap_or(1))
    }
}

impl Mul for &QuadraticValue {
    type Output = QuadraticValue;
    fn mul(self, o: &QuadraticValue) -> QuadraticValue {
        let n = self.field(o);
        let nn = int(n.map_or(0, i64::from));
        // (a + b w)(c + d w) with w^2 = -n
        let a = &self.a * &o.a - nn * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadraticValue::new(a, b, n.unwrap_or(1))
    }
}

impl Neg for &QuadraticValue {
    type Output = QuadraticValue;
    fn neg(self) -> QuadraticValue {
        QuadraticValue { a: -self.a.clone(), b: -self.b.clone(), n: self.n }
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            None => write!(f, "{}", format_rational(&self.a)),
            Some(n) => write!(f, "{} + ({})i√{}", format_rational(&self.a), format_rational(&self.b), n),
        }
    }
}

/// A sum of values from possibly different quadratic fields.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuadraticSum {
    pub rational: Rational,
    pub irrational: BTreeMap<u32, Rational>,
}

impl QuadraticSum {
    pub fn push(&mut self, v: &QuadraticValue) {
        self.rational += &v.a;
        if let Some(n) = v.n {
            *self.irrational.entry(n).or_insert_with(Rational::zero) += &v.b;
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.irrational.values().all(|b| b.is_zero()) {
            Some(self.rational.clone())
        } else {
            None
        }
    }
}
