//! Small helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Renders as `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // very large numerator or denominator: scale both down first
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    }
}

pub fn is_even_integer(r: &Rational) -> bool {
    r.is_integer() && r.numer().is_even()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Sum of divisors.
pub fn sigma1(n: u64) -> u64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += d;
            if d * d != n {
                s += n / d;
            }
        }
        d += 1;
    }
    s
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Generalised binomial coefficient C(e, k) for integer e and k >= 0.
pub fn binomial(e: i64, k: u64) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k as i64 {
        acc *= int(e - j);
        acc /= int(j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3", "7/2", "-22/5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn sigma_and_binomials() {
        assert_eq!(sigma1(1), 1);
        assert_eq!(sigma1(12), 28);
        assert_eq!(binomial(-24, 2), int(300));
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 3), int(0));
    }

    #[test]
    fn float_conversion_handles_huge_values() {
        let r = Rational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399));
        assert!((to_f64(&r) - 10.0).abs() < 1e-9);
    }
}
