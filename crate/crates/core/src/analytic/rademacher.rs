use num_complex::Complex64;
use rayon::prelude::*;

use crate::group::load_group_data;
use crate::num::gcd;

use super::multiplier::{dedekind_epsilon, rho};
use super::{e, e_real, GroupElement, Result};

/// `e(x, s) = sum_{m>=0} (2 pi i x)^{m+s} / Gamma(m+s+1)`, summed until the terms stop
/// changing the partial sum.
pub fn gen_exp(x: Complex64, s: f64) -> Complex64 {
    let w = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * x;
    // (2 pi i x)^s / Gamma(s + 1), then the ratio w / (m + s + 1) per step
    let mut term = if s == 0.0 { Complex64::new(1.0, 0.0) } else { w.powf(s) / libm::tgamma(s + 1.0) };
    let mut acc = term;
    for m in 0..10_000 {
        term = term * w / (m as f64 + s + 1.0);
        let next = acc + term;
        if next == acc && m as f64 > w.norm() {
            break;
        }
        acc = next;
    }
    acc
}

/// Coset representatives of `Gamma_inf \ Gamma_0(n)` with `0 <= c < k`, `|d| < k^2`,
/// normalised to `c > 0`, or `(c, d) = (0, 1)`.
pub fn enumerate_cosets(n: i64, k: i64) -> Vec<GroupElement> {
    let mut out = vec![GroupElement::identity()];
    let dmax = k * k - 1;
    let mut c = n;
    while c < k {
        for d in -dmax..=dmax {
            if gcd(c, d) == 1 {
                out.push(GroupElement::from_lower_row(c, d).expect("coprime row"));
            }
        }
        c += n;
    }
    out
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: Complex64,
    comp: Complex64,
}

impl Compensated {
    fn add(&mut self, x: Complex64) {
        let part = |s: &mut f64, c: &mut f64, x: f64| {
            let t = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - t) + x;
            } else {
                *c += (x - t) + *s;
            }
            *s = t;
        };
        part(&mut self.sum.re, &mut self.comp.re, x.re);
        part(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// `sum psi(g) e(-g tau / 8) reg(g, tau) jac(g, tau)^{1/4}` over [`enumerate_cosets`].
///
/// For `c > 0` the summand is `psi(g) e(-a/8c) e(x, 1/2) (c tau + d)^{-1/2}` with
/// `x = 1 / (8 c (c tau + d))`. Each `c` is summed over `d` in order, then the rows
/// in order of `c`, so the result does not depend on the thread count.
pub fn rademacher_sum(label: &str, tau: Complex64, k: i64) -> Result<Complex64> {
    rademacher_box_sum(label, tau, k, k * k)
}

/// The same sum over lower rows with `0 <= c < c_bound` and `|d| < d_bound`.
pub fn rademacher_box_sum(label: &str, tau: Complex64, c_bound: i64, d_bound: i64) -> Result<Complex64> {
    let class = load_group_data()?.class(label)?;
    let (n, h) = (class.order as i64, class.h as i64);
    let dmax = d_bound - 1;
    let rows: Vec<i64> = (1..).map(|j| j * n).take_while(|&c| c < c_bound).collect();
    let partial: Vec<Complex64> = rows
        .par_iter()
        .map(|&c| {
            let mut acc = Compensated::default();
            for d in -dmax..=dmax {
                if gcd(c, d) != 1 {
                    continue;
                }
                let g = GroupElement::from_lower_row(c, d).expect("coprime row");
                let psi = dedekind_epsilon(&g).pow(-3).mul(&rho(n, h, &g));
                let j = g.cocycle(tau);
                let x = (j * (8.0 * c as f64)).inv();
                let t = psi.value() * e_real(-(g.a as f64) / (8.0 * c as f64)) * gen_exp(x, 0.5) / j.sqrt();
                acc.add(t);
            }
            acc.total()
        })
        .collect();
    let mut acc = Compensated::default();
    acc.add(e(-tau / 8.0));
    for p in partial {
        acc.add(p);
    }
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ClassEvaluator;

    #[test]
    fn gen_exp_reduces_to_exp() {
        for re in [-2.0, -0.7, 0.0, 0.3, 1.5, 2.0] {
            for im in [-0.5, 0.0, 0.4] {
                let x = Complex64::new(re, im);
                let want = e(x);
                let got = gen_exp(x, 0.0);
                // rounding is relative to the largest partial sums, of size e^{2 pi |x|}
                let scale = (2.0 * std::f64::consts::PI * x.norm()).exp();
                assert!((got - want).norm() < 4.0 * f64::EPSILON * scale, "{x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn gen_exp_half_at_small_argument() {
        // e(x, 1/2) ~ (2 pi i x)^{1/2} / Gamma(3/2) as x -> 0
        let x = Complex64::new(1e-6, -1e-6);
        let lead = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * x).sqrt() / libm::tgamma(1.5);
        assert!((gen_exp(x, 0.5) / lead - 1.0).norm() < 1e-4);
    }

    #[test]
    fn coset_enumeration() {
        let small = enumerate_cosets(1, 2);
        let rows: Vec<(i64, i64)> = small.iter().map(|g| (g.c, g.d)).collect();
        assert_eq!(rows, vec![(0, 1), (1, -3), (1, -2), (1, -1), (1, 0), (1, 1), (1, 2), (1, 3)]);
        let all = enumerate_cosets(1, 10);
        assert!(all.iter().all(|g| g.a * g.d - g.b * g.c == 1));
        // direct gcd scan
        let mut count = 1;
        for c in 1..10i64 {
            for d in -99..=99i64 {
                if crate::num::gcd(c, d) == 1 {
                    count += 1;
                }
            }
        }
        assert_eq!(all.len(), count);
        assert!(enumerate_cosets(4, 20).iter().all(|g| g.c % 4 == 0));
    }

    #[test]
    fn upper_triangular_term() {
        let tau = Complex64::new(0.1, 0.8);
        assert!((rademacher_sum("1A", tau, 1).unwrap() - e(-tau / 8.0)).norm() < 1e-15);
    }

    #[test]
    fn rademacher_sum_approaches_h() {
        let tau = Complex64::new(0.1, 0.8);
        let h = ClassEvaluator::new("1A", 30).unwrap().h_g(tau).unwrap();
        let errs: Vec<f64> =
            [5, 10, 50].iter().map(|&k| (rademacher_sum("1A", tau, k).unwrap() * -2.0 - h).norm()).collect();
        // the partial sums oscillate as they converge; only the coarse decrease is asserted here
        assert!(errs[2] < errs[0] / 10.0 && errs[2] < errs[1] / 10.0, "{errs:?}");
        assert!(errs[2] < 0.1, "{errs:?}");
    }
}
