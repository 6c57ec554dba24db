use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{
    add_exp, scale_exp, sub_exp, Bound, ExactSeries, Exponent, Result, SeriesError, Signature, Variable,
    MAX_VARS,
};
use crate::num::{binomial, int, Rational};

impl ExactSeries {
    /// A term is small when every functional is nonnegative on it and the truncated
    /// functionals are not all zero, so its powers run out of the window.
    fn is_small(&self, e: &Exponent) -> bool {
        (0..self.bounds.len()).all(|i| self.sig.value(i, e) >= 0) && self.weight(e) > 0
    }

    fn require_truncated(&self, what: &str) -> Result<()> {
        if self.bounds.iter().all(|b| b.hi.is_none()) {
            return Err(SeriesError::Unsupported(format!("{what} of an untruncated series")));
        }
        Ok(())
    }

    /// The unique term sitting at every lower bound, if any.
    pub fn leading_term(&self) -> Option<(Exponent, Rational)> {
        let mut found = None;
        for (e, c) in &self.terms {
            if (0..self.bounds.len()).all(|i| self.sig.value(i, e) == self.bounds[i].lo) {
                if found.is_some() {
                    return None;
                }
                found = Some((*e, c.clone()));
            }
        }
        found
    }

    /// Multiplicative inverse within the window. The series must be a unit monomial
    /// `c x^m` times `1 + (small terms)`.
    pub fn inv(&self) -> Result<Self> {
        self.require_truncated("inverse")?;
        let mut a = self.clone();
        if self.bounds.iter().filter(|b| b.hi.is_some()).count() == 1 {
            a.tighten();
        }
        let (m, c) = a
            .leading_term()
            .ok_or_else(|| SeriesError::NotInvertible("no single leading monomial".into()))?;
        let neg_m = scale_exp(&m, -1);
        let u = a.mul_monomial(&neg_m, &(Rational::one() / &c));
        let mut u_terms: Vec<(Exponent, Rational)> = Vec::new();
        for (e, v) in &u.terms {
            if *e == [0; MAX_VARS] {
                continue;
            }
            if !u.is_small(e) {
                return Err(SeriesError::NotInvertible(format!(
                    "term {} does not decay against the leading monomial",
                    u.sig.render_exponent(e)
                )));
            }
            u_terms.push((*e, v.clone()));
        }
        let bounds: Vec<Bound> = u.bounds.iter().map(|b| Bound { hi: b.hi, lo: 0 }).collect();
        let recip = solve_unipotent(&u.sig, bounds, &u_terms, Recurrence::Inverse);
        Ok(recip.mul_monomial(&neg_m, &(Rational::one() / c)))
    }

    /// Exponential of a series whose terms are all small.
    pub fn exp(&self) -> Result<Self> {
        self.require_truncated("exponential")?;
        if self.bounds.iter().any(|b| b.lo < 0) {
            return Err(SeriesError::NotSmall("negative lower bound".into()));
        }
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if !self.is_small(e) {
                return Err(SeriesError::NotSmall(self.sig.render_exponent(e)));
            }
            terms.push((*e, c.clone()));
        }
        let bounds: Vec<Bound> = self.bounds.iter().map(|b| Bound { hi: b.hi, lo: 0 }).collect();
        Ok(solve_unipotent(&self.sig, bounds, &terms, Recurrence::Exp))
    }

    /// Logarithm of `1 + (small terms)`, via `D log a = D a / a` for the weighted
    /// Euler derivation `D`.
    pub fn log(&self) -> Result<Self> {
        self.require_truncated("logarithm")?;
        let zero = [0; MAX_VARS];
        if self.coeff(&zero)? != Rational::one() {
            return Err(SeriesError::Unsupported("logarithm needs constant term 1".into()));
        }
        for e in self.terms.keys() {
            if *e != zero && !self.is_small(e) {
                return Err(SeriesError::NotSmall(self.sig.render_exponent(e)));
            }
        }
        let mut deriv = self.clone();
        for (e, c) in deriv.terms.iter_mut() {
            *c *= int(self.weight(e));
        }
        deriv.terms.retain(|_, c| !c.is_zero());
        let q = deriv.mul(&self.inv()?)?;
        let mut out = q.clone();
        out.terms.clear();
        for (e, c) in &q.terms {
            let w = q.weight(e);
            if w != 0 {
                out.terms.insert(*e, c / int(w));
            }
        }
        for b in &mut out.bounds {
            b.lo = 0;
        }
        Ok(out)
    }

    /// Substitutes `x -> x^k` for one variable. Functionals mixing this variable with
    /// others are rejected.
    pub fn dilate(&self, var: char, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(SeriesError::Unsupported(format!("dilation factor {k}")));
        }
        let v = self
            .sig
            .var_index(var)
            .ok_or_else(|| SeriesError::SignatureMismatch(format!("no variable {var}")))?;
        let mut bounds = self.bounds.clone();
        for (i, w) in self.sig.orders.iter().enumerate() {
            if w[v] == 0 {
                continue;
            }
            if w.iter().enumerate().any(|(j, &x)| j != v && x != 0) {
                return Err(SeriesError::Unsupported(format!("dilating {var} in a mixed order")));
            }
            bounds[i] = Bound { hi: bounds[i].hi.map(|h| h * k), lo: bounds[i].lo * k };
        }
        Ok(self.map_exponents(self.sig.clone(), bounds, |e| {
            let mut f = *e;
            f[v] *= k;
            f
        }))
    }

    /// Sets a variable to 1. Only allowed when no truncated functional involves it, so
    /// every retained coefficient is a finite sum of known ones.
    pub fn specialize_to_one(&self, var: char) -> Result<Self> {
        let v = self
            .sig
            .var_index(var)
            .ok_or_else(|| SeriesError::SignatureMismatch(format!("no variable {var}")))?;
        if self.sig.nvars() == 1 {
            return Err(SeriesError::Unsupported("specializing the only variable".into()));
        }
        let mut orders = Vec::new();
        let mut bounds = Vec::new();
        for (i, w) in self.sig.orders.iter().enumerate() {
            if w[v] != 0 {
                if self.bounds[i].hi.is_some() {
                    return Err(SeriesError::Unsupported(format!(
                        "{var} enters a truncated order; the specialization is not determined"
                    )));
                }
                continue;
            }
            orders.push(drop_index(w, v));
            bounds.push(self.bounds[i]);
        }
        let vars: Vec<Variable> =
            self.sig.vars.iter().enumerate().filter(|(j, _)| *j != v).map(|(_, x)| *x).collect();
        let sig = Signature::new(vars, orders)?;
        Ok(self.map_exponents(sig, bounds, |e| drop_index(e, v)))
    }

    /// Re-expresses the series in a larger signature. Variables are matched by name.
    pub fn embed(&self, target: &Signature) -> Result<Self> {
        let mut map = [usize::MAX; MAX_VARS];
        for (j, var) in self.sig.vars.iter().enumerate() {
            let t = target
                .var_index(var.name)
                .ok_or_else(|| SeriesError::SignatureMismatch(format!("target lacks {}", var.name)))?;
            if target.vars[t].den != var.den {
                return Err(SeriesError::SignatureMismatch(format!("lattice of {}", var.name)));
            }
            map[j] = t;
        }
        let src_n = self.sig.nvars();
        let mut used = vec![false; self.sig.orders.len()];
        let mut bounds = Vec::new();
        for w in &target.orders {
            let mut restricted = [0i64; MAX_VARS];
            for j in 0..src_n {
                restricted[j] = w[map[j]];
            }
            if restricted.iter().all(|&x| x == 0) {
                bounds.push(Bound::exact(0));
                continue;
            }
            let pos = self.sig.orders.iter().position(|o| *o == restricted);
            match pos {
                Some(i) => {
                    let hi = if used[i] { None } else { self.bounds[i].hi };
                    used[i] = true;
                    bounds.push(Bound { hi, lo: self.bounds[i].lo });
                }
                None if self.is_exact() => {
                    let lo = self
                        .terms
                        .keys()
                        .map(|e| {
                            (0..src_n)
                                .map(|j| restricted[j] * e[j] * (super::UNIT / self.sig.vars[j].den))
                                .sum::<i64>()
                        })
                        .min()
                        .unwrap_or(0);
                    bounds.push(Bound::exact(lo));
                }
                None => {
                    return Err(SeriesError::Unsupported(format!(
                        "order {w:?} has no counterpart in the source"
                    )))
                }
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            if self.bounds[i].hi.is_some() {
                return Err(SeriesError::Unsupported("a truncated order is lost in the embedding".into()));
            }
        }
        Ok(self.map_exponents(target.clone(), bounds, |e| {
            let mut f = [0; MAX_VARS];
            for j in 0..src_n {
                f[map[j]] = e[j];
            }
            f
        }))
    }
}

fn drop_index(e: &Exponent, v: usize) -> Exponent {
    let mut f = [0; MAX_VARS];
    let mut k = 0;
    for (j, x) in e.iter().enumerate() {
        if j != v {
            f[k] = *x;
            k += 1;
        }
    }
    f
}

#[derive(Clone, Copy)]
enum Recurrence {
    /// `b = 1/(1+u)`: `b_e = -sum_d u_d b_{e-d}`.
    Inverse,
    /// `E = exp(A)`: `S(e) E_e = sum_d S(d) A_d E_{e-d}`.
    Exp,
}

/// Solves the unipotent recurrences for `1/(1+u)` and `exp(u)` on the window given by
/// `bounds`, visiting exponents in order of total truncated weight.
fn solve_unipotent(
    sig: &Signature,
    bounds: Vec<Bound>,
    u: &[(Exponent, Rational)],
    kind: Recurrence,
) -> ExactSeries {
    let mut out = ExactSeries { sig: sig.clone(), bounds, terms: BTreeMap::new() };
    let zero = [0; MAX_VARS];
    let weights: Vec<i64> = u.iter().map(|(d, _)| out.weight(d)).collect();
    let scaled: Vec<Rational> = match kind {
        Recurrence::Inverse => u.iter().map(|(_, c)| -c.clone()).collect(),
        Recurrence::Exp => u.iter().zip(&weights).map(|((_, c), w)| c * int(*w)).collect(),
    };

    let mut pending: BTreeSet<(i64, Exponent)> = BTreeSet::new();
    out.terms.insert(zero, Rational::one());
    let push = |out: &ExactSeries, pending: &mut BTreeSet<(i64, Exponent)>, e: &Exponent| {
        for (d, _) in u {
            let f = add_exp(e, d);
            if out.inside(&f) && !out.terms.contains_key(&f) {
                pending.insert((out.weight(&f), f));
            }
        }
    };
    push(&out, &mut pending, &zero);
    while let Some((w, e)) = pending.pop_first() {
        let mut acc = Rational::zero();
        for ((d, _), s) in u.iter().zip(&scaled) {
            if let Some(b) = out.terms.get(&sub_exp(&e, d)) {
                acc += s * b;
            }
        }
        if let Recurrence::Exp = kind {
            acc /= int(w);
        }
        if acc.is_zero() {
            continue;
        }
        out.terms.insert(e, acc);
        push(&out, &mut pending, &e);
    }
    out
}

/// `(1 + c x^m)^e` on the window `hi`, for a monomial `x^m` that is small there.
pub fn binomial_pow(sig: &Signature, hi: &[Option<i64>], m: &Exponent, c: &Rational, e: i64) -> Result<ExactSeries> {
    if *m == [0; MAX_VARS] {
        return Err(SeriesError::ConstantBase);
    }
    let bounds: Vec<Bound> = (0..sig.orders.len())
        .map(|i| Bound { hi: hi.get(i).copied().flatten(), lo: 0 })
        .collect();
    let mut out = ExactSeries { sig: sig.clone(), bounds, terms: BTreeMap::new() };
    out.require_truncated("binomial expansion")?;
    if !out.is_small(m) {
        return Err(SeriesError::NotSmall(sig.render_exponent(m)));
    }
    let mut k: u64 = 0;
    let mut pw = Rational::one();
    loop {
        let x = scale_exp(m, k as i64);
        if !out.inside(&x) || (e >= 0 && k as i64 > e) {
            break;
        }
        let coef = binomial(e, k) * &pw;
        if !coef.is_zero() {
            out.terms.insert(x, coef);
        }
        pw *= c;
        k += 1;
    }
    Ok(out)
}

/// `(1 - x^m)^e` on the window `hi`.
pub fn binomial_factor_pow(sig: &Signature, hi: &[Option<i64>], m: &Exponent, e: i64) -> Result<ExactSeries> {
    binomial_pow(sig, hi, m, &int(-1), e)
}

#[cfg(test)]
mod tests {
    use super::super::{q24, q_series, UNIT};
    use super::*;
    use crate::num::rat;
    use proptest::prelude::*;

    fn euler(hi: i64) -> ExactSeries {
        let sig = Signature::q();
        let mut acc = ExactSeries::one(sig.clone()).truncate(&[Some(hi * UNIT)]);
        for n in 1..hi {
            acc = acc.mul(&binomial_factor_pow(&sig, &[Some(hi * UNIT)], &q24(24 * n), 1).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn inverse_of_one_minus_q_is_geometric() {
        let a = q_series(8, 0, [(0, int(1)), (24, int(-1))]).unwrap();
        let b = a.inv().unwrap();
        for n in 0..8 {
            assert_eq!(b.coeff_int(&[n]).unwrap(), int(1));
        }
        assert!(b.coeff_int(&[8]).is_err());
    }

    #[test]
    fn inverse_of_monomial() {
        let a = q_series(4, 3, [(3, int(1))]).unwrap();
        let b = a.inv().unwrap();
        assert_eq!(b.coeff(&q24(-3)).unwrap(), int(1));
        assert_eq!(b.bounds()[0].lo, -3);
    }

    #[test]
    fn inverse_of_leading_y_polynomial_is_rejected() {
        let sig = Signature::qy();
        let a = ExactSeries::from_terms(
            sig.clone(),
            vec![Bound::new(Some(5 * UNIT), 0)],
            [([0, 0, 0], int(1)), ([0, 2, 0], int(-1))],
        )
        .unwrap();
        assert!(matches!(a.inv(), Err(SeriesError::NotInvertible(_))));
    }

    #[test]
    fn inverse_in_region_expands_in_positive_y() {
        let sig = Signature::qy_region();
        let one_minus_y = ExactSeries::polynomial(sig.clone(), [([0, 0, 0], int(1)), ([0, 2, 0], int(-1))])
            .truncate(&[Some(3 * UNIT), Some(3 * UNIT)]);
        let g = one_minus_y.inv().unwrap();
        assert_eq!(g.coeff_int(&[0, 2]).unwrap(), int(1));
        assert!(g.coeff_int(&[0, -1]).unwrap().is_zero());
        let back = g.mul(&one_minus_y).unwrap();
        assert!(back.agrees_with(&ExactSeries::one(sig)).unwrap());
    }

    #[test]
    fn euler_product_times_inverse_is_one() {
        let e = euler(12);
        let prod = e.mul(&e.inv().unwrap()).unwrap();
        assert!(prod.agrees_with(&ExactSeries::one(Signature::q())).unwrap());
        assert_eq!(prod.bounds()[0].hi, Some(12 * UNIT));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = q_series(5, 0, []).unwrap();
        let e = z.exp().unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff_int(&[0]).unwrap(), int(1));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let a = q_series(5, 0, [(0, int(1))]).unwrap();
        assert!(matches!(a.exp(), Err(SeriesError::NotSmall(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let a = q_series(10, 0, [(0, int(1)), (24, int(-1))]).unwrap();
        let l = a.log().unwrap();
        // log(1-q) = -sum q^n/n
        for n in 1..10 {
            assert_eq!(l.coeff_int(&[n]).unwrap(), rat(-1, n));
        }
        assert!(l.exp().unwrap().agrees_with(&a).unwrap());
    }

    #[test]
    fn exp_of_power_sums_inverts_euler_product() {
        // -sum_n log(1-q^n) = sum_{n,k} q^{nk}/k
        let hi = 15;
        let terms = (1..hi).flat_map(|n| (1..hi).filter(move |k| n * k < hi).map(move |k| (24 * n * k, rat(1, k))));
        let s = q_series(hi, 0, terms).unwrap();
        let lhs = s.exp().unwrap();
        let rhs = euler(hi).inv().unwrap();
        assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn binomial_powers() {
        let sig = Signature::q();
        let b = binomial_factor_pow(&sig, &[Some(5 * UNIT)], &q24(24), -24).unwrap();
        assert_eq!(b.coeff_int(&[2]).unwrap(), int(300));
        let pqy = Signature::pqy();
        let m = pqy.int_exponent(&[1, 1, 1]).unwrap();
        let f = binomial_factor_pow(&pqy, &[Some(3 * UNIT), Some(3 * UNIT)], &m, 1).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff(&m).unwrap(), int(-1));
        let p = pqy.int_exponent(&[1, 0, 0]).unwrap();
        let g = binomial_factor_pow(&pqy, &[Some(5 * UNIT), Some(UNIT)], &p, -2).unwrap();
        for k in 0..5 {
            assert_eq!(g.coeff_int(&[k, 0, 0]).unwrap(), int(k + 1));
        }
        assert!(matches!(binomial_factor_pow(&sig, &[Some(UNIT)], &[0; 3], 2), Err(SeriesError::ConstantBase)));
    }

    #[test]
    fn dilation_examples() {
        let q = q_series(3, 1, [(1, int(1))]).unwrap();
        let d = q.dilate('q', 24).unwrap();
        assert_eq!(d.coeff_int(&[1]).unwrap(), int(1));
        let sig = Signature::qy();
        let one_plus_y = ExactSeries::polynomial(sig, [([0, 0, 0], int(1)), ([0, 2, 0], int(1))]);
        let d = one_plus_y.dilate('y', 3).unwrap();
        assert_eq!(d.coeff_int(&[0, 3]).unwrap(), int(1));
        assert_eq!(d.len(), 2);
        assert!(ExactSeries::one(Signature::qy_region()).dilate('y', 2).is_err());
    }

    #[test]
    fn specialize_and_embed() {
        let sig = Signature::qy();
        let a = ExactSeries::from_terms(
            sig,
            vec![Bound::new(Some(2 * UNIT), 0)],
            [([0, 2, 0], int(1)), ([0, -2, 0], int(2)), ([24, 0, 0], int(5))],
        )
        .unwrap();
        let s = a.specialize_to_one('y').unwrap();
        assert_eq!(*s.signature(), Signature::q());
        assert_eq!(s.coeff_int(&[0]).unwrap(), int(3));
        assert!(ExactSeries::one(Signature::qy_region()).truncate(&[Some(1), Some(1)]).specialize_to_one('y').is_err());

        let q = q_series(4, 0, [(0, int(1)), (24, int(2))]).unwrap();
        let e = q.embed(&Signature::pqy()).unwrap();
        assert_eq!(e.coeff_int(&[0, 1, 0]).unwrap(), int(2));
        assert!(e.coeff_int(&[5, 1, 0]).unwrap().is_zero());
        let r = q.embed(&Signature::qy_region()).unwrap();
        assert_eq!(r.bounds()[1].hi, None);
    }

    fn arb_series() -> impl Strategy<Value = ExactSeries> {
        (proptest::collection::vec((0i64..6, -2i64..3, -5i64..6), 0..8), 3i64..7).prop_map(|(ts, hi)| {
            ExactSeries::from_terms(
                Signature::qy(),
                vec![Bound::new(Some(hi * UNIT), 0)],
                ts.into_iter().map(|(a, b, c)| ([a * UNIT, b * 2, 0], int(c))),
            )
            .unwrap()
        })
    }

    fn arb_unit() -> impl Strategy<Value = ExactSeries> {
        (proptest::collection::vec((1i64..6, -2i64..3, -5i64..6), 0..6), 1i64..4, 3i64..7).prop_map(
            |(ts, c0, hi)| {
                let mut terms: Vec<(Exponent, Rational)> = vec![([0, 0, 0], int(c0))];
                terms.extend(ts.into_iter().map(|(a, b, c)| ([a * UNIT, b * 2, 0], int(c))));
                ExactSeries::from_terms(Signature::qy(), vec![Bound::new(Some(hi * UNIT), 0)], terms).unwrap()
            },
        )
    }

    fn windows_are_respected(s: &ExactSeries) -> bool {
        s.terms().all(|(e, _)| s.inside(e) && !s.below(e))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn distributive_law(a in arb_series(), b in arb_series(), c in arb_series()) {
            let lhs = a.add(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs).unwrap());
            prop_assert!(windows_are_respected(&lhs) && windows_are_respected(&rhs));
        }

        #[test]
        fn multiplication_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r).unwrap());
        }

        #[test]
        fn inverse_is_two_sided(a in arb_unit()) {
            let b = a.inv().unwrap();
            let one = ExactSeries::one(Signature::qy());
            prop_assert!(a.mul(&b).unwrap().agrees_with(&one).unwrap());
            prop_assert!(b.mul(&a).unwrap().agrees_with(&one).unwrap());
            prop_assert!(windows_are_respected(&b));
        }

        #[test]
        fn dilations_compose(a in arb_series(), m in 1i64..4, n in 1i64..4) {
            let lhs = a.dilate('q', m).unwrap().dilate('q', n).unwrap();
            let rhs = a.dilate('q', m * n).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncated_product_matches_full_product(a in arb_series(), b in arb_series()) {
            // every coefficient the product claims agrees with the product of untruncated polynomials
            let full = |s: &ExactSeries| ExactSeries::polynomial(Signature::qy(), s.terms().map(|(e, c)| (*e, c.clone())));
            let exact = full(&a).mul(&full(&b)).unwrap();
            let p = a.mul(&b).unwrap();
            for (e, c) in exact.terms() {
                if p.inside(e) {
                    prop_assert_eq!(p.coeff(e).unwrap(), c.clone());
                }
            }
        }
    }
}
