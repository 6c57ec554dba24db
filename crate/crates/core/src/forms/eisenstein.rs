use crate::num::{int, rat, sigma1};
use crate::series::{q_series, ExactSeries, UNIT};

/// `E2 = 1 - 24 sum sigma(n) q^n`.
pub fn e2(order: i64) -> ExactSeries {
    let terms = (0..order).map(|n| {
        let c = if n == 0 { int(1) } else { int(-24 * sigma1(n as u64) as i64) };
        (n * UNIT, c)
    });
    q_series(order, 0, terms).expect("valid window")
}

/// `sum_{r > s > 0, r - s odd} (-1)^r s q^{rs/2}`.
pub fn f2(order: i64) -> ExactSeries {
    let mut terms = Vec::new();
    // s >= 1 and r > s force rs/2 >= r/2, so r < 2 * order suffices
    for r in 2..2 * order {
        for s in 1..r {
            if (r - s) % 2 == 0 {
                continue;
            }
            assert!((r * s) % 2 == 0, "half-integral exponent in F2 at r={r}, s={s}");
            let e = r * s / 2;
            if e >= order {
                continue;
            }
            let sign = if r % 2 == 0 { 1 } else { -1 };
            terms.push((e * UNIT, int(sign * s)));
        }
    }
    q_series(order, UNIT, terms).expect("valid window")
}

/// `Lambda_N = N q d/dq log(eta(N tau)/eta(tau))`, in closed form.
pub fn lambda(n: i64, order: i64) -> ExactSeries {
    assert!(n >= 2, "Lambda_N needs N >= 2");
    let mut terms = vec![(0, rat(n * (n - 1), 24))];
    for k in 1..order {
        let s = sigma1(k as u64) as i64;
        terms.push((k * UNIT, int(n * s)));
        if n * k < order {
            terms.push((n * k * UNIT, int(-n * n * s)));
        }
    }
    q_series(order, 0, terms).expect("valid window")
}

/// `q d/dq` on a one-variable series.
pub fn q_derivative(s: &ExactSeries) -> ExactSeries {
    let out = ExactSeries::from_terms(
        s.signature().clone(),
        s.bounds().to_vec(),
        s.terms().map(|(e, c)| (*e, c * rat(e[0], UNIT))),
    );
    out.expect("same window")
}
