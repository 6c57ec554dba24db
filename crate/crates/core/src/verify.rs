//! Named verification checks, grouped into suites, reporting one [`Record`] per
//! class or table row.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    balanced_point, check_jacobi_transform, completion_hat_h, dedekind_epsilon, inverse_eta_slash_residual,
    jac_quarter, psi, rademacher_sum, random_gamma0, ClassEvaluator, GroupElement,
};
use crate::genus::{
    check_discriminant_property, disagreements, euler_characteristic_product, genus_in_region, k3_genus_via_thetas,
    product_form_1a, symmetric_product, twisted_genus, zg_via_characters, zg_via_generators,
};
use crate::group::{load_group_data, ClassRecord, GroupData, QuadraticSum};
use crate::mock::RegionWindow;
use crate::num::{format_rational, int};
use crate::series::{ExactSeries, Signature};
use crate::siegel::{borcherds_product, double_zero_limit, eta_pair, exchange_asymmetries, first_non_integral};
use crate::tables::{coefficient_table, decomposition_table, module_violations, reference_tables, TableKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub class: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    fn new(check: &str, class: Option<&str>, ok: bool) -> Self {
        Record {
            check: check.to_string(),
            class: class.map(str::to_string),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            mismatch: None,
            detail: None,
        }
    }

    fn exact(check: &str, class: Option<&str>, mismatches: Vec<String>) -> Self {
        let mut r = Record::new(check, class, mismatches.is_empty());
        if !mismatches.is_empty() {
            r.mismatch = Some(mismatches.join("; "));
        }
        r
    }

    fn numeric(check: &str, class: Option<&str>, residual: f64, bound: f64) -> Self {
        // NaN fails
        let mut r = Record::new(check, class, residual < bound);
        r.residual = Some(residual);
        r.detail = Some(format!("bound {bound:e}"));
        r
    }

    fn error(check: &str, class: Option<&str>, err: impl fmt::Display) -> Self {
        let mut r = Record::new(check, class, false);
        r.mismatch = Some(err.to_string());
        r
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(match self.detail.take() {
            Some(old) => format!("{}; {old}", d.into()),
            None => d.into(),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Tables,
    Identities,
    Transforms,
    Rademacher,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Identities => "identities",
            Suite::Transforms => "transforms",
            Suite::Rademacher => "rademacher",
            Suite::All => "all",
        }
    }

    fn contains(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [Suite::Tables, Suite::Identities, Suite::Transforms, Suite::Rademacher, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Depths, sampling and tolerances for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Series labels to check; per-column table checks keep the columns of these labels.
    pub classes: Vec<String>,
    /// Replaces the residual bound of every numeric check.
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// `q`-depth for the whole-window genus checks.
    pub q_depth: i64,
    /// `(p, q)` depth of the Siegel factorization.
    pub siegel: (i64, i64),
    /// Extra region width for the character-route comparison.
    pub y_window: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let classes = load_group_data().map(|g| g.classes.iter().map(|c| c.label.clone()).collect()).unwrap_or_default();
        VerifyOptions { classes, tolerance: None, seed: 24, q_depth: 12, siegel: (6, 6), y_window: 4 }
    }
}

impl VerifyOptions {
    fn bound(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    fn selected<'a>(&self, g: &'a GroupData) -> Vec<&'a ClassRecord> {
        g.classes.iter().filter(|c| self.classes.contains(&c.label)).collect()
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

type CheckFn = fn(&VerifyOptions) -> Vec<Record>;

/// A named check, its suite, and the numbered criterion it serves.
pub struct Check {
    pub name: &'static str,
    pub suite: Suite,
    pub criterion: u8,
    run: CheckFn,
}

impl Check {
    pub fn run(&self, opts: &VerifyOptions) -> Vec<Record> {
        (self.run)(opts)
    }
}

pub const CHECKS: &[Check] = &[
    Check { name: "structure", suite: Suite::Tables, criterion: 11, run: structure },
    Check { name: "character_table", suite: Suite::Tables, criterion: 11, run: character_table },
    Check { name: "eta_inverse_table", suite: Suite::Tables, criterion: 1, run: eta_inverse_table },
    Check { name: "eta_fock_modules", suite: Suite::Tables, criterion: 2, run: eta_fock_modules },
    Check { name: "mock_table", suite: Suite::Tables, criterion: 3, run: mock_table },
    Check { name: "mock_modules", suite: Suite::Tables, criterion: 3, run: mock_modules },
    Check { name: "jacobi_table", suite: Suite::Tables, criterion: 4, run: jacobi_table },
    Check { name: "khat_modules", suite: Suite::Tables, criterion: 4, run: khat_modules },
    Check { name: "discriminant_property", suite: Suite::Identities, criterion: 4, run: discriminant_property },
    Check { name: "theta_identity", suite: Suite::Identities, criterion: 5, run: theta_identity },
    Check { name: "character_route", suite: Suite::Identities, criterion: 5, run: character_route },
    Check { name: "witten_index", suite: Suite::Identities, criterion: 6, run: witten_index },
    Check { name: "second_quantised", suite: Suite::Identities, criterion: 7, run: second_quantised },
    Check { name: "siegel_factorization", suite: Suite::Identities, criterion: 8, run: siegel_factorization },
    Check { name: "siegel_integrality", suite: Suite::Identities, criterion: 8, run: siegel_integrality },
    Check { name: "eta_multiplier", suite: Suite::Transforms, criterion: 9, run: eta_multiplier },
    Check { name: "inverse_eta_slash", suite: Suite::Transforms, criterion: 9, run: inverse_eta_slash },
    Check { name: "completion_transform", suite: Suite::Transforms, criterion: 9, run: completion_transform },
    Check { name: "jacobi_transform", suite: Suite::Transforms, criterion: 9, run: jacobi_transform },
    Check { name: "rademacher_trend", suite: Suite::Rademacher, criterion: 10, run: rademacher_trend },
];

pub fn check(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

pub fn checks_in(suite: Suite) -> impl Iterator<Item = &'static Check> {
    CHECKS.iter().filter(move |c| suite.contains(c.suite))
}

/// Runs every check of `suite` in order, handing each record to `sink` as it is produced.
pub fn run_suite(suite: Suite, opts: &VerifyOptions, mut sink: impl FnMut(&Record)) -> Vec<Record> {
    let mut all = Vec::new();
    for c in checks_in(suite) {
        for r in c.run(opts) {
            sink(&r);
            all.push(r);
        }
    }
    all
}

/// Runs `f` for each selected class in parallel, keeping class order.
fn per_class(opts: &VerifyOptions, f: impl Fn(&ClassRecord) -> Record + Sync) -> Vec<Record> {
    match load_group_data() {
        Ok(g) => opts.selected(g).par_iter().map(|c| f(c)).collect(),
        Err(e) => vec![Record::error("group_data", None, e)],
    }
}

fn structure(opts: &VerifyOptions) -> Vec<Record> {
    per_class(opts, |c| {
        let mut bad = Vec::new();
        let level = c.level;
        let mut mirrored: Vec<(u32, u32)> =
            c.shape.iter().filter(|(i, _)| level % i == 0).map(|(i, l)| (level / i, *l)).collect();
        mirrored.sort_unstable();
        if mirrored != c.shape {
            bad.push(format!("shape not balanced at N = {level}"));
        }
        let (n, h) = (c.order, c.h);
        if n * h != level {
            bad.push(format!("n h = {} but N = {level}", n * h));
        }
        if n % h != 0 || 12 % h != 0 {
            bad.push(format!("h = {h} does not divide both n = {n} and 12"));
        }
        Record::exact("structure", Some(&c.label), bad)
    })
}

fn character_table(_: &VerifyOptions) -> Vec<Record> {
    let g = match load_group_data() {
        Ok(g) => g,
        Err(e) => return vec![Record::error("character_table", None, e)],
    };
    let t = &g.table;
    let mut bad = Vec::new();
    for (i, ri) in t.irreducibles.iter().enumerate() {
        for (j, rj) in t.irreducibles.iter().enumerate().skip(i) {
            match g.inner_product(&ri.values, &rj.values) {
                Ok(v) if v == if i == j { int(1) } else { int(0) } => {}
                Ok(v) => bad.push(format!("<{}, {}> = {}", ri.label, rj.label, format_rational(&v))),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    for j in 0..t.columns.len() {
        for k in (j + 1)..t.columns.len() {
            let mut s = QuadraticSum::default();
            for r in &t.irreducibles {
                s.push(&(&r.values[j] * &r.values[k].conj()));
            }
            if s.as_rational().map_or(true, |v| !v.is_zero()) {
                bad.push(format!("columns {} and {} not orthogonal", t.columns[j], t.columns[k]));
            }
        }
    }
    let dims: num_bigint::BigInt = t.irreducibles.iter().map(|r| num_bigint::BigInt::from(r.dim).pow(2)).sum();
    let mut dim_bad = Vec::new();
    if dims != g.order || g.order != num_bigint::BigInt::from(244_823_040u64) {
        dim_bad.push(format!("sum of squared dimensions {dims}, group order {}", g.order));
    }
    vec![
        Record::exact("character_table", None, bad).with_detail("orthogonality"),
        Record::exact("character_table", None, dim_bad).with_detail("sum of squared dimensions"),
    ]
}

/// Per-column records comparing a computed coefficient block with the reference.
fn coefficient_records(check: &str, kind: TableKind, opts: &VerifyOptions) -> Vec<Record> {
    let run = || -> Result<Vec<Record>, String> {
        let g = load_group_data().map_err(|e| e.to_string())?;
        let reference = reference_tables().map_err(|e| e.to_string())?.block(kind);
        let indices: Vec<i64> = reference.coefficients.iter().map(|r| r.index).collect();
        let table = coefficient_table(kind, &indices).map_err(|e| e.to_string())?;
        let mismatches = table.mismatches(&reference.coefficients);
        let mut out = Vec::new();
        for col in &table.labels {
            let label = g.series_label(col).map_err(|e| e.to_string())?;
            if !opts.classes.iter().any(|c| c == label) {
                continue;
            }
            let bad = mismatches
                .iter()
                .filter(|m| m.1 == *col)
                .map(|(i, _, got, want)| format!("row {i}: computed {got}, printed {want}"))
                .collect();
            out.push(Record::exact(check, Some(col), bad).with_detail(kind.name()));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Record::error(check, None, e)])
}

/// Per-row records comparing computed decompositions with the reference and the module shape.
fn module_records(check: &str, kind: TableKind) -> Vec<Record> {
    let run = || -> Result<Vec<Record>, String> {
        let g = load_group_data().map_err(|e| e.to_string())?;
        let reference = reference_tables().map_err(|e| e.to_string())?.block(kind);
        let rows: Vec<i64> = reference.decomposition.iter().map(|r| r.index).collect();
        let table = decomposition_table(kind, &rows).map_err(|e| e.to_string())?;
        let mismatches = table.mismatches(&reference.decomposition);
        let mut out = Vec::new();
        for (i, mults) in &table.rows {
            let mut bad: Vec<String> = mismatches
                .iter()
                .filter(|m| m.0 == *i)
                .map(|(_, irr, got, want)| format!("{irr}: computed {got}, printed {want}"))
                .collect();
            bad.extend(module_violations(g, kind.module_shape(), mults));
            out.push(Record::exact(check, None, bad).with_detail(format!("{} row {i}", kind.name())));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Record::error(check, None, e)])
}

fn eta_inverse_table(opts: &VerifyOptions) -> Vec<Record> {
    coefficient_records("eta_inverse_table", TableKind::EtaInverse, opts)
}

fn eta_fock_modules(_: &VerifyOptions) -> Vec<Record> {
    module_records("eta_fock_modules", TableKind::EtaInverse)
}

fn mock_table(opts: &VerifyOptions) -> Vec<Record> {
    coefficient_records("mock_table", TableKind::Mock, opts)
}

fn mock_modules(_: &VerifyOptions) -> Vec<Record> {
    module_records("mock_modules", TableKind::Mock)
}

fn jacobi_table(opts: &VerifyOptions) -> Vec<Record> {
    let mut out = coefficient_records("jacobi_table", TableKind::JacobiOdd, opts);
    out.extend(coefficient_records("jacobi_table", TableKind::JacobiEven, opts));
    out
}

fn khat_modules(_: &VerifyOptions) -> Vec<Record> {
    let mut out = module_records("khat_modules", TableKind::JacobiOdd);
    out.extend(module_records("khat_modules", TableKind::JacobiEven));
    out
}

fn discriminant_property(opts: &VerifyOptions) -> Vec<Record> {
    per_class(opts, |c| match twisted_genus(&c.label, opts.q_depth).map(|z| check_discriminant_property(&z)) {
        Ok(Ok(n)) => Record::new("discriminant_property", Some(&c.label), true)
            .with_detail(format!("{n} coefficients below q^{}", opts.q_depth)),
        Ok(Err(e)) | Err(e) => Record::error("discriminant_property", Some(&c.label), e),
    })
}

fn theta_identity(_: &VerifyOptions) -> Vec<Record> {
    // through q^10
    let order = 11;
    let r = (|| -> Result<Record, crate::genus::GenusError> {
        let a = zg_via_generators("1A", order)?;
        let b = k3_genus_via_thetas(order)?;
        let bad = match a.series.first_difference(&b.series)? {
            Some(e) => vec![format!("first difference at {}", a.series.signature().render_exponent(&e))],
            None => Vec::new(),
        };
        Ok(Record::exact("theta_identity", Some("1A"), bad).with_detail(format!("below q^{order}, all y")))
    })();
    vec![r.unwrap_or_else(|e| Record::error("theta_identity", Some("1A"), e))]
}

fn character_route(opts: &VerifyOptions) -> Vec<Record> {
    // through q^5
    let win = RegionWindow::new(6, 6 + opts.y_window);
    per_class(opts, |c| {
        let r = (|| -> Result<Vec<String>, crate::genus::GenusError> {
            let zr = zg_via_characters(&c.label, win)?;
            let zg = genus_in_region(&zg_via_generators(&c.label, win.q + 1)?)?;
            let sig = zr.signature().clone();
            Ok(disagreements(&zr, &zg)?.iter().map(|e| format!("differs at {}", sig.render_exponent(e))).collect())
        })();
        match r {
            Ok(bad) => Record::exact("character_route", Some(&c.label), bad)
                .with_detail(format!("q window {}, region window {}", win.q, win.region)),
            Err(e) => Record::error("character_route", Some(&c.label), e),
        }
    })
}

fn witten_index(opts: &VerifyOptions) -> Vec<Record> {
    per_class(opts, |c| {
        let r = (|| -> Result<Vec<String>, crate::genus::GenusError> {
            let z = twisted_genus(&c.label, opts.q_depth)?;
            let flat = z.at_z_zero()?;
            let want = ExactSeries::constant(Signature::q(), int(c.chi));
            Ok(match flat.first_difference(&want)? {
                Some(e) => vec![format!("Z(tau, 0) differs from {} at {}", c.chi, flat.signature().render_exponent(&e))],
                None => Vec::new(),
            })
        })();
        match r {
            Ok(bad) => Record::exact("witten_index", Some(&c.label), bad).with_detail(format!("chi = {}", c.chi)),
            Err(e) => Record::error("witten_index", Some(&c.label), e),
        }
    })
}

fn second_quantised(_: &VerifyOptions) -> Vec<Record> {
    let (p, q) = (4, 4);
    let r = (|| -> Result<Vec<Record>, crate::genus::GenusError> {
        let exp_form = symmetric_product("1A", p, q)?.series;
        let prod = product_form_1a(p, q)?;
        let mut forms = Vec::new();
        if let Some(e) = exp_form.first_difference(&prod)? {
            forms.push(format!("first difference at {}", exp_form.signature().render_exponent(&e)));
        }
        let flat = exp_form.specialize_to_one('y')?;
        let euler = euler_characteristic_product(flat.signature(), p, q)?;
        let mut spec = Vec::new();
        if let Some(e) = flat.first_difference(&euler)? {
            spec.push(format!("y = 1 differs at {}", flat.signature().render_exponent(&e)));
        }
        let p2 = flat.coeff_int(&[2, 0])?;
        if p2 != int(324) {
            spec.push(format!("p^2 coefficient {}", format_rational(&p2)));
        }
        Ok(vec![
            Record::exact("second_quantised", Some("1A"), forms).with_detail("exponential vs product form"),
            Record::exact("second_quantised", Some("1A"), spec).with_detail("y = 1 vs prod (1 - p^n)^-24"),
        ])
    })();
    r.unwrap_or_else(|e| vec![Record::error("second_quantised", Some("1A"), e)])
}

fn siegel_factorization(opts: &VerifyOptions) -> Vec<Record> {
    let (p, q) = opts.siegel;
    per_class(opts, |c| {
        let r = (|| -> Result<Vec<String>, crate::siegel::SiegelError> {
            let s = borcherds_product(&c.label, p, q)?;
            // fails unless the zeroth and first y-moments vanish
            let lim = double_zero_limit(&s)?;
            let pair = eta_pair(&c.label, p, q)?;
            Ok(match lim.first_difference(&pair)? {
                Some(e) => vec![format!("differs from eta_g eta_g at {}", lim.signature().render_exponent(&e))],
                None => Vec::new(),
            })
        })();
        match r {
            Ok(bad) => Record::exact("siegel_factorization", Some(&c.label), bad).with_detail(format!("p^{p} q^{q}")),
            Err(e) => Record::error("siegel_factorization", Some(&c.label), e),
        }
    })
}

fn siegel_integrality(opts: &VerifyOptions) -> Vec<Record> {
    let (p, q) = opts.siegel;
    let r = borcherds_product("1A", p, q).map(|s| {
        let mut bad: Vec<String> = exchange_asymmetries(&s)
            .iter()
            .map(|e| format!("p <-> q asymmetric at {}", s.series.signature().render_exponent(e)))
            .collect();
        if let Some((e, v)) = first_non_integral(&s.series) {
            bad.push(format!("non-integral {} at {}", format_rational(&v), s.series.signature().render_exponent(&e)));
        }
        Record::exact("siegel_integrality", Some("1A"), bad).with_detail(format!("p^{p} q^{q}"))
    });
    vec![r.unwrap_or_else(|e| Record::error("siegel_integrality", Some("1A"), e))]
}

/// Twenty elements of `SL_2(Z)` with `|c|, |d| <= 3`, then `T^m`, `|m| <= 5`.
fn sl2_sample(rng: &mut ChaCha8Rng, count: usize) -> Vec<GroupElement> {
    let mut out = Vec::new();
    while out.len() < count {
        let c = rng.gen_range(-3..=3i64);
        let d = rng.gen_range(-3..=3i64);
        if let Some(g) = GroupElement::from_lower_row(c, d) {
            out.push(GroupElement::t(rng.gen_range(-5..=5)).mul(&g));
        }
    }
    out
}

fn eta_multiplier(opts: &VerifyOptions) -> Vec<Record> {
    let bound = opts.bound(1e-8);
    let tau = Complex64::new(0.1, 1.3);
    let r = (|| -> Result<f64, crate::analytic::AnalyticError> {
        let ev = ClassEvaluator::new("1A", 60)?;
        let mut worst: f64 = 0.0;
        for g in sl2_sample(&mut opts.rng(1), 20) {
            let lhs = dedekind_epsilon(&g).value() * ev.eta(g.act(tau))? * jac_quarter(&g, tau);
            worst = worst.max((lhs - ev.eta(tau)?).norm());
        }
        Ok(worst)
    })();
    vec![match r {
        Ok(w) => Record::numeric("eta_multiplier", None, w, bound).with_detail("20 elements at 0.1+1.3i, truncation 60"),
        Err(e) => Record::error("eta_multiplier", None, e),
    }]
}

/// Truncation for evaluating at balanced points of `Gamma_0(n)` elements with `|c| = n`,
/// where both imaginary parts are `1/n`: `q^order` is then below `e^{-170}`.
fn balanced_order(c: &ClassRecord) -> i64 {
    (27 * c.order as i64).max(150)
}

/// Salt for per-class sampling, so each class draws independently of the selection.
fn class_salt(c: &ClassRecord, check: u64) -> u64 {
    c.label.bytes().fold(check, |h, b| h.wrapping_mul(131).wrapping_add(b as u64))
}

fn inverse_eta_slash(opts: &VerifyOptions) -> Vec<Record> {
    let bound = opts.bound(1e-6);
    per_class(opts, |c| {
        let mut rng = opts.rng(class_salt(c, 2));
        let r = (|| -> Result<f64, crate::analytic::AnalyticError> {
            let ev = ClassEvaluator::new(&c.label, balanced_order(c))?;
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let g = random_gamma0(&mut rng, c.order as i64, 1, 12);
                let tau = balanced_point(&g, 1.0, rng.gen_range(-0.1..0.1));
                worst = worst.max(inverse_eta_slash_residual(&ev, &g, tau)?);
            }
            Ok(worst)
        })();
        match r {
            Ok(w) => Record::numeric("inverse_eta_slash", Some(&c.label), w, bound).with_detail("10 elements of Gamma_0(n)"),
            Err(e) => Record::error("inverse_eta_slash", Some(&c.label), e),
        }
    })
}

fn completion_transform(opts: &VerifyOptions) -> Vec<Record> {
    let bound = opts.bound(1e-4);
    let quad_tol = 1e-6;
    per_class(opts, |c| {
        let mut rng = opts.rng(class_salt(c, 3));
        let r = (|| -> Result<f64, crate::analytic::AnalyticError> {
            let ev = ClassEvaluator::new(&c.label, balanced_order(c))?;
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let g = random_gamma0(&mut rng, c.order as i64, 1, 12);
                let tau = balanced_point(&g, 1.0, rng.gen_range(-0.1..0.1));
                let lhs = psi(&c.label, &g)?.value() * jac_quarter(&g, tau) * completion_hat_h(&ev, g.act(tau), quad_tol)?;
                worst = worst.max((lhs - completion_hat_h(&ev, tau, quad_tol)?).norm());
            }
            Ok(worst)
        })();
        match r {
            Ok(w) => Record::numeric("completion_transform", Some(&c.label), w, bound)
                .with_detail("5 elements of Gamma_0(n), quadrature 1e-6"),
            Err(e) => Record::error("completion_transform", Some(&c.label), e),
        }
    })
}

fn jacobi_transform(opts: &VerifyOptions) -> Vec<Record> {
    let bound = opts.bound(1e-4);
    per_class(opts, |c| {
        let mut rng = opts.rng(class_salt(c, 4));
        let r = (|| -> Result<f64, crate::analytic::AnalyticError> {
            let ev = ClassEvaluator::new(&c.label, balanced_order(c))?;
            let mut worst: f64 = 0.0;
            for _ in 0..3 {
                let g = random_gamma0(&mut rng, c.order as i64, 1, 8);
                let tau = balanced_point(&g, 1.0, rng.gen_range(-0.1..0.1));
                let z = Complex64::new(rng.gen_range(-0.4..0.4), rng.gen_range(0.0..0.02));
                worst = worst.max(check_jacobi_transform(&c.label, &g, tau, z, |t, w| ev.z_g(t, w))?);
            }
            Ok(worst)
        })();
        match r {
            Ok(w) => Record::numeric("jacobi_transform", Some(&c.label), w, bound).with_detail("3 sampled (gamma, tau, z)"),
            Err(e) => Record::error("jacobi_transform", Some(&c.label), e),
        }
    })
}

/// Cutoffs of the Rademacher trend check.
pub const RADEMACHER_CUTOFFS: [i64; 3] = [25, 50, 100];

fn rademacher_trend(opts: &VerifyOptions) -> Vec<Record> {
    let bound = opts.bound(0.1);
    let tau = Complex64::new(0.1, 0.8);
    let r = (|| -> Result<Vec<Record>, crate::analytic::AnalyticError> {
        let h = ClassEvaluator::new("1A", 30)?.h_g(tau)?;
        let mut out = Vec::new();
        let mut prev = f64::INFINITY;
        for k in RADEMACHER_CUTOFFS {
            let err = (rademacher_sum("1A", tau, k)? * -2.0 - h).norm();
            let mut rec = Record::new("rademacher_trend", Some("1A"), err <= prev);
            rec.residual = Some(err);
            rec.detail = Some(format!("K = {k}, |-2 R_K - H| at 0.1+0.8i"));
            if err > prev {
                rec.mismatch = Some(format!("error grew from {prev:e}"));
            }
            out.push(rec);
            prev = err;
        }
        out.push(Record::numeric("rademacher_trend", Some("1A"), prev, bound).with_detail("final cutoff"));
        Ok(out)
    })();
    r.unwrap_or_else(|e| vec![Record::error("rademacher_trend", Some("1A"), e)])
}
