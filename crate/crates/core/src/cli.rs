//! Requests and reports behind the `m24` command line: coefficient and decomposition
//! tables in human, JSON and CSV form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::eta_product;
use crate::genus::{disc_coeff, order_for_discriminant, twisted_genus, GenusError};
use crate::group::{load_group_data, GroupError};
use crate::mock::{mock_hg, MockError};
use crate::num::{format_rational, Rational};
use crate::series::{q24, SeriesError, UNIT};
use crate::siegel::{borcherds_product, SiegelError};
use crate::tables::{decomposition_table, module_violations, TableError, TableKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Mock(#[from] MockError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error(transparent)]
    Siegel(#[from] SiegelError),
    #[error(transparent)]
    Table(#[from] TableError),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown format {s:?} (table, json, csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    /// `q^n` coefficients of `1/eta_g`, `n = 0 .. order-1`.
    EtaInverse,
    /// `q^{n-1/8}` coefficients of `H_g`, `n = 1 ..= order`.
    H,
    /// `c_g(D)` for `-1 <= D <= order`.
    ZDisc,
    /// Coefficients of `Phi_g` at `p^m q^n y^l`.
    Siegel,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::EtaInverse => "eta-inverse",
            CoeffKind::H => "H",
            CoeffKind::ZDisc => "Z-disc",
            CoeffKind::Siegel => "siegel",
        }
    }
}

impl FromStr for CoeffKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "eta-inverse" => Ok(CoeffKind::EtaInverse),
            "h" => Ok(CoeffKind::H),
            "z-disc" => Ok(CoeffKind::ZDisc),
            "siegel" => Ok(CoeffKind::Siegel),
            _ => Err(format!("unknown kind {s:?} (eta-inverse, H, Z-disc, siegel)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    /// `H_n` from `1/eta_g`.
    EtaFock,
    /// `K_n` from `H_g`.
    K,
    /// Virtual modules `K^_D` from `c_g(D)`.
    Khat,
}

impl ModuleKind {
    pub fn name(self) -> &'static str {
        match self {
            ModuleKind::EtaFock => "eta-Fock",
            ModuleKind::K => "K",
            ModuleKind::Khat => "Khat",
        }
    }
}

impl FromStr for ModuleKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "eta-fock" => Ok(ModuleKind::EtaFock),
            "k" => Ok(ModuleKind::K),
            "khat" => Ok(ModuleKind::Khat),
            _ => Err(format!("unknown module {s:?} (eta-Fock, K, Khat)")),
        }
    }
}

/// Resolves `"all"`, one series label, or a comma-separated list to series labels in
/// table order.
pub fn resolve_classes(selector: &str) -> Result<Vec<String>> {
    let g = load_group_data()?;
    if selector.trim() == "all" {
        return Ok(g.classes.iter().map(|c| c.label.clone()).collect());
    }
    let wanted: Vec<&str> = selector.split(',').map(str::trim).collect();
    for w in &wanted {
        if g.class(w).is_err() {
            let known: Vec<&str> = g.classes.iter().map(|c| c.label.as_str()).collect();
            return Err(CliError::Usage(format!("unknown class {w:?}; expected one of {}", known.join(", "))));
        }
    }
    Ok(g.classes.iter().filter(|c| wanted.contains(&c.label.as_str())).map(|c| c.label.clone()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowIndex {
    Single(i64),
    Triple([i64; 3]),
}

impl std::fmt::Display for RowIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowIndex::Single(i) => write!(f, "{i}"),
            RowIndex::Triple([m, n, l]) => write!(f, "{m} {n} {l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub index: RowIndex,
    pub value: String,
}

/// One class of a coefficient request. Values are exact, as strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub kind: String,
    pub class: String,
    pub orders: BTreeMap<String, i64>,
    pub rows: Vec<CoeffRow>,
}

/// Truncations of a coefficient request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffOrders {
    /// Row count, or the largest discriminant for `Z-disc`.
    pub order: i64,
    pub p_max: i64,
    pub q_max: i64,
    /// Largest `|l|` kept in Siegel rows.
    pub y_window: Option<i64>,
}

fn row(index: i64, v: &Rational) -> CoeffRow {
    CoeffRow { index: RowIndex::Single(index), value: format_rational(v) }
}

pub fn coeff_table(kind: CoeffKind, label: &str, o: CoeffOrders) -> Result<CoeffTable> {
    let g = load_group_data()?;
    let class = g.class(label)?;
    let mut orders = BTreeMap::new();
    let rows = match kind {
        CoeffKind::EtaInverse => {
            if o.order < 1 {
                return Err(CliError::Usage("order must be positive".into()));
            }
            orders.insert("q".into(), o.order);
            let inv = eta_product(class, o.order + 2).inv()?;
            (0..o.order).map(|n| Ok(row(n, &inv.coeff(&q24(n * UNIT))?))).collect::<Result<_>>()?
        }
        CoeffKind::H => {
            if o.order < 1 {
                return Err(CliError::Usage("order must be positive".into()));
            }
            orders.insert("q".into(), o.order);
            let h = mock_hg(label, o.order)?;
            (1..=o.order).map(|n| Ok(row(n, &h.coefficient(n)?))).collect::<Result<_>>()?
        }
        CoeffKind::ZDisc => {
            if o.order < -1 {
                return Err(CliError::Usage("largest discriminant must be at least -1".into()));
            }
            orders.insert("D".into(), o.order);
            let z = twisted_genus(label, order_for_discriminant(o.order))?;
            (-1..=o.order)
                .filter(|d| d.rem_euclid(4) == 0 || d.rem_euclid(4) == 3)
                .map(|d| Ok(row(d, &disc_coeff(&z, d)?)))
                .collect::<Result<_>>()?
        }
        CoeffKind::Siegel => {
            if o.p_max < 1 || o.q_max < 1 {
                return Err(CliError::Usage("pmax and qmax must be positive".into()));
            }
            orders.insert("p".into(), o.p_max);
            orders.insert("q".into(), o.q_max);
            if let Some(w) = o.y_window {
                orders.insert("y".into(), w);
            }
            let s = borcherds_product(label, o.p_max, o.q_max)?;
            s.series
                .terms()
                .map(|(e, c)| ([e[0], e[1] / UNIT, e[2] / 2], c))
                .filter(|(i, _)| o.y_window.map_or(true, |w| i[2].abs() <= w))
                .map(|(i, c)| CoeffRow { index: RowIndex::Triple(i), value: format_rational(c) })
                .collect()
        }
    };
    Ok(CoeffTable { kind: kind.name().into(), class: label.into(), orders, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub index: i64,
    /// Multiplicities in the order of `irreducibles`.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub module: String,
    pub depth: i64,
    pub irreducibles: Vec<String>,
    pub rows: Vec<DecompositionRow>,
    /// Entries that no actual module could have (negative, non-integral, unpaired, odd).
    pub violations: Vec<String>,
}

/// Rows `1..=depth` for `eta-Fock` and `K`; discriminants `-1..=depth` for `Khat`.
pub fn decomposition_report(module: ModuleKind, depth: i64) -> Result<DecompositionReport> {
    let kinds: Vec<(TableKind, Vec<i64>)> = match module {
        ModuleKind::EtaFock | ModuleKind::K => {
            if depth < 1 {
                return Err(CliError::Usage("depth must be positive".into()));
            }
            let kind = if module == ModuleKind::K { TableKind::Mock } else { TableKind::EtaInverse };
            vec![(kind, (1..=depth).collect())]
        }
        ModuleKind::Khat => {
            if depth < -1 {
                return Err(CliError::Usage("depth must be at least -1".into()));
            }
            // odd discriminants 4l - 1 and even ones 4l
            let odd = (0..).take_while(|l| 4 * l - 1 <= depth).collect();
            let even = (0..).take_while(|l| 4 * l <= depth).collect();
            vec![(TableKind::JacobiOdd, odd), (TableKind::JacobiEven, even)]
        }
    };
    let g = load_group_data()?;
    let mut out: Vec<(i64, Vec<Rational>)> = Vec::new();
    let mut violations = Vec::new();
    for (kind, idx) in kinds {
        if idx.is_empty() {
            continue;
        }
        let t = decomposition_table(kind, &idx)?;
        for (i, mults) in t.rows {
            let key = match kind {
                TableKind::JacobiOdd => 4 * i - 1,
                TableKind::JacobiEven => 4 * i,
                _ => i,
            };
            for v in module_violations(g, kind.module_shape(), &mults) {
                violations.push(format!("row {key}: {v}"));
            }
            out.push((key, mults));
        }
    }
    out.sort_by_key(|(k, _)| *k);
    Ok(DecompositionReport {
        module: module.name().into(),
        depth,
        irreducibles: g.table.irreducibles.iter().map(|r| r.label.clone()).collect(),
        rows: out
            .into_iter()
            .map(|(index, m)| DecompositionRow { index, values: m.iter().map(format_rational).collect() })
            .collect(),
        violations,
    })
}

fn align(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..ncol).map(|j| rows.iter().filter_map(|r| r.get(j)).map(String::len).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(s, "{}", cells.join("  ").trim_end());
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders tables; JSON is one compact object per line.
pub fn render_coeffs(tables: &[CoeffTable], format: OutputFormat) -> String {
    let mut s = String::new();
    match format {
        OutputFormat::Json => {
            for t in tables {
                s.push_str(&serde_json::to_string(t).expect("tables serialize"));
                s.push('\n');
            }
        }
        OutputFormat::Csv => {
            s.push_str("kind,class,index,value\n");
            for t in tables {
                for r in &t.rows {
                    let _ = writeln!(s, "{},{},{},{}", t.kind, t.class, csv_field(&r.index.to_string()), r.value);
                }
            }
        }
        OutputFormat::Table => {
            for (k, t) in tables.iter().enumerate() {
                if k > 0 {
                    s.push('\n');
                }
                let orders: Vec<String> = t.orders.iter().map(|(v, o)| format!("{v} {o}")).collect();
                let _ = writeln!(s, "{} {} ({})", t.kind, t.class, orders.join(", "));
                let head = if matches!(t.rows.first().map(|r| &r.index), Some(RowIndex::Triple(_))) {
                    "m n l"
                } else if t.kind == CoeffKind::ZDisc.name() {
                    "D"
                } else {
                    "n"
                };
                let mut rows = vec![vec![head.to_string(), "value".to_string()]];
                rows.extend(t.rows.iter().map(|r| vec![r.index.to_string(), r.value.clone()]));
                s.push_str(&align(&rows));
            }
        }
    }
    s
}

pub fn render_decomposition(r: &DecompositionReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(r).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = format!("index,{}\n", r.irreducibles.iter().map(|l| csv_field(l)).collect::<Vec<_>>().join(","));
            for row in &r.rows {
                let _ = writeln!(s, "{},{}", row.index, row.values.join(","));
            }
            s
        }
        OutputFormat::Table => {
            let mut rows = vec![std::iter::once(r.module.clone()).chain(r.irreducibles.iter().cloned()).collect()];
            rows.extend(r.rows.iter().map(|row| std::iter::once(row.index.to_string()).chain(row.values.iter().cloned()).collect()));
            align(&rows)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(order: i64) -> CoeffOrders {
        CoeffOrders { order, p_max: 2, q_max: 2, y_window: None }
    }

    fn values(t: &CoeffTable) -> Vec<&str> {
        t.rows.iter().map(|r| r.value.as_str()).collect()
    }

    #[test]
    fn coefficient_examples() {
        let t = coeff_table(CoeffKind::EtaInverse, "1A", orders(10)).unwrap();
        assert_eq!(t.rows.len(), 10);
        assert_eq!(t.rows[0], CoeffRow { index: RowIndex::Single(0), value: "24".into() });
        let h = coeff_table(CoeffKind::H, "2A", orders(5)).unwrap();
        assert_eq!(values(&h), ["-6", "14", "-28", "42", "-56"]);
        let z = coeff_table(CoeffKind::ZDisc, "1A", orders(8)).unwrap();
        assert_eq!(values(&z), ["2", "20", "-128", "216", "-1026", "1616"]);
        let idx: Vec<_> = z.rows.iter().map(|r| r.index.clone()).collect();
        assert_eq!(idx, [-1, 0, 3, 4, 7, 8].map(RowIndex::Single));
    }

    #[test]
    fn siegel_rows_and_window() {
        let t = coeff_table(CoeffKind::Siegel, "1A", orders(0)).unwrap();
        assert!(t.rows.contains(&CoeffRow { index: RowIndex::Triple([1, 1, 0]), value: "-2".into() }));
        let narrow = coeff_table(CoeffKind::Siegel, "1A", CoeffOrders { y_window: Some(0), ..orders(0) }).unwrap();
        assert!(narrow.rows.iter().all(|r| matches!(r.index, RowIndex::Triple([_, _, 0]))));
        assert_eq!(narrow.orders["y"], 0);
    }

    #[test]
    fn selectors() {
        assert_eq!(resolve_classes("all").unwrap().len(), 21);
        assert_eq!(resolve_classes("3A, 1A").unwrap(), ["1A", "3A"]);
        assert!(matches!(resolve_classes("7A"), Err(CliError::Usage(_))));
        assert!(matches!(coeff_table(CoeffKind::H, "1A", orders(0)), Err(CliError::Usage(_))));
    }

    #[test]
    fn decomposition_examples() {
        let r = decomposition_report(ModuleKind::EtaFock, 3).unwrap();
        let h3: Vec<&str> = r.rows[2].values.iter().map(String::as_str).collect();
        assert_eq!(&h3[..9], ["6", "8", "0", "0", "0", "0", "3", "2", "1"]);
        assert_eq!(r.rows[2].values[r.irreducibles.iter().position(|l| l == "1265").unwrap()], "1");
        assert!(r.violations.is_empty());
        let k = decomposition_report(ModuleKind::K, 1).unwrap();
        let nonzero: Vec<&str> =
            k.irreducibles.iter().zip(&k.rows[0].values).filter(|(_, v)| *v != "0").map(|(l, _)| l.as_str()).collect();
        assert_eq!(nonzero, ["45", "45b"]);
        let khat = decomposition_report(ModuleKind::Khat, 0).unwrap();
        assert_eq!(khat.rows.iter().map(|r| r.index).collect::<Vec<_>>(), [-1, 0]);
        assert_eq!(&khat.rows[1].values[..3], ["-3", "1", "0"]);
    }

    #[test]
    fn json_round_trips() {
        let t = vec![
            coeff_table(CoeffKind::ZDisc, "2B", orders(4)).unwrap(),
            coeff_table(CoeffKind::Siegel, "2A", orders(0)).unwrap(),
        ];
        let text = render_coeffs(&t, OutputFormat::Json);
        let back: Vec<CoeffTable> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, t);
        assert_eq!(render_coeffs(&back, OutputFormat::Json), text);
        let csv = render_coeffs(&t, OutputFormat::Csv);
        assert!(csv.starts_with("kind,class,index,value\nZ-disc,2B,-1,2\nZ-disc,2B,0,-4\n"), "{csv}");
    }
}
