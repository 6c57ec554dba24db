//! Coefficient and decomposition tables over the character-table columns, and the
//! reference copy they are checked against.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::forms::eta_product;
use crate::genus::{disc_coeff, order_for_discriminant, twisted_genus, GenusError};
use crate::group::{load_group_data, GroupData, GroupError};
use crate::mock::{all_mock_forms, kn_traces, MockError};
use crate::num::{format_rational, int, Rational};
use crate::series::{q24, SeriesError, UNIT};

const TABLES_JSON: &str = include_str!("data/tables.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Mock(#[from] MockError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error("malformed reference tables: {0}")]
    Malformed(String),
    #[error("row {index} is outside the {kind} table (first row {first})")]
    Index { kind: &'static str, index: i64, first: i64 },
}

pub type Result<T> = std::result::Result<T, TableError>;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ReferenceRow {
    pub index: i64,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ReferenceBlock {
    pub coefficients: Vec<ReferenceRow>,
    pub decomposition: Vec<ReferenceRow>,
}

/// Printed coefficient tables: rows over `columns`, and decompositions over `irreducibles`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ReferenceTables {
    pub columns: Vec<String>,
    pub irreducibles: Vec<String>,
    pub eta_inverse: ReferenceBlock,
    pub jacobi_odd: ReferenceBlock,
    pub jacobi_even: ReferenceBlock,
    pub mock: ReferenceBlock,
}

impl ReferenceTables {
    pub fn block(&self, kind: TableKind) -> &ReferenceBlock {
        match kind {
            TableKind::EtaInverse => &self.eta_inverse,
            TableKind::JacobiOdd => &self.jacobi_odd,
            TableKind::JacobiEven => &self.jacobi_even,
            TableKind::Mock => &self.mock,
        }
    }

    fn validate(&self, g: &GroupData) -> std::result::Result<(), String> {
        if self.columns != g.table.columns {
            return Err("columns differ from the character table".into());
        }
        let irreps: Vec<&str> = g.table.irreducibles.iter().map(|r| r.label.as_str()).collect();
        if self.irreducibles != irreps {
            return Err("irreducibles differ from the character table".into());
        }
        for kind in TableKind::ALL {
            let b = self.block(kind);
            for r in b.coefficients.iter().chain(&b.decomposition) {
                if r.values.len() != self.columns.len() {
                    return Err(format!("{} row {} has {} entries", kind.name(), r.index, r.values.len()));
                }
            }
        }
        Ok(())
    }
}

static REFERENCE: OnceLock<std::result::Result<ReferenceTables, TableError>> = OnceLock::new();

/// The embedded reference tables, checked against the loaded group data.
pub fn reference_tables() -> Result<&'static ReferenceTables> {
    REFERENCE
        .get_or_init(|| {
            let t: ReferenceTables =
                serde_json::from_str(TABLES_JSON).map_err(|e| TableError::Malformed(e.to_string()))?;
            t.validate(load_group_data()?).map_err(TableError::Malformed)?;
            Ok(t)
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// The four printed coefficient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// `q^n` coefficients of `1/eta_g`; decomposition row `n` is `H_n`, read from `q^{n-1}`.
    EtaInverse,
    /// `c_g(4l - 1)`; decompositions are the virtual modules `K^_{4l-1}`.
    JacobiOdd,
    /// `c_g(4l)`; decompositions are the virtual modules `K^_{4l}`.
    JacobiEven,
    /// `q^{n-1/8}` coefficients of `H_g`; decompositions are `K_n`.
    Mock,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [TableKind::EtaInverse, TableKind::JacobiOdd, TableKind::JacobiEven, TableKind::Mock];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::EtaInverse => "eta-inverse",
            TableKind::JacobiOdd => "jacobi-odd",
            TableKind::JacobiEven => "jacobi-even",
            TableKind::Mock => "mock",
        }
    }

    fn first_coefficient(self) -> i64 {
        match self {
            TableKind::EtaInverse | TableKind::JacobiOdd | TableKind::JacobiEven => 0,
            TableKind::Mock => 1,
        }
    }

    /// The coefficient index whose traces a decomposition row decomposes.
    fn trace_index(self, row: i64) -> i64 {
        match self {
            TableKind::EtaInverse => row - 1,
            _ => row,
        }
    }
}

/// Exact values, one row per index, over either columns or irreducibles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputedTable {
    pub kind: TableKind,
    pub labels: Vec<String>,
    pub rows: Vec<(i64, Vec<Rational>)>,
}

impl ComputedTable {
    /// Entries differing from a reference block, as `(row, label, computed, printed)`.
    pub fn mismatches(&self, reference: &[ReferenceRow]) -> Vec<(i64, String, String, String)> {
        let mut out = Vec::new();
        for r in reference {
            match self.rows.iter().find(|(i, _)| *i == r.index) {
                None => out.push((r.index, String::new(), "missing".into(), String::new())),
                Some((_, vals)) => {
                    for ((label, v), want) in self.labels.iter().zip(vals).zip(&r.values) {
                        if *v != int(*want) {
                            out.push((r.index, label.clone(), format_rational(v), want.to_string()));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Per-series-label coefficients at the given indices.
pub fn series_values(kind: TableKind, indices: &[i64]) -> Result<BTreeMap<String, Vec<Rational>>> {
    let first = kind.first_coefficient();
    if let Some(&index) = indices.iter().find(|&&i| i < first) {
        return Err(TableError::Index { kind: kind.name(), index, first });
    }
    let g = load_group_data()?;
    let top = indices.iter().copied().max().unwrap_or(first);
    let rows: Vec<(String, Vec<Rational>)> = match kind {
        TableKind::EtaInverse => g
            .classes
            .par_iter()
            .map(|c| {
                // eta_g = q (1 + ...), so its inverse is known two orders short
                let inv = eta_product(c, top + 3).inv()?;
                let vals = indices.iter().map(|&n| inv.coeff(&q24(n * UNIT))).collect::<std::result::Result<_, _>>()?;
                Ok((c.label.clone(), vals))
            })
            .collect::<Result<_>>()?,
        TableKind::Mock => {
            let forms = all_mock_forms(top)?;
            forms
                .iter()
                .map(|f| Ok((f.label.clone(), indices.iter().map(|&n| f.coefficient(n)).collect::<std::result::Result<_, _>>()?)))
                .collect::<Result<_>>()?
        }
        TableKind::JacobiOdd | TableKind::JacobiEven => {
            let disc = |l: i64| if kind == TableKind::JacobiOdd { 4 * l - 1 } else { 4 * l };
            let order = order_for_discriminant(disc(top));
            g.classes
                .par_iter()
                .map(|c| {
                    let z = twisted_genus(&c.label, order)?;
                    let vals = indices.iter().map(|&l| disc_coeff(&z, disc(l))).collect::<std::result::Result<_, _>>()?;
                    Ok((c.label.clone(), vals))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(rows.into_iter().collect())
}

/// Coefficient rows spread over the character-table columns.
pub fn coefficient_table(kind: TableKind, indices: &[i64]) -> Result<ComputedTable> {
    let g = load_group_data()?;
    let by_label = series_values(kind, indices)?;
    let mut rows = Vec::new();
    for (k, &i) in indices.iter().enumerate() {
        let vals = g
            .table
            .columns
            .iter()
            .map(|col| Ok(by_label[g.series_label(col)?][k].clone()))
            .collect::<Result<Vec<_>>>()?;
        rows.push((i, vals));
    }
    Ok(ComputedTable { kind, labels: g.table.columns.clone(), rows })
}

/// Irreducible multiplicities of the modules graded by the given rows.
pub fn decomposition_table(kind: TableKind, rows: &[i64]) -> Result<ComputedTable> {
    let g = load_group_data()?;
    let trace_rows: Vec<i64> = rows.iter().map(|&r| kind.trace_index(r)).collect();
    let mut out = Vec::new();
    if kind == TableKind::Mock {
        let forms = all_mock_forms(trace_rows.iter().copied().max().unwrap_or(1))?;
        for &r in rows {
            let tv = kn_traces(g, &forms, r)?;
            out.push((r, g.decompose(&tv)?.into_iter().map(|(_, m)| m).collect()));
        }
    } else {
        let by_label = series_values(kind, &trace_rows)?;
        for (k, &r) in rows.iter().enumerate() {
            let tv = g.trace_vector(|c| by_label[&c.label][k].clone());
            out.push((r, g.decompose(&tv)?.into_iter().map(|(_, m)| m).collect()));
        }
    }
    let labels = g.table.irreducibles.iter().map(|r| r.label.clone()).collect();
    Ok(ComputedTable { kind, labels, rows: out })
}

/// Properties a row of multiplicities must have to come from an actual module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleShape {
    /// Nonnegative integers.
    Genuine,
    /// Nonnegative integers, equal on conjugate pairs, even on self-conjugate irreducibles.
    PairedEven,
    /// Integers of any sign.
    Virtual,
}

impl TableKind {
    pub fn module_shape(self) -> ModuleShape {
        match self {
            TableKind::EtaInverse => ModuleShape::Genuine,
            TableKind::Mock => ModuleShape::PairedEven,
            TableKind::JacobiOdd | TableKind::JacobiEven => ModuleShape::Virtual,
        }
    }
}

/// Descriptions of every entry of `mults` violating `shape`.
pub fn module_violations(g: &GroupData, shape: ModuleShape, mults: &[Rational]) -> Vec<String> {
    let labels = &g.table.irreducibles;
    let mut out = Vec::new();
    for (i, m) in mults.iter().enumerate() {
        let name = &labels[i].label;
        if !m.is_integer() {
            out.push(format!("{name}: non-integral {}", format_rational(m)));
            continue;
        }
        if shape != ModuleShape::Virtual && m.is_negative() {
            out.push(format!("{name}: negative {}", format_rational(m)));
        }
        if shape == ModuleShape::PairedEven && g.table.is_self_conjugate(i) && !(m % int(2)).is_zero() {
            out.push(format!("{name}: odd {} on a self-conjugate irreducible", format_rational(m)));
        }
    }
    if shape == ModuleShape::PairedEven {
        for (i, j) in g.table.conjugate_pairs() {
            if mults[i] != mults[j] {
                out.push(format!("{} and {}: unequal {} and {}", labels[i].label, labels[j].label, mults[i], mults[j]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_loads() {
        let t = reference_tables().unwrap();
        assert_eq!(t.columns.len(), 26);
        assert_eq!(t.eta_inverse.coefficients[0].values[0], 24);
        assert_eq!(t.mock.coefficients[0].values[0], 90);
    }

    #[test]
    fn eta_inverse_leading_rows() {
        let t = coefficient_table(TableKind::EtaInverse, &[0, 1, 2]).unwrap();
        assert_eq!(t.rows[0].1[0], int(24));
        assert_eq!(t.rows[2].1[0], int(3200));
        // 2A column
        assert_eq!(t.rows[0].1[1], int(8));
        assert_eq!(t.rows[1].1[1], int(52));
    }

    #[test]
    fn first_fock_module() {
        let t = decomposition_table(TableKind::EtaInverse, &[1]).unwrap();
        let nonzero: Vec<(&str, &Rational)> =
            t.labels.iter().map(String::as_str).zip(&t.rows[0].1).filter(|(_, m)| !m.is_zero()).collect();
        assert_eq!(nonzero, vec![("1", &int(1)), ("23", &int(1))]);
    }

    #[test]
    fn rows_below_the_table_are_rejected() {
        assert!(matches!(series_values(TableKind::Mock, &[0]), Err(TableError::Index { .. })));
    }

    #[test]
    fn violations_are_reported() {
        let g = load_group_data().unwrap();
        let mut m = vec![Rational::zero(); 26];
        m[0] = int(-1);
        m[2] = int(1);
        let v = module_violations(g, ModuleShape::PairedEven, &m);
        assert_eq!(v.len(), 3, "{v:?}");
        assert!(module_violations(g, ModuleShape::Virtual, &m).is_empty());
    }
}
