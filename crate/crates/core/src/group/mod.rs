//! Conjugacy-class data, character table and trace decomposition for M24.

mod quadratic;

pub use quadratic::{QuadraticSum, QuadraticValue};

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::num::{big, int, parse_rational, Rational};

const GROUP_JSON: &str = include_str!("../data/group.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed group data: {0}")]
    Malformed(String),
    #[error("group data violates an invariant: {0}")]
    Invariant(String),
    #[error("unknown class label {0}")]
    UnknownClass(String),
    #[error("no class has cycle shape {0}")]
    NoMatchingShape(String),
    #[error("decomposition is not rational for {0}")]
    Irrational(String),
    #[error("trace vector must have {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// Cycle shape as `(cycle length, multiplicity)` pairs, increasing in length.
pub type CycleShape = Vec<(u32, u32)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    /// Series label, e.g. `"7AB"`.
    pub label: String,
    pub shape: CycleShape,
    /// Number of fixed points.
    pub chi: i64,
    pub weight: u32,
    pub order: u32,
    pub level: u32,
    pub h: u32,
    /// Character-table columns carrying this label.
    pub members: Vec<String>,
}

impl ClassRecord {
    /// Fixed points of `g^k`: every `i`-cycle with `i | k` contributes `i` points.
    pub fn fixed_points(&self, k: u32) -> u32 {
        self.shape.iter().filter(|(i, _)| k % i == 0).map(|(i, l)| i * l).sum()
    }

    /// Cycle shape of `g^a`.
    pub fn power_shape(&self, a: u32) -> CycleShape {
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for &(i, l) in &self.shape {
            let g = i.gcd(&a);
            *acc.entry(i / g).or_default() += l * g;
        }
        acc.into_iter().collect()
    }
}

pub fn render_shape(shape: &CycleShape) -> String {
    shape.iter().map(|(i, l)| format!("{i}^{l}")).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone)]
pub struct Irreducible {
    pub label: String,
    pub dim: u64,
    pub values: Vec<QuadraticValue>,
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub columns: Vec<String>,
    pub irreducibles: Vec<Irreducible>,
}

impl CharacterTable {
    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == label)
    }

    /// Centralizer order `sum_i |chi_i(g)|^2` of column `j`.
    pub fn centralizer_rational(&self, j: usize) -> Rational {
        self.irreducibles.iter().map(|r| r.values[j].norm()).fold(Rational::zero(), |a, b| a + b)
    }

    /// Labels of irreducibles that are complex conjugates of each other, as index pairs.
    pub fn conjugate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, r) in self.irreducibles.iter().enumerate() {
            let c: Vec<QuadraticValue> = r.values.iter().map(|v| v.conj()).collect();
            if c == r.values {
                continue;
            }
            if let Some(j) = self.irreducibles.iter().position(|s| s.values == c) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_self_conjugate(&self, i: usize) -> bool {
        self.irreducibles[i].values.iter().all(|v| v.is_rational())
    }
}

#[derive(Debug, Clone)]
pub struct GroupData {
    pub order: BigInt,
    pub classes: Vec<ClassRecord>,
    pub table: CharacterTable,
    centralizers: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawGroup {
    order: u64,
    columns: Vec<String>,
    classes: Vec<RawClass>,
    irreducibles: Vec<RawIrrep>,
}

#[derive(Deserialize)]
struct RawClass {
    label: String,
    shape: Vec<(u32, u32)>,
    chi: i64,
    k: u32,
    n: u32,
    #[serde(rename = "N")]
    level: u32,
    h: u32,
    members: Vec<String>,
}

#[derive(Deserialize)]
struct RawIrrep {
    label: String,
    dim: u64,
    values: Vec<RawValue>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Plain(String),
    Quadratic { a: String, b: String, n: u32 },
}

fn parse(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| GroupError::Malformed(format!("bad rational {s:?}")))
}

impl GroupData {
    /// Parses and validates group data in the documented JSON format.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawGroup = serde_json::from_str(text).map_err(|e| GroupError::Malformed(e.to_string()))?;
        let classes: Vec<ClassRecord> = raw
            .classes
            .into_iter()
            .map(|c| ClassRecord {
                label: c.label,
                shape: c.shape,
                chi: c.chi,
                weight: c.k,
                order: c.n,
                level: c.level,
                h: c.h,
                members: c.members,
            })
            .collect();
        let mut irreducibles = Vec::new();
        for r in raw.irreducibles {
            let values = r
                .values
                .iter()
                .map(|v| match v {
                    RawValue::Plain(s) => Ok(QuadraticValue::rational(parse(s)?)),
                    RawValue::Quadratic { a, b, n } => Ok(QuadraticValue::new(parse(a)?, parse(b)?, *n)),
                })
                .collect::<Result<Vec<_>>>()?;
            irreducibles.push(Irreducible { label: r.label, dim: r.dim, values });
        }
        let table = CharacterTable { columns: raw.columns, irreducibles };
        let mut data = GroupData { order: BigInt::from(raw.order), classes, table, centralizers: Vec::new() };
        data.validate()?;
        Ok(data)
    }

    fn validate(&mut self) -> Result<()> {
        let bad = |m: String| Err(GroupError::Invariant(m));
        let ncol = self.table.columns.len();
        if self.table.irreducibles.len() != ncol {
            return bad(format!("{} irreducibles for {} columns", self.table.irreducibles.len(), ncol));
        }
        for c in &self.classes {
            validate_class(c).map_err(GroupError::Invariant)?;
            for m in &c.members {
                if self.table.column_index(m).is_none() {
                    return bad(format!("{} lists unknown column {m}", c.label));
                }
            }
        }
        let mut covered: Vec<&String> = self.classes.iter().flat_map(|c| &c.members).collect();
        covered.sort();
        covered.dedup();
        if covered.len() != ncol {
            return bad("series labels do not partition the columns".into());
        }
        for r in &self.table.irreducibles {
            if r.values.len() != ncol {
                return bad(format!("row {} has {} entries", r.label, r.values.len()));
            }
            if r.values[0] != QuadraticValue::rational(int(r.dim as i64)) {
                return bad(format!("row {} does not start with its dimension", r.label));
            }
        }
        // second orthogonality: centralizer orders, then distinct columns orthogonal
        self.centralizers.clear();
        for j in 0..ncol {
            let c = self.table.centralizer_rational(j);
            if !c.is_integer() || c <= Rational::zero() || !(&self.order % c.numer()).is_zero() {
                return bad(format!("column {} has centralizer {}", self.table.columns[j], c));
            }
            self.centralizers.push(c.numer().clone());
        }
        for j in 0..ncol {
            for k in (j + 1)..ncol {
                let mut s = QuadraticSum::default();
                for r in &self.table.irreducibles {
                    s.push(&(&r.values[j] * &r.values[k].conj()));
                }
                if s.as_rational().map_or(true, |v| !v.is_zero()) {
                    return bad(format!(
                        "columns {} and {} are not orthogonal",
                        self.table.columns[j], self.table.columns[k]
                    ));
                }
            }
        }
        let total: BigInt = self.centralizers.iter().map(|c| &self.order / c).sum();
        if total != self.order {
            return bad(format!("class sizes sum to {total}"));
        }
        // first orthogonality
        for (i, ri) in self.table.irreducibles.iter().enumerate() {
            for (j, rj) in self.table.irreducibles.iter().enumerate().skip(i) {
                let s = self.inner_product(&ri.values, &rj.values)?;
                let expect = if i == j { Rational::one() } else { Rational::zero() };
                if s != expect {
                    return bad(format!("rows {} and {} have inner product {}", ri.label, rj.label, s));
                }
            }
        }
        Ok(())
    }

    pub fn class(&self, label: &str) -> Result<&ClassRecord> {
        self.classes
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| GroupError::UnknownClass(label.to_string()))
    }

    /// The series label owning a character-table column (e.g. `"7A"` -> `"7AB"`).
    pub fn series_label(&self, column: &str) -> Result<&str> {
        self.classes
            .iter()
            .find(|c| c.members.iter().any(|m| m == column))
            .map(|c| c.label.as_str())
            .ok_or_else(|| GroupError::UnknownClass(column.to_string()))
    }

    /// Series label of `g^a`.
    pub fn power_class(&self, label: &str, a: u32) -> Result<&ClassRecord> {
        let shape = self.class(label)?.power_shape(a);
        self.classes
            .iter()
            .find(|c| c.shape == shape)
            .ok_or_else(|| GroupError::NoMatchingShape(render_shape(&shape)))
    }

    pub fn fixed_points(&self, label: &str, k: u32) -> Result<u32> {
        Ok(self.class(label)?.fixed_points(k))
    }

    pub fn centralizer(&self, column: &str) -> Result<BigInt> {
        let j = self.table.column_index(column).ok_or_else(|| GroupError::UnknownClass(column.to_string()))?;
        Ok(self.centralizers[j].clone())
    }

    pub fn class_size(&self, column: &str) -> Result<BigInt> {
        Ok(&self.order / self.centralizer(column)?)
    }

    /// `(1/|G|) sum_g f(g) conj(h(g))` over all group elements.
    pub fn inner_product(&self, f: &[QuadraticValue], h: &[QuadraticValue]) -> Result<Rational> {
        let mut s = QuadraticSum::default();
        for j in 0..self.table.columns.len() {
            let size = QuadraticValue::rational(big(&(&self.order / &self.centralizers[j])));
            s.push(&(&size * &(&f[j] * &h[j].conj())));
        }
        let r = s.as_rational().ok_or_else(|| GroupError::Irrational("inner product".into()))?;
        Ok(r / big(&self.order))
    }

    /// Multiplicities of each irreducible in a class function given on all columns.
    pub fn decompose_values(&self, values: &[QuadraticValue]) -> Result<Vec<(String, Rational)>> {
        let n = self.table.columns.len();
        if values.len() != n {
            return Err(GroupError::WrongLength { expected: n, got: values.len() });
        }
        self.table
            .irreducibles
            .iter()
            .map(|r| {
                let m = self
                    .inner_product(values, &r.values)
                    .map_err(|_| GroupError::Irrational(r.label.clone()))?;
                Ok((r.label.clone(), m))
            })
            .collect()
    }

    /// Multiplicities of a rational trace vector.
    pub fn decompose(&self, traces: &TraceVector) -> Result<Vec<(String, Rational)>> {
        let values: Vec<QuadraticValue> = self
            .table
            .columns
            .iter()
            .map(|c| {
                traces
                    .get(c)
                    .cloned()
                    .map(QuadraticValue::rational)
                    .ok_or_else(|| GroupError::UnknownClass(c.clone()))
            })
            .collect::<Result<_>>()?;
        self.decompose_values(&values)
    }

    /// Spreads per-series-label values over the character-table columns.
    pub fn trace_vector<F>(&self, mut value: F) -> TraceVector
    where
        F: FnMut(&ClassRecord) -> Rational,
    {
        let mut out = TraceVector::new();
        for c in &self.classes {
            let v = value(c);
            for m in &c.members {
                out.insert(m.clone(), v.clone());
            }
        }
        out
    }
}

/// Column label -> exact trace.
pub type TraceVector = BTreeMap<String, Rational>;

fn validate_class(c: &ClassRecord) -> std::result::Result<(), String> {
    let s = &c.shape;
    if s.is_empty() || s.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(format!("{}: shape not increasing", c.label));
    }
    if s.iter().map(|(i, l)| i * l).sum::<u32>() != 24 {
        return Err(format!("{}: shape does not sum to 24", c.label));
    }
    let shortest = s[0].0;
    let longest = s[s.len() - 1].0;
    if c.order != longest || c.level != shortest * longest {
        return Err(format!("{}: order/level disagree with the shape", c.label));
    }
    let mut mirrored: Vec<(u32, u32)> = s.iter().map(|(i, l)| (c.level / i, *l)).collect();
    mirrored.sort_unstable();
    if s.iter().any(|(i, _)| c.level % i != 0) || mirrored != *s {
        return Err(format!("{}: shape is not balanced at level {}", c.label, c.level));
    }
    if c.order * c.h != c.level || c.order % c.h != 0 || 12 % c.h != 0 {
        return Err(format!("{}: inconsistent h = {}", c.label, c.h));
    }
    let chi = if shortest == 1 { s[0].1 as i64 } else { 0 };
    if c.chi != chi {
        return Err(format!("{}: chi = {} but shape gives {}", c.label, c.chi, chi));
    }
    if 2 * c.weight != s.iter().map(|(_, l)| l).sum::<u32>() {
        return Err(format!("{}: weight is not half the number of cycles", c.label));
    }
    Ok(())
}

static GROUP: OnceLock<std::result::Result<GroupData, GroupError>> = OnceLock::new();

/// The embedded, validated group data.
pub fn load_group_data() -> Result<&'static GroupData> {
    GROUP.get_or_init(|| GroupData::from_json(GROUP_JSON)).as_ref().map_err(Clone::clone)
}

/// Validates `text` and uses it in place of the embedded data for this process.
/// Fails if the data is invalid or group data has already been loaded.
pub fn install_group_data(text: &str) -> Result<()> {
    let data = GroupData::from_json(text)?;
    GROUP.set(Ok(data)).map_err(|_| GroupError::Malformed("group data already loaded".into()))
}

/// The embedded group data file.
pub fn embedded_group_json() -> &'static str {
    GROUP_JSON
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> &'static GroupData {
        load_group_data().unwrap()
    }

    #[test]
    fn class_records() {
        let c = g().class("2A").unwrap();
        assert_eq!(c.shape, vec![(1, 8), (2, 8)]);
        assert_eq!((c.weight, c.order, c.level, c.h), (8, 2, 2, 1));
        let c = g().class("12B").unwrap();
        assert_eq!(c.shape, vec![(12, 2)]);
        assert_eq!((c.weight, c.order, c.level, c.h), (1, 12, 144, 12));
        let c = g().class("23AB").unwrap();
        assert_eq!((c.shape.clone(), c.chi), (vec![(1, 1), (23, 1)], 1));
        assert_eq!(g().classes.len(), 21);
    }

    #[test]
    fn fixed_points_and_powers() {
        assert_eq!(g().fixed_points("2A", 1).unwrap(), 8);
        assert_eq!(g().fixed_points("2A", 2).unwrap(), 24);
        // 1^4 2^2 4^4: the 1- and 2-cycles are fixed by the square
        assert_eq!(g().fixed_points("4B", 2).unwrap(), 8);
        assert_eq!(g().power_class("4B", 2).unwrap().label, "2A");
        assert_eq!(g().power_class("4A", 2).unwrap().label, "2A");
        assert_eq!(g().power_class("2A", 2).unwrap().label, "1A");
        for c in &g().classes {
            assert_eq!(g().power_class(&c.label, 1).unwrap().label, c.label);
            for k in 1..=48 {
                if k % c.order == 0 {
                    assert_eq!(c.fixed_points(k), 24);
                }
                let reduced = c.order.gcd(&k);
                assert_eq!(g().power_class(&c.label, k).unwrap().label, g().power_class(&c.label, reduced).unwrap().label);
                // the power's fixed points count matches the power map
                assert_eq!(g().power_class(&c.label, k).unwrap().chi, c.fixed_points(k) as i64);
            }
        }
    }

    #[test]
    fn class_sizes_partition_the_group() {
        assert_eq!(g().class_size("1A").unwrap(), BigInt::one());
        assert_eq!(g().centralizer("1A").unwrap(), BigInt::from(244823040u64));
        let dims: u64 = g().table.irreducibles.iter().map(|r| r.dim * r.dim).sum();
        assert_eq!(dims, 244823040);
        let total: BigInt = g().table.columns.iter().map(|c| g().class_size(c).unwrap()).sum();
        assert_eq!(total, g().order);
        assert_eq!(g().class_size("23A").unwrap(), g().class_size("23B").unwrap());
    }

    #[test]
    fn irreducible_rows_decompose_to_indicators() {
        for (i, r) in g().table.irreducibles.iter().enumerate() {
            let m = g().decompose_values(&r.values).unwrap();
            for (j, (_, v)) in m.iter().enumerate() {
                assert_eq!(*v, if i == j { int(1) } else { int(0) }, "row {}", r.label);
            }
        }
    }

    #[test]
    fn trivial_and_permutation_traces() {
        let ones = g().trace_vector(|_| int(1));
        let m = g().decompose(&ones).unwrap();
        assert_eq!(m[0].1, int(1));
        assert!(m[1..].iter().all(|(_, v)| v.is_zero()));
        let perm = g().trace_vector(|c| int(c.chi));
        let m = g().decompose(&perm).unwrap();
        assert_eq!((m[0].1.clone(), m[1].1.clone()), (int(1), int(1)));
        assert!(m[2..].iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn conjugate_pairs_found() {
        let pairs = g().table.conjugate_pairs();
        let names: Vec<(String, String)> = pairs
            .iter()
            .map(|&(i, j)| (g().table.irreducibles[i].label.clone(), g().table.irreducibles[j].label.clone()))
            .collect();
        assert!(names.contains(&("45".into(), "45b".into())));
        assert_eq!(pairs.len(), 5);
    }

    #[test]
    fn corrupted_entry_fails_validation() {
        let text = GROUP_JSON.replacen("\"-3\"", "\"-4\"", 1);
        assert!(matches!(GroupData::from_json(&text), Err(GroupError::Invariant(_))));
        assert!(matches!(GroupData::from_json("{}"), Err(GroupError::Malformed(_))));
    }
}
