use m24_core::group::load_group_data;
use m24_core::mock::all_mock_forms;
use m24_core::num::{int, is_even_integer};
use m24_core::tables::{
    coefficient_table, decomposition_table, module_violations, reference_tables, ModuleShape, TableKind,
};

fn assert_block(kind: TableKind) {
    let reference = reference_tables().unwrap().block(kind);
    let idx: Vec<i64> = reference.coefficients.iter().map(|r| r.index).collect();
    let t = coefficient_table(kind, &idx).unwrap();
    assert_eq!(t.rows.len(), reference.coefficients.len());
    let bad = t.mismatches(&reference.coefficients);
    assert!(bad.is_empty(), "{}: {bad:?}", kind.name());

    let rows: Vec<i64> = reference.decomposition.iter().map(|r| r.index).collect();
    let d = decomposition_table(kind, &rows).unwrap();
    let bad = d.mismatches(&reference.decomposition);
    assert!(bad.is_empty(), "{} decomposition: {bad:?}", kind.name());
    let g = load_group_data().unwrap();
    for (i, m) in &d.rows {
        let v = module_violations(g, kind.module_shape(), m);
        assert!(v.is_empty(), "{} row {i}: {v:?}", kind.name());
    }
}

#[test]
fn eta_inverse_block_and_fock_modules() {
    assert_block(TableKind::EtaInverse);
}

#[test]
fn mock_block_and_k_modules() {
    assert_block(TableKind::Mock);
}

#[test]
fn jacobi_blocks_and_virtual_modules() {
    assert_block(TableKind::JacobiOdd);
    assert_block(TableKind::JacobiEven);
}

#[test]
fn spot_values() {
    let t = coefficient_table(TableKind::EtaInverse, &[0, 1, 2, 3, 4]).unwrap();
    let col = |j: usize| t.rows.iter().map(|(_, v)| v[j].clone()).collect::<Vec<_>>();
    assert_eq!(col(0), [24, 324, 3200, 25650, 176256].map(int));
    assert_eq!(col(1)[..4], [8, 52, 256, 1122].map(int));
    let m = coefficient_table(TableKind::Mock, &(1..=9).collect::<Vec<_>>()).unwrap();
    let h1a: Vec<_> = m.rows.iter().map(|(_, v)| v[0].clone()).collect();
    assert_eq!(h1a, [90, 462, 1540, 4554, 11592, 27830, 61686, 131100, 265650].map(int));
    let odd = coefficient_table(TableKind::JacobiOdd, &[1]).unwrap();
    let even = coefficient_table(TableKind::JacobiEven, &[0, 1]).unwrap();
    let col_2b = load_group_data().unwrap().table.column_index("2B").unwrap();
    assert_eq!(odd.rows[0].1[0], int(-128));
    assert_eq!(even.rows[1].1[0], int(216));
    assert_eq!(even.rows[0].1[col_2b], int(-4));
}

/// Rational characters, where non-polar coefficients must be even.
fn rational_class(label: &str) -> bool {
    !["7AB", "14AB", "15AB", "21AB", "23AB"].contains(&label)
}

#[test]
fn mock_form_coefficients() {
    let forms = all_mock_forms(12).unwrap();
    assert_eq!(forms.len(), 21);
    for f in &forms {
        assert_eq!(f.coefficient(0).unwrap(), int(-2), "{}", f.label);
        for n in 1..=12 {
            let c = f.coefficient(n).unwrap();
            assert!(c.is_integer(), "{} n={n}", f.label);
            if rational_class(&f.label) {
                assert!(is_even_integer(&c), "{} n={n}: {c}", f.label);
            }
        }
    }
}

#[test]
fn paired_columns_are_identical() {
    let g = load_group_data().unwrap();
    let t = coefficient_table(TableKind::Mock, &[1, 2, 3]).unwrap();
    for (a, b) in [("7A", "7B"), ("14A", "14B"), ("15A", "15B"), ("21A", "21B"), ("23A", "23B")] {
        let (i, j) = (g.table.column_index(a).unwrap(), g.table.column_index(b).unwrap());
        for (_, row) in &t.rows {
            assert_eq!(row[i], row[j], "{a} vs {b}");
        }
    }
}

#[test]
fn k_modules_stay_paired_beyond_the_table() {
    let g = load_group_data().unwrap();
    let d = decomposition_table(TableKind::Mock, &(1..=12).collect::<Vec<_>>()).unwrap();
    for (i, m) in &d.rows {
        let v = module_violations(g, ModuleShape::PairedEven, m);
        assert!(v.is_empty(), "K_{i}: {v:?}");
    }
}
