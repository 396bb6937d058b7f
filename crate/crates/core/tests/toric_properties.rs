use std::collections::HashSet;

use proptest::prelude::*;
use toric_core::bounds::hansen_params;
use toric_core::code::{min_distance, Method, DEFAULT_WORK_CAP};
use toric_core::corpus::{build_row, golden, TableId};
use toric_core::toric_code::{hansen_code, HansenCase};
use toric_core::{build, Divisor, Field, ToricCodeSpec};

const ORDERS: [u32; 5] = [3, 4, 5, 7, 8];

fn fans() -> Vec<toric_core::Fan> {
    TableId::ALL.iter().filter_map(|t| t.fan()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Characters are independent on the torus exactly up to congruence mod q-1.
    #[test]
    fn torus_dimension_counts_exponent_classes(
        fi in 0usize..16,
        qi in 0..ORDERS.len(),
        coeffs in prop::collection::vec(-2i64..=4, 4),
    ) {
        let fans = fans();
        let fan = fans[fi % fans.len()].clone();
        let field = Field::with_order(ORDERS[qi]).unwrap();
        let q1 = field.order() as i64 - 1;
        let div = Divisor::new(coeffs[..fan.len()].to_vec());
        let Ok(spec) = ToricCodeSpec::torus(field, fan, div) else { return Ok(()) };
        let classes: HashSet<(i64, i64)> =
            spec.basis().iter().map(|a| (a[0].rem_euclid(q1), a[1].rem_euclid(q1))).collect();
        let tc = build(spec).unwrap();
        prop_assert!(tc.k() <= tc.kc);
        prop_assert_eq!(tc.k(), classes.len());
        prop_assert_eq!(tc.injective, classes.len() == tc.kc);
    }

    #[test]
    fn point_order_does_not_change_parameters(row_pick in 0usize..64, seed in any::<u64>()) {
        let rows: Vec<_> = [TableId::Fan1, TableId::Fan2M3]
            .iter()
            .flat_map(|&t| golden(t).into_iter().map(move |r| (t, r)))
            .filter(|(_, r)| r.n <= 36 && r.k <= 6)
            .collect();
        let (table, row) = &rows[row_pick % rows.len()];
        let base = build_row(*table, row).unwrap();
        let tc = base.toric().unwrap();
        let n = tc.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let other = build(tc.spec.permuted(&perm).unwrap()).unwrap();
        prop_assert_eq!(other.n(), n);
        prop_assert_eq!(other.k(), tc.k());
        prop_assert_eq!(other.evaluation.to_rows(), tc.evaluation.select_columns(&perm).to_rows());
        let d0 = min_distance(&tc.code, Method::Auto, DEFAULT_WORK_CAP).unwrap().d;
        let d1 = min_distance(&other.code, Method::Auto, DEFAULT_WORK_CAP).unwrap().d;
        prop_assert_eq!(d0, d1);
    }
}

#[test]
fn table_rows_free_of_collisions_are_injective() {
    let mut checked = 0;
    for table in TableId::ALL {
        for row in golden(table) {
            let Ok(code) = build_row(table, &row) else { continue };
            let Some(tc) = code.toric() else { continue };
            if tc.warnings.is_empty() {
                assert_eq!(tc.k(), tc.kc, "{table} q={} {}", row.q, row.params);
                checked += 1;
            } else {
                assert!(tc.k() <= tc.kc);
            }
        }
    }
    assert!(checked > 30, "only {checked} rows");
}

#[test]
fn hansen_families_match_closed_forms() {
    let cases: &[(HansenCase, u64, u64, u64)] = &[
        (HansenCase::A, 1, 0, 0),
        (HansenCase::A, 2, 0, 0),
        (HansenCase::B, 1, 0, 0),
        (HansenCase::B, 2, 0, 0),
        (HansenCase::B, 3, 0, 0),
        (HansenCase::C, 1, 1, 0),
        (HansenCase::C, 1, 2, 0),
        (HansenCase::C, 2, 3, 0),
        (HansenCase::D, 1, 1, 1),
        (HansenCase::D, 1, 2, 1),
        (HansenCase::D, 1, 1, 2),
        (HansenCase::D, 2, 1, 1),
    ];
    let mut checked = 0;
    for &q in &[5u32, 7, 8] {
        let field = Field::with_order(q).unwrap();
        for &(case, a, b, m) in cases {
            let pred = hansen_params(case, q as u64, a, b, m);
            if !pred.in_range {
                continue;
            }
            let tc = hansen_code(case, a as i64, b as i64, m as i64, &field).unwrap();
            let d = min_distance(&tc.code, Method::Auto, DEFAULT_WORK_CAP).unwrap().d;
            assert_eq!(
                (tc.n() as u64, tc.k() as u64, d as u64),
                (pred.n, pred.k, pred.d),
                "{case:?} q={q} a={a} b={b} m={m}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 25, "only {checked} in-range cases");
}
