use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use symdiff_core::linalg_exact::{intersect_rowspan_coords, rank, RationalMatrix};

/// Plain Gauss-Jordan over Q, kept independent of the Bareiss path.
fn reference_rank(rows: &[Vec<i64>], cols: usize) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = BigRational::one() / a[r][c].clone();
        let pivot: Vec<BigRational> = a[r].iter().map(|x| x * &inv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        a[r] = pivot;
        r += 1;
    }
    r
}

fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        // small entries make rank deficiency common
        (
            Just(c),
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r),
        )
    })
}

fn build(cols: usize, rows: &[Vec<i64>]) -> RationalMatrix {
    RationalMatrix::from_integer_rows(cols, rows).unwrap()
}

proptest! {
    #[test]
    fn rank_matches_reference((cols, rows) in matrix_strategy()) {
        prop_assert_eq!(rank(&build(cols, &rows)), reference_rank(&rows, cols));
    }

    #[test]
    fn rank_of_transpose((cols, rows) in matrix_strategy()) {
        let m = build(cols, &rows);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert!(rank(&m) <= rows.len().min(cols));
    }

    #[test]
    fn full_coordinate_set_gives_rank((cols, rows) in matrix_strategy()) {
        let m = build(cols, &rows);
        let all: BTreeSet<usize> = (0..cols).collect();
        prop_assert_eq!(intersect_rowspan_coords(&m, &all).unwrap(), rank(&m));
    }

    #[test]
    fn intersection_invariant_under_row_operations(
        (cols, rows) in matrix_strategy(),
        mask in proptest::collection::vec(any::<bool>(), 6),
        scale in proptest::collection::vec((1i64..5, 1i64..5, any::<bool>()), 6),
        rot in 0usize..6,
    ) {
        let coords: BTreeSet<usize> = (0..cols).filter(|&j| mask[j]).collect();
        let base = intersect_rowspan_coords(&build(cols, &rows), &coords).unwrap();
        prop_assert!(base + cols >= rank(&build(cols, &rows)) + coords.len());

        let mut permuted = rows.clone();
        permuted.rotate_left(rot % rows.len());
        prop_assert_eq!(intersect_rowspan_coords(&build(cols, &permuted), &coords).unwrap(), base);

        let scaled: Vec<BigRational> = rows
            .iter()
            .zip(&scale)
            .flat_map(|(r, &(n, d, neg))| {
                let f = BigRational::new(BigInt::from(if neg { -n } else { n }), BigInt::from(d));
                r.iter().map(move |&x| BigRational::from_integer(x.into()) * &f).collect::<Vec<_>>()
            })
            .collect();
        let scaled = RationalMatrix::new(rows.len(), cols, scaled).unwrap();
        prop_assert_eq!(intersect_rowspan_coords(&scaled, &coords).unwrap(), base);
    }
}
