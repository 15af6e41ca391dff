//! The rank oracle against the closed form for `dim G`, block by block.

use symdiff_core::local_invariants::{
    block_defect, dim_g_closed, dim_g_oracle, dim_g_oracle_with, q_of_m, q_of_m_oracle_with, Method,
};
use symdiff_core::monomials::{h_z, valid_blocks, BlockIndex, PullbackCoeffs};

#[test]
fn oracle_agrees_with_closed_form_up_to_degree_12() {
    let mut checked = 0;
    for m in 1..=12 {
        let coeffs = PullbackCoeffs::new(m);
        for b in valid_blocks(m, 3 * m) {
            let oracle = dim_g_oracle_with(b, &coeffs).unwrap();
            assert_eq!(oracle, dim_g_closed(b), "{b}");
            assert_eq!(h_z(b) - oracle, block_defect(b), "{b}");
            checked += 1;
        }
    }
    assert!(checked > 1500, "only {checked} blocks");
}

#[test]
fn oracle_handles_out_of_range_blocks() {
    for (k, i, m) in [(-3, 0, 3), (-1, 2, 2), (9, 2, 4)] {
        let b = BlockIndex::new(k, i, m).unwrap();
        assert_eq!(dim_g_oracle(b), 0);
        assert_eq!(dim_g_closed(b), 0);
    }
}

#[test]
fn q_agrees_between_methods() {
    for m in 1..=14 {
        assert_eq!(
            q_of_m(m, Method::ClosedForm).unwrap().q,
            q_of_m(m, Method::RankOracle).unwrap().q,
            "m={m}"
        );
    }
}

#[test]
fn zeroed_row_is_detected() {
    for m in 1..=8 {
        for q in 0..=m {
            let mut coeffs = PullbackCoeffs::new(m);
            for l in 0..=m {
                coeffs.set(q, l, 0.into());
            }
            let caught = valid_blocks(m, 2 * m)
                .any(|b| dim_g_oracle_with(b, &coeffs).unwrap() != dim_g_closed(b));
            assert!(caught, "m={m} q={q}");
        }
    }
    let mut coeffs = PullbackCoeffs::new(3);
    for l in 0..=3 {
        coeffs.set(1, l, 0.into());
    }
    assert_ne!(
        q_of_m_oracle_with(3, &coeffs).unwrap().q,
        q_of_m(3, Method::ClosedForm).unwrap().q
    );
}

#[test]
fn single_sign_flips_keep_generic_rank() {
    // dim G depends only on the table being generic enough; one sign flip
    // does not break that, so it is not a useful fault to inject.
    for m in 1..=6 {
        for q in 0..=m {
            for l in 0..=m {
                let mut coeffs = PullbackCoeffs::new(m);
                let flipped = -coeffs.get(q, l).clone();
                coeffs.set(q, l, flipped);
                for b in valid_blocks(m, 2 * m) {
                    assert_eq!(dim_g_oracle_with(b, &coeffs).unwrap(), dim_g_closed(b));
                }
            }
        }
    }
}
