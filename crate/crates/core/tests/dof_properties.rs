use proptest::prelude::*;

use noma_uav::dof::{self, has_feasible_size_assignment, max_dof};

proptest! {
    #[test]
    fn one_more_stream_is_never_feasible(n in 2usize..=10, m_frac in 0.0f64..1.0) {
        let m = 1 + ((n - 1) as f64 * m_frac) as usize;
        prop_assume!(m < n);
        let j = max_dof(n, m).unwrap();
        prop_assert!(has_feasible_size_assignment(n, m, j));
        prop_assert!(!has_feasible_size_assignment(n, m, j + 1));
    }

    #[test]
    fn dof_is_positive_and_below_antenna_count(n in 3usize..=64, m_frac in 0.0f64..1.0) {
        let m = 1 + ((n - 1) as f64 * m_frac) as usize;
        prop_assume!(m >= 2 && m < n);
        let j = max_dof(n, m).unwrap();
        prop_assert!(j >= 1 && j < m);
    }

    #[test]
    fn balanced_sizes_are_sorted_and_cover_all_gbs(n in 2usize..=64, j_frac in 0.0f64..1.0) {
        let j = 1 + ((n - 1) as f64 * j_frac) as usize;
        let r = dof::group_sizes(n, j).unwrap();
        prop_assert_eq!(r.group_sizes.len(), j);
        prop_assert_eq!(r.group_sizes.iter().sum::<usize>(), n);
        prop_assert!(r.group_sizes.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(r.group_sizes[j - 1] - r.group_sizes[0] <= 1);
    }
}

#[test]
fn single_antenna_gives_one_stream() {
    for n in 2..=20 {
        assert_eq!(max_dof(n, 1).unwrap(), 1);
    }
}

#[test]
fn more_antennas_than_gbs_is_refused() {
    assert!(max_dof(4, 4).is_err());
    assert!(max_dof(4, 9).is_err());
    assert!(max_dof(4, 0).is_err());
}

#[test]
fn converse_holds_exhaustively_for_small_networks() {
    for n in 2..=8 {
        for m in 1..n {
            let j = max_dof(n, m).unwrap();
            assert!(!has_feasible_size_assignment(n, m, j + 1), "N={n} M={m}");
        }
    }
}
