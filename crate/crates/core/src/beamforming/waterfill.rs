//! Sum-power water-filling over per-stream unit-power SINRs.

/// Maximizes `sum_j log2(1 + gamma_j p_j)` subject to `sum_j p_j <= P`,
/// `p_j >= 0`.
///
/// The optimum is `p_j = max(0, mu - 1/gamma_j)` with the water level `mu`
/// chosen so that the powers sum to `P`. Streams with `gamma_j = 0` get nothing.
pub fn waterfill(unit_gammas: &[f64], total_power: f64) -> Vec<f64> {
    match water_level(unit_gammas, total_power) {
        Some(mu) => unit_gammas
            .iter()
            .map(|&g| if g > 0.0 { (mu - 1.0 / g).max(0.0) } else { 0.0 })
            .collect(),
        None => vec![0.0; unit_gammas.len()],
    }
}

/// Water level `mu`, or `None` when no power can be spent usefully
/// (`P = 0` or every gamma is zero).
pub fn water_level(unit_gammas: &[f64], total_power: f64) -> Option<f64> {
    if !(total_power > 0.0) {
        return None;
    }
    // Inverse gains of usable streams, best first.
    let mut floors: Vec<f64> = unit_gammas
        .iter()
        .filter(|&&g| g > 0.0 && g.is_finite())
        .map(|&g| 1.0 / g)
        .collect();
    if floors.is_empty() {
        return None;
    }
    floors.sort_by(f64::total_cmp);

    // Grow the active set while the next floor lies below the water level.
    let mut sum = 0.0;
    let mut mu = 0.0;
    for (k, &floor) in floors.iter().enumerate() {
        let candidate = (total_power + sum + floor) / (k + 1) as f64;
        if k > 0 && candidate <= floor {
            break;
        }
        sum += floor;
        mu = candidate;
    }
    Some(mu)
}

/// `sum_j log2(1 + gamma_j p_j)`.
pub fn sum_rate(unit_gammas: &[f64], powers: &[f64]) -> f64 {
    unit_gammas
        .iter()
        .zip(powers)
        .map(|(&g, &p)| (1.0 + g * p).log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn equal_gains_split_evenly() {
        let p = waterfill(&[3.0; 4], 2.0);
        for x in p {
            assert_relative_eq!(x, 0.5, max_relative = 1e-15);
        }
    }

    #[test]
    fn single_stream_takes_everything() {
        assert_eq!(waterfill(&[0.7], 5.0), vec![5.0]);
    }

    #[test]
    fn two_stream_closed_form() {
        assert_relative_eq!(water_level(&[2.0, 1.0], 1.0).unwrap(), 1.25, max_relative = 1e-15);
        let p = waterfill(&[2.0, 1.0], 1.0);
        assert_relative_eq!(p[0], 0.75, max_relative = 1e-15);
        assert_relative_eq!(p[1], 0.25, max_relative = 1e-15);
    }

    #[test]
    fn weak_stream_is_switched_off() {
        // Water level 0.2 with one stream stays below the second floor 1/0.1.
        let p = waterfill(&[10.0, 0.1], 0.1);
        assert_relative_eq!(p[0], 0.1, max_relative = 1e-15);
        assert_eq!(p[1], 0.0);
    }

    #[test]
    fn zero_power_and_zero_gains() {
        assert_eq!(waterfill(&[1.0, 2.0], 0.0), vec![0.0, 0.0]);
        assert_eq!(waterfill(&[0.0, 0.0], 1.0), vec![0.0, 0.0]);
        let p = waterfill(&[0.0, 4.0], 1.0);
        assert_eq!(p, vec![0.0, 1.0]);
        assert!(waterfill(&[], 1.0).is_empty());
    }

    proptest! {
        #[test]
        fn budget_is_spent_and_kkt_holds(
            gammas in prop::collection::vec(1e-3f64..1e3, 1..8),
            power in 1e-3f64..1e3,
        ) {
            let p = waterfill(&gammas, power);
            let total: f64 = p.iter().sum();
            prop_assert!((total - power).abs() <= 1e-12 * power);
            let mu = water_level(&gammas, power).unwrap();
            for (&g, &x) in gammas.iter().zip(&p) {
                prop_assert!(x >= 0.0);
                if x > 0.0 {
                    // Marginal gain 1/(1/g + p) equals 1/mu on the active set.
                    prop_assert!((1.0 / g + x - mu).abs() <= 1e-12 * mu);
                } else {
                    prop_assert!(1.0 / g >= mu * (1.0 - 1e-12));
                }
            }
        }
    }
}
