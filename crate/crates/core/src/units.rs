//! dB / dBm conversions.

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dBm to watts. `-inf` maps to 0 W.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(23.0) - 0.199_526_231_496_888).abs() < 1e-12);
        assert_eq!(dbm_to_watts(f64::NEG_INFINITY), 0.0);
        assert!((watts_to_dbm(1e-3)).abs() < 1e-12);
        assert!((linear_to_db(db_to_linear(-40.0)) + 40.0).abs() < 1e-12);
    }
}
