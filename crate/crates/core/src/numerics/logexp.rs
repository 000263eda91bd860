use num_traits::Float;

/// `ln(1 + e^x)` without overflow for large `x` or loss of precision for
/// very negative `x`.
pub fn log1p_exp(x: f64) -> f64 {
    if x <= -37.0 {
        x.exp()
    } else if x <= 18.0 {
        x.exp().ln_1p()
    } else if x <= 33.3 {
        x + (-x).exp()
    } else {
        x
    }
}

/// `ln(1 - e^x)` for `x < 0`, switching between `expm1` and `log1p` at `-ln 2`.
pub fn log1m_exp(x: f64) -> f64 {
    if x > -core::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `e^x - 1` accurate near zero.
pub fn exp_m1(x: f64) -> f64 {
    x.exp_m1()
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + log1p_exp(lo - hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log1p_exp_matches_high_precision_values() {
        // ln(1 + e^x) evaluated with 30-digit arithmetic.
        let table = [
            (-3.0, 0.048587351573742058759),
            (-0.5, 0.47407698418010668087),
            (0.0, core::f64::consts::LN_2),
            (0.5, 0.97407698418010668087),
            (5.0, 5.0067153484891180686),
            (17.0, 17.000000041399376331),
            (25.0, 25.000000000013887944),
        ];
        for (x, expected) in table {
            assert!((log1p_exp(x) - expected).abs() <= 4e-16 * expected);
        }
        let x = -30.0;
        let series = f64::exp(x) - f64::exp(2.0 * x) / 2.0;
        assert!((log1p_exp(x) / series - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log1p_exp_extremes() {
        assert_eq!(log1p_exp(800.0), 800.0);
        let tiny = log1p_exp(-800.0);
        assert!(tiny >= 0.0 && tiny < 1e-300);
        assert!((log1p_exp(-50.0) / f64::exp(-50.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log1m_exp_both_branches() {
        for &x in &[-1e-12, -1e-4, -1e-3] {
            let series = (-x).ln() + x / 2.0 + x * x / 24.0;
            assert!((log1m_exp(x) - series).abs() < 1e-14 * series.abs());
        }
        for &x in &[-0.3, -0.7, -3.0] {
            let direct = (1.0 - f64::exp(x)).ln();
            assert!((log1m_exp(x) - direct).abs() < 1e-14 * direct.abs());
        }
        assert_eq!(log1m_exp(-40.0), -f64::exp(-40.0));
    }

    #[test]
    fn log_add_exp_is_symmetric() {
        let s = log_add_exp(3.0, 700.0);
        assert_eq!(s, log_add_exp(700.0, 3.0));
        assert!((log_add_exp(0.0, 0.0) - core::f64::consts::LN_2).abs() < 1e-16);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
    }
}
