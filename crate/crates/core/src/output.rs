//! Deterministic text formatting for CSV/JSON/SVG emission.
//!
//! All floating-point output is printed with 12 significant digits so golden
//! files are stable across runs on the same platform.

/// Format a float with 12 significant digits in scientific notation.
/// Negative zero is normalized to zero; non-finite values print as
/// `inf`, `-inf`, or `NaN` (the `-inf` spelling doubles as the serialized
/// marker for an absent constituent's total potential).
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Join a slice of floats with commas, each at 12 significant digits.
pub fn join_sig12(values: &[f64]) -> String {
    values.iter().map(|&v| sig12(v)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1.00000000000e0");
        assert_eq!(sig12(0.7310585786300049), "7.31058578630e-1");
        assert_eq!(sig12(-0.0), "0.00000000000e0");
        assert_eq!(sig12(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn joined_row() {
        assert_eq!(join_sig12(&[1.0, 0.5]), "1.00000000000e0,5.00000000000e-1");
    }
}
