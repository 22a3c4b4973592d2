//! Number formatting: 12 significant digits, trailing zeros trimmed
//! (C's `%.12g`). Below every test tolerance in the workspace, above
//! eigensolver noise.

/// Formats with 12 significant digits, choosing decimal or scientific form
/// the way `%g` does.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("format {:.11e} always has an e");
    let k: i32 = exp.parse().expect("exponent is an integer");
    if (-5..12).contains(&k) {
        let precision = (11 - k).max(0) as usize;
        let s = format!("{x:.precision$}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".to_string()
        } else {
            s.to_string()
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_values() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.9226), "0.9226");
        assert_eq!(sig12(-0.5), "-0.5");
        assert_eq!(sig12(0.005), "0.005");
    }

    #[test]
    fn twelve_digits_kept() {
        assert_eq!(sig12(0.922616582958), "0.922616582958");
        assert_eq!(sig12(1.584962500721156), "1.58496250072");
        assert_eq!(sig12(0.005018124385838707), "0.00501812438584");
    }

    #[test]
    fn scientific_for_extremes() {
        assert_eq!(sig12(1.5e-9), "1.5e-9");
        assert_eq!(sig12(2.5e-13), "2.5e-13");
        assert_eq!(sig12(3.0e15), "3e15");
        assert_eq!(sig12(1.5e-4), "0.00015");
    }

    #[test]
    fn round_trip_is_idempotent_at_printed_precision() {
        for &x in &[
            0.9226165829583,
            1.6499060116098556,
            -0.7273060116098556,
            0.005,
            1.0 / 3.0,
            123456.789012345,
        ] {
            let once = sig12(x);
            let back: f64 = once.parse().unwrap();
            assert_eq!(sig12(back), once, "x = {x}");
        }
    }
}
