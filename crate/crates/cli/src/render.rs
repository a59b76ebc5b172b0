//! Display-layer number formatting. The library reports full precision;
//! text output rounds to 4 significant digits, matching the precision the
//! quantities are usually quoted at. `--precise` bypasses the rounding.

const DISPLAY_SIG_DIGITS: i32 = 4;

/// Formats a value at 4 significant digits, or full precision.
pub fn value(x: f64, precise: bool) -> String {
    if precise {
        return format!("{x}");
    }
    significant(x, DISPLAY_SIG_DIGITS)
}

fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(value(0.0285581, false), "0.02856");
        assert_eq!(value(0.996511, false), "0.9965");
        assert_eq!(value(285.581, false), "285.6");
        assert_eq!(value(8.22243, false), "8.222");
        assert_eq!(value(3299.07, false), "3299");
        assert_eq!(value(10.0, false), "10.00");
        assert_eq!(value(0.0, false), "0");
    }

    #[test]
    fn precise_round_trips() {
        let x = 0.028558110984234567;
        assert_eq!(
            value(x, true).parse::<f64>().unwrap().to_bits(),
            x.to_bits()
        );
    }
}
