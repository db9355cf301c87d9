//! Number formatting shared by text and JSON output.

use std::str::FromStr;

/// Integers print without a decimal point; other values print with 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 9.007_199_254_740_992e15 {
        return format!("{}", x as i64);
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-300..=16).contains(&exponent) {
        let decimals = (16 - exponent) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number carrying the [`format_number`] text verbatim.
pub fn json_number(x: f64) -> serde_json::Number {
    serde_json::Number::from_str(&format_number(x)).expect("formatted float is valid JSON")
}
