//! Number formatting for printed reports.

/// Significant digits printed by default.
pub const DEFAULT_SIG_DIGITS: usize = 7;

/// Formats `x` like C's `%g`: `digits` significant digits, trailing zeros
/// dropped, scientific notation outside `1e-4 <= |x| < 10^digits`. With
/// `full` set, the shortest round-trip representation is used instead.
pub fn number(x: f64, digits: usize, full: bool) -> String {
    if full {
        return format!("{x:?}");
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Exponent after rounding, so 9.9999999 becomes 1e1 rather than 9.999...
    let sci = format!("{x:.prec$e}", prec = digits - 1);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// [`number`] for optional values; `undefined` when absent.
pub fn optional(x: Option<f64>, digits: usize, full: bool) -> String {
    x.map_or_else(|| "undefined".to_string(), |v| number(v, digits, full))
}
