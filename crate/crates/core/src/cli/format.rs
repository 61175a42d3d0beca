//! Locale-free number formatting and CSV assembly.

/// `%.12g`: 12 significant digits, trailing zeros removed, exponent form
/// outside [1e-4, 1e12).
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exponent) {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exponent.abs())
    } else {
        let decimals = (DIGITS - 1 - exponent) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

/// Rounds to the 12 significant digits printed by [`fmt_g`].
pub fn round_g(x: f64) -> f64 {
    if x.is_finite() {
        fmt_g(x).parse().unwrap_or(x)
    } else {
        x
    }
}

pub fn round_opt(x: Option<f64>) -> Option<f64> {
    x.map(round_g)
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_c_printf() {
        let cases = [
            (-0.5, "-0.5"),
            (-0.125, "-0.125"),
            (1.0, "1"),
            (100.0, "100"),
            (12.566370614359172, "12.5663706144"),
            (1.0 / 3.0, "0.333333333333"),
            (1e-5, "1e-05"),
            (-2.5e-7, "-2.5e-07"),
            (1.2345e15, "1.2345e+15"),
            (999999999999.5, "1e+12"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }

    #[test]
    fn round_trip_is_stable() {
        for x in [-0.4999999999871, 6.318893543012, 1e-9 / 7.0] {
            assert_eq!(fmt_g(round_g(x)), fmt_g(x));
        }
    }
}
