//! Number formatting for terminal output.

/// Twelve significant digits: fixed notation for decimal exponents in
/// `-4..12`, scientific otherwise. Zero prints as `0`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // Rounding decides the exponent, so take it from the scientific form.
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("scientific notation") + 1..]
        .parse()
        .expect("integer exponent");
    if (-4..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}

/// Shortest round-trip decimal.
pub fn short(x: f64) -> String {
    x.to_string()
}
