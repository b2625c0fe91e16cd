//! Deterministic number formatting for CSV/JSON emission.

/// Format with 12 significant digits, `%g`-style: plain decimal notation for
/// moderate exponents, scientific otherwise, trailing zeros trimmed. The same
/// input always yields the same bytes, so emitted files diff cleanly.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always contains an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..12).contains(&exp) {
        let prec = (11 - exp).max(0) as usize;
        let mut out = format!("{:.*}", prec, x);
        if out.contains('.') {
            while out.ends_with('0') {
                out.pop();
            }
            if out.ends_with('.') {
                out.pop();
            }
        }
        if out == "-0" {
            out = "0".to_string();
        }
        out
    } else {
        let mut m = mantissa.to_string();
        if m.contains('.') {
            while m.ends_with('0') {
                m.pop();
            }
            if m.ends_with('.') {
                m.pop();
            }
        }
        format!("{m}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn formats_representative_values() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(-2.0 / std::f64::consts::PI), "-0.636619772368");
        assert_eq!(sig12(1.0e15), "1e15");
        assert_eq!(sig12(1.23e-7), "1.23e-7");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(123456789012345.0), "1.23456789012e14");
        assert_eq!(sig12(0.000123456789012345), "0.000123456789012");
    }
}
