use crate::{Error, Result, Scalar};

/// Formats a scalar with 17 significant digits, enough to round-trip `f64`.
pub fn format_real<S: Scalar>(x: S) -> String {
    format!("{:.16e}", x.to_real())
}

/// Formats a scalar with 15 significant digits for result tables, where
/// readability beats bit-exact round-tripping.
pub fn format_real_result<S: Scalar>(x: S) -> String {
    format!("{:.14e}", x.to_real())
}

/// Parses a scalar written by [`format_real`] or plain decimal text.
pub fn parse_real<S: Scalar>(line: usize, field: &str, text: &str) -> Result<S> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{field}: expected a real, got {text:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("{field}: non-finite value")));
    }
    Ok(S::from_real(v))
}

/// Parses an unsigned integer field with a line-numbered diagnostic.
pub fn parse_int<T: std::str::FromStr>(line: usize, field: &str, text: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{field}: expected an integer, got {text:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_f64_exactly() {
        for &x in &[0.5f64, 1.0 / 3.0, -1234.5678e-9, 1e5 + 0.1] {
            let s = format_real(x);
            let back: f64 = parse_real(1, "x", &s).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn rejects_junk() {
        assert!(parse_real::<f64>(3, "pos", "abc").is_err());
        assert!(parse_int::<u32>(7, "id", "1.5").is_err());
    }
}
