//! Complex literals on the command line.
//!
//! ```text
//! complex  = real [ sign [ ureal ] "i" ] | [ sign ] [ ureal ] "i"
//! real     = [ sign ] ureal
//! ureal    = digits [ "." digits ] [ ("e" | "E") [ sign ] digits ]
//! sign     = "+" | "-"
//! ```
//!
//! Examples: `0.5+14.1347i`, `2`, `-1e-3-2i`, `3i`, `-i`.

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(t, text)?, 0.0));
    };
    let split = body
        .char_indices()
        .filter(|&(k, ch)| k > 0 && (ch == '+' || ch == '-'))
        .filter(|&(k, _)| !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .next_back();
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k], text)?, parse_imag(&body[k..], text)?)),
        None => Ok(Complex64::new(0.0, parse_imag(body, text)?)),
    }
}

fn parse_imag(coeff: &str, whole: &str) -> Result<f64, String> {
    match coeff {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(coeff, whole),
    }
}

fn parse_real(part: &str, whole: &str) -> Result<f64, String> {
    let ok = part
        .trim_start_matches(['+', '-'])
        .chars()
        .next()
        .is_some_and(|ch| ch.is_ascii_digit() || ch == '.');
    match part.parse::<f64>() {
        Ok(v) if ok && v.is_finite() => Ok(v),
        _ => Err(format!("invalid complex literal '{whole}' (expected a+bi)")),
    }
}

/// Rounds to 15 significant digits and prints the shortest form of the result.
pub fn format_real(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".into()
    } else {
        format!("{rounded}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format_real(z.re);
    }
    let im = format_real(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{im}i", format_real(z.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("0.5+14.25i"), Ok(c(0.5, 14.25)));
        assert_eq!(parse_complex("1-2i"), Ok(c(1.0, -2.0)));
        assert_eq!(parse_complex("-1e-3-2.5E+1i"), Ok(c(-1e-3, -25.0)));
        assert_eq!(parse_complex("2"), Ok(c(2.0, 0.0)));
        assert_eq!(parse_complex("-3i"), Ok(c(0.0, -3.0)));
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("0+0i"), Ok(c(0.0, 0.0)));
        assert_eq!(parse_complex("1e5"), Ok(c(1e5, 0.0)));
    }

    #[test]
    fn rejected_forms() {
        for bad in ["", "abc", "1+2j", "1+2i3", "inf", "nan+1i", "1++2i", "--1", "1+i+i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_real(23.999999999999996), "24");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_complex(c(1.0, -0.25)), "1-0.25i");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333333");
    }
}
