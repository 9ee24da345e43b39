//! Exact rational scalars.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Exact rational number used for slopes, expansion gaps and `δ`.
pub type Rational = Ratio<i128>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n as i128)
}

/// Parses `p/q`, `p`, or a decimal literal such as `0.25`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
            return Err(Error::MalformedInput(format!("bad rational {s:?}")));
        }
        let negative = whole.starts_with('-');
        let whole: i128 = match whole.trim_start_matches(['-', '+']) {
            "" => 0,
            w => w
                .parse()
                .map_err(|_| Error::MalformedInput(format!("bad rational {s:?}")))?,
        };
        let denom = 10i128.pow(frac.len() as u32);
        let frac: i128 = frac.parse().unwrap_or(0);
        let value = Rational::new(whole * denom + frac, denom);
        return Ok(if negative { -value } else { value });
    }
    let value: Rational = s
        .parse()
        .map_err(|_| Error::MalformedInput(format!("bad rational {s:?}")))?;
    Ok(value)
}

/// Parses a comma-separated list of rationals, e.g. `1/10,2/10,3/10`.
pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse)
        .collect()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `Display` for a rational: `3`, `-7/2`.
pub fn show(r: &Rational) -> String {
    r.to_string()
}

/// Formats a float with 12 significant digits, trimming trailing zeros.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{:.11e}", x);
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = trim_zeros(&s);
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse("-1.5").unwrap(), Rational::new(-3, 2));
        assert!(parse("abc").is_err());
        assert_eq!(parse_list("1/10,2/10").unwrap().len(), 2);
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_float(-1.0), "-1");
        assert_eq!(fmt_float(5.000000000000002), "5");
        assert_eq!(fmt_float(6.854101966249685), "6.85410196625");
        assert_eq!(fmt_float(0.1604), "0.1604");
        assert_eq!(fmt_float(1.5e-20), "1.5e-20");
    }
}
