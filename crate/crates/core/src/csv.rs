//! Plain-text table output: comma separated, LF line endings, numbers with
//! 12 significant digits.

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` like C's `%.12g`: shortest of fixed or scientific notation,
/// trailing zeros removed.
pub fn format_significant(x: f64) -> String {
    format_with_digits(x, SIGNIFICANT_DIGITS)
}

pub fn format_with_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders a header line and rows of numbers.
pub fn write_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(format_significant).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parses a numeric table; returns the header names and the rows.
pub fn read_table(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table".into()))?
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, header has {}",
                lineno + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(1.0), "1");
        assert_eq!(format_significant(0.5), "0.5");
        assert_eq!(format_significant(1.0 / 3.0), "0.333333333333");
        assert_eq!(
            format_significant(std::f64::consts::PI * 10.0),
            "31.4159265359"
        );
        assert_eq!(format_significant(1e-7), "1e-07");
        assert_eq!(format_significant(-2.5e-9), "-2.5e-09");
        assert_eq!(format_significant(1.5e13), "1.5e+13");
        assert_eq!(format_significant(123456789012.0), "123456789012");
        assert_eq!(format_significant(0.999999999999951), "1");
        assert_eq!(format_significant(4.2832), "4.2832");
    }

    #[test]
    fn table_round_trip() {
        let text = write_table(&["t", "P"], vec![vec![0.0, 1.0], vec![0.25, 0.75]]);
        assert_eq!(text, "t,P\n0,1\n0.25,0.75\n");
        let (h, rows) = read_table(&text).unwrap();
        assert_eq!(h, ["t", "P"]);
        assert_eq!(rows, vec![vec![0.0, 1.0], vec![0.25, 0.75]]);
        assert!(read_table("t,P\n1,2,3\n").is_err());
        assert!(read_table("t,P\n1,x\n").is_err());
    }

    proptest! {
        #[test]
        fn twelve_digit_round_trip(x in -1e6f64..1e6) {
            let back: f64 = format_significant(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
            // formatting is idempotent after one pass
            prop_assert_eq!(format_significant(back), format_significant(x));
        }
    }
}
