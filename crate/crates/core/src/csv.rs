//! Time-series CSV output.
//!
//! Header `t,x,xd,xerr,v,PL,u,uhat,d,dhat,e,Ps`, one row per control sample,
//! LF line endings, numbers formatted like C's `%.12g`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::{Row, SimResult};

pub const HEADER: &str = "t,x,xd,xerr,v,PL,u,uhat,d,dhat,e,Ps";

/// Significant digits written per value.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn write_csv(result: &SimResult<f64>, path: &Path) -> Result<()> {
    let io_err = |e: io::Error| Error::Io { path: path.display().to_string(), reason: e.to_string() };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_rows(&result.rows, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn write_rows<W: Write>(rows: &[Row<f64>], w: &mut W) -> io::Result<()> {
    w.write_all(HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    let mut line = String::with_capacity(256);
    for r in rows {
        line.clear();
        let values = [r.t, r.x, r.xd, r.xerr, r.v, r.pl, r.u, r.u_hat, r.d, r.d_hat, r.e, r.ps];
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_g(*v, SIGNIFICANT_DIGITS));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// `printf("%.{digits}g")`: shortest of fixed/exponent notation, trailing
/// zeros removed. Negative zero prints as `0`.
pub fn format_g(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g() {
        // reference strings from C printf("%.12g")
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (-1.1, "-1.1"),
            (7.0e6, "7000000"),
            (1.0e-5, "1e-05"),
            (1.1e-5, "1.1e-05"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (-0.0, "0"),
            (9.9999999999995, "10"),
            (1.5e300, "1.5e+300"),
        ];
        for (v, s) in cases {
            assert_eq!(format_g(v, 12), s, "{v}");
        }
    }

    #[test]
    fn header_only_for_no_rows() {
        let mut buf = Vec::new();
        write_rows(&[], &mut buf).unwrap();
        assert_eq!(buf, b"t,x,xd,xerr,v,PL,u,uhat,d,dhat,e,Ps\n");
    }

    proptest! {
        #[test]
        fn twelve_digit_round_trip(m in -1.0f64..1.0, e in -30i32..30) {
            let v = m * 10f64.powi(e);
            prop_assume!(v != 0.0);
            let back: f64 = format_g(v, 12).parse().unwrap();
            let unit = 10f64.powi(v.abs().log10().floor() as i32 - 11);
            prop_assert!((back - v).abs() <= unit, "{v} -> {back}");
        }
    }
}
