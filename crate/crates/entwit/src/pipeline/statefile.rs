//! Hand-editable state files: 16 lines of 16 comma-separated complex
//! entries in `re±imj` form.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Operator, DIM};

pub fn read_state_file(path: &Path) -> Result<Operator> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn parse_state(text: &str) -> Result<Operator> {
    let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if rows.len() != DIM {
        return Err(Error::Malformed {
            what: "state file",
            detail: format!("expected {DIM} rows, found {}", rows.len()),
        });
    }
    let mut mat = Operator::zeros(DIM, DIM);
    for (i, row) in rows.iter().enumerate() {
        let entries: Vec<&str> = row.split(',').map(str::trim).collect();
        if entries.len() != DIM {
            return Err(Error::Malformed {
                what: "state file",
                detail: format!("row {} has {} entries, expected {DIM}", i + 1, entries.len()),
            });
        }
        for (j, entry) in entries.iter().enumerate() {
            mat[(i, j)] = parse_complex(entry).ok_or_else(|| Error::Malformed {
                what: "state file",
                detail: format!("bad complex entry {entry:?} at row {}, column {}", i + 1, j + 1),
            })?;
        }
    }
    Ok(mat)
}

pub fn write_state_file(path: &Path, op: &Operator) -> Result<()> {
    std::fs::write(path, format_state(op))?;
    Ok(())
}

pub fn format_state(op: &Operator) -> String {
    let mut out = String::new();
    for i in 0..DIM {
        let row: Vec<String> = (0..DIM).map(|j| format_complex(op[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}j", z.re, -z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

/// Accepts `re`, `re+imj`, `re-imj` and bare `imj`; exponents like
/// `1.5e-3` are allowed in both parts.
fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix(['j', 'J']) {
        // split at the last +/- that is not a leading sign or an exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].trim().parse().ok()?;
                let sign = if bytes[k] as char == '-' { -1.0 } else { 1.0 };
                let im_text = body[k + 1..].trim();
                let im: f64 = if im_text.is_empty() { 1.0 } else { im_text.parse().ok()? };
                Some(Complex64::new(re, sign * im))
            }
            None => {
                let im: f64 = if body.trim().is_empty() { 1.0 } else { body.trim().parse().ok()? };
                Some(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().ok()?;
        Some(Complex64::new(re, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_complex("1.5"), Some(Complex64::new(1.5, 0.0)));
        assert_eq!(parse_complex("1.5+2j"), Some(Complex64::new(1.5, 2.0)));
        assert_eq!(parse_complex("1.5-2j"), Some(Complex64::new(1.5, -2.0)));
        assert_eq!(parse_complex("-1e-3+2e-4j"), Some(Complex64::new(-1e-3, 2e-4)));
        assert_eq!(parse_complex("3j"), Some(Complex64::new(0.0, 3.0)));
        assert_eq!(parse_complex("-0.25-0j"), Some(Complex64::new(-0.25, -0.0)));
        assert_eq!(parse_complex("garbage"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn round_trips_exactly() {
        let mat = Operator::from_fn(DIM, DIM, |i, j| {
            Complex64::new(
                (i as f64 - 3.7) / 17.0,
                if (i + j) % 2 == 0 { -(j as f64) / 13.0 } else { j as f64 / 13.0 },
            )
        });
        let parsed = parse_state(&format_state(&mat)).unwrap();
        assert_eq!(mat, parsed);
    }
}
