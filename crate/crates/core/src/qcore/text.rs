//! Plain-text density matrices: four lines, four whitespace-separated
//! `re+imj` entries per line, row-major. Numbers use Rust's shortest
//! round-trip formatting, so a written matrix parses back bit-exactly.

use super::linalg::{c, Mat4, C64};
use crate::error::{Error, Result};

pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let body = s
        .strip_suffix('j')
        .ok_or_else(|| Error::Parse(format!("entry {s:?} does not end in 'j'")))?;
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
        })
        .ok_or_else(|| Error::Parse(format!("entry {s:?} has no imaginary part")))?;
    let re: f64 = body[..split]
        .parse()
        .map_err(|_| Error::Parse(format!("bad real part in {s:?}")))?;
    let im: f64 = body[split..]
        .parse()
        .map_err(|_| Error::Parse(format!("bad imaginary part in {s:?}")))?;
    Ok(c(re, im))
}

pub fn format_matrix(m: &Mat4) -> String {
    let mut out = String::new();
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|col| format_complex(m[(r, col)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<Mat4> {
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if rows.len() != 4 {
        return Err(Error::Parse(format!("expected 4 rows, found {}", rows.len())));
    }
    let mut m = Mat4::zeros();
    for (r, line) in rows.iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != 4 {
            return Err(Error::Parse(format!(
                "row {r} has {} entries, expected 4",
                entries.len()
            )));
        }
        for (col, e) in entries.iter().enumerate() {
            m[(r, col)] = parse_complex(e)?;
        }
    }
    Ok(m)
}
