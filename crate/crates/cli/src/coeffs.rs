//! Plain-text coefficient files: one `re im` pair per line, index 0 first.
//! Blank lines and lines starting with `#` are skipped; a lone number is
//! read as a real coefficient.

use std::fs;
use std::path::Path;

use ks_core::PowerSeries;
use num_complex::Complex64;

pub fn read(path: &Path) -> Result<PowerSeries, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse(text: &str) -> Result<PowerSeries, String> {
    let mut coeffs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format!("line {}: {s:?} is not a number", n + 1))
        };
        let c = match fields.as_slice() {
            [re] => Complex64::new(num(re)?, 0.0),
            [re, im] => Complex64::new(num(re)?, num(im)?),
            _ => return Err(format!("line {}: expected `re im`", n + 1)),
        };
        coeffs.push(c);
    }
    PowerSeries::new(coeffs).map_err(|e| e.to_string())
}
