use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Seventeen significant digits, enough to round-trip any `f64`.
/// Non-finite values render as `NaN`, `inf` and `-inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Like [`num`], but `null` for non-finite values.
pub fn json_num(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        "null".to_string()
    }
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Parses a number written by [`num`].
pub fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::invalid(format!("not a number: '{s}'")))
}

/// Writes `lines` joined with LF (and a trailing LF).
pub fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for line in lines {
        w.write_all(line.as_bytes())
            .and_then(|_| w.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Rows of a CSV file with the expected header (no quoting is ever
/// written, so none is parsed).
pub fn read_csv(path: &Path, header: &str) -> Result<Vec<Vec<String>>> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let found = lines.next().unwrap_or_default();
    if found != header {
        return Err(Error::invalid(format!(
            "{}: expected header '{header}', found '{found}'",
            path.display()
        )));
    }
    let width = header.split(',').count();
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let cells: Vec<String> = l.split(',').map(str::to_string).collect();
            if cells.len() == width {
                Ok(cells)
            } else {
                Err(Error::invalid(format!(
                    "{}: row '{l}' has {} cells, expected {width}",
                    path.display(),
                    cells.len()
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            0.0,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(parse_num(&num(x)).unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(0.01), "1.0000000000000000e-2");
        assert!(parse_num(&num(f64::NAN)).unwrap().is_nan());
        assert_eq!(json_num(f64::INFINITY), "null");
    }

    #[test]
    fn strings_are_escaped() {
        assert_eq!(json_str("a\"b\n"), "\"a\\\"b\\n\"");
    }
}
