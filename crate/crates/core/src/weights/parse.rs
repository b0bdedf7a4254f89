//! Weight specification grammar:
//!
//! ```text
//! pow(c, alpha)
//! piece(b1, b2, ...; pow(c1, a1), pow(c2, a2), ...)
//! table@path/to/file.csv        # CSV with header `t,value`
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Weight;

fn num(s: &str) -> Result<f64> {
    let s = s.trim();
    s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: '{s}'")))
}

fn parse_pow(s: &str) -> Result<(f64, f64)> {
    let s = s.trim();
    let inner = s
        .strip_prefix("pow(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected pow(c,alpha), got '{s}'")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("pow takes two arguments, got '{s}'")));
    }
    Ok((num(parts[0])?, num(parts[1])?))
}

/// Splits `pow(a,b), pow(c,d)` at the commas between calls.
fn split_calls(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

/// Parses a weight specification.
pub fn parse_weight<T: Scalar>(spec: &str) -> Result<Weight<T>> {
    let s = spec.trim();
    if let Some(path) = s.strip_prefix("table@") {
        let (grid, values) = read_table_csv(Path::new(path.trim()))?;
        return Weight::table(grid, values);
    }
    if s.starts_with("pow(") {
        let (c, a) = parse_pow(s)?;
        return Weight::power(T::lit(c), T::lit(a));
    }
    if let Some(inner) = s.strip_prefix("piece(").and_then(|r| r.strip_suffix(')')) {
        let (bp, segs) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("piece(...) needs ';' between breakpoints and segments: '{s}'")))?;
        let breaks = bp
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| num(x).map(T::lit))
            .collect::<Result<Vec<T>>>()?;
        let segments = split_calls(segs)
            .into_iter()
            .map(|c| parse_pow(c).map(|(c, a)| (T::lit(c), T::lit(a))))
            .collect::<Result<Vec<_>>>()?;
        return Weight::piecewise(breaks, segments);
    }
    Err(Error::Parse(format!("unrecognized weight specification '{s}'")))
}

/// Reads a `t,value` CSV with strictly increasing `t`.
pub fn read_table_csv<T: Scalar>(path: &Path) -> Result<(Vec<T>, Vec<T>)> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    if cols != ["t", "value"] {
        return Err(Error::Parse(format!("table header must be 't,value', got '{}'", cols.join(","))));
    }
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::Parse("table rows need exactly two fields".into()));
        }
        grid.push(T::lit(num(&rec[0])?));
        values.push(T::lit(num(&rec[1])?));
    }
    Ok((grid, values))
}
