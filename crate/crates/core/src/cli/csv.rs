//! Deterministic CSV output.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Formats `x` with `sig` significant digits, like C's `%g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig(*x, 6),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// A block of rows preceded by an optional `# ` comment line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub comment: Option<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(rows: Vec<Vec<Cell>>) -> Self {
        Self {
            comment: None,
            rows,
        }
    }
}

/// Renders `# metadata`, the header and every section.
pub fn render_csv(
    header: &[&str],
    sections: &[Section],
    metadata: Option<&str>,
) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let comment = |buf: &mut Vec<u8>, text: &str| {
        for line in text.lines() {
            buf.extend_from_slice(b"# ");
            buf.extend_from_slice(line.as_bytes());
            buf.push(b'\n');
        }
    };
    if let Some(m) = metadata {
        comment(&mut buf, m);
    }
    write_records(
        &mut buf,
        std::iter::once(header.iter().map(|h| h.to_string()).collect()),
    )?;
    for s in sections {
        if let Some(c) = &s.comment {
            comment(&mut buf, c);
        }
        if let Some(row) = s.rows.iter().find(|r| r.len() != header.len()) {
            return Err(Error::Contract(format!(
                "row has {} cells, header has {}",
                row.len(),
                header.len()
            )));
        }
        write_records(
            &mut buf,
            s.rows.iter().map(|r| r.iter().map(Cell::render).collect()),
        )?;
    }
    Ok(buf)
}

fn write_records(buf: &mut Vec<u8>, records: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let csv_err = |e: ::csv::Error| Error::Contract(format!("csv encoding failed: {e}"));
    let mut w = ::csv::WriterBuilder::new()
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(buf);
    for r in records {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()
        .map_err(|e| Error::Contract(format!("csv encoding failed: {e}")))
}

/// Writes the rendered table to `path` in one piece.
pub fn emit_csv(
    path: &Path,
    header: &[&str],
    sections: &[Section],
    metadata: Option<&str>,
) -> Result<()> {
    let bytes = render_csv(header, sections, metadata)?;
    write_file(path, &bytes)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.9528018, 6), "0.952802");
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(-0.0, 6), "0");
        assert_eq!(format_sig(123456789.0, 6), "1.23457e+08");
        assert_eq!(format_sig(0.00012345678, 6), "0.000123457");
        assert_eq!(format_sig(1.5e-7, 6), "1.5e-07");
        assert_eq!(format_sig(999999.6, 6), "1e+06");
        assert_eq!(format_sig(-2.5, 6), "-2.5");
        assert_eq!(format_sig(100.0, 3), "100");
    }

    #[test]
    fn header_only_when_empty() {
        let out = render_csv(&["X", "u", "v", "w"], &[], None).unwrap();
        assert_eq!(out, b"X,u,v,w\n");
    }

    #[test]
    fn metadata_and_sections() {
        let sections = [Section {
            comment: Some("scenario a".into()),
            rows: vec![vec![0.5.into(), "mean".into(), Cell::Empty]],
        }];
        let out = render_csv(&["a", "b", "c"], &sections, Some("run x=1")).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# run x=1\na,b,c\n# scenario a\n0.5,mean,\n"
        );
    }

    #[test]
    fn ragged_row_rejected() {
        let s = [Section::new(vec![vec![1.0.into()]])];
        assert!(render_csv(&["a", "b"], &s, None).is_err());
    }

    #[test]
    fn unwritable_path_names_it() {
        let e = emit_csv(Path::new("/nonexistent-dir/out.csv"), &["a"], &[], None).unwrap_err();
        assert!(e.to_string().contains("/nonexistent-dir/out.csv"), "{e}");
    }
}
