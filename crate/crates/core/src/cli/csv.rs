//! Minimal CSV emission: `#` comment lines, one header row, numeric rows.

use std::io::{self, Write};

pub struct CsvWriter<W: Write> {
    out: W,
    precision: usize,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W, precision: usize) -> Self {
        CsvWriter { out, precision }
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) -> io::Result<()> {
        writeln!(self.out, "# {key}={value}")
    }

    pub fn header(&mut self, columns: &[&str]) -> io::Result<()> {
        writeln!(self.out, "{}", columns.join(","))
    }

    pub fn row(&mut self, values: &[f64]) -> io::Result<()> {
        let line: Vec<String> = values
            .iter()
            .map(|v| format_value(*v, self.precision))
            .collect();
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn number(&self, v: f64) -> String {
        format_value(v, self.precision)
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Scientific notation with `precision` digits after the point.
pub fn format_value(v: f64, precision: usize) -> String {
    if v.is_finite() {
        format!("{v:.precision$e}")
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_comments_header_rows() {
        let mut buf = Vec::new();
        let mut w = CsvWriter::new(&mut buf, 3);
        w.comment("fit", "arcsine").unwrap();
        w.header(&["a", "b"]).unwrap();
        w.row(&[1.0, -0.00125]).unwrap();
        w.row(&[f64::INFINITY, 0.0]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# fit=arcsine\na,b\n1.000e0,-1.250e-3\ninf,0.000e0\n"
        );
    }

    proptest! {
        #[test]
        fn written_values_reparse_exactly(v in proptest::num::f64::NORMAL, precision in 1usize..17) {
            let text = format_value(v, precision);
            let back: f64 = text.parse().unwrap();
            prop_assert_eq!(format_value(back, precision), text);
        }
    }
}
