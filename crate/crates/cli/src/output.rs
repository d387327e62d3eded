use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

/// A labeled matrix: one header row, then a label and formatted cells per row.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub header: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

impl OutputTable {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Pretty => self.pretty(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for (label, cells) in &self.rows {
            out.push_str(&csv_field(label));
            for c in cells {
                out.push(',');
                out.push_str(c);
            }
            out.push('\n');
        }
        out
    }

    fn pretty(&self) -> String {
        let label_width = self
            .rows
            .iter()
            .map(|(l, _)| l.chars().count())
            .chain(self.header.first().map(|h| h.chars().count()))
            .max()
            .unwrap_or(0);
        let columns = self.header.len().saturating_sub(1);
        let widths: Vec<usize> = (0..columns)
            .map(|i| {
                self.rows
                    .iter()
                    .filter_map(|(_, c)| c.get(i).map(String::len))
                    .chain([self.header[i + 1].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let mut line = |label: &str, cells: &[String]| {
            let _ = write!(out, "{label:<label_width$}");
            for (c, w) in cells.iter().zip(&widths) {
                let _ = write!(out, "  {c:>w$}");
            }
            out.push('\n');
        };
        if let Some((first, rest)) = self.header.split_first() {
            line(first, rest);
        }
        for (label, cells) in &self.rows {
            line(label, cells);
        }
        out
    }
}

/// Quotes labels such as `ABBA|BAAB` only when CSV requires it.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
