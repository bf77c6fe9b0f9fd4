//! CSV emission: comma-separated, dot-decimal, LF line endings, floats with
//! 12 significant digits. Rows are purely numeric, so no quoting is needed
//! and identical inputs serialize to identical bytes.

use std::fmt::Write;

/// One CSV cell; integers print bare, floats in scientific notation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn write_to(self, out: &mut String) {
        match self {
            Cell::Int(v) => write!(out, "{v}").expect("string write"),
            // {:.11e} = 12 significant digits
            Cell::Float(v) => write!(out, "{v:.11e}").expect("string write"),
        }
    }
}

/// In-memory result table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn header(&self) -> &'static [&'static str] {
        self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Serializes the whole table, header first, one trailing newline.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.write_to(&mut out);
            }
            out.push('\n');
        }
        out
    }
}
