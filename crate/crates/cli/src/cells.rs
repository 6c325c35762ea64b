//! Typed record cells and their CSV / JSON-lines encodings.
//!
//! Cell formatting is the determinism boundary of the experiment runner:
//! every value is rendered through one shortest-roundtrip path, so a rerun
//! of the same configuration reproduces output byte for byte.

use std::fmt::Write as _;

/// One value in a run record.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    U64(u64),
    I64(i64),
    F64(f64),
    Bool(bool),
    Str(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U64(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I64(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F64(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest-roundtrip decimal text for a float, with stable spellings for
/// the non-finite values.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    pub fn to_csv(&self) -> String {
        match self {
            Cell::U64(v) => v.to_string(),
            Cell::I64(v) => v.to_string(),
            Cell::F64(v) => fmt_f64(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => csv_escape(s),
            Cell::Empty => String::new(),
        }
    }

    /// JSON fragment for the cell. Non-finite floats become strings, since
    /// JSON numbers cannot carry them; absent values become null.
    pub fn to_json(&self) -> String {
        match self {
            Cell::U64(v) => v.to_string(),
            Cell::I64(v) => v.to_string(),
            Cell::F64(v) if v.is_finite() => fmt_f64(*v),
            Cell::F64(v) => format!("\"{}\"", fmt_f64(*v)),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => serde_json::to_string(s).expect("strings always encode"),
            Cell::Empty => "null".to_string(),
        }
    }
}

/// Renders one CSV line from cells, without a trailing newline.
pub fn csv_line(cells: &[Cell]) -> String {
    let mut out = String::new();
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&c.to_csv());
    }
    out
}

/// Renders one JSON-lines object with keys in the given order.
pub fn json_line(columns: &[&str], cells: &[Cell]) -> String {
    debug_assert_eq!(columns.len(), cells.len());
    let mut out = String::from("{");
    for (i, (name, cell)) in columns.iter().zip(cells).enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{}:{}",
            serde_json::to_string(name).expect("names always encode"),
            cell.to_json()
        );
    }
    out.push('}');
    out
}

/// Splits one CSV line produced by [`csv_line`] back into raw fields,
/// honoring quoted fields.
pub fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        if quoted {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            } else {
                cur.push(c);
            }
        } else if c == '"' && cur.is_empty() {
            quoted = true;
        } else if c == ',' {
            fields.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    fields.push(cur);
    fields
}
