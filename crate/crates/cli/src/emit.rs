//! Deterministic CSV/JSON emission: fixed column order, fixed float
//! formatting, so identical invocations are byte-identical and diffable.

use std::fmt::Write as _;

/// The one float format used in every machine-readable output.
pub fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    format!("{x:.12e}")
}

/// A key/value metadata header shared by the JSON emitters.
#[derive(Debug, Clone, Default)]
pub struct Meta {
    entries: Vec<(String, String)>,
}

impl Meta {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        self.entries.push((key.to_string(), format!("\"{value}\"")));
        self
    }

    pub fn float(mut self, key: &str, value: f64) -> Self {
        self.entries.push((key.to_string(), fmt_f(value)));
        self
    }

    pub fn int(mut self, key: &str, value: i64) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    fn render(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{k}\":{v}");
        }
        out.push('}');
        out
    }
}

/// One machine-readable cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Str(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => fmt_f(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Float(x) => {
                if x.is_finite() {
                    fmt_f(*x)
                } else {
                    format!("\"{}\"", fmt_f(*x))
                }
            }
            Cell::Int(n) => n.to_string(),
            Cell::Str(s) => format!("\"{s}\""),
        }
    }
}

/// Column-ordered rows with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, meta: &Meta) -> String {
        let mut out = String::from("{\"meta\":");
        out.push_str(&meta.render());
        out.push_str(",\"rows\":[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "\"{col}\":{}", cell.json());
            }
            out.push('}');
        }
        out.push_str("]}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_stable() {
        assert_eq!(fmt_f(1.0), "1.000000000000e0");
        assert_eq!(fmt_f(-2.5e-7), "-2.500000000000e-7");
        assert_eq!(fmt_f(f64::NAN), "nan");
    }

    #[test]
    fn csv_and_json_round_out() {
        let mut t = Table::new(vec!["zeta", "level_index", "reality"]);
        t.push(vec![Cell::Float(0.5), Cell::Int(0), Cell::Str("real".into())]);
        let csv = t.to_csv();
        assert_eq!(csv, "zeta,level_index,reality\n5.000000000000e-1,0,real\n");
        let json = t.to_json(&Meta::new().str("variant", "minus").int("m", 3));
        assert!(json.starts_with("{\"meta\":{\"variant\":\"minus\",\"m\":3},\"rows\":[{"));
        assert!(json.contains("\"zeta\":5.000000000000e-1"));
    }
}
