//! Result tables and their CSV / JSON serialization.

use std::io::Write;

use super::config::OutputFormat;
use super::units::{Dimension, UnitSystem};
use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub dim: Dimension,
}

impl Column {
    pub fn new(name: &str, dim: Dimension) -> Self {
        Self {
            name: name.to_string(),
            dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Rescales dimensioned columns to SI and appends unit suffixes to their names.
    pub fn to_si(&self, units: &UnitSystem) -> Table {
        let columns = self
            .columns
            .iter()
            .map(|c| Column {
                name: format!("{}{}", c.name, c.dim.si_suffix()),
                dim: c.dim,
            })
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.columns)
                    .map(|(cell, col)| match cell {
                        Cell::Num(x) => Cell::Num(units.to_si(*x, col.dim)),
                        other => other.clone(),
                    })
                    .collect()
            })
            .collect();
        Table { columns, rows }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .map_err(output_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(format_cell))
                .map_err(output_error)?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (cell, col) in row.iter().zip(&self.columns) {
                    let v = match cell {
                        Cell::Num(x) => serde_json::Number::from_f64(*x)
                            .map_or(serde_json::Value::Null, serde_json::Value::Number),
                        Cell::Text(s) => serde_json::Value::String(s.clone()),
                        Cell::Bool(b) => serde_json::Value::Bool(*b),
                        Cell::Empty => serde_json::Value::Null,
                    };
                    obj.insert(col.name.clone(), v);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn write<W: Write>(&self, format: OutputFormat, mut out: W) -> Result<(), CliError> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())
                    .map_err(|e| CliError::Output(e.to_string()))?;
                writeln!(out).map_err(|e| CliError::Output(e.to_string()))
            }
        }
    }
}

fn output_error(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if !x.is_finite() {
        if x.is_nan() {
            "NaN".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else if (1e-4..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn format_cell(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => format_float(*x),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1.5e-7), "1.5e-7");
        assert_eq!(format_float(-2e20), "-2e20");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_and_si() {
        let mut t = Table::new(vec![
            Column::new("protocol", Dimension::Dimensionless),
            Column::new("p_cold", Dimension::Power),
            Column::new("cop", Dimension::Dimensionless),
        ]);
        t.push(vec!["classical".into(), 0.25.into(), Cell::Empty]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "protocol,p_cold,cop\nclassical,0.25,\n"
        );

        let u = UnitSystem::new(1.0).unwrap();
        let si = t.to_si(&u);
        assert_eq!(si.columns[1].name, "p_cold_W");
        assert_eq!(si.columns[2].name, "cop");
        let Cell::Num(p) = si.rows[0][1] else {
            panic!()
        };
        assert_eq!(p, 0.25 * u.scale(Dimension::Power));

        let json = t.to_json();
        assert_eq!(json[0]["p_cold"], 0.25);
        assert!(json[0]["cop"].is_null());
    }

    proptest! {
        #[test]
        fn formatted_floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_float(x);
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
