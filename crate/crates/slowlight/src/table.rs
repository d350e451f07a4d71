//! Headered CSV tables of floats, 12 significant digits.

use std::io::{Read, Write};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// `# ...` lines written before the header, without the `# `.
    pub comments: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Prepend `name` with a constant `value` to every row.
    pub fn with_leading_column(mut self, name: &str, value: f64) -> Self {
        self.columns.insert(0, name.to_string());
        for row in &mut self.rows {
            row.insert(0, value);
        }
        self
    }

    /// Append the rows of `other`, which must have the same header.
    pub fn extend(&mut self, other: Table) {
        assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        for comment in &self.comments {
            writeln!(out, "# {comment}").map_err(CliError::output)?;
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns).map_err(CliError::csv)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|v| format_value(*v)))
                .map_err(CliError::csv)?;
        }
        writer.flush().map_err(CliError::output)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buffer = Vec::new();
        self.write(&mut buffer).expect("writing to memory");
        String::from_utf8(buffer).expect("csv output is utf-8")
    }

    pub fn read<R: Read>(input: R) -> Result<Table, CliError> {
        let mut text = String::new();
        let mut input = input;
        input.read_to_string(&mut text).map_err(CliError::output)?;
        let comments = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| l.trim_start_matches('#').trim_start().to_string())
            .collect();

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = reader
            .headers()
            .map_err(CliError::csv)?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(CliError::csv)?;
            let row = record
                .iter()
                .map(|field| {
                    field.parse::<f64>().map_err(|_| {
                        CliError::Invalid(format!("table row {}: `{field}` is not a number", line + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != columns.len() {
                return Err(CliError::Invalid(format!("table row {}: wrong number of fields", line + 1)));
            }
            rows.push(row);
        }
        Ok(Table { columns, rows, comments })
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_value(value: f64) -> String {
    format!("{value:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["omega", "value"]);
        t.push(vec![0.0, 1.0 / 3.0]);
        t.push(vec![-1e6, 6.02214076e23]);
        t.push(vec![f64::INFINITY, -2.5e-300]);
        t
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_value(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_value(3100.0), "3.10000000000e3");
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut t = sample();
        t.comments.push("generated_at_unix=0".into());
        let text = t.to_csv_string();
        let back = Table::read(text.as_bytes()).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.comments, t.comments);
        assert_eq!(back.to_csv_string(), text);
        for (a, b) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
            assert!(a == b || ((a - b) / b).abs() < 5e-12);
        }
    }

    #[test]
    fn leading_column_and_lookup() {
        let t = sample().with_leading_column("sweep", 7.0);
        assert_eq!(t.columns[0], "sweep");
        assert_eq!(t.column("sweep").unwrap(), vec![7.0; 3]);
        assert!(t.column("missing").is_none());
    }

    #[test]
    fn rejects_non_numeric_fields() {
        assert!(Table::read("a,b\n1,x\n".as_bytes()).is_err());
    }
}
