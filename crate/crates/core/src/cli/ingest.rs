use std::path::Path;

use crate::error::{Error, Result};

/// Which CSV column holds the observations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Column {
    #[default]
    First,
    Index(usize),
    /// Requires a header row.
    Name(String),
}

impl Column {
    pub fn parse(s: &str) -> Self {
        s.parse().map(Column::Index).unwrap_or_else(|_| Column::Name(s.to_string()))
    }
}

/// Reads one numeric column. Errors carry 1-based line numbers.
pub fn read_column(path: &Path, has_header: bool, column: &Column) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
    parse_column(file, has_header, column).map_err(|e| match e {
        Error::Ingestion(m) => Error::Ingestion(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_column(reader: impl std::io::Read, has_header: bool, column: &Column) -> Result<Vec<f64>> {
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(has_header).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let idx = match column {
        Column::First => 0,
        Column::Index(i) => *i,
        Column::Name(name) => {
            if !has_header {
                return Err(Error::Ingestion(format!("column `{name}` selected by name but no header")));
            }
            let headers = rdr.headers().map_err(|e| Error::Ingestion(e.to_string()))?;
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Ingestion(format!("no column named `{name}`")))?
        }
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Ingestion(e.to_string()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let field = rec.get(idx).ok_or_else(|| Error::Ingestion(format!("line {line}: no column {idx}")))?;
        let v: f64 = field.parse().map_err(|_| Error::Ingestion(format!("line {line}: `{field}` is not a number")))?;
        if !v.is_finite() {
            return Err(Error::Ingestion(format!("line {line}: `{field}` is not finite")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Ingestion("no observations".into()));
    }
    if out.len() < 2 {
        return Err(Error::Ingestion(format!("need at least 2 observations, got {}", out.len())));
    }
    Ok(out)
}
