//! Annual index series loaded from CSV.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("malformed CSV near line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("CSV has no header row")]
    MissingHeader,
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("column `{0}` mapped more than once")]
    DuplicateMapping(String),
    #[error("CSV has no data rows")]
    NoRows,
    #[error("row {row}: column `{column}` has non-numeric value `{value}`")]
    NonNumeric { row: u64, column: String, value: String },
    #[error("row {row}: column `{column}` has non-positive value `{value}`")]
    NonPositive { row: u64, column: String, value: String },
    #[error("row {row}: duplicate year {year}")]
    DuplicateYear { row: u64, year: i32 },
    #[error("row {row}: expected year {expected}, found {found}")]
    NonConsecutiveYear { row: u64, expected: i32, found: i32 },
    #[error("series `{0}` is empty")]
    EmptySeries(String),
    #[error("series `{name}`: value at index {index} is not a finite positive number")]
    InvalidValue { name: String, index: usize },
    #[error("series `{name}`: year at index {index} breaks the consecutive sequence")]
    InvalidYears { name: String, index: usize },
    #[error("series cover different years: {0}")]
    MismatchedRanges(String),
}

/// A named annual index series on consecutive years starting at `base_year`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    name: String,
    base_year: i32,
    values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    /// Values for `base_year, base_year + 1, …`.
    pub fn new(name: impl Into<String>, base_year: i32, values: Vec<T>) -> Result<Self, IngestError> {
        let name = name.into();
        if values.is_empty() {
            return Err(IngestError::EmptySeries(name));
        }
        if let Some(index) = values.iter().position(|v| !(v.is_finite() && *v > T::zero())) {
            return Err(IngestError::InvalidValue { name, index });
        }
        Ok(Self { name, base_year, values })
    }

    /// Builds a series from explicit `(year, value)` pairs, which must be consecutive.
    pub fn from_points(name: impl Into<String>, points: &[(i32, T)]) -> Result<Self, IngestError> {
        let name = name.into();
        let Some(&(base_year, _)) = points.first() else {
            return Err(IngestError::EmptySeries(name));
        };
        for (index, w) in points.windows(2).enumerate() {
            if w[0].0.checked_add(1) != Some(w[1].0) {
                return Err(IngestError::InvalidYears { name, index: index + 1 });
            }
        }
        Self::new(name, base_year, points.iter().map(|p| p.1).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_year(&self) -> i32 {
        self.base_year
    }

    /// Year of the last observation.
    pub fn last_year(&self) -> i32 {
        self.base_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(year, value)` pairs in order.
    pub fn points(&self) -> impl Iterator<Item = (i32, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.base_year + i as i32, v))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Rescales a series so its first observation is exactly 100.
pub fn normalize_base100<T: Scalar>(series: &TimeSeries<T>) -> TimeSeries<T> {
    let hundred: T = lit(100.0);
    let factor = hundred / series.values[0];
    let mut values: Vec<T> = series.values.iter().map(|&v| v * factor).collect();
    values[0] = hundred;
    TimeSeries {
        name: series.name.clone(),
        base_year: series.base_year,
        values,
    }
}

/// Maps CSV header names onto series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    year_column: String,
    columns: Vec<(String, String)>,
}

impl Schema {
    pub fn new(year_column: impl Into<String>) -> Self {
        Self {
            year_column: year_column.into(),
            columns: Vec::new(),
        }
    }

    /// Reads CSV column `column` into a series called `name`.
    pub fn column(mut self, column: impl Into<String>, name: impl Into<String>) -> Self {
        self.columns.push((column.into(), name.into()));
        self
    }

    pub fn year_column(&self) -> &str {
        &self.year_column
    }

    pub fn columns(&self) -> &[(String, String)] {
        &self.columns
    }
}

fn csv_error(e: csv::Error) -> IngestError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    IngestError::Csv {
        line,
        message: e.to_string(),
    }
}

/// Reads one series per mapped value column. Rows keep file order; row
/// numbers in errors are 1-based file lines (the header is line 1).
pub fn load_series<T: Scalar, R: Read>(source: R, schema: &Schema) -> Result<Vec<TimeSeries<T>>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(IngestError::MissingHeader);
    }
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let find = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    };
    let year_idx = find(&schema.year_column)?;
    let mut value_idx = Vec::with_capacity(schema.columns.len());
    for (column, _) in &schema.columns {
        if value_idx.iter().any(|&(c, _): &(&str, usize)| c == column) {
            return Err(IngestError::DuplicateMapping(column.clone()));
        }
        value_idx.push((column.as_str(), find(column)?));
    }

    let mut base_year: Option<i32> = None;
    let mut prev_year: Option<i32> = None;
    let mut columns: Vec<Vec<T>> = vec![Vec::new(); value_idx.len()];
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let cell = |i: usize| record.get(i).unwrap_or("");

        let raw_year = cell(year_idx);
        let year: i32 = raw_year.parse().map_err(|_| IngestError::NonNumeric {
            row,
            column: schema.year_column.clone(),
            value: raw_year.to_string(),
        })?;
        if let Some(prev) = prev_year {
            if year == prev {
                return Err(IngestError::DuplicateYear { row, year });
            }
            let expected = prev.checked_add(1).unwrap_or(prev);
            if year != expected {
                return Err(IngestError::NonConsecutiveYear { row, expected, found: year });
            }
        }
        base_year.get_or_insert(year);
        prev_year = Some(year);

        for (slot, &(column, i)) in columns.iter_mut().zip(&value_idx) {
            let raw = cell(i);
            let value: T = raw
                .parse()
                .ok()
                .filter(|v: &T| !v.is_nan())
                .ok_or_else(|| IngestError::NonNumeric {
                    row,
                    column: column.to_string(),
                    value: raw.to_string(),
                })?;
            if !(value > T::zero() && value.is_finite()) {
                return Err(IngestError::NonPositive {
                    row,
                    column: column.to_string(),
                    value: raw.to_string(),
                });
            }
            slot.push(value);
        }
    }
    let base_year = base_year.ok_or(IngestError::NoRows)?;
    schema
        .columns
        .iter()
        .zip(columns)
        .map(|((_, name), values)| TimeSeries::new(name.clone(), base_year, values))
        .collect()
}

/// Writes series sharing one year range back to CSV.
///
/// Values use the shortest decimal form that parses back to the same
/// binary value, so `load_series` of the output reproduces the input bits.
pub fn render_series_csv<T: Scalar>(year_column: &str, series: &[TimeSeries<T>]) -> Result<String, IngestError> {
    let Some(first) = series.first() else {
        return Ok(format!("{year_column}\n"));
    };
    check_same_range(series)?;
    let mut out = String::new();
    out.push_str(year_column);
    for s in series {
        out.push(',');
        out.push_str(&s.name);
    }
    out.push('\n');
    for i in 0..first.len() {
        write!(out, "{}", first.base_year + i as i32).unwrap();
        for s in series {
            write!(out, ",{}", s.values[i]).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Fails unless every series spans the same years.
pub fn check_same_range<T: Scalar>(series: &[TimeSeries<T>]) -> Result<(), IngestError> {
    let Some(first) = series.first() else {
        return Ok(());
    };
    let same = series
        .iter()
        .all(|s| s.base_year == first.base_year && s.len() == first.len());
    if same {
        return Ok(());
    }
    let ranges = series
        .iter()
        .map(|s| format!("{}: {}-{}", s.name, s.base_year, s.last_year()))
        .collect::<Vec<_>>()
        .join(", ");
    Err(IngestError::MismatchedRanges(ranges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Schema {
        Schema::new("year").column("L", "L")
    }

    #[test]
    fn two_row_parse() {
        let s: Vec<TimeSeries<f64>> = load_series("year,L\n1899,100\n1900,105".as_bytes(), &schema()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].name(), "L");
        assert_eq!(s[0].base_year(), 1899);
        assert_eq!(s[0].values(), &[100.0, 105.0]);
    }

    #[test]
    fn zero_value_names_row() {
        let err = load_series::<f64, _>("year,L\n1899,100\n1900,0\n".as_bytes(), &schema()).unwrap_err();
        assert_eq!(
            err,
            IngestError::NonPositive { row: 3, column: "L".into(), value: "0".into() }
        );
    }

    #[test]
    fn twenty_four_years() {
        let mut csv = String::from("year,L\n");
        for (i, y) in (1899..=1922).enumerate() {
            csv.push_str(&format!("{y},{}\n", 100 + 3 * i));
        }
        let s: Vec<TimeSeries<f64>> = load_series(csv.as_bytes(), &schema()).unwrap();
        assert_eq!(s[0].len(), 24);
        assert_eq!(s[0].last_year(), 1922);
    }

    #[test]
    fn row_level_errors() {
        let e = load_series::<f64, _>("year,L\n1899,100\n1899,101\n".as_bytes(), &schema()).unwrap_err();
        assert_eq!(e, IngestError::DuplicateYear { row: 3, year: 1899 });
        let e = load_series::<f64, _>("year,L\n1899,100\n1901,101\n".as_bytes(), &schema()).unwrap_err();
        assert_eq!(e, IngestError::NonConsecutiveYear { row: 3, expected: 1900, found: 1901 });
        let e = load_series::<f64, _>("year,L\n1899,abc\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(e, IngestError::NonNumeric { row: 2, .. }));
        let e = load_series::<f64, _>("year,L\nnineteen,1\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(e, IngestError::NonNumeric { row: 2, ref column, .. } if column == "year"));
        let e = load_series::<f64, _>("year,X\n1899,1\n".as_bytes(), &schema()).unwrap_err();
        assert_eq!(e, IngestError::MissingColumn("L".into()));
        let e = load_series::<f64, _>("year,L\n".as_bytes(), &schema()).unwrap_err();
        assert_eq!(e, IngestError::NoRows);
        let e = load_series::<f64, _>("year,L\n1899,-3\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(e, IngestError::NonPositive { row: 2, .. }));
        let e = load_series::<f64, _>("year,L\n1899,NaN\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(e, IngestError::NonNumeric { row: 2, .. }));
    }

    #[test]
    fn several_columns_in_file_order() {
        let csv = "year,Y,K,L\n1899,100,100,100\n1900,101,107,105\n1901,112,114,110\n";
        let schema = Schema::new("year").column("L", "labor").column("K", "capital").column("Y", "output");
        let s: Vec<TimeSeries<f64>> = load_series(csv.as_bytes(), &schema).unwrap();
        assert_eq!(s[0].name(), "labor");
        assert_eq!(s[0].values(), &[100.0, 105.0, 110.0]);
        assert_eq!(s[2].values(), &[100.0, 101.0, 112.0]);
    }

    #[test]
    fn normalization_examples() {
        let s = TimeSeries::new("x", 0, vec![50.0, 100.0, 150.0]).unwrap();
        assert_eq!(normalize_base100(&s).values(), &[100.0, 200.0, 300.0]);
        let s = TimeSeries::new("x", 0, vec![100.0, 107.0, 114.0]).unwrap();
        assert_eq!(normalize_base100(&s).values(), s.values());
    }

    #[test]
    fn normalization_preserves_ratios() {
        let raw: Vec<f64> = vec![106.65, 111.2, 119.0, 101.3, 140.25];
        let s = TimeSeries::new("x", 1899, raw.clone()).unwrap();
        let n = normalize_base100(&s);
        assert_eq!(n.values()[0], 100.0);
        for i in 0..raw.len() {
            for j in 0..raw.len() {
                let a = raw[i] / raw[j];
                let b = n.values()[i] / n.values()[j];
                assert!((a - b).abs() <= 1e-12 * a);
            }
        }
    }

    #[test]
    fn series_construction_invariants() {
        assert!(TimeSeries::<f64>::new("x", 0, vec![]).is_err());
        assert!(TimeSeries::new("x", 0, vec![1.0, f64::INFINITY]).is_err());
        assert!(TimeSeries::from_points("x", &[(1, 1.0), (3, 2.0)]).is_err());
        let s = TimeSeries::from_points("x", &[(1, 1.0), (2, 2.0)]).unwrap();
        assert_eq!(s.points().collect::<Vec<_>>(), vec![(1, 1.0), (2, 2.0)]);
    }

    #[test]
    fn render_round_trips_bits() {
        let csv = "year,L,K\n1899,100,0.1\n1900,105.123456789012345,3e-7\n";
        let schema = Schema::new("year").column("L", "L").column("K", "K");
        let s: Vec<TimeSeries<f64>> = load_series(csv.as_bytes(), &schema).unwrap();
        let out = render_series_csv("year", &s).unwrap();
        let back: Vec<TimeSeries<f64>> = load_series(out.as_bytes(), &schema).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn mismatched_ranges_are_listed() {
        let a = TimeSeries::new("a", 1899, vec![1.0, 2.0]).unwrap();
        let b = TimeSeries::new("b", 1900, vec![1.0, 2.0]).unwrap();
        let e = check_same_range(&[a, b]).unwrap_err();
        assert_eq!(e.to_string(), "series cover different years: a: 1899-1900, b: 1900-1901");
    }
}
