//! CSV result files.
//!
//! Every float is written as `{:.16e}` so that reading a file back returns
//! the exact same doubles. Missing values are written as `nan`.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub trait CsvRecord: Sized {
    const HEADER: &'static [&'static str];
    fn to_fields(&self) -> Vec<String>;
    fn from_fields(fields: &[&str]) -> Result<Self>;
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_float(s: &str, column: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::SchemaMismatch(format!("column '{column}': '{s}' is not a number")))
}

fn parse_usize(s: &str, column: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::SchemaMismatch(format!("column '{column}': '{s}' is not a count")))
}

macro_rules! float_record {
    ($(#[$meta:meta])* $name:ident { $($field:ident),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq)]
        pub struct $name {
            $(pub $field: f64,)+
        }

        impl CsvRecord for $name {
            const HEADER: &'static [&'static str] = &[$(stringify!($field)),+];

            fn to_fields(&self) -> Vec<String> {
                vec![$(format_float(self.$field)),+]
            }

            fn from_fields(fields: &[&str]) -> Result<Self> {
                let mut it = fields.iter().zip(Self::HEADER);
                Ok(Self {
                    $($field: {
                        let (v, c) = it.next().ok_or_else(|| Error::SchemaMismatch("short row".into()))?;
                        parse_float(v, c)?
                    },)+
                })
            }
        }
    };
}

float_record!(
    /// Centerline position and nodal-interpolated quaternion.
    CenterlineRow { xi, r_x, r_y, r_z, p0, p1, p2, p3 }
);

float_record!(
    /// Contact force and moment in the cross-section basis.
    StressRow { xi, n_x, n_y, n_z, m_x, m_y, m_z }
);

float_record!(
    /// Displacement of a tracked point against the load parameter.
    TipRow { t, dr_x, dr_y, dr_z }
);

float_record!(MomentRow { theta, moment });

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub formulation: String,
    pub n: usize,
    pub error: f64,
}

impl CsvRecord for ConvergenceRow {
    const HEADER: &'static [&'static str] = &["formulation", "N", "error"];

    fn to_fields(&self) -> Vec<String> {
        vec![self.formulation.clone(), self.n.to_string(), format_float(self.error)]
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        Ok(Self { formulation: f[0].to_string(), n: parse_usize(f[1], "N")?, error: parse_float(f[2], "error")? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonRow {
    pub increment: usize,
    pub iterations: usize,
    /// NaN when fewer than three iterates were available.
    pub rate: f64,
}

impl CsvRecord for NewtonRow {
    const HEADER: &'static [&'static str] = &["increment", "iterations", "rate"];

    fn to_fields(&self) -> Vec<String> {
        vec![self.increment.to_string(), self.iterations.to_string(), format_float(self.rate)]
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        Ok(Self {
            increment: parse_usize(f[0], "increment")?,
            iterations: parse_usize(f[1], "iterations")?,
            rate: parse_float(f[2], "rate")?,
        })
    }
}

/// Minimum load increments found by the powers-of-two search; empty when none converged.
#[derive(Clone, Debug, PartialEq)]
pub struct IncrementsRow {
    pub family: String,
    pub rho: f64,
    pub increments: Option<usize>,
}

impl CsvRecord for IncrementsRow {
    const HEADER: &'static [&'static str] = &["family", "rho", "increments"];

    fn to_fields(&self) -> Vec<String> {
        vec![self.family.clone(), format_float(self.rho), self.increments.map(|n| n.to_string()).unwrap_or_default()]
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        let increments = if f[2].trim().is_empty() { None } else { Some(parse_usize(f[2], "increments")?) };
        Ok(Self { family: f[0].to_string(), rho: parse_float(f[1], "rho")?, increments })
    }
}

/// Summary of a Newton report.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonStatsRow {
    pub family: String,
    pub rho: f64,
    pub increments: usize,
    pub iter_mean: f64,
    pub iter_std: f64,
    pub rate_gmean: f64,
    pub rate_gstd: f64,
}

impl CsvRecord for NewtonStatsRow {
    const HEADER: &'static [&'static str] =
        &["family", "rho", "increments", "iter_mean", "iter_std", "rate_gmean", "rate_gstd"];

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            format_float(self.rho),
            self.increments.to_string(),
            format_float(self.iter_mean),
            format_float(self.iter_std),
            format_float(self.rate_gmean),
            format_float(self.rate_gstd),
        ]
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        Ok(Self {
            family: f[0].to_string(),
            rho: parse_float(f[1], "rho")?,
            increments: parse_usize(f[2], "increments")?,
            iter_mean: parse_float(f[3], "iter_mean")?,
            iter_std: parse_float(f[4], "iter_std")?,
            rate_gmean: parse_float(f[5], "rate_gmean")?,
            rate_gstd: parse_float(f[6], "rate_gstd")?,
        })
    }
}

pub fn write_csv<W: Write, T: CsvRecord>(w: W, rows: &[T]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(T::HEADER)?;
    for row in rows {
        wr.write_record(row.to_fields())?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads rows by column name; extra columns are ignored, missing ones are an error.
pub fn read_csv<R: Read, T: CsvRecord>(r: R) -> Result<Vec<T>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(r);
    let headers = rd.headers().map_err(|e| Error::SchemaMismatch(e.to_string()))?.clone();
    let positions: Vec<Option<usize>> =
        T::HEADER.iter().map(|h| headers.iter().position(|c| c.trim() == *h)).collect();
    let missing: Vec<&str> =
        T::HEADER.iter().zip(&positions).filter(|(_, p)| p.is_none()).map(|(h, _)| *h).collect();
    if !missing.is_empty() {
        return Err(Error::SchemaMismatch(format!("missing columns: {}", missing.join(", "))));
    }
    let positions: Vec<usize> = positions.into_iter().flatten().collect();
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::SchemaMismatch(e.to_string()))?;
        let fields: Vec<&str> = positions.iter().map(|&i| rec.get(i).unwrap_or("")).collect();
        rows.push(T::from_fields(&fields)?);
    }
    Ok(rows)
}

pub fn write_csv_file<T: CsvRecord>(path: &Path, rows: &[T]) -> Result<()> {
    write_csv(std::fs::File::create(path)?, rows)
}

pub fn read_csv_file<T: CsvRecord>(path: &Path) -> Result<Vec<T>> {
    read_csv(std::fs::File::open(path)?)
}
