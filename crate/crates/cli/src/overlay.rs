//! Two-column external constraint curves, passed through onto the scan grid.

use std::path::Path;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub name: String,
    /// (frequency_hz, value), strictly increasing in frequency.
    pub points: Vec<(f64, f64)>,
}

impl Overlay {
    pub fn read(name: &str, path: &Path) -> CliResult<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| CliError::io(path, e))?;
        let mut points = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| CliError::io(path, e))?;
            if rec.len() != 2 {
                return Err(CliError::io(path, format!("row {} has {} columns, expected 2", i + 1, rec.len())));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| CliError::io(path, format!("row {}: {e}", i + 1)))
            };
            points.push((parse(&rec[0])?, parse(&rec[1])?));
        }
        Self::new(name, points).map_err(|e| CliError::io(path, e))
    }

    pub fn new(name: &str, points: Vec<(f64, f64)>) -> Result<Self, String> {
        if points.is_empty() {
            return Err("overlay is empty".into());
        }
        if points.iter().any(|&(f, v)| !(f > 0.0 && v > 0.0)) {
            return Err("overlay values must be positive for log-log interpolation".into());
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err("overlay frequencies must be strictly increasing".into());
        }
        Ok(Overlay {
            name: name.to_string(),
            points,
        })
    }

    /// Log-log interpolation; `None` outside the tabulated range.
    pub fn at(&self, f: f64) -> Option<f64> {
        let p = &self.points;
        let (first, last) = (p[0], p[p.len() - 1]);
        if f < first.0 || f > last.0 {
            return None;
        }
        let i = p.partition_point(|&(x, _)| x <= f);
        if i == p.len() {
            return Some(last.1);
        }
        let (x0, y0) = p[i - 1];
        let (x1, y1) = p[i];
        let t = (f.ln() - x0.ln()) / (x1.ln() - x0.ln());
        Some((y0.ln() + t * (y1.ln() - y0.ln())).exp())
    }
}
