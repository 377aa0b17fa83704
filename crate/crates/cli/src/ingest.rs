//! CSV panel ingestion.
//!
//! Layout: a header row `label,TICKER1,TICKER2,...`, then one row per
//! timestamp with the label in the first column and one value per asset.
//! Price files hold `T + 1` rows, return files `T`.

use std::collections::HashSet;
use std::path::Path;

use corrspec::linalg::{Matrix, PriceSeries, ReturnMatrix};

use crate::config::InputKind;
use crate::error::{CliError, CliResult, Context};

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub tickers: Vec<String>,
    /// Labels of the return periods (the later timestamp of each pair for prices).
    pub timestamps: Vec<String>,
    pub returns: ReturnMatrix,
}

struct RawPanel {
    tickers: Vec<String>,
    timestamps: Vec<String>,
    /// Column-major: one vector per asset.
    columns: Vec<Vec<f64>>,
}

fn invalid(path: &Path, msg: String) -> CliError {
    CliError::Validation(format!("{}: {msg}", path.display()))
}

fn read_raw(path: &Path) -> CliResult<RawPanel> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| invalid(path, e.to_string()))?;
    let header = rdr.headers().map_err(|e| invalid(path, e.to_string()))?.clone();
    if header.len() < 2 {
        return Err(invalid(path, "header needs a timestamp column and at least one ticker".into()));
    }
    let tickers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut seen = HashSet::new();
    for (k, t) in tickers.iter().enumerate() {
        if t.is_empty() {
            return Err(invalid(path, format!("header column {} has an empty ticker", k + 2)));
        }
        if !seen.insert(t.as_str()) {
            return Err(invalid(path, format!("duplicate ticker `{t}`")));
        }
    }
    let mut timestamps = Vec::new();
    let mut stamp_set = HashSet::new();
    let mut columns = vec![Vec::new(); tickers.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| invalid(path, e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(invalid(
                path,
                format!("line {line}: expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let stamp = rec[0].to_string();
        if stamp.is_empty() {
            return Err(invalid(path, format!("line {line}: empty timestamp")));
        }
        if !stamp_set.insert(stamp.clone()) {
            return Err(invalid(path, format!("line {line}: timestamp `{stamp}` appears twice")));
        }
        for (k, cell) in rec.iter().skip(1).enumerate() {
            let ticker = &tickers[k];
            if cell.is_empty() {
                return Err(invalid(path, format!("line {line}, column {}: asset `{ticker}` has a gap", k + 2)));
            }
            let v: f64 = cell.parse().map_err(|_| {
                invalid(path, format!("line {line}, column {} (`{ticker}`): `{cell}` is not a number", k + 2))
            })?;
            if !v.is_finite() {
                return Err(invalid(path, format!("line {line}, column {} (`{ticker}`): non-finite value", k + 2)));
            }
            columns[k].push(v);
        }
        timestamps.push(stamp);
    }
    if timestamps.is_empty() {
        return Err(invalid(path, "no data rows".into()));
    }
    Ok(RawPanel {
        tickers,
        timestamps,
        columns,
    })
}

/// Price series of every asset in the file, with timestamps attached.
pub fn ingest_prices(path: &Path) -> CliResult<Vec<PriceSeries>> {
    let raw = read_raw(path)?;
    raw.tickers
        .iter()
        .zip(raw.columns)
        .map(|(t, col)| {
            PriceSeries::new(t.clone(), col)
                .and_then(|s| s.with_timestamps(raw.timestamps.clone()))
                .ctx(&format!("{}: asset `{t}`", path.display()))
        })
        .collect()
}

pub fn read_panel(path: &Path, kind: InputKind) -> CliResult<Panel> {
    match kind {
        InputKind::Prices => {
            let series = ingest_prices(path)?;
            let stamps = series[0].timestamps().unwrap_or_default()[1..].to_vec();
            let tickers = series.iter().map(|s| s.ticker().to_string()).collect();
            let returns = ReturnMatrix::from_price_series(&series).ctx(&path.display().to_string())?;
            Ok(Panel {
                tickers,
                timestamps: stamps,
                returns,
            })
        }
        InputKind::Returns => {
            let raw = read_raw(path)?;
            let (n, t) = (raw.columns.len(), raw.timestamps.len());
            let data: Vec<f64> = raw.columns.into_iter().flatten().collect();
            let m = Matrix::from_row_major(n, t, data).ctx(&path.display().to_string())?;
            Ok(Panel {
                tickers: raw.tickers,
                timestamps: raw.timestamps,
                returns: ReturnMatrix::new(m).ctx(&path.display().to_string())?,
            })
        }
        InputKind::Values => Err(invalid(path, "a panel input needs kind = \"prices\" or \"returns\"".into())),
    }
}

/// One number per line. Blank lines, `#` comments and a non-numeric first
/// line (a header) are skipped.
pub fn read_values(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            Ok(_) => return Err(invalid(path, format!("line {}: non-finite value", k + 1))),
            Err(_) if out.is_empty() && k == 0 => {}
            Err(_) => return Err(invalid(path, format!("line {}: `{s}` is not a number", k + 1))),
        }
    }
    if out.is_empty() {
        return Err(invalid(path, "no values".into()));
    }
    Ok(out)
}
