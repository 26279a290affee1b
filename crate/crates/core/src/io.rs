//! CSV import and export. Numbers are written with 17 significant digits so
//! every `f64` survives the round trip.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{FieldOnCurve, Scalar};
use crate::curve::{CurveGrid, TimeSet};
use crate::error::{Error, Result};
use crate::measure::Staircase;
use crate::quantum::WaveFunction;
use std::sync::Arc;

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(header)?;
    Ok(out)
}

fn write_rows<W: Write, const N: usize>(
    w: W,
    header: [&str; N],
    rows: impl IntoIterator<Item = [f64; N]>,
) -> Result<()> {
    let mut out = writer(w, &header)?;
    for row in rows {
        out.write_record(row.iter().map(|&x| fmt_num(x)))?;
    }
    out.flush()?;
    Ok(())
}

fn read_rows<R: Read, const N: usize>(r: R, header: [&str; N]) -> Result<Vec<[f64; N]>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::Parse(format!("expected columns {header:?}, found {found:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let mut row = [0.0; N];
        for (slot, cell) in row.iter_mut().zip(rec.iter()) {
            *slot = cell.parse().map_err(|e| Error::Parse(format!("bad number {cell:?}: {e}")))?;
        }
        if rec.len() != N {
            return Err(Error::Parse(format!("row has {} columns, expected {N}", rec.len())));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_curve<W: Write>(w: W, grid: &CurveGrid) -> Result<()> {
    let rows = grid.params().iter().zip(grid.points()).map(|(&v, p)| [v, p[0], p[1], p[2]]);
    write_rows(w, ["v", "x", "y", "z"], rows)
}

/// Reads a polyline; gap flags are not part of the format.
pub fn read_curve<R: Read>(r: R, level: u32) -> Result<CurveGrid> {
    let rows = read_rows(r, ["v", "x", "y", "z"])?;
    let params = rows.iter().map(|r| r[0]).collect();
    let points = rows.iter().map(|r| [r[1], r[2], r[3]]).collect();
    CurveGrid::from_nodes(params, points, level)
}

pub fn write_time_set<W: Write>(w: W, set: &TimeSet) -> Result<()> {
    write_rows(w, ["start", "end"], set.kept_intervals().iter().map(|&(a, b)| [a, b]))
}

pub fn read_intervals<R: Read>(r: R) -> Result<Vec<(f64, f64)>> {
    Ok(read_rows(r, ["start", "end"])?.into_iter().map(|[a, b]| (a, b)).collect())
}

pub fn write_staircase<W: Write>(w: W, stair: &Staircase) -> Result<()> {
    write_rows(w, ["v", "S"], stair.params().iter().zip(stair.values()).map(|(&v, &s)| [v, s]))
}

pub fn read_staircase<R: Read>(r: R, alpha: f64, p0: f64) -> Result<Staircase> {
    let rows = read_rows(r, ["v", "S"])?;
    Staircase::from_knots(alpha, rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect(), p0)
}

pub fn write_field<W: Write, T: Scalar>(w: W, f: &FieldOnCurve<T>) -> Result<()> {
    let c = f.chart();
    let rows = c.params().iter().zip(c.values()).zip(f.values()).map(|((&v, &s), z)| {
        let z = z.to_complex();
        [v, s, z.re, z.im]
    });
    write_rows(w, ["v", "S", "re", "im"], rows)
}

/// Reads `v,S,re,im`; the chart is rebuilt from the first two columns.
pub fn read_field<R: Read>(r: R, alpha: f64, p0: f64) -> Result<FieldOnCurve<Complex64>> {
    let rows = read_rows(r, ["v", "S", "re", "im"])?;
    let chart =
        Staircase::from_knots(alpha, rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect(), p0)?;
    FieldOnCurve::new(Arc::new(chart), rows.iter().map(|r| Complex64::new(r[2], r[3])).collect())
}

pub fn write_snapshot<W: Write>(w: W, psi: &WaveFunction) -> Result<()> {
    let c = psi.space_chart();
    let rows =
        c.params().iter().zip(c.values()).zip(psi.values()).map(|((&v, &s), z)| [v, s, z.re, z.im, z.norm_sqr()]);
    write_rows(w, ["v", "S", "re", "im", "abs2"], rows)
}

pub fn read_snapshot<R: Read>(r: R, alpha: f64, p0: f64) -> Result<FieldOnCurve<Complex64>> {
    let rows = read_rows(r, ["v", "S", "re", "im", "abs2"])?;
    let chart =
        Staircase::from_knots(alpha, rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect(), p0)?;
    FieldOnCurve::new(Arc::new(chart), rows.iter().map(|r| Complex64::new(r[2], r[3])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub tau: f64,
    pub residual_max: f64,
    pub residual_l2: f64,
    pub total_probability: f64,
}

pub fn write_continuity<W: Write>(w: W, rows: &[ContinuityRow]) -> Result<()> {
    write_rows(
        w,
        ["tau", "residual_max", "residual_l2", "total_probability"],
        rows.iter().map(|r| [r.tau, r.residual_max, r.residual_l2, r.total_probability]),
    )
}

pub fn read_continuity<R: Read>(r: R) -> Result<Vec<ContinuityRow>> {
    Ok(read_rows(r, ["tau", "residual_max", "residual_l2", "total_probability"])?
        .into_iter()
        .map(|[tau, residual_max, residual_l2, total_probability]| ContinuityRow {
            tau,
            residual_max,
            residual_l2,
            total_probability,
        })
        .collect())
}
