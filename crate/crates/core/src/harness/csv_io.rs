//! CSV export and import of traces and curves.
//!
//! Floats are written in shortest round-trip form (`{:?}`, which switches to
//! exponent notation for very small or large values), so reading and
//! re-writing a file reproduces it byte for byte.

use std::io::{Read, Write};

use super::episode::RoundRecord;
use super::stats::{CurvePoint, RateCurve};
use super::HarnessError;

pub const TRACE_HEADER: [&str; 7] = ["t", "eg", "delta", "kl_star", "a", "b", "loss"];
pub const CURVE_HEADER: [&str; 4] = ["t", "lp_estimate", "stderr", "R"];

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<(), HarnessError> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(HarnessError::Format(format!("expected header {}", expected.join(","))));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T, HarnessError> {
    let raw = rec.get(i).ok_or_else(|| HarnessError::Format(format!("missing column {i}")))?;
    raw.parse().map_err(|_| HarnessError::Format(format!("cannot parse `{raw}` in column {i}")))
}

fn opt_field(rec: &csv::StringRecord, i: usize) -> Result<Option<f64>, HarnessError> {
    match rec.get(i) {
        Some("") => Ok(None),
        _ => field(rec, i).map(Some),
    }
}

/// Writes per-round records; optional columns are left empty when absent.
pub fn write_trace_csv<W: Write>(rounds: &[RoundRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in rounds {
        w.write_record([
            r.t.to_string(),
            opt(r.eg),
            opt(r.delta),
            opt(r.kl_star),
            r.a.to_string(),
            r.b.to_string(),
            num(r.loss),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<RoundRecord>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &TRACE_HEADER)?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(RoundRecord {
                t: field(&rec, 0)?,
                eg: opt_field(&rec, 1)?,
                delta: opt_field(&rec, 2)?,
                kl_star: opt_field(&rec, 3)?,
                a: field(&rec, 4)?,
                b: field(&rec, 5)?,
                loss: field(&rec, 6)?,
            })
        })
        .collect()
}

pub fn write_curve_csv<W: Write>(curve: &RateCurve, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for c in &curve.points {
        w.write_record([c.t.to_string(), num(c.estimate), num(c.stderr), c.reps.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a curve; the norm order is not stored in the file and must be supplied.
pub fn read_curve_csv<R: Read>(input: R, p: f64) -> Result<RateCurve, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &CURVE_HEADER)?;
    let points = rdr
        .records()
        .map(|rec| {
            let rec = rec?;
            Ok(CurvePoint {
                t: field(&rec, 0)?,
                estimate: field(&rec, 1)?,
                stderr: field(&rec, 2)?,
                reps: field(&rec, 3)?,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(RateCurve { p, points })
}
