//! CSV tables: the timeline schema (written by the CLI, read back as
//! tabulated rates) and the region-map schema.
//!
//! Numbers use the shortest decimal that round-trips to the same `f64`, in
//! exponent form below `1e-5` or from `1e16` up.
//! NaN is written as an empty field; a vacuous coherence margin as `inf`.

use std::io::{Read, Write};

use crate::divisibility::DivisibilityVerdict;
use crate::error::{Error, Result};
use crate::map::RateSample;
use crate::rates::Tabulated;
use crate::sweep::RegionCell;

pub const TIMELINE_HEADER: [&str; 13] = [
    "t",
    "gamma_plus",
    "gamma_minus",
    "Gamma",
    "omega",
    "cp",
    "p",
    "blp",
    "margin_cp",
    "margin_p1",
    "margin_p2",
    "margin_blp",
    "divergent",
];

pub const REGION_HEADER: [&str; 3] = ["Gamma", "gamma_plus", "region"];

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == 0.0 {
        // also folds −0
        "0".into()
    } else if v.is_finite() && (v.abs() < 1e-5 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn table_err(e: impl std::fmt::Display) -> Error {
    Error::Table(e.to_string())
}

fn comment<W: Write>(out: &mut W, text: &str) -> Result<()> {
    for line in text.lines() {
        writeln!(out, "# {line}").map_err(table_err)?;
    }
    Ok(())
}

/// One row per sample, in the order given. `preamble` lines (e.g. the time
/// unit) are written as `#` comments before the header.
pub fn write_timeline<W: Write>(
    mut out: W,
    preamble: &str,
    rows: &[(RateSample, DivisibilityVerdict)],
) -> Result<()> {
    comment(&mut out, preamble)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIMELINE_HEADER).map_err(table_err)?;
    for (rs, v) in rows {
        w.write_record([
            num(rs.t),
            num(rs.gamma_plus),
            num(rs.gamma_minus),
            num(rs.decoherence),
            num(rs.omega),
            flag(v.cp).into(),
            flag(v.p).into(),
            flag(v.blp).into(),
            num(v.margin_cp),
            num(v.margin_p.population),
            num(v.margin_p.coherence),
            num(v.margin_blp),
            flag(v.divergent).into(),
        ])
        .map_err(table_err)?;
    }
    w.flush().map_err(table_err)
}

/// A parsed timeline row. Rates are NaN where the field was empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelineRecord {
    pub sample: RateSample,
    pub cp: bool,
    pub p: bool,
    pub blp: bool,
    pub divergent: bool,
}

fn parse_num(field: &str, line: u64) -> Result<f64> {
    if field.is_empty() {
        return Ok(f64::NAN);
    }
    field
        .parse()
        .map_err(|_| Error::Table(format!("line {line}: bad number {field:?}")))
}

fn parse_flag(field: &str, line: u64) -> Result<bool> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::Table(format!("line {line}: bad flag {field:?}"))),
    }
}

pub fn read_timeline<R: Read>(input: R) -> Result<Vec<TimelineRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let header = r.headers().map_err(table_err)?.clone();
    if header.iter().ne(TIMELINE_HEADER) {
        return Err(Error::Table(format!(
            "unexpected header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(table_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let f = |i: usize| parse_num(&rec[i], line);
        let b = |i: usize| parse_flag(&rec[i], line);
        out.push(TimelineRecord {
            sample: RateSample::new(f(0)?, f(1)?, f(2)?, f(3)?, f(4)?),
            cp: b(5)?,
            p: b(6)?,
            blp: b(7)?,
            divergent: b(12)?,
        });
    }
    Ok(out)
}

/// Rates from a timeline CSV, skipping divergent and incomplete rows.
pub fn read_tabulated<R: Read>(input: R) -> Result<Tabulated> {
    let knots = read_timeline(input)?
        .into_iter()
        .filter(|r| !r.divergent && r.sample.is_finite())
        .map(|r| r.sample)
        .collect();
    Tabulated::new(knots)
}

pub fn write_region<W: Write>(mut out: W, preamble: &str, cells: &[RegionCell]) -> Result<()> {
    comment(&mut out, preamble)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REGION_HEADER).map_err(table_err)?;
    for c in cells {
        w.write_record([num(c.decoherence), num(c.gamma_plus), c.region().label().into()])
            .map_err(table_err)?;
    }
    w.flush().map_err(table_err)
}
