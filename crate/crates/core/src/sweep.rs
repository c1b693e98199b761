//! Parameter-grid sweeps over hypersurface tuples with deterministic CSV and
//! JSON-lines rendering.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::vtev_hypersurface_closed;
use crate::enumerativity::certify_enumerative;
use crate::error::{Error, Result};
use crate::jacobian::{tev_hypersurface_engine, HypParams};

pub const CSV_HEADER: &str =
    "g,d,e,r,n,t,value_closed,value_engine,agreement,virtual_range,bound_ok,certified";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRanges {
    pub g: RangeInclusive<u32>,
    pub d: RangeInclusive<u32>,
    pub e: RangeInclusive<u32>,
    pub r: RangeInclusive<u32>,
}

/// One valid tuple. Big integers are kept as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub g: u32,
    pub d: u32,
    pub e: u32,
    pub r: u32,
    pub n: u32,
    pub t: u32,
    pub value_closed: String,
    pub value_engine: String,
    pub agreement: bool,
    pub virtual_range: bool,
    pub bound_ok: bool,
    pub certified: bool,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.g,
            self.d,
            self.e,
            self.r,
            self.n,
            self.t,
            self.value_closed,
            self.value_engine,
            self.agreement,
            self.virtual_range,
            self.bound_ok,
            self.certified
        )
    }
}

/// Evaluates one tuple; `Ok(None)` when `(g, d, e, r)` is not a valid tuple.
pub fn evaluate(g: u32, d: u32, e: u32, r: u32) -> Result<Option<SweepRow>> {
    let params = match HypParams::new(g, d, e, r) {
        Ok(p) => p,
        Err(Error::InvalidParameters(_)) => return Ok(None),
        Err(err) => return Err(err),
    };
    let closed = vtev_hypersurface_closed(g, d, e, r)?;
    let engine = tev_hypersurface_engine(&params)?;
    let cert = certify_enumerative(g, d, e, r)?;
    Ok(Some(SweepRow {
        g,
        d,
        e,
        r,
        n: params.n(),
        t: params.t(),
        agreement: closed.value == engine,
        value_closed: closed.value.to_string(),
        value_engine: engine.to_string(),
        virtual_range: closed.virtual_range,
        bound_ok: closed.bound_ok,
        certified: cert.certified,
    }))
}

/// All valid tuples in the ranges, sorted by `(e, r, g, d)`.
pub fn sweep(ranges: &SweepRanges) -> Result<Vec<SweepRow>> {
    let mut tuples = Vec::new();
    for e in ranges.e.clone() {
        for r in ranges.r.clone() {
            for g in ranges.g.clone() {
                for d in ranges.d.clone() {
                    tuples.push((e, r, g, d));
                }
            }
        }
    }
    let rows: Vec<Option<SweepRow>> = tuples
        .par_iter()
        .map(|&(e, r, g, d)| evaluate(g, d, e, r))
        .collect::<Result<_>>()?;
    // tuples were generated in (e, r, g, d) order and collect preserves it
    Ok(rows.into_iter().flatten().collect())
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

pub fn render_jsonl(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    for row in rows {
        let line = serde_json::to_string(row).expect("rows serialize");
        writeln!(out, "{line}").expect("write to string");
    }
    out
}
