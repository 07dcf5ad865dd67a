//! Space-time diagrams of repeated rule application.
//!
//! Each row of an orbit is a fixed-width prefix of the next iterate of a
//! rule on a stream. Rows are taken from the genuine stream iterates, not
//! from re-applying the rule to the clipped previous row; clipping would
//! corrupt the right edge by one cell per step.

use crate::ca::{apply, LocalRule};
use crate::error::{Error, Result};
use crate::stream::Stream;

/// A finite space-time diagram over the binary alphabet: equal-width
/// rows, one per iterate, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    rows: Vec<String>,
}

impl Orbit {
    /// Wraps pre-rendered rows. All rows must share one positive width
    /// and contain only 0 and 1.
    pub fn new(rows: Vec<String>) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::Other("an orbit needs at least one row".into()))?;
        let width = first.chars().count();
        if width == 0 {
            return Err(Error::Other("orbit rows must be nonempty".into()));
        }
        for (t, row) in rows.iter().enumerate() {
            if row.chars().count() != width {
                return Err(Error::Other(format!(
                    "row {t} has width {}, expected {width}",
                    row.chars().count()
                )));
            }
            if let Some(c) = row.chars().find(|&c| c != '0' && c != '1') {
                return Err(Error::Other(format!("row {t} contains {c:?}, expected 0 or 1")));
            }
        }
        Ok(Orbit { rows })
    }

    pub fn width(&self) -> usize {
        self.rows[0].chars().count()
    }

    /// Number of rule applications recorded; the orbit has steps+1 rows.
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }
}

/// Runs `rule` on `s` for `steps` iterations and keeps the first `width`
/// letters of every iterate, the input included.
pub fn orbit(rule: &LocalRule, s: &Stream, width: u64, steps: u64) -> Result<Orbit> {
    if !s.alphabet().is_binary() {
        return Err(Error::NonBinaryAlphabet { got: s.alphabet().as_string() });
    }
    rule.alphabet().expect_same(s.alphabet())?;
    if width == 0 {
        return Err(Error::Other("orbit width must be at least 1".into()));
    }
    if steps == 0 {
        return Err(Error::Other("orbit needs at least one step".into()));
    }
    let mut rows = Vec::with_capacity(steps as usize + 1);
    let mut current = s.clone();
    rows.push(current.prefix(width)?);
    for _ in 0..steps {
        current = apply(rule, &current)?;
        rows.push(current.prefix(width)?);
    }
    Ok(Orbit { rows })
}

/// Renders an orbit as a portable bitmap in the plain "P1" dialect:
/// header line, `<width> <height>` line, then one line of space-separated
/// cells per row. A 1 cell renders black.
pub fn to_pbm(o: &Orbit) -> Vec<u8> {
    let mut out = String::from("P1\n");
    out.push_str(&format!("{} {}\n", o.width(), o.rows().len()));
    for row in o.rows() {
        let cells: Vec<String> = row.chars().map(|c| c.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

/// Renders an orbit as plain text, one row of 0/1 per line.
pub fn to_ascii(o: &Orbit) -> String {
    let mut out = String::new();
    for row in o.rows() {
        out.push_str(row);
        out.push('\n');
    }
    out
}
