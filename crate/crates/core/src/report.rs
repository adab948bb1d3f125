//! Census report assembly: deterministic row ordering, text/CSV/JSON
//! rendering, and multiset comparison against golden files.
//!
//! CSV columns follow the census table layout — order, type, group pair,
//! the four all/λ-centralizing/ρ-invariant/both columns — with the
//! λ-invariant/ρ-centralizing/all-four columns appended. Text and CSV output
//! is byte-deterministic for identical inputs; wall-time metadata lives only
//! in the JSON form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::brace::CensusRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "order,type,add_group,mul_group,total,only_lambda_centralizing,\
only_rho_invariant,both,only_lambda_invariant,only_rho_centralizing,all_four";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub mode: String,
}

/// A full census report; rows are sorted deterministically at construction:
/// by order, then group-pair name, then count signature.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<CensusRow>,
}

/// The comparison key: everything except the bookkeeping fields.
pub type RowKey = (usize, String, String, [u64; 7]);

pub fn row_key(r: &CensusRow) -> RowKey {
    (
        r.order,
        r.add_group.clone(),
        r.mul_group.clone(),
        [
            r.counts.total,
            r.counts.only_lc,
            r.counts.only_ri,
            r.counts.both_lc_ri,
            r.counts.only_li,
            r.counts.only_rc,
            r.counts.all_four,
        ],
    )
}

impl CensusReport {
    pub fn new(mode: impl Into<String>, mut rows: Vec<CensusRow>) -> Self {
        rows.sort_by_key(row_key);
        CensusReport {
            metadata: ReportMetadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                mode: mode.into(),
            },
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let c = &r.counts;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.order,
                r.type_index,
                r.add_group,
                r.mul_group,
                c.total,
                c.only_lc,
                c.only_ri,
                c.both_lc_ri,
                c.only_li,
                c.only_rc,
                c.all_four
            )
            .expect("write to string");
        }
        out
    }

    pub fn to_text(&self) -> String {
        let header = [
            "order", "type", "(B,+)", "(B,o)", "total", "only-lc", "only-ri", "both", "only-li",
            "only-rc", "all",
        ];
        let mut cells: Vec<[String; 11]> = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let c = &r.counts;
            cells.push([
                r.order.to_string(),
                r.type_index.to_string(),
                r.add_group.clone(),
                r.mul_group.clone(),
                c.total.to_string(),
                c.only_lc.to_string(),
                c.only_ri.to_string(),
                c.both_lc_ri.to_string(),
                c.only_li.to_string(),
                c.only_rc.to_string(),
                c.all_four.to_string(),
            ]);
        }
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in &cells {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        let fmt_row = |cols: &[String], widths: &[usize], out: &mut String| {
            for (i, c) in cols.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                let _ = write!(out, "{:>width$}", c, width = widths[i]);
            }
            out.push('\n');
        };
        fmt_row(
            &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            &widths,
            &mut out,
        );
        for row in &cells {
            fmt_row(row, &widths, &mut out);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Parses rows out of a census CSV (the same format [`CensusReport::to_csv`]
/// emits; `wall_ms` is absent there and reads back as 0).
pub fn parse_csv(text: &str) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => return Err(Error::structure("census CSV must start with the standard header")),
    }
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::structure(format!(
                "line {}: expected 11 fields, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let num = |i: usize| -> Result<u64> {
            fields[i]
                .trim()
                .parse()
                .map_err(|_| Error::structure(format!("line {}: bad number {:?}", lineno + 1, fields[i])))
        };
        rows.push(CensusRow {
            order: num(0)? as usize,
            type_index: num(1)? as usize,
            add_group: fields[2].trim().to_string(),
            mul_group: fields[3].trim().to_string(),
            counts: crate::reflect::ReflectionCounts {
                total: num(4)?,
                only_lc: num(5)?,
                only_ri: num(6)?,
                both_lc_ri: num(7)?,
                only_li: num(8)?,
                only_rc: num(9)?,
                all_four: num(10)?,
            },
            wall_ms: 0.0,
        });
    }
    Ok(rows)
}

/// Multiset comparison of two row sets keyed by (order, group pair, counts);
/// type indices and timings are ignored. Returns the rows missing from each
/// side, empty when the multisets agree.
pub fn diff_rows(ours: &[CensusRow], golden: &[CensusRow]) -> (Vec<RowKey>, Vec<RowKey>) {
    let mut a: Vec<RowKey> = ours.iter().map(row_key).collect();
    let mut b: Vec<RowKey> = golden.iter().map(row_key).collect();
    a.sort();
    b.sort();
    let mut only_ours = Vec::new();
    let mut only_golden = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if i == a.len() {
            only_golden.push(b[j].clone());
            j += 1;
        } else if j == b.len() {
            only_ours.push(a[i].clone());
            i += 1;
        } else {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    only_ours.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    only_golden.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    (only_ours, only_golden)
}
