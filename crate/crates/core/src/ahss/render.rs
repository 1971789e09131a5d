//! Page dumps: an aligned grid with t descending and s ascending, followed by
//! the differential log, or the same data as JSON.

use std::fmt::Write;

use super::engine::SpectralSequence;
use super::{Page, Status, Variant};

fn cell(page: &Page, s: u32, t: i64) -> String {
    if page.variant == Variant::Differential && s == 0 && t == 0 {
        return if page.form_slot.is_some() { "Omega".into() } else { "?".into() };
    }
    match page.entry(s, t) {
        None => String::new(),
        Some(e) if e.is_zero() && e.determined => ".".into(),
        Some(e) => {
            let mark = if e.determined { "" } else { "?" };
            format!("{}{mark}", e.group)
        }
    }
}

pub fn page_text(page: &Page) -> String {
    let cols: Vec<u32> = (0..=page.dimension).collect();
    let rows: Vec<i64> = (page.rows.0..=page.rows.1).rev().collect();
    let grid: Vec<Vec<String>> = rows.iter().map(|&t| cols.iter().map(|&s| cell(page, s, t)).collect()).collect();
    let width = grid.iter().flatten().map(|c| c.len()).max().unwrap_or(1).max(3);
    let label_w = rows.iter().map(|t| t.to_string().len()).max().unwrap_or(1).max(3);
    let mut out = String::new();
    let variant = match page.variant {
        Variant::Topological => "KO",
        Variant::Differential => "differential KO",
    };
    writeln!(out, "E_{} for {} of {}", page.r, variant, page.space).unwrap();
    write!(out, "{:>label_w$} |", "t\\s").unwrap();
    for s in &cols {
        write!(out, " {s:>width$}").unwrap();
    }
    out.push('\n');
    writeln!(out, "{}", "-".repeat(label_w + 2 + cols.len() * (width + 1))).unwrap();
    for (t, row) in rows.iter().zip(&grid) {
        write!(out, "{t:>label_w$} |").unwrap();
        for c in row {
            write!(out, " {c:>width$}").unwrap();
        }
        out.push('\n');
    }
    if let Some(slot) = &page.form_slot {
        writeln!(out, "form slot: {}", slot.render()).unwrap();
    }
    out
}

pub fn status_text(status: &Status) -> String {
    match status {
        Status::ZeroByAlgebra { reason } => format!("zero ({reason})"),
        Status::Unsupported { reason } => format!("UNSUPPORTED ({reason})"),
        other => other.tag().to_string(),
    }
}

pub fn log_text(page: &Page) -> String {
    let mut out = String::new();
    for d in &page.differentials {
        let rule = if d.rule.is_empty() { String::new() } else { format!(" [{}]", d.rule) };
        writeln!(
            out,
            "d_{} ({},{}) -> ({},{}){rule}: {}",
            d.r,
            d.source.0,
            d.source.1,
            d.target.0,
            d.target.1,
            status_text(&d.status)
        )
        .unwrap();
    }
    out
}

/// Every page with its log; E_infinity last.
pub fn sequence_text(ss: &SpectralSequence) -> String {
    let mut out = String::new();
    for (i, page) in ss.pages.iter().enumerate() {
        if i + 1 == ss.pages.len() {
            out.push_str("E_infinity\n");
        }
        out.push_str(&page_text(page));
        let log = log_text(page);
        if !log.is_empty() {
            out.push_str(&log);
        }
        out.push('\n');
    }
    out
}

pub fn sequence_json(ss: &SpectralSequence) -> String {
    serde_json::to_string_pretty(ss).expect("serialisable") + "\n"
}
