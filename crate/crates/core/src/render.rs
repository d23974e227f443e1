//! Text rendering of multiple alignments, and parsing renderings back.
//!
//! Two equivalent layouts are supported. In the rows layout each pattern is
//! one line and matched symbols are joined by `|` connectors. In the columns
//! layout each pattern is one text column and matched symbols are joined by
//! runs of `-`.

use std::collections::BTreeMap;

use crate::alignment::{Cell, MultipleAlignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Rows,
    Columns,
}

pub fn render_alignment(a: &MultipleAlignment, orientation: Orientation) -> String {
    match orientation {
        Orientation::Rows => render_rows(a),
        Orientation::Columns => render_columns(a),
    }
}

fn row_span(col: &[Cell]) -> (usize, usize) {
    let lo = col.iter().map(|c| c.0).min().unwrap();
    let hi = col.iter().map(|c| c.0).max().unwrap();
    (lo, hi)
}

fn render_rows(a: &MultipleAlignment) -> String {
    let nrows = a.rows().len();
    let label_w = (nrows - 1).to_string().len();
    let widths: Vec<usize> = a
        .columns()
        .iter()
        .map(|col| col.iter().map(|&c| a.symbol(c).text().len()).max().unwrap())
        .collect();
    let mut out = String::new();
    for r in 0..nrows {
        if r > 0 {
            let mut line = format!("{:label_w$}", "");
            for (col, &w) in a.columns().iter().zip(&widths) {
                let (lo, hi) = row_span(col);
                let bar = if lo < r && hi >= r { "|" } else { "" };
                line.push_str(&format!(" {bar:w$}"));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let mut line = format!("{r:label_w$}");
        for (col, &w) in a.columns().iter().zip(&widths) {
            let (lo, hi) = row_span(col);
            let cell = match col.iter().find(|c| c.0 == r) {
                Some(&c) => a.symbol(c).text().to_string(),
                None if lo < r && r < hi => "|".to_string(),
                None => String::new(),
            };
            line.push_str(&format!(" {cell:w$}"));
        }
        line.push_str(&format!(" {r}"));
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn render_columns(a: &MultipleAlignment) -> String {
    let nrows = a.rows().len();
    let mut starts = Vec::with_capacity(nrows);
    let mut x = 0;
    for (r, row) in a.rows().iter().enumerate() {
        starts.push(x);
        let w = row
            .symbols
            .iter()
            .map(|s| s.text().len())
            .max()
            .unwrap_or(0)
            .max(r.to_string().len());
        x += w + 3;
    }
    let labels = {
        let mut line = String::new();
        for (r, &s) in starts.iter().enumerate() {
            while line.len() < s {
                line.push(' ');
            }
            line.push_str(&r.to_string());
        }
        line
    };
    let mut out = String::new();
    out.push_str(&labels);
    out.push_str("\n\n");
    for col in a.columns() {
        let mut line: Vec<u8> = Vec::new();
        let mut prev_end: Option<usize> = None;
        let mut cells: Vec<Cell> = col.clone();
        cells.sort_unstable();
        for &(r, p) in &cells {
            let s = starts[r];
            if let Some(e) = prev_end {
                while line.len() < e + 1 {
                    line.push(b' ');
                }
                while line.len() < s - 1 {
                    line.push(b'-');
                }
            }
            while line.len() < s {
                line.push(b' ');
            }
            let text = a.symbol((r, p)).text();
            line.extend_from_slice(text.as_bytes());
            prev_end = Some(line.len());
        }
        out.push_str(std::str::from_utf8(&line).unwrap_or_default());
        out.push('\n');
    }
    out.push('\n');
    out.push_str(&labels);
    out.push('\n');
    out
}

/// Recovers the column structure of a rendering: each column as the sorted
/// list of `(row, position)` occurrences, in rendering order.
pub fn parse_rendering(text: &str, orientation: Orientation) -> Vec<Vec<Cell>> {
    match orientation {
        Orientation::Rows => parse_rows(text),
        Orientation::Columns => parse_columns(text),
    }
}

fn tokens_with_offsets(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

fn parse_rows(text: &str) -> Vec<Vec<Cell>> {
    let mut by_offset: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    for line in text.lines() {
        let toks = tokens_with_offsets(line);
        let Some(&(0, label)) = toks.first() else {
            continue;
        };
        let Ok(row) = label.parse::<usize>() else {
            continue;
        };
        // drop the leading and trailing row labels
        let body = &toks[1..toks.len() - 1];
        let mut pos = 0;
        for &(x, tok) in body {
            if tok == "|" {
                continue;
            }
            by_offset.entry(x).or_default().push((row, pos));
            pos += 1;
        }
    }
    by_offset
        .into_values()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect()
}

fn parse_columns(text: &str) -> Vec<Vec<Cell>> {
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return Vec::new();
    };
    let starts: Vec<usize> = tokens_with_offsets(header).iter().map(|t| t.0).collect();
    let mut next_pos = vec![0usize; starts.len()];
    let mut out = Vec::new();
    for line in lines {
        let toks: Vec<(usize, &str)> = tokens_with_offsets(line)
            .into_iter()
            .filter(|(_, t)| !t.chars().all(|c| c == '-'))
            .collect();
        if toks.is_empty() {
            continue;
        }
        if toks.iter().all(|(_, t)| t.parse::<usize>().is_ok()) && toks.len() == starts.len() {
            // closing header
            continue;
        }
        let mut col = Vec::new();
        for (x, _) in toks {
            if let Some(r) = starts.iter().position(|&s| s == x) {
                col.push((r, next_pos[r]));
                next_pos[r] += 1;
            }
        }
        col.sort_unstable();
        out.push(col);
    }
    out
}
