//! `all.products`, `all.sq0` and the operator files `P.txt`, `P2.txt`,
//! `P4.txt`, `MM.txt`.

use std::fmt::Write as _;

use super::map_files::{format_bracket_sym, parse_bracket_sym_line};
use crate::collectors::{MapRef, OperatorKind, OperatorReport, ProductEntry};
use crate::error::{Error, Result};

/// `  s    g  ( s0   g0     F2)  s1_g1`
pub fn format_product(e: &ProductEntry) -> String {
    format!(
        "{:>3}{:>5}  ({:>3}{:>5}{:>7})  {}",
        e.s, e.g, e.s0, e.g0, "F2", e.map
    )
}

/// One paragraph per `(s, g)`, separated by blank lines. Entries are written
/// in the given order.
pub fn write_products(entries: &[ProductEntry]) -> String {
    let mut out = String::new();
    let mut last: Option<(u32, u32)> = None;
    for e in entries {
        if last.is_some_and(|l| l != (e.s, e.g)) {
            out.push('\n');
        }
        last = Some((e.s, e.g));
        out.push_str(&format_product(e));
        out.push('\n');
    }
    out
}

/// Lists the entries without paragraph breaks.
fn write_product_lines(entries: &[ProductEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format_product(e));
        out.push('\n');
    }
    out
}

pub fn parse_product_line(file: &str, line_no: usize, line: &str) -> Result<ProductEntry> {
    let cleaned = line.replace(['(', ')'], " ");
    let f: Vec<&str> = cleaned.split_whitespace().collect();
    let bad = |m: &str| Error::parse(file, line_no, format!("{m} in '{line}'"));
    if f.len() != 6 || f[4] != "F2" || !line.contains('(') || !line.contains(')') {
        return Err(bad("expected 's g ( s0 g0 F2) map'"));
    }
    let n = |t: &str| t.parse::<u32>().map_err(|_| bad("bad index"));
    Ok(ProductEntry {
        s: n(f[0])?,
        g: n(f[1])?,
        s0: n(f[2])?,
        g0: n(f[3])?,
        map: f[5].parse().map_err(|_| bad("bad map name"))?,
    })
}

pub fn parse_products(file: &str, text: &str) -> Result<Vec<ProductEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_product_line(file, i + 1, l))
        .collect()
}

const SECTION_TITLES: [&str; 3] = [
    "(a) values of the brackets",
    "(b) nonzero products which obstruct existence of the bracket",
    "(c) nonzero products which give the indeterminacy",
];

/// Header, then sections `(a)`, `(b)`, `(c)`. Bracket values are grouped
/// by filtration with blank lines between groups.
pub fn write_operator_report(r: &OperatorReport) -> String {
    let mut out = String::new();
    writeln!(out, "{}", r.kind.description()).expect("string write");
    for title in SECTION_TITLES {
        writeln!(out, "{title}").expect("string write");
    }
    out.push_str("\n(a)\n\n");
    let mut last_s = None;
    for b in &r.values {
        if last_s.is_some_and(|s| s != b.s) {
            out.push('\n');
        }
        last_s = Some(b.s);
        out.push_str(&format_bracket_sym(b));
        out.push('\n');
    }
    out.push_str("\n(b)\n\n");
    out.push_str(&write_product_lines(&r.obstructions));
    out.push_str("\n(c)\n\n");
    out.push_str(&write_product_lines(&r.indeterminacy));
    out
}

pub fn parse_operator_report(file: &str, text: &str) -> Result<OperatorReport> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty operator file"))?;
    let kind = OperatorKind::ALL
        .into_iter()
        .find(|k| k.description() == first.trim())
        .ok_or_else(|| Error::parse(file, 1, format!("unknown operator '{first}'")))?;
    let mut report = OperatorReport {
        kind,
        values: Vec::new(),
        obstructions: Vec::new(),
        indeterminacy: Vec::new(),
    };
    let mut section = None;
    for (i, line) in lines {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || SECTION_TITLES.contains(&trimmed) {
            continue;
        }
        match trimmed {
            "(a)" | "(b)" | "(c)" => {
                section = Some(trimmed);
                continue;
            }
            _ => {}
        }
        match section {
            Some("(a)") => report.values.push(parse_bracket_sym_line(file, line_no, line)?),
            Some("(b)") => report.obstructions.push(parse_product_line(file, line_no, line)?),
            Some("(c)") => report.indeterminacy.push(parse_product_line(file, line_no, line)?),
            _ => return Err(Error::parse(file, line_no, "text before section (a)")),
        }
    }
    Ok(report)
}

/// Every map named in a list of product entries.
pub fn maps_in(entries: &[ProductEntry]) -> Vec<MapRef> {
    let mut maps: Vec<MapRef> = entries.iter().map(|e| e.map).collect();
    maps.sort_unstable();
    maps.dedup();
    maps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collectors::BracketEntry;

    fn entry(s: u32, g: u32, s0: u32, g0: u32, map: &str) -> ProductEntry {
        ProductEntry { s, g, s0, g0, map: map.parse().unwrap() }
    }

    #[test]
    fn product_layout() {
        let e = entry(7, 13, 0, 0, "7_13");
        assert_eq!(format_product(&e), "  7   13  (  0    0     F2)  7_13");
        let sq = entry(1, 1, 1, 0, "Sq0");
        assert_eq!(format_product(&sq), "  1    1  (  1    0     F2)  Sq0");
        let list = vec![e, entry(7, 13, 1, 1, "6_14"), entry(7, 14, 0, 0, "7_14")];
        let text = write_products(&list);
        assert_eq!(
            text,
            "  7   13  (  0    0     F2)  7_13\n  7   13  (  1    1     F2)  6_14\n\n  7   14  (  0    0     F2)  7_14\n"
        );
        assert_eq!(parse_products("p", &text).unwrap(), list);
        assert_eq!(parse_products("p", "7 13 ( 1 1 F2) 6_14").unwrap(), vec![list[1]]);
        assert!(parse_products("p", "7 13 1 1 F2 6_14").is_err());
    }

    #[test]
    fn operator_file_round_trip() {
        let r = OperatorReport {
            kind: OperatorKind::P,
            values: vec![
                BracketEntry { s: 5, g: 1, i: 3, g0: 0, s1: 1, g1: 1 },
                BracketEntry { s: 6, g: 1, i: 3, g0: 0, s1: 2, g1: 1 },
            ],
            obstructions: vec![entry(5, 0, 4, 0, "1_0")],
            indeterminacy: vec![entry(6, 5, 1, 3, "5_1")],
        };
        let text = write_operator_report(&r);
        assert!(text.contains("\n(a)\n\n5_1 in < h3, 0, 1_1 >\n\n6_1 in < h3, 0, 2_1 >\n"));
        assert!(text.contains("  5    0  (  4    0     F2)  1_0\n"));
        assert_eq!(parse_operator_report("P.txt", &text).unwrap(), r);
    }
}
