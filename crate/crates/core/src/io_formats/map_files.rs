//! Cocycle `Def`, chain map `Map`/`Map.aug`, and `brackets`/`brackets.sym`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::notation::{parse_term_line, write_term_line, Notation};
use super::resolution_files::{parse_element, write_element};
use super::Cursor;
use crate::chainmaps::{AugEntry, ChainMap, Cocycle, MapKind, RawBracket};
use crate::collectors::BracketEntry;
use crate::error::{Error, Result};
use crate::milnor::{AlgebraElt, MilnorAlgebra};
use crate::resolution::{ModuleElt, Resolution};

/// A cochain `C_s -> Σ^t N` as written in a `Def` file: for each listed
/// generator, a sum of `a * n` with `n` a basis element of `N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CochainDef {
    pub s: u32,
    pub t: u32,
    pub source: String,
    pub target: String,
    pub name: String,
    pub values: Vec<(u32, Vec<(u32, AlgebraElt)>)>,
}

impl CochainDef {
    pub fn for_cocycle(c: &Cocycle) -> Self {
        CochainDef {
            s: c.s,
            t: c.t,
            source: "F2".into(),
            target: "F2".into(),
            name: c.name.clone(),
            values: c
                .gens
                .iter()
                .map(|&g| (g, vec![(0, AlgebraElt::unit())]))
                .collect(),
        }
    }

    /// Reads an F2-valued cochain: every value must be the unit on basis
    /// element 0.
    pub fn to_cocycle(&self) -> Result<Cocycle> {
        if self.target != "F2" {
            return Err(Error::Format(format!(
                "{}: only cochains with values in F2 can be lifted",
                self.name
            )));
        }
        let mut gens = Vec::new();
        for (g, value) in &self.values {
            let mut unit = false;
            for (n, a) in value {
                if *n != 0 || a.degree() != 0 {
                    return Err(Error::Format(format!(
                        "{}: value on generator {g} does not lie in F2",
                        self.name
                    )));
                }
                unit ^= !a.is_zero();
            }
            if unit {
                gens.push(*g);
            }
        }
        Ok(Cocycle {
            s: self.s,
            t: self.t,
            name: self.name.clone(),
            gens,
        })
    }
}

pub fn write_cochain_def(def: &CochainDef, algebra: &MilnorAlgebra, notation: Notation) -> String {
    let mut out = format!(
        " {} {} {} {} {} {}\n",
        def.s,
        def.t,
        def.source,
        def.target,
        def.name,
        def.values.len()
    );
    for (g, value) in &def.values {
        writeln!(out, "\n{g}\n\n{}", value.len()).expect("string write");
        for (n, a) in value {
            let basis = algebra.basis(a.degree());
            out.push_str(&write_term_line(*n, a, &basis, notation));
            out.push('\n');
        }
    }
    out
}

pub fn parse_cochain_def(file: &str, text: &str, algebra: &MilnorAlgebra) -> Result<CochainDef> {
    let mut c = Cursor::new(file, text);
    let s = c.number("s")?;
    let t = c.number("t")?;
    let source = c.word("source module")?.to_string();
    let target = c.word("target module")?.to_string();
    let name = c.word("name")?.to_string();
    let n: usize = c.number("value count")?;
    let mut values = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    for _ in 0..n {
        let g: u32 = c.number("generator")?;
        if !seen.insert(g) {
            return Err(Error::parse(file, c.line(), format!("generator {g} listed twice")));
        }
        let count: usize = c.number("term count")?;
        let mut value = Vec::with_capacity(count);
        for _ in 0..count {
            let (line_no, line) = c.next_line("term line")?;
            value.push(parse_term_line(line, algebra).map_err(|m| Error::parse(file, line_no, m))?);
        }
        values.push((g, value));
    }
    c.expect_end()?;
    Ok(CochainDef {
        s,
        t,
        source,
        target,
        name,
        values,
    })
}

/// Entries in `(s, g)` order: `s g 0` for a zero image, else `s g` followed
/// by the element. Missing images are not written.
pub fn write_map(map: &ChainMap, algebra: &MilnorAlgebra) -> String {
    let mut out = String::new();
    for k in 0..map.level_count() {
        let s = map.s0() + k as u32;
        for (g, image) in map.level(k).iter().enumerate() {
            match image {
                None => {}
                Some(x) if x.is_zero() => writeln!(out, "{s} {g} 0").expect("string write"),
                Some(x) => {
                    writeln!(out, "{s} {g}").expect("string write");
                    write_element(&mut out, x, algebra, Notation::Milnor);
                }
            }
        }
    }
    out
}

/// Reads a `Map` file, whose entries may come in any order. Degrees come
/// from the resolution, against which every term is checked.
pub fn parse_map(
    file: &str,
    text: &str,
    res: &Resolution,
    name: &str,
    kind: MapKind,
    s0: u32,
    t0: u32,
) -> Result<ChainMap> {
    let mut map = ChainMap::from_levels(name, kind, s0, t0, Vec::new());
    let mut seen = BTreeSet::new();
    let mut c = Cursor::new(file, text);
    while !c.at_end() {
        let (line_no, header) = c.next_line("entry header")?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let parse = |t: &str| {
            t.parse::<u32>()
                .map_err(|e| Error::parse(file, line_no, format!("bad index '{t}': {e}")))
        };
        let (s, g) = match f.as_slice() {
            [s, g] | [s, g, "0"] => (parse(s)?, parse(g)?),
            _ => return Err(Error::parse(file, line_no, format!("bad entry header '{header}'"))),
        };
        if !seen.insert((s, g)) {
            return Err(Error::parse(file, line_no, format!("duplicate entry {s} {g}")));
        }
        if s < s0 || g as usize >= res.generator_count(s) {
            return Err(Error::parse(file, line_no, format!("{s}_{g}* is not a source generator")));
        }
        let t = res.generator(s, g).t;
        let target = match kind {
            MapKind::Cocycle => t.checked_sub(t0),
            MapKind::Sq0 => t.is_multiple_of(2).then_some(t / 2),
        };
        let k = s - s0;
        let image = if f.len() == 3 {
            ModuleElt::zero(target.unwrap_or(0))
        } else {
            let u = target.ok_or_else(|| {
                Error::parse(file, line_no, format!("{s}_{g}* must map to zero"))
            })?;
            let degs = res.generator_degrees(k);
            parse_element(&mut c, res.algebra(), u, |h| degs.get(h as usize).copied())?
        };
        for term in image.terms() {
            if term.gen as usize >= res.generator_count(k) {
                return Err(Error::parse(file, line_no, format!("no generator {k}_{}", term.gen)));
            }
        }
        map.set_image(s, g, Some(image));
    }
    Ok(map)
}

pub fn write_map_aug(entries: &[AugEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(out, "{} {} {}", e.s, e.g, e.g0).expect("string write");
    }
    out
}

pub fn parse_map_aug(text: &str) -> Result<Vec<AugEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f = super::fields::<u32>("Map.aug", i + 1, line, 3)?;
        out.push(AugEntry {
            s: f[0],
            g: f[1],
            g0: f[2],
        });
    }
    Ok(out)
}

/// `s g 2^i g0`: the third field is the internal degree of `h_i`.
pub fn write_brackets(entries: &[RawBracket]) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(out, "{} {} {} {}", e.s, e.g, 1u64 << e.i, e.g0).expect("string write");
    }
    out
}

pub fn parse_brackets(text: &str) -> Result<Vec<RawBracket>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f = super::fields::<u64>("brackets", i + 1, line, 4)?;
        if !f[2].is_power_of_two() {
            return Err(Error::parse(
                "brackets",
                i + 1,
                format!("{} is not the degree of some h_i", f[2]),
            ));
        }
        let small = |v: u64| {
            u32::try_from(v).map_err(|_| Error::parse("brackets", i + 1, "index out of range"))
        };
        out.push(RawBracket {
            s: small(f[0])?,
            g: small(f[1])?,
            i: f[2].trailing_zeros(),
            g0: small(f[3])?,
        });
    }
    Ok(out)
}

pub fn format_bracket_sym(b: &BracketEntry) -> String {
    format!("{}_{} in < h{}, {}, {}_{} >", b.s, b.g, b.i, b.g0, b.s1, b.g1)
}

pub fn write_brackets_sym(entries: &[BracketEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format_bracket_sym(e));
        out.push('\n');
    }
    out
}

pub fn parse_bracket_sym_line(file: &str, line_no: usize, line: &str) -> Result<BracketEntry> {
    let bad = || Error::parse(file, line_no, format!("bad bracket line '{line}'"));
    let (lhs, rest) = line.trim().split_once(" in ").ok_or_else(bad)?;
    let inner = rest
        .trim()
        .strip_prefix('<')
        .and_then(|r| r.strip_suffix('>'))
        .ok_or_else(bad)?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let [h, g0, map] = parts.as_slice() else {
        return Err(bad());
    };
    let class = |t: &str| -> Result<(u32, u32)> {
        let (a, b) = t.split_once('_').ok_or_else(bad)?;
        Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
    };
    let (s, g) = class(lhs)?;
    let (s1, g1) = class(map)?;
    let i = h.strip_prefix('h').and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    let g0 = g0.parse().map_err(|_| bad())?;
    // the middle class lies in filtration s - s1
    if s1 > s {
        return Err(bad());
    }
    Ok(BracketEntry { s, g, i, g0, s1, g1 })
}

pub fn parse_brackets_sym(text: &str) -> Result<Vec<BracketEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_bracket_sym_line("brackets.sym", i + 1, l))
        .collect()
}
