//! `Def`, `MAXFILT`, `Shape`, `Maxt`, `hDiff.s` and `himults`.

use std::fmt::Write as _;

use super::notation::{parse_term_line, write_term_line, Notation};
use super::Cursor;
use crate::error::{Error, Result};
use crate::milnor::MilnorAlgebra;
use crate::resolution::{HimultEntry, ModuleElt, ModuleTerm, Resolution};

/// The module F2: one generator in degree 0.
pub fn write_module_def() -> String {
    "1\n0\n".to_string()
}

pub fn parse_module_def(text: &str) -> Result<Vec<u32>> {
    let mut c = Cursor::new("Def", text);
    let n = c.number::<usize>("dimension")?;
    let mut degrees = Vec::with_capacity(n);
    for _ in 0..n {
        degrees.push(c.number("degree")?);
    }
    c.expect_end()?;
    Ok(degrees)
}

pub fn write_maxfilt(s_max: u32) -> String {
    format!("{s_max}\n")
}

pub fn parse_maxfilt(text: &str) -> Result<u32> {
    let mut c = Cursor::new("MAXFILT", text);
    let s = c.number("maximum filtration")?;
    c.expect_end()?;
    Ok(s)
}

/// Generator degrees of every `C_s`, `s = 0..=S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shape {
    pub degrees: Vec<Vec<u32>>,
}

impl Shape {
    pub fn of(res: &Resolution) -> Self {
        let stages = res.max_s().map_or(0, |s| s as usize + 1);
        Shape {
            degrees: (0..stages as u32)
                .map(|s| res.generator_degrees(s).to_vec())
                .collect(),
        }
    }

    pub fn s_max(&self) -> u32 {
        self.degrees.len().saturating_sub(1) as u32
    }
}

/// `S`, then the generator counts, then one line of degrees per `C_s`.
pub fn write_shape(shape: &Shape) -> String {
    let mut out = format!("{}\n", shape.s_max());
    let counts: Vec<String> = shape.degrees.iter().map(|d| d.len().to_string()).collect();
    out.push_str(&counts.join(" "));
    out.push('\n');
    for degs in &shape.degrees {
        let line: Vec<String> = degs.iter().map(|d| d.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Whitespace-tolerant: the degrees may be laid out in any way.
pub fn parse_shape(text: &str) -> Result<Shape> {
    let mut c = Cursor::new("Shape", text);
    let s_max: usize = c.number("maximum filtration")?;
    let mut counts = Vec::with_capacity(s_max + 1);
    for _ in 0..=s_max {
        counts.push(c.number::<usize>("generator count")?);
    }
    let mut degrees = Vec::with_capacity(s_max + 1);
    for (s, &n) in counts.iter().enumerate() {
        let mut degs = Vec::with_capacity(n);
        for _ in 0..n {
            degs.push(c.number::<u32>("generator degree")?);
        }
        if degs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::parse("Shape", c.line(), format!("degrees of C_{s} decrease")));
        }
        degrees.push(degs);
    }
    c.expect_end()?;
    Ok(Shape { degrees })
}

/// One line per `s`; `-1` for a stage with nothing computed.
pub fn write_maxt(maxt: &[Option<u32>]) -> String {
    let mut out = String::new();
    for m in maxt {
        match m {
            Some(t) => writeln!(out, "{t}").expect("string write"),
            None => out.push_str("-1\n"),
        }
    }
    out
}

pub fn parse_maxt(text: &str) -> Result<Vec<Option<u32>>> {
    let mut c = Cursor::new("Maxt", text);
    let mut out = Vec::new();
    while !c.at_end() {
        let v: i64 = c.number("degree")?;
        out.push(match v {
            -1 => None,
            v if v >= 0 && v <= u32::MAX as i64 => Some(v as u32),
            v => return Err(Error::parse("Maxt", c.line(), format!("bad degree {v}"))),
        });
    }
    Ok(out)
}

/// Writes one element as its term count followed by term lines.
pub(crate) fn write_element(
    out: &mut String,
    x: &ModuleElt,
    algebra: &MilnorAlgebra,
    notation: Notation,
) {
    writeln!(out, "{}", x.terms().len()).expect("string write");
    for term in x.terms() {
        let basis = algebra.basis(term.coeff.degree());
        out.push_str(&write_term_line(term.gen, &term.coeff, &basis, notation));
        out.push('\n');
    }
}

/// Reads a term count and that many term lines. `degree_of_gen` gives the
/// degree of each target generator, if known, for a homogeneity check.
pub(crate) fn parse_element(
    c: &mut Cursor<'_>,
    algebra: &MilnorAlgebra,
    degree: u32,
    degree_of_gen: impl Fn(u32) -> Option<u32>,
) -> Result<ModuleElt> {
    let count: usize = c.number("term count")?;
    let mut terms = Vec::with_capacity(count);
    let mut last: Option<u32> = None;
    for _ in 0..count {
        let (line_no, line) = c.next_line("term line")?;
        let (gen, coeff) =
            parse_term_line(line, algebra).map_err(|m| Error::parse(c.file(), line_no, m))?;
        if last.is_some_and(|l| l >= gen) {
            return Err(Error::parse(
                c.file(),
                line_no,
                "terms must list distinct generators in increasing order",
            ));
        }
        last = Some(gen);
        if coeff.is_zero() {
            return Err(Error::parse(c.file(), line_no, "zero coefficient"));
        }
        if let Some(tg) = degree_of_gen(gen) {
            if tg + coeff.degree() != degree {
                return Err(Error::parse(
                    c.file(),
                    line_no,
                    format!(
                        "term of degree {} in an element of degree {degree}",
                        tg + coeff.degree()
                    ),
                ));
            }
        }
        terms.push(ModuleTerm { gen, coeff });
    }
    Ok(ModuleElt::from_terms(degree, terms))
}

/// The differentials of one `C_s`, as stored in `hDiff.s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HDiff {
    pub maxt: Option<u32>,
    pub degrees: Vec<u32>,
    pub diffs: Vec<ModuleElt>,
}

impl HDiff {
    pub fn of(res: &Resolution, s: u32) -> Self {
        let degrees = res.generator_degrees(s).to_vec();
        let diffs = (0..degrees.len() as u32)
            .map(|g| res.differential(s, g).clone())
            .collect();
        HDiff {
            maxt: res.maxt(s),
            degrees,
            diffs,
        }
    }
}

/// Header `ngens maxt` in two right-aligned columns of width 10, then per
/// generator: degree, blank line, the element, blank line.
pub fn write_hdiff(h: &HDiff, algebra: &MilnorAlgebra) -> String {
    let maxt = h.maxt.map_or(-1, i64::from);
    let mut out = format!("{:>10}{:>10}\n", h.degrees.len(), maxt);
    for (t, d) in h.degrees.iter().zip(&h.diffs) {
        writeln!(out, "{t}\n").expect("string write");
        write_element(&mut out, d, algebra, Notation::Milnor);
        out.push('\n');
    }
    out
}

pub fn parse_hdiff(file: &str, text: &str, algebra: &MilnorAlgebra) -> Result<HDiff> {
    let mut c = Cursor::new(file, text);
    let n: usize = c.number("generator count")?;
    let maxt: i64 = c.number("completion degree")?;
    let maxt = match maxt {
        -1 => None,
        m if m >= 0 && m <= u32::MAX as i64 => Some(m as u32),
        m => return Err(Error::parse(file, c.line(), format!("bad completion degree {m}"))),
    };
    let mut degrees = Vec::with_capacity(n);
    let mut diffs = Vec::with_capacity(n);
    for _ in 0..n {
        let t: u32 = c.number("degree")?;
        if degrees.last().is_some_and(|&l| l > t) {
            return Err(Error::parse(file, c.line(), "generator degrees decrease"));
        }
        diffs.push(parse_element(&mut c, algebra, t, |_| None)?);
        degrees.push(t);
    }
    c.expect_end()?;
    Ok(HDiff {
        maxt,
        degrees,
        diffs,
    })
}

/// `s g s0 g0 i`, one entry per line.
pub fn write_himults(entries: &[HimultEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(out, "{} {} {} {} {}", e.s, e.g, e.s0, e.g0, e.i).expect("string write");
    }
    out
}

pub fn parse_himults(text: &str) -> Result<Vec<HimultEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f = super::fields::<u32>("himults", i + 1, line, 5)?;
        if f[0] != f[2] + 1 {
            return Err(Error::parse("himults", i + 1, "s must equal s0 + 1"));
        }
        out.push(HimultEntry {
            s: f[0],
            g: f[1],
            s0: f[2],
            g0: f[3],
            i: f[4],
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_shape() {
        let shape = Shape {
            degrees: vec![vec![0], vec![1, 2]],
        };
        let text = write_shape(&shape);
        assert_eq!(text, "1\n1 2\n0\n1 2\n");
        assert_eq!(parse_shape(&text).unwrap(), shape);
        assert_eq!(parse_shape("1 1 2 0 1 2").unwrap(), shape);
        assert!(parse_shape("1\n1 2\n0\n1").is_err());
    }

    #[test]
    fn hdiff_first_stage_layout() {
        let mut r = Resolution::new();
        r.extend(2, 9).unwrap();
        let alg = MilnorAlgebra::new();
        let text = write_hdiff(&HDiff::of(&r, 1), &alg);
        assert!(text.starts_with("         4         9\n1\n\n1\n0 1 1 i(1).\n\n2\n\n1\n0 2 1 i(2).\n"));
        let text2 = write_hdiff(&HDiff::of(&r, 2), &alg);
        assert!(text2.contains(
            "\n9\n\n3\n0 8 4 i(8)(2,2).\n1 7 4 i(7)(4,1)(0,0,1).\n3 1 1 i(1).\n"
        ));
        for s in 0..=2 {
            let h = HDiff::of(&r, s);
            assert_eq!(parse_hdiff("hDiff", &write_hdiff(&h, &alg), &alg).unwrap(), h);
        }
    }

    #[test]
    fn hdiff_rejects_malformed_terms() {
        let alg = MilnorAlgebra::new();
        let good = "1 5\n1\n\n1\n0 1 1 i(1).\n";
        assert!(parse_hdiff("h", good, &alg).is_ok());
        assert!(parse_hdiff("h", "1 5\n1\n\n1\n0 1 2 i(1).\n", &alg).is_err());
        assert!(parse_hdiff("h", "1 5\n1\n\n2\n0 1 1 i(1).\n", &alg).is_err());
        assert!(parse_hdiff("h", "1 5\n1\n\n1\n0 1 1 i(1)\n", &alg).is_err());
    }

    #[test]
    fn maxt_and_himults() {
        let m = vec![Some(9), Some(9), None];
        assert_eq!(parse_maxt(&write_maxt(&m)).unwrap(), m);
        let h = vec![HimultEntry { s: 2, g: 4, s0: 1, g0: 3, i: 0 }];
        assert_eq!(write_himults(&h), "2 4 1 3 0\n");
        assert_eq!(parse_himults("2 4 1 3 0\n").unwrap(), h);
        assert!(parse_himults("2 4 2 3 0\n").is_err());
        assert_eq!(parse_maxfilt(&write_maxfilt(12)).unwrap(), 12);
        assert_eq!(parse_module_def(&write_module_def()).unwrap(), vec![0]);
    }
}
