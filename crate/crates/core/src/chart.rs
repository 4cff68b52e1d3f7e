//! Adams charts: a dot for each generator at `(n, s)`, `n = t - s`, with
//! lines for multiplication by `h0`, `h1` and `h2`.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::resolution::{HimultEntry, Resolution};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChartFormat {
    Tikz,
    Svg,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChartSpec {
    pub s: RangeInclusive<u32>,
    pub n: RangeInclusive<u32>,
    pub labels: bool,
    pub lines: bool,
    pub format: ChartFormat,
}

impl ChartSpec {
    pub fn new(s: RangeInclusive<u32>, n: RangeInclusive<u32>) -> Self {
        ChartSpec {
            s,
            n,
            labels: true,
            lines: true,
            format: ChartFormat::Tikz,
        }
    }

    pub fn with_format(mut self, format: ChartFormat) -> Self {
        self.format = format;
        self
    }

    fn contains(&self, n: u32, s: u32) -> bool {
        self.n.contains(&n) && self.s.contains(&s)
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Dot {
    pub s: u32,
    pub g: u32,
    pub n: u32,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Segment {
    /// Which `h_i`.
    pub i: u32,
    pub from: (f64, f64),
    pub to: (f64, f64),
}

/// Positions of everything drawn, before any markup.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ChartLayout {
    pub dots: Vec<Dot>,
    pub segments: Vec<Segment>,
}

/// Vertical distance between dots sharing a bidegree.
const STACK: f64 = 0.18;

fn check_range(res: &Resolution, spec: &ChartSpec) -> Result<()> {
    if spec.s.is_empty() || spec.n.is_empty() {
        return Ok(());
    }
    for s in spec.s.clone() {
        let t = spec.n.end() + s;
        if !res.is_computed(s, t) {
            return Err(Error::Range(format!(
                "chart box reaches (n={}, s={s}) but the resolution is only known through {}",
                spec.n.end(),
                res.maxt(s).map_or("nothing".to_string(), |m| format!("t={m}")),
            )));
        }
    }
    Ok(())
}

pub fn chart_layout(res: &Resolution, himults: &[HimultEntry], spec: &ChartSpec) -> Result<ChartLayout> {
    check_range(res, spec)?;
    let mut layout = ChartLayout::default();
    if spec.s.is_empty() || spec.n.is_empty() {
        return Ok(layout);
    }
    let position = |s: u32, g: u32| -> Option<(u32, f64, f64)> {
        let t = *res.generator_degrees(s).get(g as usize)?;
        let n = t.checked_sub(s)?;
        if !spec.contains(n, s) {
            return None;
        }
        let range = res.generators_in_degree(s, t);
        let k = range.len() as f64;
        let j = (g - range.start) as f64;
        Some((n, n as f64, s as f64 + (j - (k - 1.0) / 2.0) * STACK))
    };
    for s in spec.s.clone() {
        for g in 0..res.generator_count(s) as u32 {
            if let Some((n, x, y)) = position(s, g) {
                layout.dots.push(Dot { s, g, n, x, y });
            }
        }
    }
    if spec.lines {
        for e in himults.iter().filter(|e| e.i <= 2) {
            if let (Some((_, x0, y0)), Some((_, x1, y1))) =
                (position(e.s0, e.g0), position(e.s, e.g))
            {
                layout.segments.push(Segment {
                    i: e.i,
                    from: (x0, y0),
                    to: (x1, y1),
                });
            }
        }
    }
    Ok(layout)
}

/// A standalone document in the chosen dialect.
pub fn render_chart(res: &Resolution, himults: &[HimultEntry], spec: &ChartSpec) -> Result<String> {
    let layout = chart_layout(res, himults, spec)?;
    Ok(match spec.format {
        ChartFormat::Tikz => render_tikz(&layout, spec),
        ChartFormat::Svg => render_svg(&layout, spec),
    })
}

fn bounds(spec: &ChartSpec) -> (f64, f64, f64, f64) {
    let (n0, n1) = (*spec.n.start() as f64, *spec.n.end() as f64);
    let (s0, s1) = (*spec.s.start() as f64, *spec.s.end() as f64);
    if spec.n.is_empty() || spec.s.is_empty() {
        return (n0, n0 + 1.0, s0, s0 + 1.0);
    }
    (n0, n1, s0, s1)
}

fn render_tikz(layout: &ChartLayout, spec: &ChartSpec) -> String {
    let (n0, n1, s0, s1) = bounds(spec);
    let mut out = String::new();
    out.push_str("\\documentclass{standalone}\n\\usepackage{tikz}\n\\begin{document}\n");
    out.push_str("\\begin{tikzpicture}[scale=0.6]\n");
    writeln!(out, "\\draw[->] ({:.2},{:.2}) -- ({:.2},{:.2}) node[right] {{$n$}};", n0 - 0.5, s0 - 0.5, n1 + 0.8, s0 - 0.5).unwrap();
    writeln!(out, "\\draw[->] ({:.2},{:.2}) -- ({:.2},{:.2}) node[above] {{$s$}};", n0 - 0.5, s0 - 0.5, n0 - 0.5, s1 + 0.8).unwrap();
    for n in spec.n.clone() {
        writeln!(out, "\\node[below, font=\\tiny] at ({n},{:.2}) {{{n}}};", s0 - 0.5).unwrap();
    }
    for s in spec.s.clone() {
        writeln!(out, "\\node[left, font=\\tiny] at ({:.2},{s}) {{{s}}};", n0 - 0.5).unwrap();
    }
    for seg in &layout.segments {
        writeln!(
            out,
            "\\draw ({:.2},{:.2}) -- ({:.2},{:.2});",
            seg.from.0, seg.from.1, seg.to.0, seg.to.1
        )
        .unwrap();
    }
    for d in &layout.dots {
        writeln!(out, "\\fill ({:.2},{:.2}) circle (0.07);", d.x, d.y).unwrap();
        if spec.labels {
            writeln!(
                out,
                "\\node[left, inner sep=1pt, font=\\tiny] at ({:.2},{:.2}) {{{}}};",
                d.x - 0.05,
                d.y,
                d.g
            )
            .unwrap();
        }
    }
    out.push_str("\\end{tikzpicture}\n\\end{document}\n");
    out
}

fn render_svg(layout: &ChartLayout, spec: &ChartSpec) -> String {
    const UNIT: f64 = 40.0;
    const MARGIN: f64 = 40.0;
    let (n0, n1, s0, s1) = bounds(spec);
    let width = (n1 - n0 + 1.0) * UNIT + 2.0 * MARGIN;
    let height = (s1 - s0 + 1.0) * UNIT + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - n0 + 0.5) * UNIT;
    let py = |y: f64| height - MARGIN - (y - s0 + 0.5) * UNIT;
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" font-family=\"serif\" font-size=\"9\">"
    )
    .unwrap();
    let (ox, oy) = (px(n0 - 0.5), py(s0 - 0.5));
    writeln!(out, "<line x1=\"{ox:.1}\" y1=\"{oy:.1}\" x2=\"{:.1}\" y2=\"{oy:.1}\" stroke=\"black\"/>", px(n1 + 0.5)).unwrap();
    writeln!(out, "<line x1=\"{ox:.1}\" y1=\"{oy:.1}\" x2=\"{ox:.1}\" y2=\"{:.1}\" stroke=\"black\"/>", py(s1 + 0.5)).unwrap();
    for n in spec.n.clone() {
        writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{n}</text>", px(n as f64), oy + 12.0).unwrap();
    }
    for s in spec.s.clone() {
        writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{s}</text>", ox - 4.0, py(s as f64) + 3.0).unwrap();
    }
    for seg in &layout.segments {
        writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"0.8\"/>",
            px(seg.from.0),
            py(seg.from.1),
            px(seg.to.0),
            py(seg.to.1)
        )
        .unwrap();
    }
    for d in &layout.dots {
        let (x, y) = (px(d.x), py(d.y));
        writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"2.5\"/>").unwrap();
        if spec.labels {
            writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"7\">{}</text>",
                x - 4.0,
                y + 2.5,
                d.g
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (Resolution, Vec<HimultEntry>) {
        let mut r = Resolution::new();
        r.extend(6, 22).unwrap();
        let h = r.extract_himults();
        (r, h)
    }

    #[test]
    fn stem_fifteen_lines() {
        let (r, h) = small();
        let spec = ChartSpec::new(3..=6, 13..=16);
        let layout = chart_layout(&r, &h, &spec).unwrap();
        let at = |s: u32, g: u32| {
            let d = layout.dots.iter().find(|d| (d.s, d.g) == (s, g)).unwrap();
            (d.x, d.y)
        };
        let joined = |a: (u32, u32), b: (u32, u32)| layout.segments.iter().any(|seg| seg.from == at(a.0, a.1) && seg.to == at(b.0, b.1));
        assert!(joined((4, 3), (5, 4)));
        assert!(joined((4, 4), (5, 5)));
    }

    #[test]
    fn dots_match_generator_counts() {
        let (r, h) = small();
        let spec = ChartSpec::new(0..=6, 0..=16);
        let layout = chart_layout(&r, &h, &spec).unwrap();
        let mut expected = 0;
        for s in 0..=6 {
            for n in 0..=16 {
                expected += r.ext_dimension(s, n + s);
            }
        }
        assert_eq!(layout.dots.len(), expected);
        let inside = |s: u32, g: u32| layout.dots.iter().any(|d| (d.s, d.g) == (s, g));
        let lines = h
            .iter()
            .filter(|e| e.i <= 2 && inside(e.s, e.g) && inside(e.s0, e.g0))
            .count();
        assert_eq!(layout.segments.len(), lines);
    }

    #[test]
    fn range_and_empty_box() {
        let (r, h) = small();
        assert!(matches!(
            render_chart(&r, &h, &ChartSpec::new(0..=6, 0..=40)),
            Err(Error::Range(_))
        ));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = ChartSpec::new(3..=2, 0..=4);
        let doc = render_chart(&r, &h, &empty).unwrap();
        assert!(doc.contains("\\draw[->]") && !doc.contains("circle"));
        let svg = render_chart(&r, &h, &ChartSpec::new(0..=3, 0..=7).with_format(ChartFormat::Svg)).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<circle"));
        assert_eq!(svg, render_chart(&r, &h, &ChartSpec::new(0..=3, 0..=7).with_format(ChartFormat::Svg)).unwrap());
    }
}
