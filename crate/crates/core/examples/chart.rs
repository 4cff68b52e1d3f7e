//! Draw an Adams chart of Ext as TikZ or SVG.
//!
//! cargo run --release --example chart -- [tikz|svg] > chart.tex

use steenrod_ext::chart::{render_chart, ChartFormat, ChartSpec};
use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let format = match std::env::args().nth(1).as_deref() {
        Some("svg") => ChartFormat::Svg,
        _ => ChartFormat::Tikz,
    };
    let mut res = Resolution::new();
    res.extend(12, 34)?;
    let spec = ChartSpec::new(0..=12, 0..=20).with_format(format);
    print!("{}", render_chart(&res, &res.extract_himults(), &spec)?);
    Ok(())
}
