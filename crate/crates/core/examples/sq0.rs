//! The algebraic squaring operation Sq0 on Ext, from the chain map lifting
//! the exponent-halving map V.
//!
//! cargo run --release --example sq0

use steenrod_ext::chainmaps::lift_sq0;
use steenrod_ext::collectors::collect_sq0;
use steenrod_ext::io_formats::report_files::write_products;
use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let mut res = Resolution::new();
    res.extend(5, 48)?;
    let v = lift_sq0(&res, 5)?;
    let entries = collect_sq0(&v);
    print!("{}", write_products(&entries));
    Ok(())
}
