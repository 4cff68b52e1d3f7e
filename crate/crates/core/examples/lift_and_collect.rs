//! Lift every cocycle to a chain map and read products off the augmented
//! maps, as in all.products.
//!
//! cargo run --release --example lift_and_collect

use std::time::Instant;

use steenrod_ext::chainmaps::{lift_all, Cocycle};
use steenrod_ext::collectors::{collect_products, compute_product, indecomposables, MapRef, ProductTable};
use steenrod_ext::io_formats::report_files::write_products;
use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let start = Instant::now();
    let mut res = Resolution::new();
    res.extend(8, 45)?;
    let cocycles = res
        .generators()
        .map(|id| Cocycle::dual_to(&res, id.s, id.g))
        .collect::<Result<Vec<_>, _>>()?;
    let maps = lift_all(&res, &cocycles, 8)?;
    println!("{} maps lifted in {:.2?}", maps.len(), start.elapsed());

    let products = collect_products(&maps)?;
    let paragraph: Vec<_> = products
        .iter()
        .filter(|e| e.s == 7 && (e.g == 13 || e.g == 14))
        .copied()
        .collect();
    print!("{}", write_products(&paragraph));

    let table = ProductTable::new(&products, maps.iter().map(MapRef::of).collect::<Result<Vec<_>, _>>()?);
    let p = compute_product(&res, &table, (1, 3), (6, 10))?;
    println!("\n1_3 * 6_10 = {p:?}");

    let ind = indecomposables(&res, &products);
    println!("indecomposables through s=8, t=45: {}", ind.total());
    Ok(())
}
