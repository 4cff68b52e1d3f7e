//! The periodicity operators P, P2, P4 and M', as bracket tables with the
//! products that obstruct them or give their indeterminacy.
//!
//! cargo run --release --example operators

use steenrod_ext::chainmaps::{lift_all, Cocycle};
use steenrod_ext::collectors::{
    bracket_value, collect_brackets, collect_products, himult_table, operator_report, MapRef, OperatorKind,
    ProductTable,
};
use steenrod_ext::io_formats::report_files::write_operator_report;
use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let (smax, tmax) = (8, 48);
    let mut res = Resolution::new();
    res.extend(smax, tmax)?;
    let cocycles = res
        .generators()
        .map(|id| Cocycle::dual_to(&res, id.s, id.g))
        .collect::<Result<Vec<_>, _>>()?;
    let maps = lift_all(&res, &cocycles, smax)?;
    let products = collect_products(&maps)?;
    let mut brackets = Vec::new();
    for m in &maps {
        brackets.extend(collect_brackets(m)?);
    }

    let report = operator_report(OperatorKind::P, &products, &brackets);
    print!("{}", write_operator_report(&report));

    let table = ProductTable::new(&products, maps.iter().map(MapRef::of).collect::<Result<Vec<_>, _>>()?);
    let himults = himult_table(&res.extract_himults());
    let p = OperatorKind::P;
    let value = bracket_value(&res, &table, &himults, &brackets, p.hopf_index(), p.middle(), (2, 5), true)?;
    println!("\nP(2_5) = {:?}", value.elements());
    Ok(())
}
