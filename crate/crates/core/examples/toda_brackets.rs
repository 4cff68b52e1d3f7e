//! Bracket entries from the Sq^(2^i) coefficients of a lifted map, and
//! evaluation of brackets with their indeterminacy.
//!
//! cargo run --release --example toda_brackets

use steenrod_ext::chainmaps::{lift_all, lift_cocycle, Cocycle};
use steenrod_ext::collectors::{
    bracket_value, collect_brackets, collect_products, himult_table, BracketValue, MapRef, ProductTable,
};
use steenrod_ext::io_formats::map_files::format_bracket_sym;
use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let mut res = Resolution::new();
    res.extend(6, 24)?;

    let h0 = lift_cocycle(&res, &Cocycle::dual_to(&res, 1, 0)?, 6)?;
    for b in collect_brackets(&h0)?.iter().filter(|b| b.s <= 3) {
        println!("{}", format_bracket_sym(b));
    }

    let cocycles = res
        .generators()
        .map(|id| Cocycle::dual_to(&res, id.s, id.g))
        .collect::<Result<Vec<_>, _>>()?;
    let maps = lift_all(&res, &cocycles, 6)?;
    let products = collect_products(&maps)?;
    let table = ProductTable::new(&products, maps.iter().map(MapRef::of).collect::<Result<Vec<_>, _>>()?);
    let himults = himult_table(&res.extract_himults());
    let mut brackets = Vec::new();
    for m in &maps {
        brackets.extend(collect_brackets(m)?);
    }

    println!();
    for (i, p0, p1) in [(4, (1, 0), (1, 0)), (1, (1, 0), (1, 1)), (2, (1, 1), (1, 2))] {
        let v = bracket_value(&res, &table, &himults, &brackets, i, p0, p1, true)?;
        let name = format!("< h{i}, {}_{}, {}_{} >", p0.0, p0.1, p1.0, p1.1);
        match v {
            BracketValue::Undefined(obstructions) => {
                for o in obstructions {
                    println!("{name} undefined: {} = {:?}", o.description, o.value);
                }
            }
            defined => println!("{name} = {:?}", defined.elements()),
        }
    }
    Ok(())
}
