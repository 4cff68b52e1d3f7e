//! Products in the Milnor basis, including the Adem relations they encode.
//!
//! cargo run --example milnor_products

use steenrod_ext::milnor::{enumerate_basis, multiply, multiply_elt, AlgebraElt, MilnorElt};

fn main() -> steenrod_ext::Result<()> {
    let sq = MilnorElt::sq;
    for (a, b) in [(1, 1), (1, 2), (2, 2), (3, 2), (2, 4), (4, 4)] {
        println!("Sq{a} * Sq{b} = {}", multiply(sq(a), sq(b)));
    }

    let r = MilnorElt::new(&[0, 1])?;
    let s = MilnorElt::new(&[2, 1])?;
    println!("{r:?} * {s:?} = {}", multiply(r, s));

    let left = multiply_elt(&multiply(sq(1), sq(2)), &AlgebraElt::from_monomials(1, [sq(1)])?);
    let right = multiply_elt(&AlgebraElt::from_monomials(1, [sq(1)])?, &multiply(sq(2), sq(1)));
    println!("(Sq1 Sq2) Sq1 = {left}, Sq1 (Sq2 Sq1) = {right}");

    println!();
    for t in 0..=12 {
        let basis = enumerate_basis(t);
        let names: Vec<String> = basis.elements().iter().map(|m| m.to_string()).collect();
        println!("degree {t:>2}: {:>2} = {}", basis.len(), names.join(" "));
    }
    Ok(())
}
