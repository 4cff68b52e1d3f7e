//! Independent checks of a computation: d^2 = 0, exactness by rank counts,
//! minimality, and dm = md for every lifted map.
//!
//! cargo run --release --example validity_checks

use steenrod_ext::chainmaps::{lift_all, lift_sq0, Cocycle};
use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let (smax, tmax) = (7, 36);
    let mut res = Resolution::new();
    res.extend(smax, tmax)?;
    println!("d^2 violations: {}", res.check_d2().len());
    println!("exactness violations: {}", res.check_exactness()?.len());
    println!("minimal: {}", res.is_minimal());

    let cocycles = res
        .generators()
        .map(|id| Cocycle::dual_to(&res, id.s, id.g))
        .collect::<Result<Vec<_>, _>>()?;
    let mut maps = lift_all(&res, &cocycles, smax)?;
    maps.push(lift_sq0(&res, smax)?);
    let bad: usize = maps.iter().map(|m| m.verify(&res).len()).sum();
    let gaps: usize = maps.iter().map(|m| m.gaps(&res, smax).len()).sum();
    println!("{} maps: {bad} chain-map violations, {gaps} missing entries", maps.len());
    Ok(())
}
