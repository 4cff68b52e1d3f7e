//! Resolve F2 over the Steenrod algebra and print the Ext chart as a table of
//! dimensions, along with a few differentials.
//!
//! cargo run --release --example resolve -- [smax] [tmax]

use std::time::Instant;

use steenrod_ext::resolution::Resolution;

fn main() -> steenrod_ext::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("numeric argument"));
    let smax = args.next().unwrap_or(8);
    let tmax = args.next().unwrap_or(30);

    let start = Instant::now();
    let mut res = Resolution::new();
    res.extend(smax, tmax)?;
    println!("resolved s <= {smax}, t <= {tmax} in {:.2?}", start.elapsed());

    let nmax = tmax.saturating_sub(smax).min(tmax);
    println!("dim Ext^(s, s+n), n across, s down");
    for s in (0..=smax).rev() {
        let row: Vec<String> = (0..=nmax)
            .map(|n| match res.ext_dimension(s, s + n) {
                0 => ".".to_string(),
                d => d.to_string(),
            })
            .collect();
        println!("{s:>3} | {}", row.join(" "));
    }

    println!();
    for s in 1..=smax.min(2) {
        for g in 0..res.generator_count(s) as u32 {
            let id = res.generator(s, g);
            println!("d({id}*) [t={}] = {}", id.t, res.differential(s, g));
        }
    }
    Ok(())
}
