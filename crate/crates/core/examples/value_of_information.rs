//! Ex-ante indifference that learning resolves. Under ordered surprises the
//! edge outcome breaks the tie; a lexicographic system already ranked the
//! acts before learning anything.

use beliefkit::fixtures;
use beliefkit::lps::indifference_resolution_demo;
use beliefkit::{clps_condition, lps_value, os_prefer};

fn main() -> Result<(), beliefkit::Error> {
    let fam = fixtures::coin_family();
    let lps = fixtures::coin_lps();
    let u = fixtures::money_utility();
    let space = lps.space().clone();
    let g = fixtures::edge_hedge(&space);
    let edges = space.parse_event("e,el")?;

    for v in [1, 2] {
        let f = fixtures::faces_bet(&space, v);
        println!("v = {v}: lps values f {} g {}", lps_value(&lps, &u, &f)?, lps_value(&lps, &u, &g)?);
        println!("  ordered surprises ex ante: {}", os_prefer(&fam, space.full(), &f, &g)?);
    }

    let f = fixtures::faces_bet(&space, 1);
    let r = indifference_resolution_demo(&fam, &lps, &u, &f, &g, edges)?;
    println!("given {}:", space.show(edges));
    println!("  ordered surprises: {}", r.os_given);
    println!("  conditional lps over {} level(s): {}", clps_condition(&lps, edges)?.len(), r.clps_given);
    println!("resolved only under ordered surprises: {}", r.os_only_resolution());
    Ok(())
}
