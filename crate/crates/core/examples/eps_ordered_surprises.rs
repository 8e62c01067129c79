//! Ordered surprises with a threshold: a prior stays in charge until the
//! event has probability at most ε under it.

use beliefkit::fixtures;
use beliefkit::{eps_os_to_ht, eps_os_update, ht_select, surprise_partition, Rational};

fn main() -> Result<(), beliefkit::Error> {
    let os = fixtures::coin_os();
    let space = os.space().clone();
    let e = space.parse_event("e,el,l1")?;

    for eps in ["0", "1/8", "1/4", "1/2"] {
        let eps: Rational = eps.parse().expect("literal");
        let partition = surprise_partition(&os, &eps)?;
        let sizes: Vec<usize> = partition.classes.iter().map(Vec::len).collect();
        let update = match eps_os_update(&os, &eps, e) {
            Ok(b) => b.to_string(),
            Err(err) => err.to_string(),
        };
        println!("eps {eps}: classes {sizes:?}, {} undefined; given {}: {update}", partition.undefined.len(), space.show(e));
    }

    let eps = Rational::new(1, 4);
    let c = eps_os_to_ht(&os, &eps)?;
    println!("embedding at eps 1/4: {} priors, threshold {}", c.ht.priors().len(), c.threshold());
    for (j, (level, source)) in c.levels.iter().zip(&c.sources).enumerate() {
        println!("  prior {j}: order {level}, from {}, rho {}", space.show(*source), c.ht.rho()[j]);
    }
    println!("relation edges: {:?}", c.relation);
    let (trace, belief) = ht_select(&c.ht, e)?;
    println!("hypothesis testing given {}: prior {} -> {belief}", space.show(e), trace.chosen);
    Ok(())
}
