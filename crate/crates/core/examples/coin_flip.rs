//! Ordered surprises on the coin: faces are expected, an edge landing is a
//! surprise, and a marked landing spot is a bigger one.

use beliefkit::fixtures;
use beliefkit::{os_update, surprise_partition, Rational};

fn main() -> Result<(), beliefkit::Error> {
    let os = fixtures::coin_os();
    let space = os.space().clone();

    for labels in ["h", "h,t,e", "e,el,l1,l2", "el,l1,l2", "l1"] {
        let e = space.parse_event(labels)?;
        let k = os.surprise_order(e)?;
        println!("given {}: order {k}, belief {}", space.show(e), os_update(&os, e)?);
    }

    let partition = surprise_partition(&os, &Rational::zero())?;
    for (k, class) in partition.classes.iter().enumerate() {
        println!("mu{k} updates {} events", class.len());
    }
    Ok(())
}
