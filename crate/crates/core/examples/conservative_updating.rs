//! Conservative updating keeps part of the prior after conditioning, so
//! beliefs leak outside the conditioning event.

use beliefkit::fixtures;
use beliefkit::preferences::{check_consequentialism, consequentialism_pairs, RuleFamily};
use beliefkit::{conservative_rule, validate_cps, Rational};

fn main() -> Result<(), beliefkit::Error> {
    let [mu0, ..] = fixtures::coin_priors();
    let space = mu0.space().clone();

    for delta in [Rational::new(1, 2), Rational::one()] {
        let rule = conservative_rule(&mu0, &delta)?;
        println!("delta {delta}: complete {}, concentrated {}", rule.is_complete(), rule.is_concentrated());
        for (e, mass) in rule.concentration_violations().take(3) {
            println!("  P({0}|{0}) = {mass}", space.show(e));
        }
        println!("  CPS: {}", validate_cps(&rule).is_valid());
    }

    let u = fixtures::money_utility();
    let fam = RuleFamily::new(conservative_rule(&mu0, &Rational::new(1, 2))?, u.clone())?;
    let h = space.parse_event("h")?;
    if let Some(w) = check_consequentialism(&fam, h, &consequentialism_pairs(&space, h, &u)?)? {
        println!("given {}, acts equal on it are ranked: {}", space.show(h), w.verdict);
    }
    Ok(())
}
