//! Hypothesis testing: a second-order prior picks which belief to update
//! once the first one is refuted.

use beliefkit::fixtures;
use beliefkit::hypothesis_testing::first_difference;
use beliefkit::{ht_rule, ht_select, os_rule, os_to_ht, rules_equal, validate_cps, CpsVerdict};

fn main() -> Result<(), beliefkit::Error> {
    let ht = fixtures::coin_ht_counterexample();
    let space = ht.space().clone();

    for labels in ["el,l1,l2", "e,el,l1,l2"] {
        let e = space.parse_event(labels)?;
        let (trace, belief) = ht_select(&ht, e)?;
        let scores: Vec<String> = trace.scores.iter().map(ToString::to_string).collect();
        println!("given {}: scores [{}] -> mu{}: {belief}", space.show(e), scores.join(", "), trace.chosen);
    }

    // With these weights the rule is not a CPS.
    if let CpsVerdict::Violation(w) = validate_cps(&ht_rule(&ht)?) {
        println!(
            "not a CPS: P({g}|{e}) = {} but P({g}|{f})·P({f}|{e}) = {}·{}",
            w.lhs,
            w.g_given_f,
            w.f_given_e,
            g = space.show(w.g),
            f = space.show(w.f),
            e = space.show(w.e)
        );
    }
    let os = fixtures::coin_os();
    if let Some(e) = first_difference(&os_rule(&os), &ht_rule(&ht)?, space.events())? {
        println!("first event where it departs from ordered surprises: {}", space.show(e));
    }

    // Weights small enough that no later prior outbids an earlier one.
    let c = os_to_ht(&os);
    let rho: Vec<String> = c.ht.rho().iter().map(ToString::to_string).collect();
    println!("embedding rho = ({})", rho.join(", "));
    println!("same rule on every event: {}", rules_equal(&os_rule(&os), &ht_rule(&c.ht)?, space.events()));
    Ok(())
}
