//! Checking the chain rule and recovering the ordered surprises behind a
//! conditional probability system.

use beliefkit::fixtures;
use beliefkit::ordered_surprises::canonicalize_os;
use beliefkit::{bayesian_rule, cps_to_os, os_rule, validate_cps, Belief, CpsVerdict, OsRepresentation, Rational};

fn main() -> Result<(), beliefkit::Error> {
    let space = fixtures::coin_space();

    // Bayes alone leaves the null events without a belief.
    let [mu0, mu1, mu2] = fixtures::coin_priors();
    let bayes = bayesian_rule(&mu0);
    if let Some(e) = bayes.first_missing() {
        println!("bayes from mu0 is undefined on {} of 63 events, first {}", 63 - bayes.len(), space.show(e));
    }

    // Overlapping priors: the later ones only matter off the earlier supports.
    let wide = Belief::uniform(&space, space.parse_event("e,el,l1,l2")?)?;
    let overlapping = vec![mu0.clone(), wide, mu1, mu2];
    let canonical = canonicalize_os(&overlapping)?;
    println!("canonical form keeps {} of {} priors:", canonical.priors.len(), overlapping.len());
    for (k, mu) in canonical.priors.iter().enumerate() {
        println!("  mu{k} = {mu}");
    }

    let rule = os_rule(&OsRepresentation::new(overlapping)?);
    println!("induced rule is a CPS: {}", validate_cps(&rule).is_valid());
    let recovered = cps_to_os(&rule)?;
    println!("peeled back into {} priors, same rule: {}", recovered.len(), os_rule(&recovered) == rule);

    // A single altered conditional breaks the chain rule.
    let tilted = Belief::from_pairs(&space, &[("e", Rational::new(3, 4)), ("el", Rational::new(1, 4))])?;
    let edges = space.parse_event("e,el")?;
    let broken = beliefkit::UpdatingRule::tabulate(&space, |e| {
        Ok(if e == edges { tilted.clone() } else { rule.get(e).expect("complete").clone() })
    })?;
    if let CpsVerdict::Violation(w) = validate_cps(&broken) {
        println!(
            "violation at G={} F={} E={}: {} vs {}·{}",
            space.show(w.g),
            space.show(w.f),
            space.show(w.e),
            w.lhs,
            w.g_given_f,
            w.f_given_e
        );
    }
    Ok(())
}
