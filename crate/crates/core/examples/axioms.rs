//! Consequentialism, conditional consistency and risk independence on a
//! preference family with one utility per surprise order.

use beliefkit::fixtures;
use beliefkit::preferences::{
    check_conditional_consistency, check_consequentialism, check_risk_independence, consequentialism_pairs,
    constant_act_rankings_agree, default_triples, null_states, risk_probe_lotteries,
};
use beliefkit::{PreferenceFamily, Rational, UtilityFunction};

fn main() -> Result<(), beliefkit::Error> {
    let fam = fixtures::coin_family();
    let space = fam.os().space().clone();
    let u0 = fixtures::money_utility();

    let e = space.parse_event("h,e,el")?;
    println!("null states given {}: {}", space.show(e), space.show(null_states(&fam, e)?));

    let pairs = consequentialism_pairs(&space, e, &u0)?;
    let holds = check_consequentialism(&fam, e, &pairs)?.is_none();
    println!("consequentialism over {} pairs: {}", pairs.len(), if holds { "holds" } else { "fails" });

    let triples = default_triples(&space, &u0)?;
    for (outer, inner) in [("h,t,e,el,l1,l2", "h,t"), ("e,el,l1,l2", "e,el"), ("e,el,l1,l2", "el")] {
        let (outer, inner) = (space.parse_event(outer)?, space.parse_event(inner)?);
        let w = check_conditional_consistency(&fam, outer, inner, &triples)?;
        println!("consistency of {} within {}: {}", space.show(inner), space.show(outer), if w.is_none() { "holds" } else { "fails" });
    }

    // Rescaled utilities at later orders leave every ranking intact; a
    // convex one changes how lotteries are ranked after a surprise.
    let rescaled = u0.affine(&Rational::new(2, 1), &Rational::new(3, 1));
    let convex = UtilityFunction::new(u0.table().iter().map(|(x, v)| (x.clone(), v * v)));
    let probes = risk_probe_lotteries(&u0)?;
    for (name, uk) in [("2u+3", rescaled), ("u^2", convex)] {
        let fam = PreferenceFamily::new(fam.os().clone(), vec![u0.clone(), uk, u0.clone()])?;
        let report = check_risk_independence(&fam)?;
        println!(
            "{name} at order 1: holds {}, coefficients {:?}, lottery rankings agree {}",
            report.holds,
            report.coefficients.get(&1).map(|(a, b)| (a.to_string(), b.to_string())),
            constant_act_rankings_agree(&fam, &probes)?
        );
    }
    Ok(())
}
