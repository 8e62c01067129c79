//! Ordered surprises: a hierarchy of priors `⟨μ₀,…,μ_K⟩` where conditioning
//! on `E` uses the lowest-order prior that gives `E` positive probability,
//! followed by Bayes' rule. The ε variant replaces "positive" with
//! "greater than ε".

use crate::belief::{bayes_update, Belief};
use crate::error::Error;
use crate::rational::Rational;
use crate::rules::{validate_cps, CpsVerdict, NotCandidate, UpdatingRule};
use crate::space::{Event, StateSpace};

/// An ordered list of priors whose supports jointly cover the state space.
///
/// Supports may overlap; [`OsRepresentation::canonical`] produces the
/// equivalent representation with pairwise disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OsRepresentation {
    space: StateSpace,
    priors: Vec<Belief>,
}

impl OsRepresentation {
    pub fn new(priors: Vec<Belief>) -> Result<Self, Error> {
        let space = shared_space(&priors)?;
        let covered = priors.iter().fold(Event::EMPTY, |acc, b| acc.union(b.support()));
        let uncovered = space.full().difference(covered);
        if !uncovered.is_empty() {
            return Err(Error::IncompleteCoverage { uncovered });
        }
        Ok(OsRepresentation { space, priors })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn priors(&self) -> &[Belief] {
        &self.priors
    }

    /// Number of priors, `K + 1`.
    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether supports are pairwise disjoint.
    pub fn is_canonical(&self) -> bool {
        let mut seen = Event::EMPTY;
        for b in &self.priors {
            if b.support().intersects(seen) {
                return false;
            }
            seen = seen.union(b.support());
        }
        true
    }

    /// The disjoint-support representation inducing the same rule.
    pub fn canonical(&self) -> OsRepresentation {
        let c = canonicalize_os(&self.priors).expect("priors share a space");
        OsRepresentation {
            space: self.space.clone(),
            priors: c.priors,
        }
    }

    /// Surprise order of `e`: the least `k` with `μ_k(e) > 0`.
    pub fn surprise_order(&self, e: Event) -> Result<usize, Error> {
        self.space.check(e)?;
        if e.is_empty() {
            return Err(Error::EmptyEvent);
        }
        Ok(self
            .priors
            .iter()
            .position(|b| b.support().intersects(e))
            .expect("coverage guarantees a feasible prior"))
    }

    /// Least `k` with `μ_k(e) > eps`, if any.
    pub fn threshold_order(&self, eps: &Rational, e: Event) -> Option<usize> {
        if eps.is_zero() {
            return self.priors.iter().position(|b| b.support().intersects(e));
        }
        self.priors.iter().position(|b| b.prob(e) > *eps)
    }
}

fn shared_space(priors: &[Belief]) -> Result<StateSpace, Error> {
    let first = priors.first().ok_or(Error::EmptyBeliefList)?;
    let space = first.space().clone();
    if priors.iter().any(|b| !b.space().same_as(&space)) {
        return Err(Error::SpaceMismatch);
    }
    Ok(space)
}

/// Result of canonicalizing a belief list. `uncovered` lists the states no
/// prior supports; the list is a complete representation only when it is
/// empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonicalized {
    pub priors: Vec<Belief>,
    pub uncovered: Event,
}

impl Canonicalized {
    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn into_representation(self) -> Result<OsRepresentation, Error> {
        if !self.uncovered.is_empty() {
            return Err(Error::IncompleteCoverage {
                uncovered: self.uncovered,
            });
        }
        OsRepresentation::new(self.priors)
    }
}

/// Zero out mass already claimed by a lower-order prior, renormalize, and
/// drop priors left with nothing.
pub fn canonicalize_os(priors: &[Belief]) -> Result<Canonicalized, Error> {
    let space = shared_space(priors)?;
    let mut claimed = Event::EMPTY;
    let mut out = Vec::with_capacity(priors.len());
    for b in priors {
        let fresh = space.full().difference(claimed);
        if !b.support().intersects(fresh) {
            continue;
        }
        let kept = bayes_update(b, fresh)?;
        claimed = claimed.union(kept.support());
        out.push(kept);
    }
    Ok(Canonicalized {
        priors: out,
        uncovered: space.full().difference(claimed),
    })
}

/// `BU(μ_{k*}, e)` with `k* = min{k : μ_k(e) > 0}`.
pub fn os_update(os: &OsRepresentation, e: Event) -> Result<Belief, Error> {
    let k = os.surprise_order(e)?;
    bayes_update(&os.priors[k], e)
}

/// The complete rule induced by an ordered-surprises representation.
pub fn os_rule(os: &OsRepresentation) -> UpdatingRule {
    UpdatingRule::tabulate(&os.space, |e| os_update(os, e)).expect("every nonempty event has a feasible prior")
}

/// Recover the canonical ordered-surprises representation of a CPS by
/// peeling: `μ_k = P(·|S_k)`, `S_{k+1} = S_k ∖ supp(μ_k)`, until nothing is left.
pub fn cps_to_os(rule: &UpdatingRule) -> Result<OsRepresentation, Error> {
    match validate_cps(rule) {
        CpsVerdict::Valid => {}
        CpsVerdict::Violation(w) => {
            let s = rule.space();
            return Err(Error::NotCps(format!(
                "chain rule fails at G={}, F={}, E={}: {} ≠ {}·{}",
                s.show(w.g),
                s.show(w.f),
                s.show(w.e),
                w.lhs,
                w.g_given_f,
                w.f_given_e
            )));
        }
        CpsVerdict::NotCandidate(NotCandidate::Incomplete { missing }) => {
            return Err(Error::NotCps(format!("not complete: no belief for {}", rule.space().show(missing))));
        }
        CpsVerdict::NotCandidate(NotCandidate::NotConcentrated { event, mass }) => {
            return Err(Error::NotCps(format!(
                "not concentrated: P(E|E) = {mass} at E = {}",
                rule.space().show(event)
            )));
        }
    }
    let space = rule.space().clone();
    let mut remaining = space.full();
    let mut priors = Vec::new();
    while !remaining.is_empty() {
        let mu = rule.get(remaining).expect("complete rule").clone();
        let feasible = mu.support().intersection(remaining);
        debug_assert!(!feasible.is_empty(), "concentrated rule has support inside the event");
        remaining = remaining.difference(feasible);
        priors.push(mu);
    }
    debug_assert!(priors.len() <= space.len());
    OsRepresentation::new(priors)
}

fn check_threshold(eps: &Rational) -> Result<(), Error> {
    if eps.is_negative() || *eps >= Rational::one() {
        return Err(Error::BadThreshold(eps.clone()));
    }
    Ok(())
}

/// `BU(μ_{k*}, e)` with `k* = min{k : μ_k(e) > eps}`.
pub fn eps_os_update(os: &OsRepresentation, eps: &Rational, e: Event) -> Result<Belief, Error> {
    check_threshold(eps)?;
    os.space.check(e)?;
    if e.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let k = os
        .threshold_order(eps, e)
        .ok_or(Error::NoPriorExceedsThreshold { event: e })?;
    bayes_update(&os.priors[k], e)
}

/// The nonempty events grouped by the prior that updates them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurprisePartition {
    /// `classes[k]` lists, in canonical order, the events updated with `μ_k`.
    pub classes: Vec<Vec<Event>>,
    /// Events on which no prior exceeds the threshold (only possible when `eps > 0`).
    pub undefined: Vec<Event>,
}

impl SurprisePartition {
    pub fn class_of(&self, e: Event) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&e).is_ok())
    }
}

pub fn surprise_partition(os: &OsRepresentation, eps: &Rational) -> Result<SurprisePartition, Error> {
    check_threshold(eps)?;
    let mut classes = vec![Vec::new(); os.len()];
    let mut undefined = Vec::new();
    for e in os.space.events() {
        match os.threshold_order(eps, e) {
            Some(k) => classes[k].push(e),
            None => undefined.push(e),
        }
    }
    Ok(SurprisePartition { classes, undefined })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;
    use crate::rules::bayesian_rule;
    use proptest::prelude::*;

    /// Canonical representations on `1..=max_states` states: each state gets
    /// an order and a positive weight; empty orders are skipped.
    pub(crate) fn canonical_os_strategy(max_states: usize) -> impl Strategy<Value = OsRepresentation> {
        (1..=max_states)
            .prop_flat_map(|n| proptest::collection::vec((0..n, 1i64..5), n))
            .prop_map(|cells| {
                let n = cells.len();
                let space = StateSpace::new((0..n).map(|i| format!("s{i}"))).unwrap();
                let priors = (0..n)
                    .filter_map(|k| {
                        let block: Vec<(usize, i64)> =
                            cells.iter().enumerate().filter(|(_, c)| c.0 == k).map(|(i, c)| (i, c.1)).collect();
                        let total: i64 = block.iter().map(|b| b.1).sum();
                        (total > 0).then(|| {
                            let mut mass = vec![Rational::zero(); n];
                            for (i, w) in block {
                                mass[i] = q(w, total);
                            }
                            Belief::new(&space, mass).unwrap()
                        })
                    })
                    .collect();
                OsRepresentation::new(priors).unwrap()
            })
    }

    fn any_os_strategy(max_states: usize) -> impl Strategy<Value = OsRepresentation> {
        (canonical_os_strategy(max_states), proptest::collection::vec((0usize..8, 0u64..256, 1i64..4), 0..3)).prop_map(
            |(os, extras)| {
                let n = os.space().len();
                let mut priors = os.priors().to_vec();
                for (at, bits, w) in extras {
                    let e = Event::from_bits(bits & ((1u64 << n) - 1));
                    if e.is_empty() {
                        continue;
                    }
                    let u = Belief::uniform(os.space(), e).unwrap();
                    let b = priors[at % priors.len()].mix(&q(1, w + 1), &u).unwrap();
                    priors.insert(at % (priors.len() + 1), b);
                }
                OsRepresentation::new(priors).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn peeling_round_trip(os in canonical_os_strategy(6)) {
            let r = os_rule(&os);
            let back = cps_to_os(&r).unwrap();
            prop_assert_eq!(&back, &os);
            prop_assert_eq!(os_rule(&back), r);
        }

        #[test]
        fn canonical_form_preserves_rule(os in any_os_strategy(5)) {
            let c = os.canonical();
            prop_assert!(c.is_canonical());
            prop_assert!(c.len() <= os.len());
            prop_assert_eq!(os_rule(&c), os_rule(&os));
        }

        #[test]
        fn zero_threshold_is_plain(os in any_os_strategy(5)) {
            for e in os.space().events() {
                prop_assert_eq!(eps_os_update(&os, &Rational::zero(), e), os_update(&os, e));
            }
        }

        #[test]
        fn surprise_order_grows_on_subevents(os in any_os_strategy(5), a in 1u64..32, b in 1u64..32) {
            let n = os.space().len();
            let mask = (1u64 << n) - 1;
            let big = Event::from_bits((a | b) & mask);
            let small = Event::from_bits(a & mask);
            prop_assume!(!small.is_empty());
            prop_assert!(os.surprise_order(small).unwrap() >= os.surprise_order(big).unwrap());
        }

        #[test]
        fn os_rules_are_cps(os in any_os_strategy(5)) {
            prop_assert!(crate::rules::validate_cps(&os_rule(&os)).is_valid());
        }
    }

    #[test]
    fn coin_updates() {
        let os = fixtures::coin_os();
        let s = os.space().clone();
        let [mu0, mu1, _] = fixtures::coin_priors();
        let a = s.event(["el", "l1", "l2"]).unwrap();
        assert_eq!(os_update(&os, a).unwrap(), Belief::point(&s, 3));
        let e = s.event(["e", "el", "l1", "l2"]).unwrap();
        assert_eq!(os_update(&os, e).unwrap(), mu1);
        assert_eq!(os_update(&os, s.full()).unwrap(), mu0);
        assert_eq!(os_update(&os, Event::EMPTY), Err(Error::EmptyEvent));
    }

    #[test]
    fn canonicalize_examples() {
        let s = fixtures::coin_space();
        let [mu0, mu1, mu2] = fixtures::coin_priors();
        let c = canonicalize_os(&[mu0.clone(), mu1.clone(), mu2.clone()]).unwrap();
        assert_eq!(c.priors, vec![mu0.clone(), mu1, mu2]);
        assert!(c.is_complete());

        let dup = canonicalize_os(&[mu0.clone(), mu0.clone()]).unwrap();
        assert_eq!(dup.priors, vec![mu0.clone()]);
        assert_eq!(dup.uncovered, s.event(["e", "el", "l1", "l2"]).unwrap());
        assert!(matches!(dup.into_representation(), Err(Error::IncompleteCoverage { .. })));

        let nu = Belief::from_pairs(&s, &[("h", q(1, 2)), ("e", q(1, 2))]).unwrap();
        let c = canonicalize_os(&[mu0, nu]).unwrap();
        assert_eq!(c.priors[1], Belief::point(&s, 2));

        assert_eq!(canonicalize_os(&[]), Err(Error::EmptyBeliefList));
    }

    #[test]
    fn coin_rule_is_complete_cps() {
        let r = os_rule(&fixtures::coin_os());
        assert_eq!(r.len(), 63);
        assert!(r.is_complete());
        assert!(r.is_concentrated());
        assert!(validate_cps(&r).is_valid());
    }

    #[test]
    fn peeling_recovers_coin() {
        let os = fixtures::coin_os();
        assert_eq!(cps_to_os(&os_rule(&os)).unwrap(), os);
    }

    #[test]
    fn full_support_has_no_surprises() {
        let s = fixtures::coin_space();
        let prior = Belief::uniform(&s, s.full()).unwrap();
        let got = cps_to_os(&bayesian_rule(&prior)).unwrap();
        assert_eq!(got.priors(), std::slice::from_ref(&prior));
        let single = OsRepresentation::new(vec![prior.clone()]).unwrap();
        assert_eq!(os_rule(&single), bayesian_rule(&prior));
    }

    #[test]
    fn non_cps_rejected() {
        let r = crate::hypothesis_testing::ht_rule(&fixtures::coin_ht_counterexample()).unwrap();
        assert!(matches!(cps_to_os(&r), Err(Error::NotCps(_))));
    }

    #[test]
    fn eps_updates() {
        let os = fixtures::coin_os();
        let s = os.space().clone();
        let [_, mu1, _] = fixtures::coin_priors();
        let edges = s.event(["e", "el"]).unwrap();
        assert_eq!(eps_os_update(&os, &q(1, 4), edges).unwrap(), mu1);
        let worn = s.event(["el"]).unwrap();
        assert_eq!(
            eps_os_update(&os, &q(1, 4), worn),
            Err(Error::NoPriorExceedsThreshold { event: worn })
        );
        assert!(matches!(eps_os_update(&os, &q(1, 1), worn), Err(Error::BadThreshold(_))));
        for e in s.events() {
            assert_eq!(eps_os_update(&os, &Rational::zero(), e), os_update(&os, e));
        }
    }

    #[test]
    fn coin_partition() {
        let os = fixtures::coin_os();
        let s = os.space().clone();
        let p = surprise_partition(&os, &Rational::zero()).unwrap();
        assert!(p.undefined.is_empty());
        assert_eq!(p.class_of(s.full()), Some(0));
        assert_eq!(p.class_of(s.event(["el", "l1", "l2"]).unwrap()), Some(1));
        assert_eq!(p.class_of(s.event(["l1", "l2"]).unwrap()), Some(2));
        // 48 events meet the faces, 12 meet the edges only, 3 are within the marks.
        assert_eq!(p.classes.iter().map(Vec::len).collect::<Vec<_>>(), vec![48, 12, 3]);

        let p = surprise_partition(&os, &q(1, 4)).unwrap();
        assert!(p.undefined.contains(&s.event(["el"]).unwrap()));
    }
}
