//! Updating rules as finite tables, and the conditional-probability-system
//! (CPS) check.

use std::collections::BTreeMap;

use crate::belief::{bayes_update, Belief};
use crate::error::Error;
use crate::rational::Rational;
use crate::space::{Event, StateSpace};

/// A map from conditioning events to beliefs. Keys iterate in canonical
/// event order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UpdatingRule {
    space: StateSpace,
    table: BTreeMap<Event, Belief>,
}

impl UpdatingRule {
    pub fn new(space: &StateSpace, table: BTreeMap<Event, Belief>) -> Result<Self, Error> {
        for (e, b) in &table {
            if e.is_empty() {
                return Err(Error::InvalidRule("the empty event cannot be a conditioning event".into()));
            }
            space.check(*e)?;
            if !b.space().same_as(space) {
                return Err(Error::SpaceMismatch);
            }
        }
        Ok(UpdatingRule {
            space: space.clone(),
            table,
        })
    }

    /// Tabulate `f` on every nonempty event.
    pub fn tabulate<F>(space: &StateSpace, mut f: F) -> Result<Self, Error>
    where
        F: FnMut(Event) -> Result<Belief, Error>,
    {
        let mut table = BTreeMap::new();
        for e in space.events() {
            table.insert(e, f(e)?);
        }
        Ok(UpdatingRule {
            space: space.clone(),
            table,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn get(&self, e: Event) -> Option<&Belief> {
        self.table.get(&e)
    }

    pub fn domain(&self) -> impl Iterator<Item = Event> + '_ {
        self.table.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Event, &Belief)> {
        self.table.iter().map(|(e, b)| (*e, b))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// First nonempty event (canonical order) missing from the domain.
    pub fn first_missing(&self) -> Option<Event> {
        let full = (1usize << self.space.len()) - 1;
        if self.table.len() == full {
            return None;
        }
        self.space.events().into_iter().find(|e| !self.table.contains_key(e))
    }

    /// Complete: the domain is every nonempty event.
    pub fn is_complete(&self) -> bool {
        self.first_missing().is_none()
    }

    /// First domain event `E` (canonical order) with `P(E|E) ≠ 1`, with that mass.
    pub fn concentration_witness(&self) -> Option<(Event, Rational)> {
        self.concentration_violations().next()
    }

    /// Every domain event with `P(E|E) ≠ 1`, in canonical order.
    pub fn concentration_violations(&self) -> impl Iterator<Item = (Event, Rational)> + '_ {
        self.table.iter().filter_map(|(e, b)| {
            if b.support().is_subset_of(*e) {
                None
            } else {
                Some((*e, b.prob(*e)))
            }
        })
    }

    pub fn is_concentrated(&self) -> bool {
        self.concentration_witness().is_none()
    }

    /// Dense lookup indexed by event bits; only used for complete rules.
    fn dense(&self) -> Vec<Option<&Belief>> {
        let mut v = vec![None; 1usize << self.space.len()];
        for (e, b) in &self.table {
            v[e.bits() as usize] = Some(b);
        }
        v
    }
}

/// Bayesian updating of `prior`, defined exactly on the feasible events.
pub fn bayesian_rule(prior: &Belief) -> UpdatingRule {
    let space = prior.space().clone();
    let table = space
        .events()
        .into_iter()
        .filter_map(|e| bayes_update(prior, e).ok().map(|b| (e, b)))
        .collect();
    UpdatingRule { space, table }
}

/// Conservative updating: `δμ + (1−δ)·BU(μ,E)` on feasible events and
/// `δμ + (1−δ)·uniform(E)` on null events. Always complete; `P(E|E) = 1`
/// only on events containing the support of `μ`.
pub fn conservative_rule(prior: &Belief, delta: &Rational) -> Result<UpdatingRule, Error> {
    check_delta(delta)?;
    UpdatingRule::tabulate(prior.space(), |e| conservative_update(prior, delta, e))
}

/// One entry of [`conservative_rule`].
pub fn conservative_update(prior: &Belief, delta: &Rational, e: Event) -> Result<Belief, Error> {
    check_delta(delta)?;
    let target = match bayes_update(prior, e) {
        Ok(b) => b,
        Err(Error::NullConditioning { .. }) => Belief::uniform(prior.space(), e)?,
        Err(err) => return Err(err),
    };
    prior.mix(delta, &target)
}

fn check_delta(delta: &Rational) -> Result<(), Error> {
    if !delta.is_positive() || *delta > Rational::one() {
        return Err(Error::BadDelta(delta.clone()));
    }
    Ok(())
}

/// A nested triple `G ⊆ F ⊆ E` where the chain rule fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpsWitness {
    pub g: Event,
    pub f: Event,
    pub e: Event,
    /// `P(G|E)`.
    pub lhs: Rational,
    /// `P(G|F)`.
    pub g_given_f: Rational,
    /// `P(F|E)`.
    pub f_given_e: Rational,
    /// `P(G|F)·P(F|E)`.
    pub rhs: Rational,
}

/// Why a rule cannot be a CPS before the chain rule is even consulted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotCandidate {
    Incomplete { missing: Event },
    NotConcentrated { event: Event, mass: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CpsVerdict {
    Valid,
    Violation(Box<CpsWitness>),
    NotCandidate(NotCandidate),
}

impl CpsVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CpsVerdict::Valid)
    }
}

/// Evaluate the chain rule `P(G|E) = P(G|F)·P(F|E)` on one nested triple.
/// Returns the witness when it fails.
pub fn check_chain_rule(rule: &UpdatingRule, g: Event, f: Event, e: Event) -> Result<Option<CpsWitness>, Error> {
    if !g.is_subset_of(f) {
        return Err(Error::NotSubevent { sub: g, sup: f });
    }
    if !f.is_subset_of(e) {
        return Err(Error::NotSubevent { sub: f, sup: e });
    }
    let lookup = |x: Event| {
        rule.get(x)
            .ok_or_else(|| Error::InvalidRule(format!("no belief for {}", rule.space.show(x))))
    };
    let pe = lookup(e)?;
    let pf = lookup(f)?;
    Ok(chain_rule_at(pe, pf, g, f, e))
}

fn chain_rule_at(pe: &Belief, pf: &Belief, g: Event, f: Event, e: Event) -> Option<CpsWitness> {
    let lhs = pe.prob(g);
    let g_given_f = pf.prob(g);
    let f_given_e = pe.prob(f);
    let rhs = &g_given_f * &f_given_e;
    (lhs != rhs).then_some(CpsWitness {
        g,
        f,
        e,
        lhs,
        g_given_f,
        f_given_e,
        rhs,
    })
}

/// Decide whether a rule is a conditional probability system.
///
/// Rules that are not complete or not concentrated are rejected up front.
/// Otherwise every nested triple `G ⊆ F ⊆ E` with `F ≠ ∅` is checked and the
/// first failure in lexicographic `(E, F, G)` order is returned.
///
/// Both sides of the chain rule are additive in `G`, so for fixed `(E, F)` it
/// holds for every `G ⊆ F` iff it holds on the singletons of `F`. Pairs are
/// screened that way and only a failing pair is scanned subset by subset.
/// When `P(F|E) = 0` both sides vanish for every `G ⊆ F`.
pub fn validate_cps(rule: &UpdatingRule) -> CpsVerdict {
    if let Some(missing) = rule.first_missing() {
        return CpsVerdict::NotCandidate(NotCandidate::Incomplete { missing });
    }
    if let Some((event, mass)) = rule.concentration_witness() {
        return CpsVerdict::NotCandidate(NotCandidate::NotConcentrated { event, mass });
    }
    let dense = rule.dense();
    for e in rule.space.events() {
        let pe = dense[e.bits() as usize].expect("complete rule");
        for f in e.nonempty_subsets() {
            let f_given_e = pe.prob(f);
            if f_given_e.is_zero() {
                continue;
            }
            let pf = dense[f.bits() as usize].expect("complete rule");
            let relevant = f.intersection(pe.support().union(pf.support()));
            let pair_holds = relevant
                .states()
                .all(|s| *pe.mass(s) == pf.mass(s) * &f_given_e);
            if pair_holds {
                continue;
            }
            let g_candidates = std::iter::once(Event::EMPTY).chain(f.nonempty_subsets());
            for g in g_candidates {
                if let Some(w) = chain_rule_at(pe, pf, g, f, e) {
                    return CpsVerdict::Violation(Box::new(w));
                }
            }
            unreachable!("a failing singleton is itself a failing subset");
        }
    }
    CpsVerdict::Valid
}

/// Every nested triple `(G, F, E)` with `G ⊆ F ⊆ E ⊆ S` and `F ≠ ∅`, in
/// lexicographic `(E, F, G)` canonical order. There are `4ⁿ − 2ⁿ` of them.
pub fn nested_triples(space: &StateSpace) -> impl Iterator<Item = (Event, Event, Event)> {
    space.events().into_iter().flat_map(|e| {
        e.nonempty_subsets().into_iter().flat_map(move |f| {
            std::iter::once(Event::EMPTY)
                .chain(f.nonempty_subsets())
                .map(move |g| (g, f, e))
        })
    })
}
