//! Hypothesis testing: a prior list, a second-order prior `ρ` and a
//! threshold `ε`. Expected events (`μ₀(E) > ε`) are handled by Bayes'
//! rule on `μ₀`; unexpected ones select the prior maximizing `μ_j(E)·ρ_j`.

use std::collections::{BTreeSet, HashMap};

use crate::belief::{bayes_update, Belief};
use crate::error::Error;
use crate::ordered_surprises::{surprise_partition, OsRepresentation};
use crate::rational::Rational;
use crate::rules::UpdatingRule;
use crate::space::{Event, StateSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtRepresentation {
    space: StateSpace,
    priors: Vec<Belief>,
    rho: Vec<Rational>,
    eps: Rational,
}

impl HtRepresentation {
    /// Invariants: supports cover the space, `ρ` is positive and sums to one,
    /// `ρ₀` is strictly largest, `ε ∈ [0,1)`.
    pub fn new(priors: Vec<Belief>, rho: Vec<Rational>, eps: Rational) -> Result<Self, Error> {
        let os = OsRepresentation::new(priors)?;
        if rho.len() != os.len() {
            return Err(Error::InvalidHt(format!("{} weights for {} priors", rho.len(), os.len())));
        }
        if let Some(i) = rho.iter().position(|r| !r.is_positive()) {
            return Err(Error::InvalidHt(format!("weight {} of prior {i} is not positive", rho[i])));
        }
        let total: Rational = rho.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidHt(format!("weights sum to {total}, not 1")));
        }
        if let Some(k) = rho.iter().skip(1).position(|r| *r >= rho[0]) {
            return Err(Error::InvalidHt(format!(
                "weight of prior 0 ({}) must exceed that of prior {} ({})",
                rho[0],
                k + 1,
                rho[k + 1]
            )));
        }
        if eps.is_negative() || eps >= Rational::one() {
            return Err(Error::BadThreshold(eps));
        }
        Ok(HtRepresentation {
            space: os.space().clone(),
            priors: os.priors().to_vec(),
            rho,
            eps,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn priors(&self) -> &[Belief] {
        &self.priors
    }

    pub fn rho(&self) -> &[Rational] {
        &self.rho
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Bayesian,
    Argmax,
}

/// How `ht_select` reached its choice. `scores[j] = μ_j(E)·ρ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionTrace {
    pub event: Event,
    pub branch: Branch,
    pub scores: Vec<Rational>,
    pub chosen: usize,
}

/// Select a prior for `e` and update it.
///
/// Under the argmax branch the winner must be unique; ties are reported as
/// [`Error::AmbiguousArgmax`], never broken.
pub fn ht_select(ht: &HtRepresentation, e: Event) -> Result<(SelectionTrace, Belief), Error> {
    ht.space.check(e)?;
    if e.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let scores: Vec<Rational> = ht
        .priors
        .iter()
        .zip(&ht.rho)
        .map(|(mu, r)| if mu.support().intersects(e) { mu.prob(e) * r } else { Rational::zero() })
        .collect();
    let (branch, chosen) = if ht.priors[0].prob(e) > ht.eps {
        (Branch::Bayesian, 0)
    } else {
        let best = scores.iter().max().expect("nonempty prior list");
        if best.is_zero() {
            return Err(Error::AllZeroScores { event: e });
        }
        let indices: Vec<usize> = (0..scores.len()).filter(|&j| scores[j] == *best).collect();
        if indices.len() > 1 {
            return Err(Error::AmbiguousArgmax { event: e, indices });
        }
        (Branch::Argmax, indices[0])
    };
    let belief = bayes_update(&ht.priors[chosen], e)?;
    Ok((
        SelectionTrace {
            event: e,
            branch,
            scores,
            chosen,
        },
        belief,
    ))
}

/// The complete rule induced by `ht`; fails on the first event with a tie.
pub fn ht_rule(ht: &HtRepresentation) -> Result<UpdatingRule, Error> {
    UpdatingRule::tabulate(&ht.space, |e| ht_select(ht, e).map(|(_, b)| b))
}

/// An HT representation built from an ordered-surprises one, with the
/// intermediate quantities of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OsHtConstruction {
    pub ht: HtRepresentation,
    /// `δ_k`: the smallest positive mass of the `k`-th canonical prior.
    pub deltas: Vec<Rational>,
    /// `v(0) = 1`, `v(k) = δ_{k−1}/2 · v(k−1)`; `ρ = v / Σv`.
    pub weights: Vec<Rational>,
}

/// Embed an ordered-surprises representation into HT with threshold zero.
///
/// Works on the canonical form, so the priors of the result may differ from
/// `os.priors()` when supports overlap; the induced rules coincide.
pub fn os_to_ht(os: &OsRepresentation) -> OsHtConstruction {
    let canonical = os.canonical();
    let priors = canonical.priors().to_vec();
    let deltas: Vec<Rational> = priors
        .iter()
        .map(|mu| mu.masses().iter().filter(|m| m.is_positive()).min().expect("nonempty support").clone())
        .collect();
    let half = Rational::new(1, 2);
    let mut weights = vec![Rational::one()];
    for d in &deltas[..deltas.len() - 1] {
        let next = weights.last().expect("seeded") * d * &half;
        weights.push(next);
    }
    let total: Rational = weights.iter().sum();
    let rho = weights.iter().map(|v| v / &total).collect();
    let ht = HtRepresentation::new(priors, rho, Rational::zero()).expect("construction meets every invariant");
    OsHtConstruction { ht, deltas, weights }
}

/// An HT representation built from an ε-ordered-surprises one.
///
/// HT priors are the distinct conditionals `BU(μ_k, E)` over the events `E`
/// that `μ_k` updates, grouped by `k` and, within a group, in a topological
/// order of `relation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsHtConstruction {
    pub ht: HtRepresentation,
    /// OS order of each HT prior.
    pub levels: Vec<usize>,
    /// An event whose update yields each HT prior.
    pub sources: Vec<Event>,
    /// `(ρ̄_k, ρ̲_k)` per OS order, on the same scale as `ht.rho()`.
    pub intervals: Vec<(Rational, Rational)>,
    /// Edges `(a, b)` of the strict relation: `b ≠ a` lies in level `a` and
    /// puts probability one on an event updated to `a`. Always `a < b`.
    pub relation: Vec<(usize, usize)>,
}

impl EpsHtConstruction {
    pub fn threshold(&self) -> &Rational {
        self.ht.eps()
    }
}

struct Level {
    nodes: Vec<Belief>,
    sources: Vec<Event>,
    edges: BTreeSet<(usize, usize)>,
    events: Vec<Event>,
}

/// Embed an ε-ordered-surprises representation into HT.
///
/// The interval chain is arithmetic: with `M` the largest probability that
/// must be beaten by a margin (cross-level leakage, at least `ε`, and
/// same-level masses below one) and `h = (1−M)/(2(K+1))`, the endpoints are
/// `1, 1−h, …, 1−(2K+1)h`, all above `M`. Values inside a level are evenly
/// spaced in topological order. The HT threshold is the cross-level part of `M`,
/// which is zero when `ε = 0`.
pub fn eps_os_to_ht(os: &OsRepresentation, eps: &Rational) -> Result<EpsHtConstruction, Error> {
    if !os.is_canonical() {
        return Err(Error::NotCanonical);
    }
    let partition = surprise_partition(os, eps)?;
    let k_count = os.len();

    let mut levels: Vec<Level> = Vec::with_capacity(k_count);
    for (k, events) in partition.classes.iter().enumerate() {
        let mu = &os.priors()[k];
        let mut index: HashMap<Belief, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut sources = Vec::new();
        let mut event_node = Vec::with_capacity(events.len());
        if k == 0 {
            // μ₀ itself (the update on S) leads the first level.
            index.insert(mu.clone(), 0);
            nodes.push(mu.clone());
            sources.push(os.space().full());
        }
        for &e in events {
            let b = bayes_update(mu, e)?;
            let id = *index.entry(b.clone()).or_insert_with(|| {
                nodes.push(b);
                sources.push(e);
                nodes.len() - 1
            });
            event_node.push(id);
        }
        let mut edges = BTreeSet::new();
        for (&e, &a) in events.iter().zip(&event_node) {
            for (b, node) in nodes.iter().enumerate() {
                if b != a && node.support().is_subset_of(e) {
                    edges.insert((a, b));
                }
            }
        }
        levels.push(Level {
            nodes,
            sources,
            edges,
            events: events.clone(),
        });
    }

    // Cross-level leakage: μ_j^{E_j}(E_k) for j < k never exceeds the threshold.
    let mut threshold = eps.clone();
    for (k, lk) in levels.iter().enumerate() {
        for lj in &levels[..k] {
            for b in &lj.nodes {
                for &e in &lk.events {
                    if b.support().intersects(e) {
                        threshold = threshold.max(b.prob(e));
                    }
                }
            }
        }
    }
    let mut margin = threshold.clone();
    for l in &levels {
        for b in &l.nodes {
            for &e in &l.events {
                if b.support().intersects(e) && !b.support().is_subset_of(e) {
                    margin = margin.max(b.prob(e));
                }
            }
        }
    }
    debug_assert!(margin < Rational::one());

    let step = (Rational::one() - &margin) / Rational::from(2 * k_count as i64);
    let point = |i: usize| Rational::one() - &step * Rational::from(i as i64);
    let mut intervals: Vec<(Rational, Rational)> = (0..k_count).map(|k| (point(2 * k), point(2 * k + 1))).collect();

    let mut priors = Vec::new();
    let mut rho = Vec::new();
    let mut level_of = Vec::new();
    let mut source_of = Vec::new();
    let mut relation = Vec::new();
    for (k, l) in levels.iter().enumerate() {
        let order = topological_order(l.nodes.len(), &l.edges).ok_or(Error::CycleDetected { order: k })?;
        let base = priors.len();
        let mut position = vec![0; l.nodes.len()];
        for (i, &node) in order.iter().enumerate() {
            position[node] = base + i;
        }
        let (hi, lo) = &intervals[k];
        let gap = (hi - lo) / Rational::from(l.nodes.len() as i64 + 1);
        for (i, &node) in order.iter().enumerate() {
            priors.push(l.nodes[node].clone());
            rho.push(hi - &gap * Rational::from(i as i64 + 1));
            level_of.push(k);
            source_of.push(l.sources[node]);
        }
        relation.extend(l.edges.iter().map(|&(a, b)| (position[a], position[b])));
    }
    relation.sort_unstable();

    let total: Rational = rho.iter().sum();
    for r in &mut rho {
        *r = &*r / &total;
    }
    for (hi, lo) in &mut intervals {
        *hi = &*hi / &total;
        *lo = &*lo / &total;
    }
    let ht = HtRepresentation::new(priors, rho, threshold)?;
    Ok(EpsHtConstruction {
        ht,
        levels: level_of,
        sources: source_of,
        intervals,
        relation,
    })
}

/// Kahn's algorithm, always releasing the lowest-numbered ready node.
/// `None` when the graph has a cycle.
fn topological_order(n: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(a, b) in edges {
        indegree[b] += 1;
        out[a].push(b);
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(a) = ready.pop_first() {
        order.push(a);
        for &b in &out[a] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.insert(b);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// First event of `scope` (canonical order) on which the rules differ.
/// An event missing from both tables counts as agreement.
pub fn first_difference<I>(a: &UpdatingRule, b: &UpdatingRule, scope: I) -> Result<Option<Event>, Error>
where
    I: IntoIterator<Item = Event>,
{
    if !a.space().same_as(b.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(scope.into_iter().filter(|&e| a.get(e) != b.get(e)).min())
}

pub fn rules_equal<I>(a: &UpdatingRule, b: &UpdatingRule, scope: I) -> bool
where
    I: IntoIterator<Item = Event>,
{
    matches!(first_difference(a, b, scope), Ok(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ordered_surprises::tests::canonical_os_strategy;
    use crate::ordered_surprises::{eps_os_update, os_rule, os_update};
    use crate::rational::q;
    use crate::rules::validate_cps;
    use proptest::prelude::*;

    #[test]
    fn counterexample_selections() {
        let ht = fixtures::coin_ht_counterexample();
        let s = ht.space().clone();
        let a = s.event(["el", "l1", "l2"]).unwrap();
        let (t, b) = ht_select(&ht, a).unwrap();
        assert_eq!(t.branch, Branch::Argmax);
        assert_eq!(t.chosen, 2);
        assert_eq!(t.scores, vec![q(0, 1), q(1, 24), q(1, 6)]);
        assert_eq!(b, bayes_update(&ht.priors()[2], a).unwrap());

        let e = s.event(["e", "el", "l1", "l2"]).unwrap();
        let (t, _) = ht_select(&ht, e).unwrap();
        assert_eq!(t.chosen, 1);
        assert_eq!(t.scores, vec![q(0, 1), q(1, 3), q(1, 6)]);

        let (t, _) = ht_select(&ht, s.event(["h", "e"]).unwrap()).unwrap();
        assert_eq!((t.branch, t.chosen), (Branch::Bayesian, 0));
    }

    #[test]
    fn counterexample_rule_is_not_cps() {
        let r = ht_rule(&fixtures::coin_ht_counterexample()).unwrap();
        assert!(r.is_complete());
        assert!(!validate_cps(&r).is_valid());
        let os = os_rule(&fixtures::coin_os());
        let s = r.space().clone();
        assert_eq!(first_difference(&os, &r, s.events()).unwrap(), Some(s.event(["el", "l1"]).unwrap()));
        assert!(!rules_equal(&os, &r, [s.event(["el", "l1", "l2"]).unwrap()]));
        assert!(rules_equal(&os, &r, [s.event(["e", "el", "l1", "l2"]).unwrap()]));
        assert!(rules_equal(&r, &r, s.events()));
    }

    #[test]
    fn ties_are_errors() {
        let s = StateSpace::new(["a", "b", "c"]).unwrap();
        let mu0 = Belief::point(&s, 0);
        let mu1 = Belief::point(&s, 1);
        let mu2 = Belief::point(&s, 2);
        let ht = HtRepresentation::new(vec![mu0, mu1, mu2], vec![q(1, 2), q(1, 4), q(1, 4)], q(0, 1)).unwrap();
        let bc = s.event(["b", "c"]).unwrap();
        assert_eq!(
            ht_select(&ht, bc).unwrap_err(),
            Error::AmbiguousArgmax {
                event: bc,
                indices: vec![1, 2]
            }
        );
        assert!(ht_rule(&ht).is_err());
    }

    #[test]
    fn invariants_enforced() {
        let p = fixtures::coin_priors().to_vec();
        let bad = [
            vec![q(1, 3), q(1, 3), q(1, 3)],
            vec![q(1, 2), q(1, 2), q(0, 1)],
            vec![q(1, 2), q(1, 2)],
            vec![q(1, 2), q(1, 4), q(1, 8)],
        ];
        for rho in bad {
            assert!(matches!(HtRepresentation::new(p.clone(), rho, q(0, 1)), Err(Error::InvalidHt(_))));
        }
        let rho = vec![q(1, 2), q(1, 3), q(1, 6)];
        assert!(matches!(HtRepresentation::new(p.clone(), rho.clone(), q(1, 1)), Err(Error::BadThreshold(_))));
        assert!(matches!(
            HtRepresentation::new(p[..2].to_vec(), rho[..2].to_vec(), q(0, 1)),
            Err(Error::InvalidHt(_) | Error::IncompleteCoverage { .. })
        ));
    }

    #[test]
    fn point_mass_on_full_support_is_bayes() {
        let s = fixtures::coin_space();
        let prior = Belief::uniform(&s, s.full()).unwrap();
        let ht = HtRepresentation::new(vec![prior.clone()], vec![q(1, 1)], q(0, 1)).unwrap();
        assert_eq!(ht_rule(&ht).unwrap(), crate::rules::bayesian_rule(&prior));
    }

    #[test]
    fn coin_embedding() {
        let os = fixtures::coin_os();
        let c = os_to_ht(&os);
        assert_eq!(c.deltas, vec![q(1, 2), q(1, 8), q(1, 2)]);
        assert_eq!(c.weights, vec![q(1, 1), q(1, 4), q(1, 64)]);
        assert_eq!(c.ht.rho(), &[q(64, 81), q(16, 81), q(1, 81)]);
        assert!(c.ht.eps().is_zero());
        let s = os.space().clone();
        let (t, _) = ht_select(&c.ht, s.event(["el", "l1", "l2"]).unwrap()).unwrap();
        assert_eq!(t.scores[1..], [q(2, 81), q(1, 81)]);
        assert_eq!(t.chosen, 1);
        assert!(rules_equal(&os_rule(&os), &ht_rule(&c.ht).unwrap(), s.events()));
    }

    #[test]
    fn single_prior_embedding() {
        let s = fixtures::coin_space();
        let os = OsRepresentation::new(vec![Belief::uniform(&s, s.full()).unwrap()]).unwrap();
        assert_eq!(os_to_ht(&os).ht.rho(), &[q(1, 1)]);
    }

    #[test]
    fn coin_eps_embedding() {
        let os = fixtures::coin_os();
        let s = os.space().clone();
        for eps in [q(0, 1), q(1, 8), q(1, 4)] {
            let c = eps_os_to_ht(&os, &eps).unwrap();
            if eps.is_zero() {
                assert!(c.threshold().is_zero());
            }
            let mut defined = 0;
            for e in s.events() {
                if let Ok(want) = eps_os_update(&os, &eps, e) {
                    defined += 1;
                    assert_eq!(ht_select(&c.ht, e).unwrap().1, want, "eps {eps} event {}", s.show(e));
                }
            }
            assert!(defined > 0);
        }
    }

    #[test]
    fn eps_embedding_rejects_overlap() {
        let [mu0, mu1, mu2] = fixtures::coin_priors();
        let os = OsRepresentation::new(vec![mu0.clone(), mu0, mu1, mu2]).unwrap();
        assert_eq!(eps_os_to_ht(&os, &q(0, 1)), Err(Error::NotCanonical));
    }

    #[test]
    fn kahn_detects_cycles() {
        let edges = BTreeSet::from([(0, 1), (1, 2), (2, 0)]);
        assert_eq!(topological_order(3, &edges), None);
        let edges = BTreeSet::from([(2, 0), (1, 0)]);
        assert_eq!(topological_order(3, &edges), Some(vec![1, 2, 0]));
    }

    proptest! {
        #[test]
        fn embedding_reproduces_os_rule(os in canonical_os_strategy(6)) {
            let c = os_to_ht(&os);
            let s = os.space().clone();
            prop_assert!(rules_equal(&os_rule(&os), &ht_rule(&c.ht).unwrap(), s.events()));
        }

        #[test]
        fn lowest_order_wins_by_score(os in canonical_os_strategy(6)) {
            let c = os_to_ht(&os);
            for e in os.space().events() {
                let low = os.surprise_order(e).unwrap();
                let (t, _) = ht_select(&c.ht, e).unwrap();
                for k in low + 1..os.len() {
                    prop_assert!(t.scores[low] > t.scores[k]);
                }
            }
        }

        #[test]
        fn eps_embedding_agrees(os in canonical_os_strategy(5), eps in prop::sample::select(vec![(0, 1), (1, 8), (1, 4), (1, 2)])) {
            let eps = q(eps.0, eps.1);
            let c = eps_os_to_ht(&os, &eps).unwrap();
            for e in os.space().events() {
                if let Ok(want) = eps_os_update(&os, &eps, e) {
                    prop_assert_eq!(ht_select(&c.ht, e).unwrap().1, want);
                }
            }
            if eps.is_zero() {
                prop_assert!(c.threshold().is_zero());
                for e in os.space().events() {
                    prop_assert_eq!(ht_select(&c.ht, e).unwrap().1, os_update(&os, e).unwrap());
                }
            }
        }

        #[test]
        fn interval_discipline(os in canonical_os_strategy(5), eps in prop::sample::select(vec![(0, 1), (1, 4)])) {
            let eps = q(eps.0, eps.1);
            let c = eps_os_to_ht(&os, &eps).unwrap();
            for w in c.intervals.windows(2) {
                prop_assert!(w[0].0 > w[0].1 && w[0].1 > w[1].0);
            }
            let (top, _) = &c.intervals[0];
            let (_, bottom) = c.intervals.last().unwrap();
            prop_assert!(*bottom > c.threshold() * top);
            for (i, r) in c.ht.rho().iter().enumerate() {
                let (hi, lo) = &c.intervals[c.levels[i]];
                prop_assert!(r < hi && r > lo);
            }
            for &(a, b) in &c.relation {
                prop_assert!(c.ht.rho()[a] > c.ht.rho()[b]);
            }
            let rho0 = &c.ht.rho()[0];
            prop_assert!(c.ht.rho()[1..].iter().all(|r| r < rho0));
            // Same-level masses below one stay under the margin.
            for (i, b) in c.ht.priors().iter().enumerate() {
                let k = c.levels[i];
                let (hi, lo) = &c.intervals[k];
                for (j, src) in c.sources.iter().enumerate() {
                    if c.levels[j] == k {
                        let p = b.prob(*src);
                        if p < Rational::one() {
                            prop_assert!(*lo > hi * &p);
                        }
                    }
                }
            }
        }
    }
}
