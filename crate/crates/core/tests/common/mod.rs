//! Seeded random corpora shared by the integration and acceptance targets.
#![allow(dead_code)]

use beliefkit::{Belief, Event, OsRepresentation, Rational, StateSpace, UpdatingRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x05_c0_1f_ee;
pub const CORPUS_SIZE: usize = 500;
pub const CORPUS_MAX_STATES: usize = 8;

pub fn space(n: usize) -> StateSpace {
    StateSpace::new((0..n).map(|i| format!("s{i}"))).expect("distinct labels")
}

/// Positive integer weights normalized over `states`.
fn random_belief(rng: &mut ChaCha8Rng, space: &StateSpace, states: &[usize]) -> Belief {
    let weights: Vec<i64> = states.iter().map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let mut mass = vec![Rational::zero(); space.len()];
    for (&s, &w) in states.iter().zip(&weights) {
        mass[s] = Rational::new(w, total);
    }
    Belief::new(space, mass).expect("normalized")
}

/// A canonical representation: states are dealt into a random number of
/// nonempty blocks, each carrying a random full-support prior.
pub fn random_canonical_os(rng: &mut ChaCha8Rng, max_states: usize) -> OsRepresentation {
    let n = rng.gen_range(1..=max_states);
    let space = space(n);
    let blocks = rng.gen_range(1..=n);
    let mut assignment: Vec<usize> = (0..n).map(|i| if i < blocks { i } else { rng.gen_range(0..blocks) }).collect();
    for i in (1..n).rev() {
        assignment.swap(i, rng.gen_range(0..=i));
    }
    let priors = (0..blocks)
        .map(|k| {
            let states: Vec<usize> = (0..n).filter(|&s| assignment[s] == k).collect();
            random_belief(rng, &space, &states)
        })
        .collect();
    OsRepresentation::new(priors).expect("blocks cover the space")
}

pub fn corpus() -> Vec<OsRepresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE).map(|_| random_canonical_os(&mut rng, CORPUS_MAX_STATES)).collect()
}

/// A complete, concentrated rule with an independent random belief on every
/// event; almost never a CPS.
pub fn random_concentrated_rule(rng: &mut ChaCha8Rng, n: usize) -> UpdatingRule {
    let space = space(n);
    UpdatingRule::tabulate(&space, |e| {
        let states: Vec<usize> = e.states().filter(|_| rng.gen_bool(0.7)).collect();
        let states = if states.is_empty() { vec![e.states().next().expect("nonempty")] } else { states };
        Ok(random_belief(rng, &space, &states))
    })
    .expect("valid beliefs")
}

/// `rule` with the belief on one random event replaced by a random
/// belief concentrated on that event.
pub fn perturb(rng: &mut ChaCha8Rng, rule: &UpdatingRule) -> UpdatingRule {
    let space = rule.space().clone();
    let events = space.events();
    let target = events[rng.gen_range(0..events.len())];
    let states: Vec<usize> = target.states().collect();
    let replacement = random_belief(rng, &space, &states);
    UpdatingRule::tabulate(&space, |e| Ok(if e == target { replacement.clone() } else { rule.get(e).expect("complete").clone() }))
        .expect("valid beliefs")
}

pub fn event_in(rng: &mut ChaCha8Rng, space: &StateSpace) -> Event {
    let n = space.len();
    Event::from_bits(rng.gen_range(1..(1u64 << n)))
}
