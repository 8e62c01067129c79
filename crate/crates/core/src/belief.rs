//! Exact probability distributions over a state space.

use std::fmt;

use crate::error::Error;
use crate::rational::Rational;
use crate::space::{Event, StateSpace};

/// A probability distribution on a finite state space with exact masses.
///
/// Invariant: masses are nonnegative and sum to exactly one.
#[derive(Clone)]
pub struct Belief {
    space: StateSpace,
    mass: Vec<Rational>,
    support: Event,
}

impl Belief {
    /// Build from a mass vector in state order.
    pub fn new(space: &StateSpace, mass: Vec<Rational>) -> Result<Self, Error> {
        if mass.len() != space.len() {
            return Err(Error::InvalidBelief(format!(
                "{} masses for {} states",
                mass.len(),
                space.len()
            )));
        }
        if let Some(i) = mass.iter().position(Rational::is_negative) {
            return Err(Error::InvalidBelief(format!(
                "negative mass {} on state {:?}",
                mass[i],
                space.label(i)
            )));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidBelief(format!("masses sum to {total}, not 1")));
        }
        Ok(Self::new_unchecked(space.clone(), mass))
    }

    pub(crate) fn new_unchecked(space: StateSpace, mass: Vec<Rational>) -> Self {
        let support = Event::from_indices(mass.iter().enumerate().filter(|(_, m)| m.is_positive()).map(|(i, _)| i));
        Belief { space, mass, support }
    }

    /// Build from `(label, mass)` pairs; unlisted states get mass zero.
    pub fn from_pairs<S: AsRef<str>>(space: &StateSpace, pairs: &[(S, Rational)]) -> Result<Self, Error> {
        let mut mass = vec![Rational::zero(); space.len()];
        for (label, m) in pairs {
            let label = label.as_ref();
            let i = space.index_of(label).ok_or_else(|| Error::UnknownState(label.to_string()))?;
            if !mass[i].is_zero() {
                return Err(Error::InvalidBelief(format!("state {label:?} listed twice")));
            }
            mass[i] = m.clone();
        }
        Self::new(space, mass)
    }

    pub fn point(space: &StateSpace, state: usize) -> Self {
        let mut mass = vec![Rational::zero(); space.len()];
        mass[state] = Rational::one();
        Self::new_unchecked(space.clone(), mass)
    }

    /// Uniform distribution over a nonempty event.
    pub fn uniform(space: &StateSpace, e: Event) -> Result<Self, Error> {
        space.check(e)?;
        if e.is_empty() {
            return Err(Error::EmptyEvent);
        }
        let w = Rational::new(1, e.len() as i64);
        let mass = (0..space.len())
            .map(|i| if e.contains(i) { w.clone() } else { Rational::zero() })
            .collect();
        Ok(Self::new_unchecked(space.clone(), mass))
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn mass(&self, state: usize) -> &Rational {
        &self.mass[state]
    }

    /// States with positive mass.
    pub fn support(&self) -> Event {
        self.support
    }

    /// Probability of an event.
    pub fn prob(&self, e: Event) -> Rational {
        let hit = self.support.intersection(e);
        if hit == self.support {
            return Rational::one();
        }
        hit.states().map(|i| &self.mass[i]).sum()
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, w: &Rational, other: &Belief) -> Result<Belief, Error> {
        if !self.space.same_as(&other.space) {
            return Err(Error::SpaceMismatch);
        }
        if w.is_negative() || *w > Rational::one() {
            return Err(Error::InvalidBelief(format!("mixture weight {w} outside [0,1]")));
        }
        let v = Rational::one() - w;
        let mass = self.mass.iter().zip(&other.mass).map(|(a, b)| w * a + &v * b).collect();
        Ok(Belief::new_unchecked(self.space.clone(), mass))
    }

    /// `(label, mass)` for every state in the support, in state order.
    pub fn support_entries(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.support.states().map(move |i| (self.space.label(i), &self.mass[i]))
    }
}

impl PartialEq for Belief {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.mass == other.mass && self.space.same_as(&other.space)
    }
}

impl Eq for Belief {}

impl std::hash::Hash for Belief {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mass.hash(state);
    }
}

/// Renders the support as `h↦1/2, t↦1/2`.
impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support_entries().map(|(s, m)| format!("{s}↦{m}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Belief({self})")
    }
}

/// Bayesian update: `ν(A) = μ(A∩E)/μ(E)`.
pub fn bayes_update(mu: &Belief, e: Event) -> Result<Belief, Error> {
    mu.space.check(e)?;
    if e.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let hit = mu.support.intersection(e);
    if hit.is_empty() {
        return Err(Error::NullConditioning { event: e });
    }
    if hit == mu.support {
        return Ok(mu.clone());
    }
    let total: Rational = hit.states().map(|i| &mu.mass[i]).sum();
    let mut mass = vec![Rational::zero(); mu.mass.len()];
    for i in hit.states() {
        mass[i] = &mu.mass[i] / &total;
    }
    Ok(Belief {
        space: mu.space.clone(),
        mass,
        support: hit,
    })
}

/// Representation-level nullity: `μ(A) = 0`.
pub fn is_null_event(mu: &Belief, a: Event) -> bool {
    !mu.support.intersects(a)
}
