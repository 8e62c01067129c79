//! Lexicographic probability systems: acts are compared by their vector
//! of level-wise expected utilities, lexicographically.

use std::fmt;

use crate::act::{seu_value, Act, UtilityFunction};
use crate::belief::{bayes_update, Belief};
use crate::error::Error;
use crate::preferences::{os_prefer, PreferenceFamily, Verdict};
use crate::rational::Rational;
use crate::space::{Event, StateSpace};

/// An ordered list of beliefs. Supports may overlap and need not cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpsRepresentation {
    space: StateSpace,
    levels: Vec<Belief>,
}

impl LpsRepresentation {
    pub fn new(levels: Vec<Belief>) -> Result<Self, Error> {
        let space = levels.first().ok_or(Error::EmptyBeliefList)?.space().clone();
        if levels.iter().any(|b| !b.space().same_as(&space)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(LpsRepresentation { space, levels })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn levels(&self) -> &[Belief] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Level-wise expected utilities; the derived order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexValue(pub Vec<Rational>);

impl LexValue {
    pub fn components(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for LexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn lps_value(lps: &LpsRepresentation, u: &UtilityFunction, f: &Act) -> Result<LexValue, Error> {
    lps.levels
        .iter()
        .map(|mu| seu_value(u, mu, f))
        .collect::<Result<_, _>>()
        .map(LexValue)
}

/// `Indifferent` only when every level ties.
pub fn lps_compare(lps: &LpsRepresentation, u: &UtilityFunction, f: &Act, g: &Act) -> Result<Verdict, Error> {
    let vf = lps_value(lps, u, f)?;
    let vg = lps_value(lps, u, g)?;
    Ok(match vf.cmp(&vg) {
        std::cmp::Ordering::Greater => Verdict::PrefersFirst,
        std::cmp::Ordering::Less => Verdict::PrefersSecond,
        std::cmp::Ordering::Equal => Verdict::Indifferent,
    })
}

/// Conditional LPS: Bayes-update the levels feasible on `e`, in order, and
/// drop the rest.
pub fn clps_condition(lps: &LpsRepresentation, e: Event) -> Result<LpsRepresentation, Error> {
    lps.space.check(e)?;
    if e.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let levels: Vec<Belief> = lps
        .levels
        .iter()
        .filter(|mu| mu.support().intersects(e))
        .map(|mu| bayes_update(mu, e))
        .collect::<Result<_, _>>()?;
    if levels.is_empty() {
        return Err(Error::AllLevelsNull { event: e });
    }
    Ok(LpsRepresentation {
        space: lps.space.clone(),
        levels,
    })
}

/// The four comparisons of `f` against `g`: ex ante and given `e`, under
/// ordered surprises and under the (conditional) LPS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndifferenceReport {
    pub os_ex_ante: Verdict,
    pub os_given: Verdict,
    pub lps_ex_ante: Verdict,
    pub clps_given: Verdict,
    pub lps_ex_ante_value: (LexValue, LexValue),
    pub clps_given_value: (LexValue, LexValue),
}

impl IndifferenceReport {
    /// Ex-ante indifference broken by conditioning, under ordered surprises.
    pub fn os_resolves(&self) -> bool {
        self.os_ex_ante == Verdict::Indifferent && self.os_given.is_strict()
    }

    pub fn lps_resolves(&self) -> bool {
        self.lps_ex_ante == Verdict::Indifferent && self.clps_given.is_strict()
    }

    /// Ex-ante and conditional LPS rankings coincide.
    pub fn clps_agrees(&self) -> bool {
        self.lps_ex_ante == self.clps_given
    }

    /// Ordered surprises resolve an indifference that the LPS does not.
    pub fn os_only_resolution(&self) -> bool {
        self.os_resolves() && !self.lps_resolves()
    }
}

pub fn indifference_resolution_demo(
    fam: &PreferenceFamily,
    lps: &LpsRepresentation,
    u: &UtilityFunction,
    f: &Act,
    g: &Act,
    e: Event,
) -> Result<IndifferenceReport, Error> {
    let full = fam.os().space().full();
    let conditional = clps_condition(lps, e)?;
    Ok(IndifferenceReport {
        os_ex_ante: os_prefer(fam, full, f, g)?,
        os_given: os_prefer(fam, e, f, g)?,
        lps_ex_ante: lps_compare(lps, u, f, g)?,
        clps_given: lps_compare(&conditional, u, f, g)?,
        lps_ex_ante_value: (lps_value(lps, u, f)?, lps_value(lps, u, g)?),
        clps_given_value: (lps_value(&conditional, u, f)?, lps_value(&conditional, u, g)?),
    })
}
