//! JSON scenario files.
//!
//! Rationals are strings (`"7/8"`, `"0"`), beliefs map state labels to
//! masses (unlisted states get zero), events are label arrays, acts map every
//! state to a lottery `{outcome: probability}`, and utilities map outcomes to
//! values. Unknown keys are rejected. [`Scenario::to_json`] re-serializes in
//! canonical form: two-space indentation, keys in file order, and a trailing
//! newline.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::act::{Act, Lottery, UtilityFunction};
use crate::belief::Belief;
use crate::error::Error;
use crate::hypothesis_testing::HtRepresentation;
use crate::lps::LpsRepresentation;
use crate::ordered_surprises::OsRepresentation;
use crate::preferences::PreferenceFamily;
use crate::rational::Rational;
use crate::space::{Event, StateSpace};

pub type Masses = IndexMap<String, Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HtDoc {
    pub priors: Vec<String>,
    pub rho: Vec<Rational>,
    pub eps: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferencesDoc {
    /// One utility name per ordered-surprises prior.
    pub utilities: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConservativeDoc {
    pub prior: String,
    pub delta: Rational,
}

/// The file as written, before names are resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub beliefs: IndexMap<String, Masses>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub os: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ht: Option<HtDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lps: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub utilities: IndexMap<String, Masses>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub acts: IndexMap<String, IndexMap<String, Masses>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub events: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<PreferencesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conservative: Option<ConservativeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioError {
    /// Malformed JSON, a wrong type, an unknown key or an unparsable rational.
    Parse { line: usize, column: usize, message: String },
    /// A well-formed value that violates an invariant.
    Validation { field: String, error: Error },
    /// A name that no belief, utility or act carries.
    UnknownName { field: String, name: String },
}

impl ScenarioError {
    /// Typed name shown in reports.
    pub fn kind(&self) -> String {
        match self {
            ScenarioError::Parse { .. } => "ParseError".into(),
            ScenarioError::Validation { error, .. } => super::error_name(error),
            ScenarioError::UnknownName { .. } => "UnknownName".into(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Parse { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ScenarioError::Validation { field, error } => write!(f, "{field}: {error}"),
            ScenarioError::UnknownName { field, name } => write!(f, "{field}: no definition named {name:?}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

/// A fully resolved scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    pub space: StateSpace,
    pub beliefs: IndexMap<String, Belief>,
    pub os: Option<OsRepresentation>,
    pub ht: Option<HtRepresentation>,
    pub lps: Option<LpsRepresentation>,
    pub utilities: IndexMap<String, UtilityFunction>,
    pub acts: IndexMap<String, Act>,
    pub events: IndexMap<String, Event>,
    pub family: Option<PreferenceFamily>,
    pub conservative: Option<(Belief, Rational)>,
}

fn invalid(field: impl Into<String>) -> impl FnOnce(Error) -> ScenarioError {
    let field = field.into();
    move |error| ScenarioError::Validation { field, error }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Scenario::resolve(doc)
}

impl Scenario {
    pub fn resolve(doc: ScenarioDoc) -> Result<Scenario, ScenarioError> {
        let space = StateSpace::new(doc.states.iter().cloned()).map_err(invalid("states"))?;

        let mut beliefs = IndexMap::new();
        for (name, masses) in &doc.beliefs {
            let pairs: Vec<(&str, Rational)> = masses.iter().map(|(s, m)| (s.as_str(), m.clone())).collect();
            let b = Belief::from_pairs(&space, &pairs).map_err(invalid(format!("beliefs.{name}")))?;
            beliefs.insert(name.clone(), b);
        }
        let lookup = |field: &str, names: &[String]| -> Result<Vec<Belief>, ScenarioError> {
            names
                .iter()
                .map(|n| {
                    beliefs.get(n).cloned().ok_or_else(|| ScenarioError::UnknownName {
                        field: field.to_string(),
                        name: n.clone(),
                    })
                })
                .collect()
        };

        let os = match &doc.os {
            Some(names) => Some(OsRepresentation::new(lookup("os", names)?).map_err(invalid("os"))?),
            None => None,
        };
        let ht = match &doc.ht {
            Some(h) => Some(
                HtRepresentation::new(lookup("ht.priors", &h.priors)?, h.rho.clone(), h.eps.clone())
                    .map_err(invalid("ht"))?,
            ),
            None => None,
        };
        let lps = match &doc.lps {
            Some(names) => Some(LpsRepresentation::new(lookup("lps", names)?).map_err(invalid("lps"))?),
            None => None,
        };

        let utilities: IndexMap<String, UtilityFunction> = doc
            .utilities
            .iter()
            .map(|(name, table)| (name.clone(), UtilityFunction::new(table.iter().map(|(k, v)| (k.clone(), v.clone())))))
            .collect();

        let mut acts = IndexMap::new();
        for (name, by_state) in &doc.acts {
            let field = format!("acts.{name}");
            for label in by_state.keys() {
                if space.index_of(label).is_none() {
                    return Err(invalid(field)(Error::UnknownState(label.clone())));
                }
            }
            let mut lotteries = Vec::with_capacity(space.len());
            for label in space.labels() {
                let table = by_state
                    .get(label)
                    .ok_or_else(|| invalid(field.clone())(Error::InvalidAct(format!("no lottery for state {label:?}"))))?;
                let lottery = Lottery::new(table.iter().map(|(k, v)| (k.clone(), v.clone())))
                    .map_err(invalid(format!("{field}.{label}")))?;
                lotteries.push(lottery);
            }
            acts.insert(name.clone(), Act::new(&space, lotteries).map_err(invalid(field))?);
        }

        let mut events = IndexMap::new();
        for (name, labels) in &doc.events {
            let e = space.event(labels.iter().map(String::as_str)).map_err(invalid(format!("events.{name}")))?;
            events.insert(name.clone(), e);
        }

        let family = match &doc.preferences {
            Some(p) => {
                let os = os.clone().ok_or_else(|| {
                    invalid("preferences")(Error::InvalidFamily("an os block is required".into()))
                })?;
                let us = p
                    .utilities
                    .iter()
                    .map(|n| {
                        utilities.get(n).cloned().ok_or_else(|| ScenarioError::UnknownName {
                            field: "preferences.utilities".into(),
                            name: n.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(PreferenceFamily::new(os, us).map_err(invalid("preferences"))?)
            }
            None => None,
        };

        let conservative = match &doc.conservative {
            Some(c) => {
                let prior = lookup("conservative.prior", std::slice::from_ref(&c.prior))?.remove(0);
                if !c.delta.is_positive() || c.delta > Rational::one() {
                    return Err(invalid("conservative.delta")(Error::BadDelta(c.delta.clone())));
                }
                Some((prior, c.delta.clone()))
            }
            None => None,
        };

        Ok(Scenario {
            doc,
            space,
            beliefs,
            os,
            ht,
            lps,
            utilities,
            acts,
            events,
            family,
            conservative,
        })
    }

    /// Canonical serialization.
    pub fn to_json(&self) -> String {
        doc_to_json(&self.doc)
    }
}

pub fn doc_to_json(doc: &ScenarioDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("scenario documents always serialize");
    s.push('\n');
    s
}

/// Belief as `{label: mass}` over its support.
pub fn belief_masses(b: &Belief) -> Masses {
    b.support_entries().map(|(s, m)| (s.to_string(), m.clone())).collect()
}
