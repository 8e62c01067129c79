use crate::rational::Rational;
use crate::space::Event;

/// Every failure the library reports. Variant names double as the typed
/// error names printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid state space: {0}")]
    InvalidSpace(String),
    #[error("{states} states exceed the limit of {limit}")]
    TooManyStates { states: usize, limit: usize },
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("event is not a subset of the state space")]
    EventOutOfSpace,
    #[error("objects live on different state spaces")]
    SpaceMismatch,
    #[error("invalid belief: {0}")]
    InvalidBelief(String),
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("invalid act: {0}")]
    InvalidAct(String),
    #[error("cannot condition on the empty event")]
    EmptyEvent,
    #[error("conditioning event {event:?} has probability zero")]
    NullConditioning { event: Event },
    #[error("outcome {outcome:?} has no utility")]
    MissingUtility { outcome: String },
    #[error("delta {0} is outside (0,1]")]
    BadDelta(Rational),
    #[error("threshold {0} is outside [0,1)")]
    BadThreshold(Rational),
    #[error("invalid updating rule: {0}")]
    InvalidRule(String),
    #[error("belief list is empty")]
    EmptyBeliefList,
    #[error("supports do not cover the state space; uncovered states {uncovered:?}")]
    IncompleteCoverage { uncovered: Event },
    #[error("supports of the belief list are not pairwise disjoint")]
    NotCanonical,
    #[error("rule is not a conditional probability system: {0}")]
    NotCps(String),
    #[error("no prior assigns event {event:?} probability above the threshold")]
    NoPriorExceedsThreshold { event: Event },
    #[error("invalid hypothesis-testing representation: {0}")]
    InvalidHt(String),
    #[error("maximal score on event {event:?} is shared by priors {indices:?}")]
    AmbiguousArgmax { event: Event, indices: Vec<usize> },
    #[error("every prior scores zero on event {event:?}")]
    AllZeroScores { event: Event },
    #[error("dominance relation among conditional beliefs of order {order} is cyclic")]
    CycleDetected { order: usize },
    #[error("every level assigns event {event:?} probability zero")]
    AllLevelsNull { event: Event },
    #[error("utility for order {order} is constant")]
    DegenerateUtility { order: usize },
    #[error("base utility is constant on the shared outcome table")]
    DegenerateBase,
    #[error("invalid preference family: {0}")]
    InvalidFamily(String),
    #[error("subevent {event:?} is null under the conditioning event's belief")]
    InfeasibleSubevent { event: Event },
    #[error("event {sub:?} is not contained in {sup:?}")]
    NotSubevent { sub: Event, sup: Event },
}
