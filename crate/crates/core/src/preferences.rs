//! Conditional preference families and representation-level axiom checks.
//!
//! A family assigns each conditioning event `E` a belief and a utility;
//! acts are ranked by subjective expected utility. The ordered-surprises
//! family uses `os_update` and the utility of the event's surprise order.

use std::collections::BTreeMap;
use std::fmt;

use crate::act::{compose_act, seu_value, Act, Lottery, UtilityFunction};
use crate::belief::Belief;
use crate::error::Error;
use crate::ordered_surprises::{os_update, OsRepresentation};
use crate::rational::Rational;
use crate::rules::UpdatingRule;
use crate::space::{Event, StateSpace};

/// Outcome of comparing two acts `f`, `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    PrefersFirst,
    PrefersSecond,
    Indifferent,
}

impl Verdict {
    pub fn from_values(f: &Rational, g: &Rational) -> Self {
        match f.cmp(g) {
            std::cmp::Ordering::Greater => Verdict::PrefersFirst,
            std::cmp::Ordering::Less => Verdict::PrefersSecond,
            std::cmp::Ordering::Equal => Verdict::Indifferent,
        }
    }

    pub fn is_strict(self) -> bool {
        self != Verdict::Indifferent
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::PrefersFirst => "first strictly preferred",
            Verdict::PrefersSecond => "second strictly preferred",
            Verdict::Indifferent => "indifferent",
        })
    }
}

/// A family `{≿_E}` of SEU preferences indexed by nonempty events.
pub trait ConditionalPreferences {
    fn space(&self) -> &StateSpace;

    fn conditional_belief(&self, e: Event) -> Result<Belief, Error>;

    fn conditional_utility(&self, e: Event) -> Result<&UtilityFunction, Error>;

    /// Compare `f` and `g` under `≿_e`.
    fn prefer(&self, e: Event, f: &Act, g: &Act) -> Result<Verdict, Error> {
        let mu = self.conditional_belief(e)?;
        let u = self.conditional_utility(e)?;
        Ok(Verdict::from_values(&seu_value(u, &mu, f)?, &seu_value(u, &mu, g)?))
    }
}

/// Ordered surprises with one utility per surprise order.
///
/// Invariants: the representation is canonical, there is one non-constant
/// utility per order, and all utilities share one outcome table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceFamily {
    os: OsRepresentation,
    utilities: Vec<UtilityFunction>,
}

impl PreferenceFamily {
    pub fn new(os: OsRepresentation, utilities: Vec<UtilityFunction>) -> Result<Self, Error> {
        if !os.is_canonical() {
            return Err(Error::InvalidFamily("prior supports overlap".into()));
        }
        if utilities.len() != os.len() {
            return Err(Error::InvalidFamily(format!(
                "{} utilities for {} orders",
                utilities.len(),
                os.len()
            )));
        }
        if let Some(order) = utilities.iter().position(UtilityFunction::is_constant) {
            return Err(Error::DegenerateUtility { order });
        }
        let domain: Vec<&String> = utilities[0].table().keys().collect();
        if let Some(k) = utilities.iter().position(|u| !u.table().keys().eq(domain.iter().copied())) {
            return Err(Error::InvalidFamily(format!("utility {k} has a different outcome table")));
        }
        Ok(PreferenceFamily { os, utilities })
    }

    pub fn os(&self) -> &OsRepresentation {
        &self.os
    }

    pub fn utilities(&self) -> &[UtilityFunction] {
        &self.utilities
    }
}

impl ConditionalPreferences for PreferenceFamily {
    fn space(&self) -> &StateSpace {
        self.os.space()
    }

    fn conditional_belief(&self, e: Event) -> Result<Belief, Error> {
        os_update(&self.os, e)
    }

    fn conditional_utility(&self, e: Event) -> Result<&UtilityFunction, Error> {
        Ok(&self.utilities[self.os.surprise_order(e)?])
    }
}

/// An arbitrary updating rule paired with a single utility. Useful for
/// building families that violate the axioms on purpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFamily {
    rule: UpdatingRule,
    utility: UtilityFunction,
}

impl RuleFamily {
    pub fn new(rule: UpdatingRule, utility: UtilityFunction) -> Result<Self, Error> {
        if utility.is_constant() {
            return Err(Error::DegenerateUtility { order: 0 });
        }
        Ok(RuleFamily { rule, utility })
    }
}

impl ConditionalPreferences for RuleFamily {
    fn space(&self) -> &StateSpace {
        self.rule.space()
    }

    fn conditional_belief(&self, e: Event) -> Result<Belief, Error> {
        self.rule
            .get(e)
            .cloned()
            .ok_or_else(|| Error::InvalidRule(format!("no belief for {}", self.rule.space().show(e))))
    }

    fn conditional_utility(&self, _e: Event) -> Result<&UtilityFunction, Error> {
        Ok(&self.utility)
    }
}

pub fn os_prefer(fam: &PreferenceFamily, e: Event, f: &Act, g: &Act) -> Result<Verdict, Error> {
    fam.prefer(e, f, g)
}

/// States with zero conditional mass given `e`; always contains `S ∖ e` for
/// ordered-surprises families.
pub fn null_states<P: ConditionalPreferences + ?Sized>(fam: &P, e: Event) -> Result<Event, Error> {
    let mu = fam.conditional_belief(e)?;
    Ok(fam.space().full().difference(mu.support()))
}

/// Evaluates acts against a fixed belief and utility.
struct Evaluator<'a> {
    mu: Belief,
    u: &'a UtilityFunction,
}

impl<'a> Evaluator<'a> {
    fn new<P: ConditionalPreferences + ?Sized>(fam: &'a P, e: Event) -> Result<Self, Error> {
        Ok(Evaluator {
            mu: fam.conditional_belief(e)?,
            u: fam.conditional_utility(e)?,
        })
    }

    fn compare(&self, f: &Act, g: &Act) -> Result<Verdict, Error> {
        Ok(Verdict::from_values(&seu_value(self.u, &self.mu, f)?, &seu_value(self.u, &self.mu, g)?))
    }
}

/// A sampled triple on which `f_A h` vs `g_A h` under `≿_E` disagrees with
/// `f` vs `g` under `≿_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyWitness {
    pub f: Act,
    pub g: Act,
    pub h: Act,
    pub given_e: Verdict,
    pub given_a: Verdict,
}

/// Check `f_A h ≿_E g_A h ⇔ f ≿_A g` on every sampled `(f, g, h)`; returns
/// the first failing triple.
pub fn check_conditional_consistency<P: ConditionalPreferences + ?Sized>(
    fam: &P,
    e: Event,
    a: Event,
    triples: &[(Act, Act, Act)],
) -> Result<Option<ConsistencyWitness>, Error> {
    if a.is_empty() {
        return Err(Error::EmptyEvent);
    }
    if !a.is_subset_of(e) {
        return Err(Error::NotSubevent { sub: a, sup: e });
    }
    let on_e = Evaluator::new(fam, e)?;
    if !on_e.mu.support().intersects(a) {
        return Err(Error::InfeasibleSubevent { event: a });
    }
    let on_a = Evaluator::new(fam, a)?;
    for (f, g, h) in triples {
        let given_e = on_e.compare(&compose_act(f, a, h)?, &compose_act(g, a, h)?)?;
        let given_a = on_a.compare(f, g)?;
        if given_e != given_a {
            return Ok(Some(ConsistencyWitness {
                f: f.clone(),
                g: g.clone(),
                h: h.clone(),
                given_e,
                given_a,
            }));
        }
    }
    Ok(None)
}

/// A pair of acts agreeing on `E` that `≿_E` does not rank indifferent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequentialismWitness {
    pub f: Act,
    pub g: Act,
    pub verdict: Verdict,
}

/// Check that sampled pairs agreeing on `e` are indifferent under `≿_e`.
/// Pairs that differ on `e` are skipped.
pub fn check_consequentialism<P: ConditionalPreferences + ?Sized>(
    fam: &P,
    e: Event,
    pairs: &[(Act, Act)],
) -> Result<Option<ConsequentialismWitness>, Error> {
    let on_e = Evaluator::new(fam, e)?;
    for (f, g) in pairs {
        if !f.agrees_on(g, e) {
            continue;
        }
        let verdict = on_e.compare(f, g)?;
        if verdict.is_strict() {
            return Ok(Some(ConsequentialismWitness {
                f: f.clone(),
                g: g.clone(),
                verdict,
            }));
        }
    }
    Ok(None)
}

/// Per-order affine coefficients `u_k = α_k·u₀ + β_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiskIndependenceReport {
    pub holds: bool,
    /// `(α_k, β_k)` for every order whose utility is a positive affine
    /// transform of `u₀`; order 0 maps to `(1, 0)`.
    pub coefficients: BTreeMap<usize, (Rational, Rational)>,
}

/// Solve `uk = α·u0 + β` from the first two outcomes where `u0` differs and
/// verify it everywhere. `None` when the fit fails or `α ≤ 0`.
pub fn fit_affine(u0: &UtilityFunction, uk: &UtilityFunction) -> Result<Option<(Rational, Rational)>, Error> {
    let mut outcomes = u0.table().iter();
    let (x0, a0) = outcomes.next().ok_or(Error::DegenerateBase)?;
    let (x1, a1) = outcomes.find(|(_, v)| *v != a0).ok_or(Error::DegenerateBase)?;
    let b0 = uk.get(x0)?;
    let b1 = uk.get(x1)?;
    let alpha = (b1 - b0) / (a1 - a0);
    let beta = b0 - &alpha * a0;
    if !alpha.is_positive() {
        return Ok(None);
    }
    for (x, a) in u0.table() {
        if *uk.get(x)? != &alpha * a + &beta {
            return Ok(None);
        }
    }
    if uk.table().len() != u0.table().len() {
        return Ok(None);
    }
    Ok(Some((alpha, beta)))
}

pub fn check_risk_independence(fam: &PreferenceFamily) -> Result<RiskIndependenceReport, Error> {
    let u0 = &fam.utilities[0];
    let mut coefficients = BTreeMap::new();
    for (k, uk) in fam.utilities.iter().enumerate() {
        if let Some(c) = fit_affine(u0, uk)? {
            coefficients.insert(k, c);
        }
    }
    Ok(RiskIndependenceReport {
        holds: coefficients.len() == fam.utilities.len(),
        coefficients,
    })
}

/// Lotteries that separate positive affine transforms from everything else:
/// every sure outcome, and for each `lo < mid < hi` under `u0` the mixture of
/// `hi` and `lo` that `u0` ranks indifferent to `mid`.
pub fn risk_probe_lotteries(u0: &UtilityFunction) -> Result<Vec<Lottery>, Error> {
    let mut out: Vec<Lottery> = u0.table().keys().map(|x| Lottery::sure(x.as_str())).collect();
    let table: Vec<(&String, &Rational)> = u0.table().iter().collect();
    for (lo, ulo) in &table {
        for (_, umid) in &table {
            for (hi, uhi) in &table {
                if ulo < umid && umid < uhi {
                    let p = (*umid - *ulo) / (*uhi - *ulo);
                    out.push(Lottery::binary(hi, lo, &p)?);
                }
            }
        }
    }
    Ok(out)
}

/// Whether every conditioning event ranks the constant acts built from
/// `lotteries` exactly as `≿_S` does.
pub fn constant_act_rankings_agree(fam: &PreferenceFamily, lotteries: &[Lottery]) -> Result<bool, Error> {
    let space = fam.space();
    let acts: Vec<Act> = lotteries.iter().map(|p| Act::constant(space, p.clone())).collect();
    // Constant acts are ranked by the utility alone, so one event per order suffices.
    let mut representative: BTreeMap<usize, Event> = BTreeMap::new();
    for e in space.events() {
        representative.entry(fam.os.surprise_order(e)?).or_insert(e);
    }
    let base = Evaluator::new(fam, space.full())?;
    for &e in representative.values() {
        let cond = Evaluator::new(fam, e)?;
        for (i, f) in acts.iter().enumerate() {
            for g in &acts[i + 1..] {
                if base.compare(f, g)? != cond.compare(f, g)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Probabilities used by the default act grid.
pub fn default_probabilities() -> Vec<Rational> {
    (0..=4).map(|i| Rational::new(i, 4)).collect()
}

fn grid_lottery(u0: &UtilityFunction, p: &Rational) -> Result<Lottery, Error> {
    let (lo, hi) = u0.extremes().ok_or(Error::DegenerateBase)?;
    if u0.is_constant() {
        return Err(Error::DegenerateBase);
    }
    Lottery::binary(hi, lo, p)
}

/// Constant acts `L_p` (best outcome with probability `p`, worst otherwise)
/// for each default `p`, then for each state `s` and `p > 0` the bet paying
/// `L_p` on `s` and `L_0` elsewhere.
pub fn default_act_grid(space: &StateSpace, u0: &UtilityFunction) -> Result<Vec<Act>, Error> {
    let probs = default_probabilities();
    let lotteries: Vec<Lottery> = probs.iter().map(|p| grid_lottery(u0, p)).collect::<Result<_, _>>()?;
    let mut acts: Vec<Act> = lotteries.iter().map(|l| Act::constant(space, l.clone())).collect();
    for s in 0..space.len() {
        for l in &lotteries[1..] {
            acts.push(Act::bet(space, Event::singleton(s), l.clone(), lotteries[0].clone()));
        }
    }
    Ok(acts)
}

/// Every unordered pair of grid acts, padded with `L_0` and with `L_1`.
pub fn default_triples(space: &StateSpace, u0: &UtilityFunction) -> Result<Vec<(Act, Act, Act)>, Error> {
    let grid = default_act_grid(space, u0)?;
    let pads = padding_acts(space, u0)?;
    let mut out = Vec::new();
    for h in &pads {
        for (i, f) in grid.iter().enumerate() {
            for g in &grid[i + 1..] {
                out.push((f.clone(), g.clone(), h.clone()));
            }
        }
    }
    Ok(out)
}

/// Each grid act `f` paired with `f_E h` for `h ∈ {L_0, L_1}`.
pub fn consequentialism_pairs(space: &StateSpace, e: Event, u0: &UtilityFunction) -> Result<Vec<(Act, Act)>, Error> {
    let grid = default_act_grid(space, u0)?;
    let pads = padding_acts(space, u0)?;
    let mut out = Vec::new();
    for h in &pads {
        for f in &grid {
            out.push((f.clone(), compose_act(f, e, h)?));
        }
    }
    Ok(out)
}

fn padding_acts(space: &StateSpace, u0: &UtilityFunction) -> Result<[Act; 2], Error> {
    Ok([
        Act::constant(space, grid_lottery(u0, &Rational::zero())?),
        Act::constant(space, grid_lottery(u0, &Rational::one())?),
    ])
}
