//! Lotteries, Anscombe–Aumann acts, utilities and subjective expected utility.

use std::collections::BTreeMap;
use std::fmt;

use crate::belief::Belief;
use crate::error::Error;
use crate::rational::Rational;
use crate::space::{Event, StateSpace};

/// A simple lottery over opaque outcome labels. Zero-probability outcomes
/// are not stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lottery {
    outcomes: BTreeMap<String, Rational>,
}

impl Lottery {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Rational)>) -> Result<Self, Error> {
        let mut outcomes = BTreeMap::new();
        let mut total = Rational::zero();
        for (label, p) in pairs {
            let label = label.into();
            if p.is_negative() {
                return Err(Error::InvalidLottery(format!("negative probability on {label:?}")));
            }
            total = &total + &p;
            if p.is_zero() {
                continue;
            }
            if outcomes.insert(label.clone(), p).is_some() {
                return Err(Error::InvalidLottery(format!("outcome {label:?} listed twice")));
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidLottery(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Lottery { outcomes })
    }

    /// The lottery paying `label` for sure.
    pub fn sure(label: impl Into<String>) -> Self {
        Lottery {
            outcomes: BTreeMap::from([(label.into(), Rational::one())]),
        }
    }

    /// `p·hi + (1−p)·lo`.
    pub fn binary(hi: &str, lo: &str, p: &Rational) -> Result<Self, Error> {
        if hi == lo {
            return Ok(Lottery::sure(hi));
        }
        Lottery::new([(hi, p.clone()), (lo, Rational::one() - p)])
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.outcomes.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Mixture `w·self + (1−w)·other`.
    pub fn mix(&self, w: &Rational, other: &Lottery) -> Result<Lottery, Error> {
        if w.is_negative() || *w > Rational::one() {
            return Err(Error::InvalidLottery(format!("mixture weight {w} outside [0,1]")));
        }
        let v = Rational::one() - w;
        let mut acc: BTreeMap<String, Rational> = BTreeMap::new();
        let weighted = self.outcomes.iter().map(|(k, p)| (k, w * p));
        for (k, p) in weighted.chain(other.outcomes.iter().map(|(k, p)| (k, &v * p))) {
            let slot = acc.entry(k.clone()).or_default();
            *slot = &*slot + &p;
        }
        Lottery::new(acc)
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.outcomes.iter().map(|(k, p)| format!("{k}:{p}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl fmt::Debug for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total map from states to lotteries.
#[derive(Clone, PartialEq, Eq)]
pub struct Act {
    space: StateSpace,
    lotteries: Vec<Lottery>,
}

impl Act {
    pub fn new(space: &StateSpace, lotteries: Vec<Lottery>) -> Result<Self, Error> {
        if lotteries.len() != space.len() {
            return Err(Error::InvalidAct(format!(
                "{} lotteries for {} states",
                lotteries.len(),
                space.len()
            )));
        }
        Ok(Act {
            space: space.clone(),
            lotteries,
        })
    }

    pub fn constant(space: &StateSpace, lottery: Lottery) -> Self {
        Act {
            space: space.clone(),
            lotteries: vec![lottery; space.len()],
        }
    }

    /// Pays `on` inside `e` and `off` elsewhere.
    pub fn bet(space: &StateSpace, e: Event, on: Lottery, off: Lottery) -> Self {
        let lotteries = (0..space.len())
            .map(|i| if e.contains(i) { on.clone() } else { off.clone() })
            .collect();
        Act {
            space: space.clone(),
            lotteries,
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn at(&self, state: usize) -> &Lottery {
        &self.lotteries[state]
    }

    pub fn lotteries(&self) -> &[Lottery] {
        &self.lotteries
    }

    pub fn is_constant(&self) -> bool {
        self.lotteries.windows(2).all(|w| w[0] == w[1])
    }

    /// Whether `self` and `other` pay the same lottery on every state of `e`.
    pub fn agrees_on(&self, other: &Act, e: Event) -> bool {
        e.states().all(|i| self.lotteries[i] == other.lotteries[i])
    }

    /// Statewise mixture `w·self + (1−w)·other`.
    pub fn mix(&self, w: &Rational, other: &Act) -> Result<Act, Error> {
        if !self.space.same_as(&other.space) {
            return Err(Error::SpaceMismatch);
        }
        let lotteries = self
            .lotteries
            .iter()
            .zip(&other.lotteries)
            .map(|(a, b)| a.mix(w, b))
            .collect::<Result<_, _>>()?;
        Ok(Act {
            space: self.space.clone(),
            lotteries,
        })
    }
}

impl fmt::Debug for Act {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, l) in self.lotteries.iter().enumerate() {
            m.entry(&self.space.label(i), l);
        }
        m.finish()
    }
}

/// The composite act `f_E g`: `f(s)` for `s ∈ E`, `g(s)` otherwise.
pub fn compose_act(f: &Act, e: Event, g: &Act) -> Result<Act, Error> {
    if !f.space.same_as(&g.space) {
        return Err(Error::SpaceMismatch);
    }
    f.space.check(e)?;
    let lotteries = (0..f.space.len())
        .map(|i| if e.contains(i) { f.lotteries[i].clone() } else { g.lotteries[i].clone() })
        .collect();
    Ok(Act {
        space: f.space.clone(),
        lotteries,
    })
}

/// A utility table over outcome labels.
#[derive(Clone, PartialEq, Eq)]
pub struct UtilityFunction {
    table: BTreeMap<String, Rational>,
}

impl UtilityFunction {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Rational)>) -> Self {
        UtilityFunction {
            table: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, outcome: &str) -> Result<&Rational, Error> {
        self.table.get(outcome).ok_or_else(|| Error::MissingUtility {
            outcome: outcome.to_string(),
        })
    }

    pub fn table(&self) -> &BTreeMap<String, Rational> {
        &self.table
    }

    pub fn is_constant(&self) -> bool {
        let mut vals = self.table.values();
        match vals.next() {
            None => true,
            Some(first) => vals.all(|v| v == first),
        }
    }

    /// Expected utility of a lottery.
    pub fn expected(&self, p: &Lottery) -> Result<Rational, Error> {
        let mut acc = Rational::zero();
        for (x, px) in p.outcomes() {
            acc = &acc + &(px * self.get(x)?);
        }
        Ok(acc)
    }

    /// `alpha·u + beta`, pointwise.
    pub fn affine(&self, alpha: &Rational, beta: &Rational) -> Self {
        UtilityFunction {
            table: self.table.iter().map(|(k, v)| (k.clone(), alpha * v + beta)).collect(),
        }
    }

    /// Lowest-utility and highest-utility outcomes (first label on ties).
    pub fn extremes(&self) -> Option<(&str, &str)> {
        let lo = self.table.iter().min_by(|a, b| a.1.cmp(b.1))?;
        let hi = self.table.iter().rev().max_by(|a, b| a.1.cmp(b.1))?;
        Some((lo.0.as_str(), hi.0.as_str()))
    }
}

impl fmt::Debug for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(&self.table).finish()
    }
}

/// `∑_s μ(s)·∑_x f(s)(x)·u(x)`, exactly. Every outcome of `f` must have a
/// utility, including outcomes on null states.
pub fn seu_value(u: &UtilityFunction, mu: &Belief, f: &Act) -> Result<Rational, Error> {
    if !mu.space().same_as(&f.space) {
        return Err(Error::SpaceMismatch);
    }
    let mut acc = Rational::zero();
    for (i, lottery) in f.lotteries.iter().enumerate() {
        let eu = u.expected(lottery)?;
        let m = mu.mass(i);
        if !m.is_zero() {
            acc = &acc + &(m * &eu);
        }
    }
    Ok(acc)
}
