//! Finite state spaces and events.
//!
//! An [`Event`] is a bit-subset keyed to the declaration order of its
//! [`StateSpace`]. Events are ordered canonically: by the lexicographic order
//! of their sorted state-index lists, so `[0] < [0,1] < [0,1,2] < [0,2] < [1]`.
//! Every enumeration in the crate visits events in that order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Hard ceiling imposed by the 64-bit event encoding.
pub const MAX_STATES: usize = 63;

struct SpaceInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// A nonempty, ordered set of distinct state labels. Cloning is cheap.
#[derive(Clone)]
pub struct StateSpace {
    inner: Arc<SpaceInner>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace("state space must be nonempty".into()));
        }
        if labels.len() > MAX_STATES {
            return Err(Error::TooManyStates {
                states: labels.len(),
                limit: MAX_STATES,
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::InvalidSpace("state labels must be nonempty".into()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate state label {label:?}")));
            }
        }
        Ok(StateSpace {
            inner: Arc::new(SpaceInner { labels, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.inner.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.inner.index.get(label).copied()
    }

    /// The sure event `S`.
    pub fn full(&self) -> Event {
        Event(full_mask(self.len()))
    }

    /// Parse an event from state labels.
    pub fn event<I, S>(&self, labels: I) -> Result<Event, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0u64;
        for l in labels {
            let l = l.as_ref();
            let i = self.index_of(l).ok_or_else(|| Error::UnknownState(l.to_string()))?;
            mask |= 1 << i;
        }
        Ok(Event(mask))
    }

    /// Parse a comma-separated label list such as `e,el,l1`.
    pub fn parse_event(&self, text: &str) -> Result<Event, Error> {
        if text.trim().is_empty() {
            return Ok(Event::EMPTY);
        }
        self.event(text.split(',').map(str::trim))
    }

    pub fn contains(&self, e: Event) -> bool {
        e.0 & !full_mask(self.len()) == 0
    }

    pub fn check(&self, e: Event) -> Result<(), Error> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::EventOutOfSpace)
        }
    }

    /// All nonempty events, in canonical order.
    pub fn events(&self) -> Vec<Event> {
        self.full().nonempty_subsets()
    }

    /// Render an event as `{a,b,c}` using state labels.
    pub fn show(&self, e: Event) -> String {
        let names: Vec<&str> = e.states().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn same_as(&self, other: &StateSpace) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.labels == other.inner.labels
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for StateSpace {}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels()).finish()
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of a state space, stored as a bitmask over state indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Event(u64);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub fn from_bits(bits: u64) -> Self {
        Event(bits)
    }

    pub fn singleton(i: usize) -> Self {
        Event(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Event(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Event) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn intersection(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn difference(self, other: Event) -> Event {
        Event(self.0 & !other.0)
    }

    /// State indices in increasing order.
    pub fn states(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.states().collect()
    }

    /// Nonempty subsets of `self`, in canonical order.
    pub fn nonempty_subsets(self) -> Vec<Event> {
        let positions = self.indices();
        let m = positions.len();
        let mut out = Vec::with_capacity((1usize << m.min(30)) - 1);
        // Depth-first over sorted index lists: a prefix precedes its extensions.
        let mut stack: Vec<usize> = Vec::with_capacity(m);
        let mut mask = 0u64;
        if m == 0 {
            return out;
        }
        stack.push(0);
        mask |= 1 << positions[0];
        loop {
            out.push(Event(mask));
            let last = *stack.last().unwrap();
            if last + 1 < m {
                stack.push(last + 1);
                mask |= 1 << positions[last + 1];
                continue;
            }
            stack.pop();
            mask &= !(1 << positions[last]);
            match stack.pop() {
                None => break,
                Some(prev) => {
                    mask &= !(1 << positions[prev]);
                    stack.push(prev + 1);
                    mask |= 1 << positions[prev + 1];
                }
            }
        }
        out
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.0, other.0);
        if a == b {
            return Ordering::Equal;
        }
        let i = (a ^ b).trailing_zeros();
        // The list holding the first differing index is smaller unless the
        // other list ends there (a proper prefix sorts first).
        let above = |x: u64| if i >= 63 { 0 } else { x >> (i + 1) };
        if a >> i & 1 == 1 {
            if above(b) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if above(a) != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.states()).finish()
    }
}
