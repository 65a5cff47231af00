//! Events as bitmasks over frame indices, and interval-valued answers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of a frame, bit `i` set when outcome `i` belongs to the event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Event(pub u32);

impl Event {
    pub const EMPTY: Event = Event(0);

    /// The sure event of a frame with `m` outcomes.
    pub fn full(m: usize) -> Event {
        debug_assert!(m <= 31);
        Event((1u32 << m) - 1)
    }

    pub fn singleton(i: usize) -> Event {
        Event(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Event {
        Event(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement(self, m: usize) -> Event {
        Event(!self.0 & Event::full(m).0)
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    /// Member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Probability (or any additive mass) of the event under `values`.
    pub fn mass(self, values: &[f64]) -> f64 {
        values
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.contains(i))
            .map(|(_, v)| v)
            .sum()
    }

    /// Every event of an `m`-outcome frame, in bitmask order.
    pub fn all(m: usize) -> impl Iterator<Item = Event> {
        (0..1u32 << m).map(Event)
    }

    /// Every event ordered by cardinality, then lexicographically by members:
    /// `{}`, `{1}`, `{2}`, ..., `{1,2}`, ..., `U`.
    pub fn all_by_size(m: usize) -> Vec<Event> {
        let mut events: Vec<Event> = Event::all(m).collect();
        events.sort_by_key(|e| (e.len(), e.indices().collect::<Vec<_>>()));
        events
    }
}

/// A closed interval `[lower, upper]` of probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        Interval { lower, upper }
    }

    pub fn point(value: f64) -> Self {
        Interval::new(value, value)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// True when both ends are within `tol` of the other interval's ends.
    pub fn approx_eq(&self, other: &Interval, tol: f64) -> bool {
        (self.lower - other.lower).abs() <= tol && (self.upper - other.upper).abs() <= tol
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// Map from events to probability intervals, kept in query order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalTable {
    rows: Vec<(Event, Interval)>,
}

impl IntervalTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, event: Event, interval: Interval) {
        self.rows.push((event, interval));
    }

    pub fn get(&self, event: Event) -> Option<Interval> {
        self.rows.iter().find(|(e, _)| *e == event).map(|(_, i)| *i)
    }

    pub fn rows(&self) -> &[(Event, Interval)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Event, Interval)> {
        self.rows.iter()
    }
}

impl FromIterator<(Event, Interval)> for IntervalTable {
    fn from_iter<T: IntoIterator<Item = (Event, Interval)>>(iter: T) -> Self {
        IntervalTable {
            rows: iter.into_iter().collect(),
        }
    }
}
