//! Domination relations and the skyline container used for node-tab entries
//! and result sets.

use crate::way::{EdgeCounts, Way};

/// A `(cost, gain)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub cost: f64,
    pub gain: f64,
}

impl Label {
    pub const fn new(cost: f64, gain: f64) -> Self {
        Label { cost, gain }
    }
}

impl From<(f64, f64)> for Label {
    fn from((cost, gain): (f64, f64)) -> Self {
        Label { cost, gain }
    }
}

/// `a` is at most as expensive and at least as rewarding as `b`, and strictly
/// better in one of the two.
#[inline]
pub fn dominates_plain(a: Label, b: Label) -> bool {
    (a.cost < b.cost && a.gain >= b.gain) || (a.cost <= b.cost && a.gain > b.gain)
}

/// Plain domination plus the requirement that every directed edge of `a`
/// also occurs in `b`.
#[inline]
pub fn dominates_rc(a: Label, a_edges: &EdgeCounts, b: Label, b_edges: &EdgeCounts) -> bool {
    dominates_plain(a, b) && a_edges.support_subset_of(b_edges)
}

/// Items that carry a directed edge multiset.
pub trait EdgeSet {
    fn edge_counts(&self) -> &EdgeCounts;

    /// Tie-break between duplicates: `true` if `self` should replace an
    /// incumbent `other` of equal label.
    fn precedes(&self, _other: &Self) -> bool {
        false
    }
}

impl EdgeSet for Way {
    fn edge_counts(&self) -> &EdgeCounts {
        Way::edge_counts(self)
    }

    /// Shortlex order on the edge sequence. It is preserved by appending or
    /// prepending a common way, so every search keeps the same witness.
    fn precedes(&self, other: &Self) -> bool {
        (self.len(), self.edges()) < (other.len(), other.edges())
    }
}

impl EdgeSet for EdgeCounts {
    fn edge_counts(&self) -> &EdgeCounts {
        self
    }
}

/// Which relation a [`ParetoSet`] prunes with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// [`dominates_plain`]; identical labels are duplicates.
    Plain,
    /// [`dominates_rc`]; duplicates need identical labels and edge multisets.
    EdgeSubset,
    /// No domination at all, only exact duplicates (label and edge multiset)
    /// are rejected.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    Inserted { evicted: usize },
    RejectedDominated,
    RejectedDuplicate,
}

impl UpdateOutcome {
    pub fn inserted(self) -> bool {
        matches!(self, UpdateOutcome::Inserted { .. })
    }
}

#[derive(Debug, Clone)]
struct Entry<T> {
    label: Label,
    processed: bool,
    item: T,
}

/// Skyline of labeled items, kept sorted by cost (then gain).
///
/// Under [`Dominance::Plain`] the costs and the gains are both strictly
/// increasing along the set, which turns both the domination test and the
/// eviction into binary searches. The other relations need a full scan.
#[derive(Debug, Clone)]
pub struct ParetoSet<T> {
    dominance: Dominance,
    entries: Vec<Entry<T>>,
}

impl<T: EdgeSet> ParetoSet<T> {
    pub fn new(dominance: Dominance) -> Self {
        ParetoSet {
            dominance,
            entries: Vec::new(),
        }
    }

    pub fn dominance(&self) -> Dominance {
        self.dominance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inserts `item` unless it is dominated or duplicated; evicts every
    /// member it dominates. A duplicate replaces the incumbent only when it
    /// [precedes](EdgeSet::precedes) it, which counts as one eviction.
    pub fn update(&mut self, label: Label, item: T) -> UpdateOutcome {
        match self.dominance {
            Dominance::Plain => self.update_plain(label, item),
            Dominance::EdgeSubset | Dominance::Off => self.update_scan(label, item),
        }
    }

    fn update_plain(&mut self, label: Label, item: T) -> UpdateOutcome {
        let at_most = self.entries.partition_point(|e| e.label.cost <= label.cost);
        if let Some(best) = at_most.checked_sub(1).map(|i| self.entries[i].label) {
            if best == label {
                return self.replace_duplicate(at_most - 1, item);
            }
            if best.gain >= label.gain {
                return UpdateOutcome::RejectedDominated;
            }
        }
        let from = self.entries.partition_point(|e| e.label.cost < label.cost);
        let to = from + self.entries[from..].partition_point(|e| e.label.gain <= label.gain);
        let evicted = to - from;
        self.entries.splice(
            from..to,
            std::iter::once(Entry {
                label,
                processed: false,
                item,
            }),
        );
        UpdateOutcome::Inserted { evicted }
    }

    fn update_scan(&mut self, label: Label, item: T) -> UpdateOutcome {
        let rc = self.dominance == Dominance::EdgeSubset;
        for (i, e) in self.entries.iter().enumerate() {
            if e.label == label && e.item.edge_counts() == item.edge_counts() {
                return self.replace_duplicate(i, item);
            }
            if rc && dominates_rc(e.label, e.item.edge_counts(), label, item.edge_counts()) {
                return UpdateOutcome::RejectedDominated;
            }
        }
        let before = self.entries.len();
        if rc {
            self.entries.retain(|e| {
                !dominates_rc(label, item.edge_counts(), e.label, e.item.edge_counts())
            });
        }
        let evicted = before - self.entries.len();
        let pos = self.entries.partition_point(|e| {
            e.label.cost < label.cost || (e.label.cost == label.cost && e.label.gain <= label.gain)
        });
        self.entries.insert(
            pos,
            Entry {
                label,
                processed: false,
                item,
            },
        );
        UpdateOutcome::Inserted { evicted }
    }

    fn replace_duplicate(&mut self, at: usize, item: T) -> UpdateOutcome {
        let entry = &mut self.entries[at];
        if !item.precedes(&entry.item) {
            return UpdateOutcome::RejectedDuplicate;
        }
        entry.item = item;
        entry.processed = false;
        UpdateOutcome::Inserted { evicted: 1 }
    }

    /// Largest gain in the set, 0 when empty.
    pub fn max_gain(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.label.gain)
            .fold(0.0, f64::max)
    }

    /// Largest gain among members not yet processed.
    pub fn max_unprocessed_gain(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| !e.processed)
            .map(|e| e.label.gain)
            .reduce(f64::max)
    }

    pub fn has_unprocessed(&self) -> bool {
        self.entries.iter().any(|e| !e.processed)
    }

    /// Marks every unprocessed member as processed and returns copies of them
    /// in cost order.
    pub fn take_unprocessed(&mut self) -> Vec<T>
    where
        T: Clone,
    {
        self.entries
            .iter_mut()
            .filter(|e| !e.processed)
            .map(|e| {
                e.processed = true;
                e.item.clone()
            })
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &T)> + '_ {
        self.entries.iter().map(|e| (e.label, &e.item))
    }

    pub fn labels(&self) -> Vec<Label> {
        self.entries.iter().map(|e| e.label).collect()
    }

    pub fn into_items(self) -> impl Iterator<Item = (Label, T)> {
        self.entries.into_iter().map(|e| (e.label, e.item))
    }
}
