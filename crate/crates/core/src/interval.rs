//! Finite unions of intervals with exact endpoints and open/closed flags.
//!
//! Bounds are stored as *cuts*: positions immediately before or after a
//! value. A closed lower bound at `v` is `Before(v)`, an open one `After(v)`;
//! upper bounds mirror that. Cuts are totally ordered, which reduces union,
//! intersection, and complement to plain sweeps with no flag case analysis.

use std::cmp::Ordering;
use std::fmt;

use crate::exact::ExactNumber;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Before,
    After,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    pub at: ExactNumber,
    pub side: Side,
}

impl Cut {
    pub fn before(at: ExactNumber) -> Self {
        Cut { at, side: Side::Before }
    }

    pub fn after(at: ExactNumber) -> Self {
        Cut { at, side: Side::After }
    }
}

impl Ord for Cut {
    fn cmp(&self, other: &Self) -> Ordering {
        self.at.cmp(&other.at).then(self.side.cmp(&other.side))
    }
}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A nonempty interval: all points strictly between two cuts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Cut,
    hi: Cut,
}

impl Interval {
    /// Builds from cuts; infinite endpoints are normalized to open. Returns
    /// `None` when the interval would be empty.
    pub fn from_cuts(mut lo: Cut, mut hi: Cut) -> Option<Self> {
        if lo.at == ExactNumber::NegInf {
            lo = Cut::after(ExactNumber::NegInf);
        }
        if hi.at == ExactNumber::PosInf {
            hi = Cut::before(ExactNumber::PosInf);
        }
        if lo < hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn closed(a: ExactNumber, b: ExactNumber) -> Option<Self> {
        Self::from_cuts(Cut::before(a), Cut::after(b))
    }

    pub fn open(a: ExactNumber, b: ExactNumber) -> Option<Self> {
        Self::from_cuts(Cut::after(a), Cut::before(b))
    }

    pub fn point(a: ExactNumber) -> Self {
        Interval {
            lo: Cut::before(a.clone()),
            hi: Cut::after(a),
        }
    }

    pub fn whole_line() -> Self {
        Interval {
            lo: Cut::after(ExactNumber::NegInf),
            hi: Cut::before(ExactNumber::PosInf),
        }
    }

    pub fn unit() -> Self {
        Interval::closed(ExactNumber::zero(), ExactNumber::one()).unwrap()
    }

    pub fn lo_cut(&self) -> &Cut {
        &self.lo
    }

    pub fn hi_cut(&self) -> &Cut {
        &self.hi
    }

    pub fn lo(&self) -> &ExactNumber {
        &self.lo.at
    }

    pub fn hi(&self) -> &ExactNumber {
        &self.hi.at
    }

    pub fn lo_closed(&self) -> bool {
        self.lo.side == Side::Before && self.lo.at.is_finite()
    }

    pub fn hi_closed(&self) -> bool {
        self.hi.side == Side::After && self.hi.at.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo.at == self.hi.at
    }

    pub fn contains(&self, x: &ExactNumber) -> bool {
        debug_assert!(x.is_finite());
        self.lo <= Cut::before(x.clone()) && Cut::after(x.clone()) <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo < hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Open interior; `None` for points.
    pub fn interior(&self) -> Option<Interval> {
        let lo = Cut::after(self.lo.at.clone());
        let hi = Cut::before(self.hi.at.clone());
        if lo < hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn closure(&self) -> Interval {
        Interval::from_cuts(
            Cut::before(self.lo.at.clone()),
            Cut::after(self.hi.at.clone()),
        )
        .expect("closure of a nonempty interval")
    }

    /// Image under a strictly increasing map of the line; `f` must fix the
    /// infinities it is handed.
    pub fn image_under(&self, f: &impl Fn(&ExactNumber) -> ExactNumber) -> Interval {
        Interval::from_cuts(
            Cut {
                at: f(&self.lo.at),
                side: self.lo.side,
            },
            Cut {
                at: f(&self.hi.at),
                side: self.hi.side,
            },
        )
        .expect("strictly increasing image of a nonempty interval")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo.at);
        }
        let open = if self.lo_closed() { "[" } else { "(" };
        let close = if self.hi_closed() { "]" } else { ")" };
        write!(f, "{}{},{}{}", open, self.lo.at, self.hi.at, close)
    }
}

/// Canonical finite union of disjoint, non-mergeable intervals, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    items: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { items: vec![] }
    }

    pub fn from_interval(iv: Interval) -> Self {
        IntervalSet { items: vec![iv] }
    }

    /// Sorts and merges overlapping or touching intervals.
    pub fn from_intervals(mut ivs: Vec<Interval>) -> Self {
        ivs.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut items: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match items.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => items.push(iv),
            }
        }
        IntervalSet { items }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.items.iter()
    }

    pub fn components(&self) -> &[Interval] {
        &self.items
    }

    pub fn leftmost(&self) -> Option<&Interval> {
        self.items.first()
    }

    pub fn contains_point(&self, x: &ExactNumber) -> bool {
        self.items.iter().any(|iv| iv.contains(x))
    }

    pub fn contains_interval(&self, iv: &Interval) -> bool {
        self.items.iter().any(|mine| mine.contains_interval(iv))
    }

    pub fn contains_set(&self, other: &IntervalSet) -> bool {
        other.items.iter().all(|iv| self.contains_interval(iv))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.items.clone();
        all.extend(other.items.iter().cloned());
        IntervalSet::from_intervals(all)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.items {
            for b in &other.items {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn intersect_interval(&self, iv: &Interval) -> IntervalSet {
        self.intersect(&IntervalSet::from_interval(iv.clone()))
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Complement within an ambient interval.
    pub fn complement_in(&self, ambient: &Interval) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = ambient.lo.clone();
        for iv in &self.items {
            // A lower cut of a member is the matching upper cut of the gap
            // before it, and vice versa.
            if cursor < iv.lo {
                out.push(Interval {
                    lo: cursor.clone(),
                    hi: iv.lo.clone().min(ambient.hi.clone()),
                });
            }
            if iv.hi > cursor {
                cursor = iv.hi.clone();
            }
        }
        if cursor < ambient.hi {
            out.push(Interval {
                lo: cursor,
                hi: ambient.hi.clone(),
            });
        }
        IntervalSet::from_intervals(out)
    }

    /// Greatest lower bound of the set (may be `-inf`).
    pub fn inf(&self) -> Option<ExactNumber> {
        self.items.first().map(|iv| iv.lo.at.clone())
    }

    /// Least upper bound of the set (may be `inf`).
    pub fn sup(&self) -> Option<ExactNumber> {
        self.items.last().map(|iv| iv.hi.at.clone())
    }

    /// Smallest single interval containing the set.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.items.first()?;
        let last = self.items.last()?;
        Some(Interval {
            lo: first.lo.clone(),
            hi: last.hi.clone(),
        })
    }

    /// Image under a strictly increasing map of the line.
    pub fn image_under(&self, f: &impl Fn(&ExactNumber) -> ExactNumber) -> IntervalSet {
        IntervalSet {
            items: self.items.iter().map(|iv| iv.image_under(f)).collect(),
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, iv) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{}", iv)?;
        }
        Ok(())
    }
}
