//! The group-element interface shared by the linear and projective ambients.
//!
//! Analysis, displacement search, tower construction, and report
//! verification are written once against this trait.

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::exact::ExactNumber;
use crate::interval::{Interval, IntervalSet};

/// Which line the group acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    UnitInterval,
    RealLine,
}

impl Ambient {
    pub fn domain(&self) -> Interval {
        match self {
            Ambient::UnitInterval => Interval::unit(),
            Ambient::RealLine => Interval::whole_line(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Ambient::UnitInterval => "unit-interval",
            Ambient::RealLine => "real-line",
        }
    }

    pub fn from_name(s: &str) -> Option<Ambient> {
        match s {
            "unit-interval" => Some(Ambient::UnitInterval),
            "real-line" => Some(Ambient::RealLine),
            _ => None,
        }
    }
}

/// One-sided radii of the neighborhood on which a map is the identity around
/// a fixed point. `None` marks a side outside the domain; a radius may be
/// `inf` on the real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityRadii {
    pub left: Option<ExactNumber>,
    pub right: Option<ExactNumber>,
}

/// An orientation-preserving homeomorphism with exact group operations,
/// fixed sets, and germ data. Structural equality must coincide with
/// equality as maps.
pub trait Homeo: Clone + Eq + Hash + fmt::Display + Sized {
    fn ambient() -> Ambient;

    fn identity() -> Self;

    fn is_identity(&self) -> bool;

    /// Right-action composition: `x . f.compose(g) = (x . f) . g`.
    fn compose(&self, then: &Self) -> Self;

    fn inverse(&self) -> Self;

    /// Image of a point of the ambient domain. On the real line the
    /// infinities map to themselves.
    fn apply(&self, x: &ExactNumber) -> ExactNumber;

    /// Closed set of fixed points within the ambient domain.
    fn fix_set(&self) -> IntervalSet;

    /// Exact identity-neighborhood radii at `x`, or `None` if `x` is moved
    /// or the map is not the identity on a neighborhood of it.
    fn identity_radii(&self, x: &ExactNumber) -> Option<IdentityRadii>;

    /// Open set of moved points.
    fn support(&self) -> IntervalSet {
        self.fix_set().complement_in(&Self::ambient().domain())
    }

    fn identity_near(&self, x: &ExactNumber) -> bool {
        self.identity_radii(x).is_some()
    }

    /// `k^-1 . self . k`; its support is the image of `self`'s under `k`.
    fn conjugate_by(&self, k: &Self) -> Self {
        k.inverse().compose(self).compose(k)
    }

    /// `self^-1 g^-1 self g` in right-action order.
    fn commutator(&self, g: &Self) -> Self {
        self.inverse()
            .compose(&g.inverse())
            .compose(self)
            .compose(g)
    }

    fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generating set must be nonempty")]
    Empty,
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
}

/// A finitely generated subgroup presented by named generators.
#[derive(Debug, Clone)]
pub struct GeneratingSet<E> {
    names: Vec<String>,
    elems: Vec<E>,
}

impl<E: Homeo> GeneratingSet<E> {
    pub fn new(pairs: Vec<(String, E)>) -> Result<Self, GroupError> {
        if pairs.is_empty() {
            return Err(GroupError::Empty);
        }
        let mut names = Vec::with_capacity(pairs.len());
        let mut elems = Vec::with_capacity(pairs.len());
        for (n, e) in pairs {
            if names.contains(&n) {
                return Err(GroupError::DuplicateName(n));
            }
            names.push(n);
            elems.push(e);
        }
        Ok(GeneratingSet { names, elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Always false: construction rejects empty sets.
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> &[E] {
        &self.elems
    }

    pub fn get(&self, name: &str) -> Option<&E> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.elems[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &E)> {
        self.names.iter().map(|s| s.as_str()).zip(self.elems.iter())
    }
}
