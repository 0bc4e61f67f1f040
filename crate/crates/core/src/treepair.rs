//! Elements of the dyadic PL subgroup as pairs of binary trees.
//!
//! A pair `(D, R)` with equal leaf counts maps the standard dyadic partition
//! of `D` affinely onto that of `R`, leaf by leaf. Reduction removes carets
//! common to both trees; the reduced pair is unique per element.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::plmap::PlMap;
use crate::rational::{rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("trees must have equal leaf counts")]
    LeafCountMismatch,
    #[error("map is not in the dyadic subgroup")]
    NotInF,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    Leaf,
    Node(Box<BinaryTree>, Box<BinaryTree>),
}

impl BinaryTree {
    pub fn caret(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node(Box::new(left), Box::new(right))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            BinaryTree::Leaf => 1,
            BinaryTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Dyadic spans of the leaves, left to right, partitioning [0,1].
    pub fn leaf_spans(&self) -> Vec<(Rational, Rational)> {
        fn walk(t: &BinaryTree, lo: Rational, hi: Rational, out: &mut Vec<(Rational, Rational)>) {
            match t {
                BinaryTree::Leaf => out.push((lo, hi)),
                BinaryTree::Node(l, r) => {
                    let mid = (&lo + &hi) / rat(2, 1);
                    walk(l, lo, mid.clone(), out);
                    walk(r, mid, hi, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        walk(self, Rational::zero(), Rational::one(), &mut out);
        out
    }

    /// Left-leaf indices of carets whose children are both leaves.
    fn caret_positions(&self) -> Vec<usize> {
        fn walk(t: &BinaryTree, next: &mut usize, out: &mut Vec<usize>) {
            match t {
                BinaryTree::Leaf => *next += 1,
                BinaryTree::Node(l, r) => {
                    if matches!(**l, BinaryTree::Leaf) && matches!(**r, BinaryTree::Leaf) {
                        out.push(*next);
                        *next += 2;
                    } else {
                        walk(l, next, out);
                        walk(r, next, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut 0, &mut out);
        out
    }

    /// Collapses the caret whose left leaf has index `i` into a leaf.
    fn contract_at(&self, i: usize) -> BinaryTree {
        fn walk(t: &BinaryTree, next: &mut usize, target: usize) -> BinaryTree {
            match t {
                BinaryTree::Leaf => {
                    *next += 1;
                    BinaryTree::Leaf
                }
                BinaryTree::Node(l, r) => {
                    if matches!(**l, BinaryTree::Leaf)
                        && matches!(**r, BinaryTree::Leaf)
                        && *next == target
                    {
                        *next += 2;
                        return BinaryTree::Leaf;
                    }
                    let nl = walk(l, next, target);
                    let nr = walk(r, next, target);
                    BinaryTree::caret(nl, nr)
                }
            }
        }
        walk(self, &mut 0, i)
    }

    /// Smallest tree refining both inputs.
    pub fn join(&self, other: &BinaryTree) -> BinaryTree {
        match (self, other) {
            (BinaryTree::Leaf, t) | (t, BinaryTree::Leaf) => t.clone(),
            (BinaryTree::Node(a, b), BinaryTree::Node(c, d)) => {
                BinaryTree::caret(a.join(c), b.join(d))
            }
        }
    }

    /// Per-leaf subtrees of `big` below this tree's leaves; `big` must
    /// refine `self`.
    fn grafts_from(&self, big: &BinaryTree, out: &mut Vec<BinaryTree>) {
        match (self, big) {
            (BinaryTree::Leaf, t) => out.push(t.clone()),
            (BinaryTree::Node(a, b), BinaryTree::Node(c, d)) => {
                a.grafts_from(c, out);
                b.grafts_from(d, out);
            }
            _ => panic!("graft target does not refine the source tree"),
        }
    }

    /// Replaces leaf `i` with `grafts[i]`.
    fn replace_leaves(&self, grafts: &[BinaryTree], next: &mut usize) -> BinaryTree {
        match self {
            BinaryTree::Leaf => {
                let t = grafts[*next].clone();
                *next += 1;
                t
            }
            BinaryTree::Node(l, r) => {
                let nl = l.replace_leaves(grafts, next);
                let nr = r.replace_leaves(grafts, next);
                BinaryTree::caret(nl, nr)
            }
        }
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryTree::Leaf => write!(f, "*"),
            BinaryTree::Node(l, r) => write!(f, "({} {})", l, r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    domain: BinaryTree,
    range: BinaryTree,
}

impl TreePair {
    pub fn new(domain: BinaryTree, range: BinaryTree) -> Result<Self, TreeError> {
        if domain.leaf_count() != range.leaf_count() {
            return Err(TreeError::LeafCountMismatch);
        }
        Ok(TreePair { domain, range })
    }

    pub fn identity() -> Self {
        TreePair {
            domain: BinaryTree::Leaf,
            range: BinaryTree::Leaf,
        }
    }

    pub fn domain(&self) -> &BinaryTree {
        &self.domain
    }

    pub fn range(&self) -> &BinaryTree {
        &self.range
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    pub fn is_reduced(&self) -> bool {
        self.common_caret().is_none()
    }

    fn common_caret(&self) -> Option<usize> {
        let d = self.domain.caret_positions();
        let r = self.range.caret_positions();
        d.into_iter().find(|i| r.contains(i))
    }

    /// Removes common carets until none remain; the result is the unique
    /// reduced pair for the same map.
    pub fn reduce(&self) -> TreePair {
        let mut cur = self.clone();
        while let Some(i) = cur.common_caret() {
            cur = TreePair {
                domain: cur.domain.contract_at(i),
                range: cur.range.contract_at(i),
            };
        }
        cur
    }

    /// Expands both trees compatibly so that the range tree becomes `target`
    /// (which must refine the current range tree).
    fn expand_range_to(&self, target: &BinaryTree) -> TreePair {
        let mut grafts = Vec::new();
        self.range.grafts_from(target, &mut grafts);
        TreePair {
            domain: self.domain.replace_leaves(&grafts, &mut 0),
            range: target.clone(),
        }
    }

    fn expand_domain_to(&self, target: &BinaryTree) -> TreePair {
        let mut grafts = Vec::new();
        self.domain.grafts_from(target, &mut grafts);
        TreePair {
            domain: target.clone(),
            range: self.range.replace_leaves(&grafts, &mut 0),
        }
    }

    /// Right-action product via common refinement of the middle trees;
    /// agrees with `PlMap` composition.
    pub fn multiply(&self, then: &TreePair) -> TreePair {
        let middle = self.range.join(&then.domain);
        let lhs = self.expand_range_to(&middle);
        let rhs = then.expand_domain_to(&middle);
        TreePair {
            domain: lhs.domain,
            range: rhs.range,
        }
        .reduce()
    }

    /// The PL map sending the domain partition onto the range partition.
    pub fn to_plmap(&self) -> PlMap {
        let d = self.domain.leaf_spans();
        let r = self.range.leaf_spans();
        let mut pts: Vec<(Rational, Rational)> = d
            .iter()
            .zip(r.iter())
            .map(|((dl, _), (rl, _))| (dl.clone(), rl.clone()))
            .collect();
        pts.push((Rational::one(), Rational::one()));
        PlMap::new(pts).expect("leaf partitions give a monotone map")
    }
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.domain, self.range)
    }
}

/// Reduced tree pair of a dyadic PL map. Subdivides the domain into the
/// coarsest standard intervals on which the map is affine with a standard
/// image; that pair is already reduced.
pub fn from_plmap(f: &PlMap) -> Result<TreePair, TreeError> {
    if !f.is_in_f() {
        return Err(TreeError::NotInF);
    }

    fn is_standard(lo: &Rational, hi: &Rational) -> bool {
        let len = hi - lo;
        match crate::rational::dyadic_exponent(&len) {
            Ok(Some(_)) => (lo / len).is_integer(),
            _ => false,
        }
    }

    fn affine_on(f: &PlMap, lo: &Rational, hi: &Rational) -> bool {
        f.breakpoints()
            .iter()
            .all(|(x, _)| x <= lo || x >= hi)
    }

    fn subdivide(f: &PlMap, lo: Rational, hi: Rational, out: &mut Vec<Rational>) {
        let img_lo = f.evaluate_rat(&lo).unwrap();
        let img_hi = f.evaluate_rat(&hi).unwrap();
        if affine_on(f, &lo, &hi) && is_standard(&img_lo, &img_hi) {
            out.push(lo);
            return;
        }
        let mid = (&lo + &hi) / rat(2, 1);
        subdivide(f, lo, mid.clone(), out);
        subdivide(f, mid, hi, out);
    }

    fn tree_from_points(points: &[Rational], lo: &Rational, hi: &Rational) -> BinaryTree {
        let inner: Vec<&Rational> = points.iter().filter(|p| *p > lo && *p < hi).collect();
        if inner.is_empty() {
            return BinaryTree::Leaf;
        }
        let mid = (lo + hi) / rat(2, 1);
        debug_assert!(inner.iter().any(|p| **p == mid));
        let left: Vec<Rational> = inner.iter().filter(|p| **p < &mid).map(|p| (*p).clone()).collect();
        let right: Vec<Rational> = inner.iter().filter(|p| **p > &mid).map(|p| (*p).clone()).collect();
        BinaryTree::caret(
            tree_from_points(&left, lo, &mid),
            tree_from_points(&right, &mid, hi),
        )
    }

    let mut starts = Vec::new();
    subdivide(f, Rational::zero(), Rational::one(), &mut starts);
    starts.push(Rational::one());
    let images: Vec<Rational> = starts
        .iter()
        .map(|x| f.evaluate_rat(x).unwrap())
        .collect();
    let domain = tree_from_points(&starts, &Rational::zero(), &Rational::one());
    let range = tree_from_points(&images, &Rational::zero(), &Rational::one());
    Ok(TreePair { domain, range })
}

/// Reduced tree pair of the contracting generator `x0`:
/// domain `(* (* *))`, range `((* *) *)`.
pub fn x0_pair() -> TreePair {
    use BinaryTree::Leaf;
    TreePair::new(
        BinaryTree::caret(Leaf, BinaryTree::caret(Leaf, Leaf)),
        BinaryTree::caret(BinaryTree::caret(Leaf, Leaf), Leaf),
    )
    .unwrap()
}
