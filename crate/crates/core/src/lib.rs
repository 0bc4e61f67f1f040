//! Exact computation with piecewise-linear homeomorphisms of [0,1] and
//! piecewise-projective homeomorphisms of the real line.
//!
//! The crate provides, over exact arithmetic (arbitrary-precision rationals
//! and real quadratic irrationals):
//!
//! - group operations, fixed sets, supports, and germ data for both kinds of
//!   map, behind the shared [`homeo::Homeo`] trait;
//! - the dyadic subgroup of the unit interval as reduced binary tree pairs;
//! - the fixed/support cell partition of a finitely generated subgroup,
//!   derived generating sets, and germ checks at the partition points;
//! - displacement search (greedy, with breadth-first search as an
//!   independent route) and the commutator tower, which lowers a derived
//!   generating set cell by cell until all conjugated pairwise commutators
//!   are trivial;
//! - a versioned JSON report for tower runs whose every claim can be
//!   re-derived from the generating set and the report's words alone.
//!
//! Everything is immutable and structurally canonical: equality of values is
//! equality of maps, which is what the emitted certificates rely on.

pub mod analysis;
pub mod env;
pub mod exact;
pub mod homeo;
pub mod interval;
pub mod mobius;
pub mod parse;
pub mod plmap;
pub mod ppmap;
pub mod rational;
pub mod report;
pub mod testkit;
pub mod tower;
pub mod treepair;
pub mod word;

pub use analysis::{
    derived_generators, germ_trivial_at_partition, group_fix_set, partition, CellKind, Partition,
};
pub use exact::{quad_roots, rational_between, ExactNumber, NumError, QuadReal};
pub use homeo::{Ambient, GeneratingSet, Homeo, IdentityRadii};
pub use interval::{Interval, IntervalSet};
pub use mobius::Mobius;
pub use plmap::{PlError, PlMap};
pub use ppmap::{PpError, PpMap};
pub use rational::Rational;
pub use report::{verify_report, TowerReport, VerifyResult};
pub use tower::{build_tower, displace, Displacement, TowerConfig, TowerRun};
pub use treepair::{BinaryTree, TreePair};
pub use word::Word;
