//! Piecewise-projective homeomorphisms of the real line: finitely many
//! fractional-linear pieces over exact breakpoints, glued continuously,
//! strictly increasing, bijective.
//!
//! Matrix entries stay rational under every operation here; irrational
//! numbers (degree two) appear only as fixed-set endpoints and as probe
//! points, never as matrix data.

use std::fmt;

use thiserror::Error;

use crate::exact::{quad_roots, ExactNumber};
use crate::homeo::{Ambient, Homeo, IdentityRadii};
use crate::interval::{Cut, Interval, IntervalSet};
use crate::mobius::{Mobius, MobiusError};
use crate::rational::rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PpError {
    #[error("{0}")]
    Matrix(#[from] MobiusError),
    #[error("piece count must be one more than breakpoint count")]
    PieceCountMismatch,
    #[error("breakpoints must be finite and strictly increasing")]
    BreakpointsNotIncreasing,
    #[error("piece {0} has a pole inside the closure of its interval")]
    PoleInPiece(usize),
    #[error("unbounded piece {0} must be affine")]
    UnboundedPieceNotAffine(usize),
    #[error("pieces disagree at breakpoint {0}")]
    Discontinuous(ExactNumber),
    #[error("point {0} is not finite")]
    InfiniteInput(ExactNumber),
    #[error("point {0} is not fixed")]
    NotFixed(ExactNumber),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PpMap {
    // Invariant: cuts finite, strictly increasing; pieces.len() == cuts.len()+1;
    // adjacent pieces distinct (canonical); pieces agree at the cuts; no pole
    // in any piece's closed span; the two unbounded pieces are affine.
    cuts: Vec<ExactNumber>,
    pieces: Vec<Mobius>,
}

impl PpMap {
    pub fn new(cuts: Vec<ExactNumber>, pieces: Vec<Mobius>) -> Result<Self, PpError> {
        if pieces.len() != cuts.len() + 1 {
            return Err(PpError::PieceCountMismatch);
        }
        for c in &cuts {
            if !c.is_finite() {
                return Err(PpError::BreakpointsNotIncreasing);
            }
        }
        for w in cuts.windows(2) {
            if w[0] >= w[1] {
                return Err(PpError::BreakpointsNotIncreasing);
            }
        }
        let n = pieces.len();
        for (i, piece) in pieces.iter().enumerate() {
            let unbounded = i == 0 || i == n - 1;
            if unbounded && !piece.is_affine() {
                return Err(PpError::UnboundedPieceNotAffine(i));
            }
            if let Some(pole) = piece.pole() {
                let lo = if i == 0 { ExactNumber::NegInf } else { cuts[i - 1].clone() };
                let hi = if i == n - 1 { ExactNumber::PosInf } else { cuts[i].clone() };
                let pole = ExactNumber::Rat(pole);
                if lo <= pole && pole <= hi {
                    return Err(PpError::PoleInPiece(i));
                }
            }
        }
        for (i, c) in cuts.iter().enumerate() {
            let a = pieces[i].apply(c);
            let b = pieces[i + 1].apply(c);
            match (a, b) {
                (Some(u), Some(v)) if u == v => {}
                _ => return Err(PpError::Discontinuous(c.clone())),
            }
        }
        Ok(PpMap { cuts, pieces }.merged())
    }

    fn merged(self) -> PpMap {
        let PpMap { cuts, pieces } = self;
        let mut out_cuts = Vec::with_capacity(cuts.len());
        let mut out_pieces = vec![pieces[0].clone()];
        for (c, piece) in cuts.into_iter().zip(pieces.into_iter().skip(1)) {
            if &piece == out_pieces.last().unwrap() {
                continue;
            }
            out_cuts.push(c);
            out_pieces.push(piece);
        }
        PpMap {
            cuts: out_cuts,
            pieces: out_pieces,
        }
    }

    pub fn breakpoints(&self) -> &[ExactNumber] {
        &self.cuts
    }

    pub fn pieces(&self) -> &[Mobius] {
        &self.pieces
    }

    /// Closed span of piece `i`, unbounded at the ends.
    fn span(&self, i: usize) -> Interval {
        let lo = if i == 0 {
            Cut::after(ExactNumber::NegInf)
        } else {
            Cut::before(self.cuts[i - 1].clone())
        };
        let hi = if i == self.pieces.len() - 1 {
            Cut::before(ExactNumber::PosInf)
        } else {
            Cut::after(self.cuts[i].clone())
        };
        Interval::from_cuts(lo, hi).expect("nonempty span")
    }

    /// Index of the piece governing points at and right of `x`; for finite
    /// `x` equal to a cut either side agrees at `x` itself.
    fn piece_index(&self, x: &ExactNumber) -> usize {
        self.cuts.iter().take_while(|c| *c <= x).count()
    }

    /// Index of the piece governing points immediately left of `x`.
    fn piece_index_left(&self, x: &ExactNumber) -> usize {
        self.cuts.iter().take_while(|c| *c < x).count()
    }

    pub fn evaluate(&self, x: &ExactNumber) -> Result<ExactNumber, PpError> {
        if !x.is_finite() {
            return Err(PpError::InfiniteInput(x.clone()));
        }
        Ok(self.apply(x))
    }

    /// One-sided derivative of the adjacent piece at a finite point.
    pub fn derivative_at(&self, x: &ExactNumber, right: bool) -> Result<ExactNumber, PpError> {
        if !x.is_finite() {
            return Err(PpError::InfiniteInput(x.clone()));
        }
        let i = if right {
            self.piece_index(x)
        } else {
            self.piece_index_left(x)
        };
        Ok(self.pieces[i].derivative(x))
    }

    /// True iff both pieces adjacent to a fixed point are the identity;
    /// errors when `x` is not fixed.
    pub fn identity_near_checked(&self, x: &ExactNumber) -> Result<bool, PpError> {
        if !x.is_finite() {
            return Err(PpError::InfiniteInput(x.clone()));
        }
        if self.apply(x) != *x {
            return Err(PpError::NotFixed(x.clone()));
        }
        Ok(self.identity_radii(x).is_some())
    }
}

impl Homeo for PpMap {
    fn ambient() -> Ambient {
        Ambient::RealLine
    }

    fn identity() -> Self {
        PpMap {
            cuts: vec![],
            pieces: vec![Mobius::identity()],
        }
    }

    fn is_identity(&self) -> bool {
        self.cuts.is_empty() && self.pieces[0].is_identity()
    }

    fn compose(&self, then: &PpMap) -> PpMap {
        let inv = self.inverse();
        let mut cuts: Vec<ExactNumber> = self.cuts.clone();
        for c in &then.cuts {
            cuts.push(inv.apply(c));
        }
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        for i in 0..=cuts.len() {
            let rep = if i == 0 { ExactNumber::NegInf } else { cuts[i - 1].clone() };
            let f_piece = &self.pieces[self.piece_index(&rep)];
            let g_piece = &then.pieces[then.piece_index(&self.apply(&rep))];
            pieces.push(f_piece.then(g_piece));
        }
        PpMap { cuts, pieces }.merged()
    }

    fn inverse(&self) -> PpMap {
        PpMap {
            cuts: self.cuts.iter().map(|c| self.apply(c)).collect(),
            pieces: self.pieces.iter().map(Mobius::inverse).collect(),
        }
        .merged()
    }

    fn apply(&self, x: &ExactNumber) -> ExactNumber {
        match x {
            ExactNumber::NegInf | ExactNumber::PosInf => x.clone(),
            _ => self.pieces[self.piece_index(x)]
                .apply(x)
                .expect("no pole in a valid piece"),
        }
    }

    fn fix_set(&self) -> IntervalSet {
        let mut parts = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            let span = self.span(i);
            if piece.is_identity() {
                parts.push(span.closure());
                continue;
            }
            let (a, b, c) = piece.fixed_point_quadratic();
            for root in quad_roots(&a, &b, &c).expect("non-identity piece") {
                if span.contains(&root) {
                    parts.push(Interval::point(root));
                }
            }
        }
        IntervalSet::from_intervals(parts)
    }

    fn identity_radii(&self, x: &ExactNumber) -> Option<IdentityRadii> {
        if !x.is_finite() || self.apply(x) != *x {
            return None;
        }
        let right_piece = self.piece_index(x);
        let left_piece = self.piece_index_left(x);
        if !self.pieces[right_piece].is_identity() || !self.pieces[left_piece].is_identity() {
            return None;
        }
        let right_end = self.span(right_piece).hi().clone();
        let left_end = self.span(left_piece).lo().clone();
        let right = match right_end {
            ExactNumber::PosInf => ExactNumber::PosInf,
            end => end.try_sub(x).expect("finite radius"),
        };
        let left = match left_end {
            ExactNumber::NegInf => ExactNumber::PosInf,
            end => x.try_sub(&end).expect("finite radius"),
        };
        Some(IdentityRadii {
            left: Some(left),
            right: Some(right),
        })
    }
}

impl fmt::Display for PpMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PP[")?;
        for (i, piece) in self.pieces.iter().enumerate() {
            let lo = if i == 0 {
                ExactNumber::NegInf
            } else {
                self.cuts[i - 1].clone()
            };
            let hi = if i == self.pieces.len() - 1 {
                ExactNumber::PosInf
            } else {
                self.cuts[i].clone()
            };
            write!(f, " ({},{} : {})", lo, hi, piece)?;
        }
        write!(f, " ]")
    }
}

fn m(p: i64, q: i64, r: i64, s: i64) -> Mobius {
    Mobius::new(p.into(), q.into(), r.into(), s.into()).expect("constant matrix")
}

/// Translation `t + 1`.
pub fn pp_a() -> PpMap {
    PpMap::new(vec![], vec![m(1, 1, 0, 1)]).expect("constant map")
}

/// Identity for `t <= 0`, `t/(1-t)` on [0,1/2], `3 - 1/t` on [1/2,1],
/// `t + 1` for `t >= 1`.
pub fn pp_b() -> PpMap {
    PpMap::new(
        vec![
            ExactNumber::zero(),
            ExactNumber::Rat(rat(1, 2)),
            ExactNumber::one(),
        ],
        vec![m(1, 0, 0, 1), m(1, 0, -1, 1), m(3, -1, 1, 0), m(1, 1, 0, 1)],
    )
    .expect("constant map")
}

/// `2t/(t+1)` on [0,1], identity elsewhere.
pub fn pp_c() -> PpMap {
    PpMap::new(
        vec![ExactNumber::zero(), ExactNumber::one()],
        vec![m(1, 0, 0, 1), m(2, 0, 1, 1), m(1, 0, 0, 1)],
    )
    .expect("constant map")
}
