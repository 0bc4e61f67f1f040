//! Orientation-preserving piecewise-linear homeomorphisms of [0,1] with
//! rational breakpoints, in canonical form.
//!
//! Canonical form keeps no collinear interior breakpoint, so structural
//! equality coincides with equality as maps; every certificate downstream
//! relies on that.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::ExactNumber;
use crate::homeo::{Ambient, Homeo, IdentityRadii};
use crate::interval::{Interval, IntervalSet};
use crate::rational::{dyadic_exponent, is_dyadic, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlError {
    #[error("breakpoint list must start at (0,0) and end at (1,1)")]
    BadEndpoints,
    #[error("x-coordinates must increase strictly")]
    XNotIncreasing,
    #[error("y-coordinates must increase strictly")]
    YNotIncreasing,
    #[error("point {0} is outside [0,1]")]
    OutOfDomain(ExactNumber),
    #[error("no one-sided piece on that side")]
    NoAdjacentPiece,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlMap {
    // Invariant: first (0,0), last (1,1), both coordinates strictly
    // increasing, no collinear interior breakpoint.
    pts: Vec<(Rational, Rational)>,
}

impl PlMap {
    pub fn new(pts: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        if pts.len() < 2 {
            return Err(PlError::BadEndpoints);
        }
        let zero = Rational::zero();
        let one = Rational::one();
        if pts[0] != (zero.clone(), zero) || *pts.last().unwrap() != (one.clone(), one) {
            return Err(PlError::BadEndpoints);
        }
        for w in pts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(PlError::XNotIncreasing);
            }
            if w[0].1 >= w[1].1 {
                return Err(PlError::YNotIncreasing);
            }
        }
        Ok(PlMap {
            pts: drop_collinear(pts),
        })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.pts
    }

    /// Slope of the piece with index `i` (between breakpoints `i` and `i+1`).
    fn slope(&self, i: usize) -> Rational {
        let (x0, y0) = &self.pts[i];
        let (x1, y1) = &self.pts[i + 1];
        (y1 - y0) / (x1 - x0)
    }

    /// Index of the piece whose closed span contains `x`.
    fn piece_containing(&self, x: &ExactNumber) -> usize {
        let mut lo = 0usize;
        let mut hi = self.pts.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if ExactNumber::from(&self.pts[mid].0) <= *x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn evaluate(&self, x: &ExactNumber) -> Result<ExactNumber, PlError> {
        if *x < ExactNumber::zero() || *x > ExactNumber::one() {
            return Err(PlError::OutOfDomain(x.clone()));
        }
        Ok(self.apply(x))
    }

    pub fn evaluate_rat(&self, x: &Rational) -> Result<Rational, PlError> {
        let y = self.evaluate(&ExactNumber::from(x))?;
        Ok(y.as_rational().expect("rational image of a rational").clone())
    }

    pub fn one_sided_slope(&self, x: &ExactNumber, right: bool) -> Result<Rational, PlError> {
        if *x < ExactNumber::zero() || *x > ExactNumber::one() {
            return Err(PlError::OutOfDomain(x.clone()));
        }
        if right {
            if *x >= ExactNumber::one() {
                return Err(PlError::NoAdjacentPiece);
            }
            Ok(self.slope(self.piece_containing(x)))
        } else {
            if *x <= ExactNumber::zero() {
                return Err(PlError::NoAdjacentPiece);
            }
            let i = self.piece_containing(x);
            if ExactNumber::from(&self.pts[i].0) == *x {
                Ok(self.slope(i - 1))
            } else {
                Ok(self.slope(i))
            }
        }
    }

    /// Membership in the subgroup with dyadic breakpoints and slopes 2^n.
    pub fn is_in_f(&self) -> bool {
        self.pts.iter().all(|(x, y)| is_dyadic(x) && is_dyadic(y))
            && (0..self.pts.len() - 1).all(|i| {
                let m = self.slope(i);
                m.is_positive() && matches!(dyadic_exponent(&m), Ok(Some(_)))
            })
    }
}

impl Homeo for PlMap {
    fn ambient() -> Ambient {
        Ambient::UnitInterval
    }

    fn identity() -> Self {
        PlMap {
            pts: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    fn is_identity(&self) -> bool {
        self.pts.len() == 2
    }

    fn compose(&self, then: &PlMap) -> PlMap {
        let inv = self.inverse();
        let mut xs: Vec<Rational> = self.pts.iter().map(|(x, _)| x.clone()).collect();
        for (u, _) in &then.pts {
            xs.push(inv.evaluate_rat(u).expect("breakpoint preimage in [0,1]"));
        }
        xs.sort();
        xs.dedup();
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = then
                    .evaluate_rat(&self.evaluate_rat(&x).unwrap())
                    .expect("chained image in [0,1]");
                (x, y)
            })
            .collect();
        PlMap {
            pts: drop_collinear(pts),
        }
    }

    fn inverse(&self) -> PlMap {
        PlMap {
            pts: self.pts.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    /// Evaluation without the domain check; `x` must lie in [0,1].
    fn apply(&self, x: &ExactNumber) -> ExactNumber {
        let i = self.piece_containing(x);
        let m = self.slope(i);
        let (xi, yi) = &self.pts[i];
        // y = yi + m (x - xi)
        x.affine(&m, &(yi - &m * xi))
    }

    /// Closed set of fixed points; always contains 0 and 1.
    fn fix_set(&self) -> IntervalSet {
        let mut parts = vec![
            Interval::point(ExactNumber::zero()),
            Interval::point(ExactNumber::one()),
        ];
        for i in 0..self.pts.len() - 1 {
            let m = self.slope(i);
            let (xi, yi) = &self.pts[i];
            if m.is_one() {
                if xi == yi {
                    parts.push(
                        Interval::closed(
                            ExactNumber::from(xi),
                            ExactNumber::from(&self.pts[i + 1].0),
                        )
                        .unwrap(),
                    );
                }
            } else {
                // yi + m (x - xi) = x  =>  x = (yi - m xi)/(1 - m)
                let x = (yi - &m * xi) / (Rational::one() - &m);
                if *xi <= x && x <= self.pts[i + 1].0 {
                    parts.push(Interval::point(ExactNumber::Rat(x)));
                }
            }
        }
        IntervalSet::from_intervals(parts)
    }

    /// Exact radii of the identity neighborhood at a fixed point, or `None`
    /// if the map moves `x` or bends at it. Canonical form guarantees an
    /// identity piece is never adjacent to another identity piece.
    fn identity_radii(&self, x: &ExactNumber) -> Option<IdentityRadii> {
        if *x < ExactNumber::zero() || *x > ExactNumber::one() || self.apply(x) != *x {
            return None;
        }
        let right = if *x == ExactNumber::one() {
            None
        } else {
            let i = self.piece_containing(x);
            let (xi, yi) = &self.pts[i];
            if self.slope(i).is_one() && xi == yi {
                Some(
                    ExactNumber::from(&self.pts[i + 1].0)
                        .try_sub(x)
                        .expect("finite radius"),
                )
            } else {
                return None;
            }
        };
        let left = if *x == ExactNumber::zero() {
            None
        } else {
            let i = self.piece_containing(x);
            let j = if ExactNumber::from(&self.pts[i].0) == *x { i - 1 } else { i };
            let (xj, yj) = &self.pts[j];
            if self.slope(j).is_one() && xj == yj {
                Some(x.try_sub(&ExactNumber::from(xj)).expect("finite radius"))
            } else {
                return None;
            }
        };
        Some(IdentityRadii { left, right })
    }
}

/// Removes interior breakpoints where the slope does not change.
fn drop_collinear(pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            // (b - a) x (p - b) = 0  <=>  collinear
            let cross = (&b.0 - &a.0) * (&p.1 - &b.1) - (&b.1 - &a.1) * (&p.0 - &b.0);
            if cross.is_zero() {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PL[")?;
        for (i, (x, y)) in self.pts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", x, y)?;
        }
        write!(f, "]")
    }
}

/// The standard contracting generator: `PL[(0,0),(1/2,1/4),(3/4,1/2),(1,1)]`.
/// It moves interior points left; `x0.evaluate(1/2) = 1/4`.
pub fn x0() -> PlMap {
    use crate::rational::rat;
    PlMap::new(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 2), rat(1, 4)),
        (rat(3, 4), rat(1, 2)),
        (rat(1, 1), rat(1, 1)),
    ])
    .unwrap()
}

/// Identity on [0,1/2] glued to a half-scale copy of `x0` on [1/2,1].
pub fn x1() -> PlMap {
    use crate::rational::rat;
    PlMap::new(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 2), rat(1, 2)),
        (rat(3, 4), rat(5, 8)),
        (rat(7, 8), rat(3, 4)),
        (rat(1, 1), rat(1, 1)),
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn num(n: i64, d: i64) -> ExactNumber {
        ExactNumber::Rat(rat(n, d))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(PlMap::identity().evaluate(&num(1, 3)).unwrap(), num(1, 3));
        assert_eq!(x0().evaluate(&num(1, 2)).unwrap(), num(1, 4));
        assert_eq!(x0().evaluate(&num(5, 8)).unwrap(), num(3, 8));
        assert!(x0().evaluate(&num(3, 2)).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let f = x0();
        assert_eq!(f.compose(&f.inverse()), PlMap::identity());
        assert_eq!(
            f.compose(&f).evaluate(&num(3, 4)).unwrap(),
            num(1, 4),
            "3/4 -> 1/2 -> 1/4"
        );
        assert_eq!(PlMap::identity().compose(&x1()), x1());
        assert_eq!(
            f.inverse().breakpoints(),
            &[
                (rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(1, 2)),
                (rat(1, 2), rat(3, 4)),
                (rat(1, 1), rat(1, 1)),
            ]
        );
        assert_eq!(x1().inverse().inverse(), x1());
    }

    #[test]
    fn collinear_breakpoints_are_dropped() {
        let f = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(1, 4)),
            (rat(1, 2), rat(1, 2)),
            (rat(3, 4), rat(7, 8)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(f.breakpoints().len(), 4);
        assert_eq!(f.breakpoints()[1], (rat(1, 2), rat(1, 2)));
    }

    #[test]
    fn fix_set_and_support() {
        assert_eq!(
            PlMap::identity().fix_set().components(),
            &[Interval::unit()]
        );
        let fx1 = x1().fix_set();
        assert_eq!(
            fx1.components(),
            &[
                Interval::closed(num(0, 1), num(1, 2)).unwrap(),
                Interval::point(num(1, 1)),
            ]
        );
        assert_eq!(
            x1().support().components(),
            &[Interval::open(num(1, 2), num(1, 1)).unwrap()]
        );
        // Slope-1 piece through the origin, then pieces that move points.
        let f = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(1, 4)),
            (rat(1, 2), rat(3, 8)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(
            f.fix_set().components(),
            &[
                Interval::closed(num(0, 1), num(1, 4)).unwrap(),
                Interval::point(num(1, 1)),
            ]
        );
    }

    #[test]
    fn interior_isolated_fixed_point() {
        let g = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(3, 8)),
            (rat(3, 4), rat(5, 8)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        // Middle piece has slope 1/2 through (1/4,3/8): fixes x = 1/2.
        assert!(g.fix_set().contains_point(&num(1, 2)));
        assert!(!g.fix_set().contains_point(&num(1, 3)));
        assert_eq!(g.support().components().len(), 2);
    }

    #[test]
    fn slopes_and_germs() {
        assert_eq!(x0().one_sided_slope(&num(0, 1), true).unwrap(), rat(1, 2));
        assert_eq!(x0().one_sided_slope(&num(1, 1), false).unwrap(), rat_int(2));
        assert!(x0().one_sided_slope(&num(0, 1), false).is_err());
        let c = x0().commutator(&x1());
        assert!(c.identity_near(&num(0, 1)));
        assert!(c.identity_near(&num(1, 1)));
        let radii = c.identity_radii(&num(0, 1)).unwrap();
        assert_eq!(radii.left, None);
        assert!(radii.right.unwrap() > ExactNumber::zero());
        // x1 is the identity on [0,1/2]: radius at 0 reaches 1/2.
        assert_eq!(
            x1().identity_radii(&num(0, 1)).unwrap().right,
            Some(num(1, 2))
        );
        assert!(!x0().identity_near(&num(1, 2)));
    }

    #[test]
    fn one_sided_slope_of_commutator_at_common_fixed_point() {
        // Germ slopes multiply, so a commutator of maps fixing p has
        // one-sided slope 1 there.
        let f = x0();
        let g = x0().compose(&x0());
        let c = f.commutator(&g);
        assert_eq!(c.one_sided_slope(&num(0, 1), true).unwrap(), rat_int(1));
        assert_eq!(c.one_sided_slope(&num(1, 1), false).unwrap(), rat_int(1));
    }

    #[test]
    fn commutator_trivial_cases() {
        let f = x0();
        assert_eq!(f.commutator(&f), PlMap::identity());
        // Bumps with disjoint supports commute.
        let left = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 8), rat(1, 4)),
            (rat(1, 2), rat(1, 2)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        let right = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 2), rat(1, 2)),
            (rat(5, 8), rat(3, 4)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert!(left.support().is_disjoint(&right.support()));
        assert_eq!(left.commutator(&right), PlMap::identity());
    }

    #[test]
    fn support_transport_under_conjugation() {
        let s = x1().support();
        let k = x0();
        let transported = s.image_under(&|p| k.apply(p));
        assert_eq!(
            transported.components(),
            &[Interval::open(num(1, 4), num(1, 1)).unwrap()]
        );
        assert_eq!(x1().conjugate_by(&k).support(), transported);
    }

    #[test]
    fn quadratic_input_through_rational_piece() {
        use crate::exact::quad_roots;
        let phi_minus = quad_roots(&rat_int(1), &rat_int(-1), &rat_int(-1))
            .unwrap()
            .remove(0); // (1-sqrt5)/2 < 0, so shift it into [0,1]
        let x = phi_minus.try_add(&ExactNumber::one()).unwrap();
        let y = x0().evaluate(&x).unwrap();
        // First piece of x0 halves: y = x/2, still quadratic.
        assert_eq!(y, x.affine(&rat(1, 2), &rat(0, 1)));
    }

    #[test]
    fn f_membership() {
        assert!(x0().is_in_f());
        assert!(x1().is_in_f());
        let non_dyadic = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 3), rat(1, 2)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert!(!non_dyadic.is_in_f());
        let slope3 = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(3, 4)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert!(!slope3.is_in_f());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            PlMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 2))]),
            Err(PlError::BadEndpoints)
        ));
        assert!(matches!(
            PlMap::new(vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 2), rat(1, 4)),
                (rat(1, 4), rat(1, 2)),
                (rat(1, 1), rat(1, 1)),
            ]),
            Err(PlError::XNotIncreasing)
        ));
        assert!(matches!(
            PlMap::new(vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(1, 2)),
                (rat(1, 2), rat(1, 4)),
                (rat(1, 1), rat(1, 1)),
            ]),
            Err(PlError::YNotIncreasing)
        ));
    }
}
