//! Seeded random instances for the property suites and the self test:
//! rationals, quadratic irrationals, dyadic PL maps via tree pairs, bump
//! generators with prescribed support cells, and projective words.

use num_bigint::BigInt;
use rand::Rng;

use crate::exact::ExactNumber;
use crate::homeo::{GeneratingSet, Homeo};
use crate::plmap::PlMap;
use crate::ppmap::{pp_a, pp_b, pp_c, PpMap};
use crate::rational::{rat, Rational};
use crate::treepair::{BinaryTree, TreePair};
use crate::word::Word;

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let d = rng.gen_range(1..=12i64);
    let n = rng.gen_range(-24..=24i64);
    rat(n, d)
}

pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

const SQUAREFREE: [i64; 8] = [2, 3, 5, 6, 7, 10, 11, 13];

pub fn random_quad<R: Rng>(rng: &mut R) -> ExactNumber {
    let d = SQUAREFREE[rng.gen_range(0..SQUAREFREE.len())];
    ExactNumber::quad(
        random_rational(rng),
        random_nonzero_rational(rng),
        BigInt::from(d),
    )
}

/// Either a rational or a quadratic irrational.
pub fn random_exact<R: Rng>(rng: &mut R) -> ExactNumber {
    if rng.gen_bool(0.5) {
        ExactNumber::Rat(random_rational(rng))
    } else {
        random_quad(rng)
    }
}

/// A dyadic in the open interval `(lo, hi)`.
pub fn random_dyadic_between<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    loop {
        let k = rng.gen_range(3..=7u32);
        let denom = 1i64 << k;
        let m = rng.gen_range(1..denom);
        let t = rat(m, denom);
        let v = lo + (hi - lo) * t;
        if v > *lo && v < *hi {
            return v;
        }
    }
}

pub fn random_tree<R: Rng>(rng: &mut R, leaves: usize) -> BinaryTree {
    if leaves <= 1 {
        return BinaryTree::Leaf;
    }
    let left = rng.gen_range(1..leaves);
    BinaryTree::caret(random_tree(rng, left), random_tree(rng, leaves - left))
}

/// A reduced tree pair with at most `max_leaves` leaves.
pub fn random_reduced_pair<R: Rng>(rng: &mut R, max_leaves: usize) -> TreePair {
    let leaves = rng.gen_range(1..=max_leaves.max(1));
    let d = random_tree(rng, leaves);
    let r = random_tree(rng, leaves);
    TreePair::new(d, r).expect("equal leaf counts").reduce()
}

/// A random dyadic PL map, built from a tree pair.
pub fn random_f_map<R: Rng>(rng: &mut R, max_leaves: usize) -> PlMap {
    random_reduced_pair(rng, max_leaves).to_plmap()
}

/// A general rational PL map with up to `max_interior` interior breakpoints.
pub fn random_plmap<R: Rng>(rng: &mut R, max_interior: usize) -> PlMap {
    let k = rng.gen_range(0..=max_interior);
    let mut xs: Vec<Rational> = Vec::new();
    let mut ys: Vec<Rational> = Vec::new();
    while xs.len() < k {
        let d = rng.gen_range(2..=16i64);
        let n = rng.gen_range(1..d);
        let v = rat(n, d);
        if !xs.contains(&v) {
            xs.push(v);
        }
    }
    while ys.len() < k {
        let d = rng.gen_range(2..=16i64);
        let n = rng.gen_range(1..d);
        let v = rat(n, d);
        if !ys.contains(&v) {
            ys.push(v);
        }
    }
    xs.sort();
    ys.sort();
    let mut pts = vec![(rat(0, 1), rat(0, 1))];
    pts.extend(xs.into_iter().zip(ys));
    pts.push((rat(1, 1), rat(1, 1)));
    PlMap::new(pts).expect("sorted distinct coordinates")
}

/// Identity outside `(lo, hi)`, one or two bent pieces inside; the support
/// is exactly `(lo, hi)`.
pub fn random_bump_on<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> PlMap {
    let u = random_dyadic_between(rng, lo, hi);
    let v = loop {
        let v = random_dyadic_between(rng, lo, hi);
        if v != u {
            break v;
        }
    };
    let mut pts = Vec::new();
    if *lo > rat(0, 1) {
        pts.push((rat(0, 1), rat(0, 1)));
    }
    pts.push((lo.clone(), lo.clone()));
    pts.push((u, v));
    pts.push((hi.clone(), hi.clone()));
    if *hi < rat(1, 1) {
        pts.push((rat(1, 1), rat(1, 1)));
    }
    PlMap::new(pts).expect("bump is monotone")
}

/// A generating set whose partition has exactly the prescribed number of
/// support cells (each carrying two bumps), with dyadic boundaries.
/// Adjacent cells may share an endpoint (an isolated common fixed point);
/// occasionally a generator spans every cell as a product of bumps.
pub fn random_pl_subgroup<R: Rng>(
    rng: &mut R,
    support_cells: usize,
) -> (GeneratingSet<PlMap>, Vec<(Rational, Rational)>) {
    assert!(support_cells >= 1);
    let shared: Vec<bool> = (1..support_cells).map(|_| rng.gen_bool(0.4)).collect();
    let point_count = support_cells + 1 + shared.iter().filter(|s| !**s).count();
    let mut bounds: Vec<Rational> = Vec::new();
    while bounds.len() < point_count {
        let d = 1i64 << rng.gen_range(3..=6u32);
        let n = rng.gen_range(0..=d);
        let v = rat(n, d);
        if !bounds.contains(&v) {
            bounds.push(v);
        }
    }
    bounds.sort();
    let mut cells: Vec<(Rational, Rational)> = Vec::new();
    let mut next = 0usize;
    for i in 0..support_cells {
        let lo = if i == 0 || !shared[i - 1] {
            let v = bounds[next].clone();
            next += 1;
            v
        } else {
            cells[i - 1].1.clone()
        };
        let hi = bounds[next].clone();
        next += 1;
        cells.push((lo, hi));
    }

    let mut pairs: Vec<(String, PlMap)> = Vec::new();
    for (i, (lo, hi)) in cells.iter().enumerate() {
        pairs.push((format!("g{}a", i), random_bump_on(rng, lo, hi)));
        pairs.push((format!("g{}b", i), random_bump_on(rng, lo, hi)));
    }
    if support_cells > 1 && rng.gen_bool(0.5) {
        // A generator acting in every cell at once.
        let mut m = PlMap::identity();
        for (lo, hi) in &cells {
            m = m.compose(&random_bump_on(rng, lo, hi));
        }
        pairs.push(("span".to_string(), m));
    }
    (
        GeneratingSet::new(pairs).expect("nonempty, unique names"),
        cells,
    )
}

/// A word of the given letter length over the names.
pub fn random_word<R: Rng>(rng: &mut R, names: &[&str], len: usize) -> Word {
    let letters: Vec<(String, i64)> = (0..len)
        .map(|_| {
            let n = names[rng.gen_range(0..names.len())].to_string();
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (n, sign)
        })
        .collect();
    Word::from_letters(&letters)
}

/// The three projective constants, by name.
pub fn pp_alphabet() -> Vec<(String, PpMap)> {
    vec![
        ("pp_a".to_string(), pp_a()),
        ("pp_b".to_string(), pp_b()),
        ("pp_c".to_string(), pp_c()),
    ]
}

/// Projective maps fixing 0: `b`, `c`, and their conjugates by the unit
/// translation.
pub fn pp_fixing_zero_alphabet() -> Vec<(String, PpMap)> {
    vec![
        ("b".to_string(), pp_b()),
        ("c".to_string(), pp_c()),
        ("ba".to_string(), pp_b().conjugate_by(&pp_a())),
        ("ca".to_string(), pp_c().conjugate_by(&pp_a())),
    ]
}

/// Evaluates a random word over the projective constants.
pub fn random_pp_word_map<R: Rng>(rng: &mut R, len: usize) -> (Word, PpMap) {
    let names = pp_alphabet();
    let w = random_word(rng, &["pp_a", "pp_b", "pp_c"], len);
    let resolve = |n: &str| {
        names
            .iter()
            .find(|(name, _)| name == n)
            .map(|(_, e)| e.clone())
    };
    let m = w.evaluate(&resolve).expect("alphabet is bound");
    (w, m)
}

/// The hyperbolic bump fixing the golden conjugates: `(2t+1)/(t+1)` between
/// the roots of `t^2 - t - 1`, identity outside. Its breakpoints are
/// quadratic irrationals.
pub fn golden_bump() -> PpMap {
    use crate::mobius::Mobius;
    let m = Mobius::new(2.into(), 1.into(), 1.into(), 1.into()).unwrap();
    let (a, b, c) = m.fixed_point_quadratic();
    let roots = crate::exact::quad_roots(&a, &b, &c).unwrap();
    PpMap::new(
        vec![roots[0].clone(), roots[1].clone()],
        vec![Mobius::identity(), m, Mobius::identity()],
    )
    .expect("continuous at its fixed points")
}

/// A two-piece bump supported on (0,1): `2t/(2-t)` on [0,1/2], `1/(2-t)`
/// on [1/2,1], identity outside. Unlike any single fractional-linear bump
/// on (0,1), it does not commute with `pp_c`.
pub fn pp_w() -> PpMap {
    use crate::mobius::Mobius;
    let m1 = Mobius::new(2.into(), 0.into(), (-1).into(), 2.into()).unwrap();
    let m2 = Mobius::new(0.into(), 1.into(), (-1).into(), 2.into()).unwrap();
    PpMap::new(
        vec![
            ExactNumber::zero(),
            ExactNumber::Rat(rat(1, 2)),
            ExactNumber::one(),
        ],
        vec![Mobius::identity(), m1, m2, Mobius::identity()],
    )
    .expect("continuous bump")
}

/// Compactly supported projective generating sets: noncommuting bumps on
/// unit-translated cells `(i, i+1)`, sometimes joined by the golden bump.
pub fn random_pp_subgroup<R: Rng>(rng: &mut R, cells: usize) -> GeneratingSet<PpMap> {
    let mut pairs: Vec<(String, PpMap)> = Vec::new();
    for i in 0..cells {
        let shift = pp_a().pow(i as i64);
        pairs.push((format!("c{}", i), pp_c().conjugate_by(&shift)));
        pairs.push((format!("w{}", i), pp_w().conjugate_by(&shift)));
        if i == 0 || rng.gen_bool(0.5) {
            pairs.push((
                format!("v{}", i),
                pp_w().conjugate_by(&pp_c()).conjugate_by(&shift),
            ));
        }
    }
    if cells == 1 && rng.gen_bool(0.3) {
        pairs.push(("gold".to_string(), golden_bump()));
    }
    GeneratingSet::new(pairs).expect("nonempty, unique names")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{check_partition, partition};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_f_maps_are_in_f() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let m = random_f_map(&mut rng, 10);
            assert!(m.is_in_f());
        }
    }

    #[test]
    fn bumps_have_exact_support() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..50 {
            let lo = rat(1, 4);
            let hi = rat(3, 4);
            let b = random_bump_on(&mut rng, &lo, &hi);
            let s = b.support();
            assert_eq!(s.components().len(), 1);
            assert_eq!(s.components()[0].lo(), &ExactNumber::Rat(lo.clone()));
            assert_eq!(s.components()[0].hi(), &ExactNumber::Rat(hi.clone()));
        }
    }

    #[test]
    fn subgroups_have_prescribed_support_cells() {
        let mut rng = StdRng::seed_from_u64(9);
        for cells in 1..=4 {
            let (h, _) = random_pl_subgroup(&mut rng, cells);
            let p = partition(&h);
            assert_eq!(p.support_cell_count(), cells);
            assert!(check_partition(&h, &p).is_ok());
        }
    }

    #[test]
    fn projective_subgroups_partition_cleanly() {
        let mut rng = StdRng::seed_from_u64(10);
        for cells in 1..=3 {
            let h = random_pp_subgroup(&mut rng, cells);
            let p = partition(&h);
            assert!(p.support_cell_count() >= 1);
            assert!(check_partition(&h, &p).is_ok());
        }
    }

    #[test]
    fn golden_bump_support_cell_has_quadratic_endpoints() {
        let g = golden_bump();
        let s = g.support();
        assert_eq!(s.components().len(), 1);
        assert!(matches!(s.components()[0].lo(), ExactNumber::Quad(_)));
        assert!(matches!(s.components()[0].hi(), ExactNumber::Quad(_)));
    }
}
