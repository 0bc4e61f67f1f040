//! Group-level computations for a finitely generated subgroup: common fixed
//! set, the fixed/support cell partition, derived generating sets, and germ
//! triviality at the partition points.

use crate::exact::{rational_between, ExactNumber};
use crate::homeo::{GeneratingSet, Homeo, IdentityRadii};
use crate::interval::{Interval, IntervalSet};
use crate::word::Word;

/// Points fixed by every generator, hence by every word.
pub fn group_fix_set<E: Homeo>(gens: &GeneratingSet<E>) -> IntervalSet {
    let mut fix = IntervalSet::from_interval(E::ambient().domain());
    for e in gens.elements() {
        fix = fix.intersect(&e.fix_set());
    }
    fix
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Fixed,
    Support,
}

impl CellKind {
    pub fn name(&self) -> &'static str {
        match self {
            CellKind::Fixed => "fixed",
            CellKind::Support => "support",
        }
    }

    pub fn from_name(s: &str) -> Option<CellKind> {
        match s {
            "fixed" => Some(CellKind::Fixed),
            "support" => Some(CellKind::Support),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCell {
    /// Closed span of the cell; unbounded cells occur on the real line.
    pub span: Interval,
    pub kind: CellKind,
}

/// The finite partition of the ambient domain into cells that are either
/// pointwise fixed or free of common fixed points in their interior.
/// Isolated common fixed points become partition points between two
/// support cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub points: Vec<ExactNumber>,
    pub cells: Vec<PartitionCell>,
}

impl Partition {
    pub fn support_cells(&self) -> impl Iterator<Item = (usize, &PartitionCell)> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == CellKind::Support)
    }

    pub fn support_cell_count(&self) -> usize {
        self.support_cells().count()
    }
}

pub fn partition<E: Homeo>(gens: &GeneratingSet<E>) -> Partition {
    let domain = E::ambient().domain();
    let fix = group_fix_set(gens);
    let moved = fix.complement_in(&domain);

    let mut points: Vec<ExactNumber> = Vec::new();
    for iv in fix.iter().chain(moved.iter()) {
        for p in [iv.lo(), iv.hi()] {
            if p.is_finite() && !points.contains(p) {
                points.push(p.clone());
            }
        }
    }
    points.sort();

    let mut cells = Vec::new();
    if points.is_empty() {
        let kind = if moved.is_empty() {
            CellKind::Fixed
        } else {
            CellKind::Support
        };
        cells.push(PartitionCell { span: domain, kind });
        return Partition { points, cells };
    }

    let mut spans: Vec<Interval> = Vec::new();
    if domain.lo() == &ExactNumber::NegInf {
        spans.push(Interval::closed(ExactNumber::NegInf, points[0].clone()).unwrap());
    }
    for w in points.windows(2) {
        spans.push(Interval::closed(w[0].clone(), w[1].clone()).unwrap());
    }
    if domain.hi() == &ExactNumber::PosInf {
        spans.push(
            Interval::closed(points.last().unwrap().clone(), ExactNumber::PosInf).unwrap(),
        );
    }

    for span in spans {
        // The open interior lies entirely inside Fix or inside Supp because
        // the points cut at every component boundary.
        let kind = match span.interior() {
            Some(inner) if fix.contains_interval(&inner) => CellKind::Fixed,
            Some(_) => CellKind::Support,
            None => CellKind::Fixed,
        };
        cells.push(PartitionCell { span, kind });
    }
    Partition { points, cells }
}

/// Pairwise commutators of the generators (depth 1), or of the depth-1
/// output (depth 2). Identities are pruned and duplicates removed; each
/// element is paired with the word that produced it.
pub fn derived_generators<E: Homeo>(gens: &GeneratingSet<E>, depth: u8) -> Vec<(Word, E)> {
    assert!(depth == 1 || depth == 2, "depth must be 1 or 2");
    let level1 = pairwise_commutators(
        &gens
            .iter()
            .map(|(n, e)| (Word::gen(n), e.clone()))
            .collect::<Vec<_>>(),
    );
    if depth == 1 {
        level1
    } else {
        pairwise_commutators(&level1)
    }
}

fn pairwise_commutators<E: Homeo>(items: &[(Word, E)]) -> Vec<(Word, E)> {
    let mut out: Vec<(Word, E)> = Vec::new();
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            let c = items[i].1.commutator(&items[j].1);
            if c.is_identity() || out.iter().any(|(_, e)| *e == c) {
                continue;
            }
            out.push((Word::comm(items[i].0.clone(), items[j].0.clone()), c));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct GermWitness {
    pub element: Word,
    pub point: ExactNumber,
    pub radii: IdentityRadii,
}

#[derive(Debug, Clone)]
pub struct GermReport {
    pub depth: u8,
    pub witnesses: Vec<GermWitness>,
    /// `(word, point)` pairs where the germ is not trivial.
    pub failures: Vec<(Word, ExactNumber)>,
}

impl GermReport {
    pub fn trivial(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every derived generator is the identity on a neighborhood of
/// every partition point, returning the exact witness radii.
pub fn germ_trivial_at_partition<E: Homeo>(gens: &GeneratingSet<E>, depth: u8) -> GermReport {
    let part = partition(gens);
    let derived = derived_generators(gens, depth);
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for (w, e) in &derived {
        for p in &part.points {
            match e.identity_radii(p) {
                Some(radii) => witnesses.push(GermWitness {
                    element: w.clone(),
                    point: p.clone(),
                    radii,
                }),
                None => failures.push((w.clone(), p.clone())),
            }
        }
    }
    GermReport {
        depth,
        witnesses,
        failures,
    }
}

/// Rational probe points inside a support cell: one strictly between each
/// pair of consecutive generator breakpoints (and cell ends) within it.
pub fn support_cell_probes<E: Homeo>(
    gens: &GeneratingSet<E>,
    cell: &Interval,
) -> Vec<ExactNumber> {
    let mut marks: Vec<ExactNumber> = vec![cell.lo().clone(), cell.hi().clone()];
    for e in gens.elements() {
        for iv in e.fix_set().iter() {
            for p in [iv.lo(), iv.hi()] {
                if p.is_finite()
                    && cell.contains(p)
                    && !marks.contains(p)
                {
                    marks.push(p.clone());
                }
            }
        }
    }
    marks.sort();
    marks
        .windows(2)
        .filter(|w| w[0] < w[1])
        .map(|w| ExactNumber::Rat(rational_between(&w[0], &w[1])))
        .collect()
}

/// Exact partition soundness check: fixed cells are inside every
/// generator's fixed set; every probe point of a support cell is moved by
/// some generator; cell endpoints are fixed by every generator.
pub fn check_partition<E: Homeo>(gens: &GeneratingSet<E>, part: &Partition) -> Result<(), String> {
    for p in &part.points {
        for (name, e) in gens.iter() {
            if e.apply(p) != *p {
                return Err(format!("partition point {} moved by {}", p, name));
            }
        }
    }
    for (i, cell) in part.cells.iter().enumerate() {
        match cell.kind {
            CellKind::Fixed => {
                for (name, e) in gens.iter() {
                    if !e.fix_set().contains_interval(&cell.span) {
                        return Err(format!("fixed cell {} not fixed by {}", i, name));
                    }
                }
            }
            CellKind::Support => {
                for probe in support_cell_probes(gens, &cell.span) {
                    if gens.elements().iter().all(|e| e.apply(&probe) == probe) {
                        return Err(format!(
                            "support cell {} has unmoved interior point {}",
                            i, probe
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}
