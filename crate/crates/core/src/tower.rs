//! Displacement search and the commutator tower.
//!
//! Given a finitely generated subgroup, the tower starts from the derived
//! generating set (depth 1 on the unit interval, depth 2 on the real line),
//! repeatedly displaces the leftmost occupied support cell off itself, and
//! replaces the level by the conjugated pairwise commutators. Each level
//! works strictly further right, so the construction stops within the number
//! of support cells, ending in a level whose conjugated commutators are all
//! trivial. Every step carries an exact, independently recheckable
//! certificate.

use std::collections::HashSet;
use std::collections::VecDeque;

use thiserror::Error;

use crate::analysis::{derived_generators, partition, Partition};
use crate::exact::ExactNumber;
use crate::homeo::{Ambient, GeneratingSet, Homeo};
use crate::interval::{Interval, IntervalSet};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GermDepth {
    One,
    Two,
    Auto,
}

impl GermDepth {
    /// Depth 1 suffices on the unit interval; projective germs need depth 2.
    pub fn resolve(&self, ambient: Ambient) -> u8 {
        match self {
            GermDepth::One => 1,
            GermDepth::Two => 2,
            GermDepth::Auto => match ambient {
                Ambient::UnitInterval => 1,
                Ambient::RealLine => 2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
    Bfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftFirst,
    RightFirst,
}

#[derive(Debug, Clone)]
pub struct TowerConfig {
    pub germ_depth: GermDepth,
    pub strategy: Strategy,
    pub direction: Direction,
    /// Greedy: maximum single-generator steps. BFS: maximum word length.
    pub max_steps: usize,
    /// Dedup cap on the generator count per level.
    pub max_gens: usize,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            germ_depth: GermDepth::Auto,
            strategy: Strategy::Greedy,
            direction: Direction::LeftFirst,
            max_steps: 256,
            max_gens: 16,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DisplaceError {
    #[error("target closure must lie in the cell interior: {0}")]
    Precondition(String),
    #[error("displacement search exhausted after {steps} steps")]
    SearchExhausted { steps: usize },
}

/// Exact evidence that `original . k` and `original` are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessCert {
    pub original: IntervalSet,
    pub image: IntervalSet,
    pub moved_left: bool,
    /// sup of the image when moved left, inf when moved right.
    pub image_bound: ExactNumber,
    /// inf of the original when moved left, sup when moved right.
    pub original_bound: ExactNumber,
}

impl DisjointnessCert {
    pub fn holds(&self) -> bool {
        let strict = if self.moved_left {
            self.image_bound < self.original_bound
        } else {
            self.image_bound > self.original_bound
        };
        strict && self.image.is_disjoint(&self.original)
    }
}

#[derive(Debug, Clone)]
pub struct Displacement<E> {
    pub word: Word,
    pub element: E,
    pub cert: DisjointnessCert,
}

/// Finds a word over the generators moving `target` entirely off itself
/// within `cell`. Prefers moving left (right on fallback, per config).
pub fn displace<E: Homeo>(
    gens: &GeneratingSet<E>,
    target: &IntervalSet,
    cell: &Interval,
    cfg: &TowerConfig,
) -> Result<Displacement<E>, DisplaceError> {
    let hull = target
        .hull()
        .ok_or_else(|| DisplaceError::Precondition("target is empty".into()))?;
    let closure = hull.closure();
    if !closure.lo().is_finite() || !closure.hi().is_finite() {
        return Err(DisplaceError::Precondition(format!(
            "target {} is unbounded",
            hull
        )));
    }
    let interior = cell
        .interior()
        .ok_or_else(|| DisplaceError::Precondition("cell has empty interior".into()))?;
    if !interior.contains_interval(&closure) {
        return Err(DisplaceError::Precondition(format!(
            "closure of {} is not inside the interior of {}",
            hull, cell
        )));
    }

    let dirs = match cfg.direction {
        Direction::LeftFirst => [true, false],
        Direction::RightFirst => [false, true],
    };
    let mut last_steps = 0;
    for move_left in dirs {
        let found = match cfg.strategy {
            Strategy::Greedy => greedy_search(gens, &closure, move_left, cfg.max_steps),
            Strategy::Bfs => bfs_search(gens, target, move_left, cfg.max_steps),
        };
        match found {
            Ok((word, element)) => {
                let image = target.image_under(&|x| element.apply(x));
                let cert = make_cert(target, &image, move_left);
                debug_assert!(cert.holds());
                return Ok(Displacement { word, element, cert });
            }
            Err(steps) => last_steps = steps,
        }
    }
    Err(DisplaceError::SearchExhausted { steps: last_steps })
}

fn make_cert(original: &IntervalSet, image: &IntervalSet, moved_left: bool) -> DisjointnessCert {
    let (image_bound, original_bound) = if moved_left {
        (image.sup().unwrap(), original.inf().unwrap())
    } else {
        (image.inf().unwrap(), original.sup().unwrap())
    };
    DisjointnessCert {
        original: original.clone(),
        image: image.clone(),
        moved_left,
        image_bound,
        original_bound,
    }
}

/// Tracks the extreme point of the target and repeatedly applies whichever
/// generator (or inverse) moves it furthest in the wanted direction. Inside
/// a support cell no point is fixed by every generator, so each step makes
/// strict progress.
fn greedy_search<E: Homeo>(
    gens: &GeneratingSet<E>,
    closure: &Interval,
    move_left: bool,
    max_steps: usize,
) -> Result<(Word, E), usize> {
    let inverses: Vec<E> = gens.elements().iter().map(|e| e.inverse()).collect();
    let (mut current, goal) = if move_left {
        (closure.hi().clone(), closure.lo().clone())
    } else {
        (closure.lo().clone(), closure.hi().clone())
    };
    let mut letters: Vec<(String, i64)> = Vec::new();
    let mut element = E::identity();
    for step in 0..max_steps {
        if (move_left && current < goal) || (!move_left && current > goal) {
            return Ok((Word::from_letters(&letters), element));
        }
        let mut best: Option<(usize, i64, ExactNumber)> = None;
        for (i, (g, ginv)) in gens.elements().iter().zip(inverses.iter()).enumerate() {
            for (sign, e) in [(1i64, g), (-1i64, ginv)] {
                let y = e.apply(&current);
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => {
                        if move_left {
                            y < *b
                        } else {
                            y > *b
                        }
                    }
                };
                if better {
                    best = Some((i, sign, y));
                }
            }
        }
        let (i, sign, y) = best.expect("nonempty generating set");
        let progressed = if move_left { y < current } else { y > current };
        if !progressed {
            return Err(step);
        }
        letters.push((gens.names()[i].clone(), sign));
        element = element.compose(if sign > 0 {
            &gens.elements()[i]
        } else {
            &inverses[i]
        });
        current = y;
    }
    Err(max_steps)
}

/// Hard ceiling on distinct group elements a breadth-first displacement
/// search will visit before giving up.
pub const BFS_STATE_CAP: usize = 20_000;

/// Breadth-first search over group elements by word length; returns a
/// shortest displacing word. Used as the independent route against greedy.
fn bfs_search<E: Homeo>(
    gens: &GeneratingSet<E>,
    target: &IntervalSet,
    move_left: bool,
    max_len: usize,
) -> Result<(Word, E), usize> {
    let inverses: Vec<E> = gens.elements().iter().map(|e| e.inverse()).collect();
    let mut seen: HashSet<E> = HashSet::new();
    let mut queue: VecDeque<(E, Vec<(String, i64)>)> = VecDeque::new();
    let start = E::identity();
    seen.insert(start.clone());
    queue.push_back((start, Vec::new()));
    while let Some((element, letters)) = queue.pop_front() {
        if !letters.is_empty() {
            let image = target.image_under(&|x| element.apply(x));
            let disjoint = if move_left {
                image.sup().unwrap() < target.inf().unwrap()
            } else {
                image.inf().unwrap() > target.sup().unwrap()
            };
            if disjoint {
                return Ok((Word::from_letters(&letters), element));
            }
        }
        if letters.len() >= max_len || seen.len() >= BFS_STATE_CAP {
            continue;
        }
        for (i, (g, ginv)) in gens.elements().iter().zip(inverses.iter()).enumerate() {
            for (sign, e) in [(1i64, g), (-1i64, ginv)] {
                let next = element.compose(e);
                if !seen.insert(next.clone()) {
                    continue;
                }
                let mut nl = letters.clone();
                nl.push((gens.names()[i].clone(), sign));
                queue.push_back((next, nl));
            }
        }
    }
    Err(max_len)
}

#[derive(Debug, Clone)]
pub struct TowerStep<E> {
    pub level: usize,
    pub cell_index: usize,
    pub cell: Interval,
    /// The part of the level's support lying in the leftmost occupied cell.
    pub target: IntervalSet,
    pub displacement: Displacement<E>,
    pub next_gens: Vec<(Word, E)>,
    pub capped: bool,
    /// Exact check: every next generator is the identity on cells `0..=cell_index`.
    pub left_cells_identity: bool,
}

/// All conjugated pairwise commutators at the terminal level are trivial.
#[derive(Debug, Clone)]
pub struct TerminalCert {
    pub level: usize,
    /// `(conjugated word, other word)` for every ordered generator pair.
    pub pairs: Vec<(Word, Word)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerOutcome {
    /// The derived generating set is already empty.
    AbelianAtStart,
    Terminated { level: usize },
    /// Partial run: displacement search gave up at this level.
    SearchExhausted { level: usize },
}

#[derive(Debug, Clone)]
pub struct TowerRun<E> {
    pub ambient: Ambient,
    pub germ_depth: u8,
    pub generator_names: Vec<String>,
    pub partition: Partition,
    pub initial_gens: Vec<(Word, E)>,
    pub initial_capped: bool,
    pub steps: Vec<TowerStep<E>>,
    pub terminal: Option<TerminalCert>,
    pub outcome: TowerOutcome,
}

#[derive(Debug, Error)]
pub enum TowerError<E> {
    #[error("displacement search exhausted at level {level}")]
    SearchExhausted {
        level: usize,
        partial: Box<TowerRun<E>>,
    },
    #[error("support in the leftmost occupied cell is unbounded at level {level}; a deeper germ depth is required on the real line")]
    UnboundedTarget { level: usize },
    #[error("tower invariant violated: {0}")]
    Internal(String),
}

pub fn build_tower<E: Homeo>(
    gens: &GeneratingSet<E>,
    cfg: &TowerConfig,
) -> Result<TowerRun<E>, TowerError<E>> {
    let part = partition(gens);
    let depth = cfg.germ_depth.resolve(E::ambient());
    let mut initial = derived_generators(gens, depth);
    let initial_capped = initial.len() > cfg.max_gens;
    initial.truncate(cfg.max_gens);

    let mut run = TowerRun {
        ambient: E::ambient(),
        germ_depth: depth,
        generator_names: gens.names().to_vec(),
        partition: part,
        initial_gens: initial.clone(),
        initial_capped,
        steps: Vec::new(),
        terminal: None,
        outcome: TowerOutcome::AbelianAtStart,
    };
    if initial.is_empty() {
        return Ok(run);
    }

    let support_cells: Vec<(usize, Interval)> = run
        .partition
        .support_cells()
        .map(|(i, c)| (i, c.span.clone()))
        .collect();

    let mut current = initial;
    let mut prev_cell: Option<usize> = None;
    for level in 0..=support_cells.len() {
        let occupied: IntervalSet = current
            .iter()
            .map(|(_, e)| e.support())
            .fold(IntervalSet::empty(), |acc, s| acc.union(&s));
        let (cell_index, cell) = support_cells
            .iter()
            .find(|(_, span)| !occupied.intersect_interval(span).is_empty())
            .cloned()
            .ok_or_else(|| TowerError::Internal("nontrivial level with empty support".into()))?;
        if let Some(p) = prev_cell {
            if cell_index <= p {
                return Err(TowerError::Internal(
                    "leftmost occupied cell did not advance".into(),
                ));
            }
        }
        prev_cell = Some(cell_index);
        let target = occupied.intersect_interval(&cell);
        if !matches!(
            (target.inf(), target.sup()),
            (Some(lo), Some(hi)) if lo.is_finite() && hi.is_finite()
        ) {
            return Err(TowerError::UnboundedTarget { level });
        }

        let displacement = match displace(gens, &target, &cell, cfg) {
            Ok(d) => d,
            Err(DisplaceError::SearchExhausted { .. }) => {
                run.outcome = TowerOutcome::SearchExhausted { level };
                let partial = Box::new(run);
                return Err(TowerError::SearchExhausted { level, partial });
            }
            Err(DisplaceError::Precondition(msg)) => {
                return Err(TowerError::Internal(msg));
            }
        };

        let k = &displacement.element;
        let k_word = &displacement.word;
        let mut next: Vec<(Word, E)> = Vec::new();
        let mut capped = false;
        let mut all_identity = true;
        let mut pairs = Vec::new();
        'outer: for (wa, a) in &current {
            let conj = a.conjugate_by(k);
            let conj_word = Word::conjugated(wa.clone(), k_word);
            for (wb, b) in &current {
                pairs.push((conj_word.clone(), wb.clone()));
                let c = conj.commutator(b);
                if c.is_identity() {
                    continue;
                }
                all_identity = false;
                if next.len() >= cfg.max_gens {
                    // Nothing below can change the outcome: the level is
                    // full and known nonterminal.
                    capped = true;
                    break 'outer;
                }
                if !next.iter().any(|(_, e)| *e == c) {
                    next.push((Word::comm(conj_word.clone(), wb.clone()), c));
                }
            }
        }

        let left_cells_identity = next.iter().all(|(_, e)| {
            let fix = e.fix_set();
            run.partition.cells[..=cell_index]
                .iter()
                .all(|c| fix.contains_interval(&c.span))
        });
        if !left_cells_identity {
            return Err(TowerError::Internal(
                "next level is not the identity left of the displaced cell".into(),
            ));
        }

        let step = TowerStep {
            level,
            cell_index,
            cell,
            target,
            displacement,
            next_gens: next.clone(),
            capped,
            left_cells_identity,
        };
        run.steps.push(step);

        if all_identity {
            run.terminal = Some(TerminalCert { level, pairs });
            run.outcome = TowerOutcome::Terminated { level };
            return Ok(run);
        }
        current = next;
    }
    Err(TowerError::Internal(
        "tower exceeded the support cell count".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::{x0, x1, PlMap};
    use crate::rational::rat;

    fn num(n: i64, d: i64) -> ExactNumber {
        ExactNumber::Rat(rat(n, d))
    }

    fn h_x0_x1() -> GeneratingSet<PlMap> {
        GeneratingSet::new(vec![("x0".to_string(), x0()), ("x1".to_string(), x1())]).unwrap()
    }

    fn open_set(a: ExactNumber, b: ExactNumber) -> IntervalSet {
        IntervalSet::from_interval(Interval::open(a, b).unwrap())
    }

    #[test]
    fn greedy_displacement_with_positive_x0_powers() {
        let h = h_x0_x1();
        let target = open_set(num(1, 4), num(1, 2));
        let d = displace(&h, &target, &Interval::unit(), &TowerConfig::default()).unwrap();
        assert!(d.cert.holds());
        assert!(d.cert.moved_left);
        assert_eq!(d.word.to_string(), "x0^2");
        assert_eq!(d.element, x0().pow(2));
        assert!(d.cert.image_bound < num(1, 4));
    }

    #[test]
    fn displacement_inside_half_cell() {
        let h = GeneratingSet::new(vec![("x1".to_string(), x1())]).unwrap();
        let target = open_set(num(5, 8), num(3, 4));
        let cell = Interval::closed(num(1, 2), num(1, 1)).unwrap();
        let d = displace(&h, &target, &cell, &TowerConfig::default()).unwrap();
        assert!(d.cert.holds());
        assert_eq!(d.word.to_string(), "x1^2");
    }

    #[test]
    fn displacement_precondition_rejected() {
        let h = h_x0_x1();
        let cell = Interval::unit();
        let target = IntervalSet::from_interval(cell.clone());
        assert!(matches!(
            displace(&h, &target, &cell, &TowerConfig::default()),
            Err(DisplaceError::Precondition(_))
        ));
    }

    #[test]
    fn bfs_matches_greedy_feasibility() {
        let h = h_x0_x1();
        let target = open_set(num(1, 4), num(1, 2));
        let cfg_bfs = TowerConfig {
            strategy: Strategy::Bfs,
            max_steps: 8,
            ..TowerConfig::default()
        };
        let d = displace(&h, &target, &Interval::unit(), &cfg_bfs).unwrap();
        assert!(d.cert.holds());
        // BFS found a shortest word; greedy's is x0^2, so BFS is at most 2.
        assert!(d.word.letter_len() <= 2);
    }

    #[test]
    fn canonical_tower_trace() {
        let h = h_x0_x1();
        let run = build_tower(&h, &TowerConfig::default()).unwrap();
        assert_eq!(run.germ_depth, 1);
        assert_eq!(run.partition.points, vec![num(0, 1), num(1, 1)]);
        assert_eq!(run.initial_gens.len(), 1);
        assert_eq!(run.outcome, TowerOutcome::Terminated { level: 0 });
        assert_eq!(run.steps.len(), 1);
        let step = &run.steps[0];
        assert_eq!(step.cell_index, 0);
        assert!(step.next_gens.is_empty());
        assert!(step.left_cells_identity);
        assert!(step.displacement.cert.holds());
        let term = run.terminal.as_ref().unwrap();
        assert_eq!(term.level, 0);
        assert_eq!(term.pairs.len(), 1);
    }

    #[test]
    fn commuting_generators_are_abelian_at_start() {
        let left = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(3, 8)),
            (rat(1, 2), rat(1, 2)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        let right = PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 2), rat(1, 2)),
            (rat(3, 4), rat(7, 8)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        let h = GeneratingSet::new(vec![("f".to_string(), left), ("g".to_string(), right)])
            .unwrap();
        let run = build_tower(&h, &TowerConfig::default()).unwrap();
        assert_eq!(run.outcome, TowerOutcome::AbelianAtStart);
        assert!(run.steps.is_empty());
        assert!(run.terminal.is_none());
    }

    #[test]
    fn projective_tower_on_the_builtin_generators() {
        use crate::ppmap::{pp_b, pp_c, PpMap};
        let h: GeneratingSet<PpMap> = GeneratingSet::new(vec![
            ("b".to_string(), pp_b()),
            ("c".to_string(), pp_c()),
        ])
        .unwrap();
        // Depth 2 (auto on the real line): the second derived set of a
        // two-generator set is empty, so the tower is abelian at start.
        let run = build_tower(&h, &TowerConfig::default()).unwrap();
        assert_eq!(run.germ_depth, 2);
        assert_eq!(run.outcome, TowerOutcome::AbelianAtStart);
    }

    #[test]
    fn projective_tower_with_nontrivial_level() {
        use crate::ppmap::{pp_a, pp_b, pp_c, PpMap};
        let h: GeneratingSet<PpMap> = GeneratingSet::new(vec![
            ("a".to_string(), pp_a()),
            ("b".to_string(), pp_b()),
            ("c".to_string(), pp_c()),
        ])
        .unwrap();
        let run = build_tower(&h, &TowerConfig::default()).unwrap();
        assert_eq!(run.germ_depth, 2);
        match run.outcome {
            TowerOutcome::Terminated { level } => {
                assert!(level < run.partition.support_cell_count());
                for step in &run.steps {
                    assert!(step.displacement.cert.holds());
                    assert!(step.left_cells_identity);
                }
            }
            TowerOutcome::AbelianAtStart => {
                assert!(run.initial_gens.is_empty());
            }
            TowerOutcome::SearchExhausted { .. } => panic!("search should not exhaust"),
        }
    }

    #[test]
    fn capped_levels_stay_honest() {
        use crate::testkit;
        use rand::rngs::StdRng;
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(77);
        let (h, _) = testkit::random_pl_subgroup(&mut rng, 2);
        let cfg = TowerConfig {
            max_gens: 1,
            ..TowerConfig::default()
        };
        let run = build_tower(&h, &cfg).unwrap();
        assert!(run.initial_gens.len() <= 1);
        for step in &run.steps {
            assert!(step.next_gens.len() <= 1);
            assert!(step.left_cells_identity);
            assert!(step.displacement.cert.holds());
        }
        // The capped finite shadow still verifies from its serialized form.
        let report = crate::report::TowerReport::from_run(&run);
        let back = crate::report::TowerReport::from_json(&report.to_json()).unwrap();
        let v = crate::report::verify_report(&h, &back);
        assert!(v.ok(), "{:?}", v.failure);
    }

    #[test]
    fn exhausted_search_yields_partial_report_that_fails_verify() {
        let h = h_x0_x1();
        let cfg = TowerConfig {
            max_steps: 1,
            ..TowerConfig::default()
        };
        match build_tower(&h, &cfg) {
            Err(TowerError::SearchExhausted { level, partial }) => {
                assert_eq!(level, 0);
                assert_eq!(partial.outcome, TowerOutcome::SearchExhausted { level: 0 });
                let report = crate::report::TowerReport::from_run(&partial);
                assert_eq!(report.outcome, crate::report::OUTCOME_EXHAUSTED);
                let v = crate::report::verify_report(&h, &report);
                assert!(!v.ok());
                assert_eq!(v.failure.unwrap().location, "outcome");
            }
            other => panic!("expected exhausted search, got {other:?}"),
        }
    }

    #[test]
    fn forced_depth_one_on_real_line_hits_unbounded_support() {
        use crate::mobius::Mobius;
        use crate::ppmap::{pp_a, PpMap};
        // d doubles; [a,d] is the translation t+1, whose support is all of R.
        let d = PpMap::new(
            vec![],
            vec![Mobius::new(2.into(), 0.into(), 0.into(), 1.into()).unwrap()],
        )
        .unwrap();
        let h: GeneratingSet<PpMap> =
            GeneratingSet::new(vec![("a".to_string(), pp_a()), ("d".to_string(), d)]).unwrap();
        let cfg = TowerConfig {
            germ_depth: GermDepth::One,
            ..TowerConfig::default()
        };
        assert!(matches!(
            build_tower(&h, &cfg),
            Err(TowerError::UnboundedTarget { level: 0 })
        ));
        // Depth 2 empties the derived set instead.
        let run = build_tower(&h, &TowerConfig::default()).unwrap();
        assert_eq!(run.outcome, TowerOutcome::AbelianAtStart);
    }
}
