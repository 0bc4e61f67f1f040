//! Versioned JSON form of a tower run, and the independent re-checker.
//!
//! Reports carry exact numbers as strings and group elements as words over
//! the generator names, so a report plus the generating set is enough to
//! recompute every certificate from scratch. `verify_report` trusts nothing
//! in the report beyond the words: partitions, supports, disjointness,
//! germs, index monotonicity, and terminal commutators are all re-derived.

use serde::{Deserialize, Serialize};

use crate::analysis::{derived_generators, partition, CellKind};
use crate::homeo::{Ambient, GeneratingSet, Homeo};
use crate::interval::IntervalSet;
use crate::parse::{parse_interval, parse_number, parse_word};
use crate::tower::{TowerOutcome, TowerRun};
use crate::word::Word;

pub const REPORT_VERSION: u32 = 1;

pub const OUTCOME_ABELIAN: &str = "abelian-at-start";
pub const OUTCOME_TERMINATED: &str = "terminated-at-l";
pub const OUTCOME_EXHAUSTED: &str = "search-exhausted";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellDto {
    pub span: String,
    pub kind: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PartitionDto {
    pub points: Vec<String>,
    pub cells: Vec<CellDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertDto {
    pub original: Vec<String>,
    pub image: Vec<String>,
    /// "left" when the image lies strictly left of the original.
    pub direction: String,
    pub image_bound: String,
    pub original_bound: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StepDto {
    pub level: usize,
    pub cell_index: usize,
    pub cell: String,
    pub target: Vec<String>,
    pub displacement_word: String,
    pub certificate: CertDto,
    pub next_generators: Vec<String>,
    pub capped: bool,
    pub left_cells_identity: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairDto {
    pub conjugated: String,
    pub other: String,
    pub identity: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TerminalDto {
    pub level: usize,
    pub pairs: Vec<PairDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TowerReport {
    pub version: u32,
    pub ambient: String,
    pub germ_depth: u8,
    pub generator_names: Vec<String>,
    pub partition: PartitionDto,
    pub initial_generators: Vec<String>,
    pub initial_capped: bool,
    pub steps: Vec<StepDto>,
    pub terminal: Option<TerminalDto>,
    pub terminal_level: Option<usize>,
    pub outcome: String,
}

fn interval_set_strings(s: &IntervalSet) -> Vec<String> {
    s.iter().map(|iv| iv.to_string()).collect()
}

impl TowerReport {
    pub fn from_run<E: Homeo>(run: &TowerRun<E>) -> TowerReport {
        let (outcome, terminal_level) = match run.outcome {
            TowerOutcome::AbelianAtStart => (OUTCOME_ABELIAN.to_string(), None),
            TowerOutcome::Terminated { level } => (OUTCOME_TERMINATED.to_string(), Some(level)),
            TowerOutcome::SearchExhausted { .. } => (OUTCOME_EXHAUSTED.to_string(), None),
        };
        TowerReport {
            version: REPORT_VERSION,
            ambient: run.ambient.name().to_string(),
            germ_depth: run.germ_depth,
            generator_names: run.generator_names.clone(),
            partition: PartitionDto {
                points: run.partition.points.iter().map(|p| p.to_string()).collect(),
                cells: run
                    .partition
                    .cells
                    .iter()
                    .map(|c| CellDto {
                        span: c.span.to_string(),
                        kind: c.kind.name().to_string(),
                    })
                    .collect(),
            },
            initial_generators: run
                .initial_gens
                .iter()
                .map(|(w, _)| w.to_string())
                .collect(),
            initial_capped: run.initial_capped,
            steps: run
                .steps
                .iter()
                .map(|s| StepDto {
                    level: s.level,
                    cell_index: s.cell_index,
                    cell: s.cell.to_string(),
                    target: interval_set_strings(&s.target),
                    displacement_word: s.displacement.word.to_string(),
                    certificate: CertDto {
                        original: interval_set_strings(&s.displacement.cert.original),
                        image: interval_set_strings(&s.displacement.cert.image),
                        direction: if s.displacement.cert.moved_left {
                            "left".to_string()
                        } else {
                            "right".to_string()
                        },
                        image_bound: s.displacement.cert.image_bound.to_string(),
                        original_bound: s.displacement.cert.original_bound.to_string(),
                    },
                    next_generators: s.next_gens.iter().map(|(w, _)| w.to_string()).collect(),
                    capped: s.capped,
                    left_cells_identity: s.left_cells_identity,
                })
                .collect(),
            terminal: run.terminal.as_ref().map(|t| TerminalDto {
                level: t.level,
                pairs: t
                    .pairs
                    .iter()
                    .map(|(a, b)| PairDto {
                        conjugated: a.to_string(),
                        other: b.to_string(),
                        identity: true,
                    })
                    .collect(),
            }),
            terminal_level,
            outcome,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<TowerReport, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Dotted path of the first check that failed, e.g. `steps[1].certificate`.
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyResult {
    pub failure: Option<VerifyFailure>,
}

impl VerifyResult {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    fn pass() -> Self {
        VerifyResult { failure: None }
    }

    fn fail(location: impl Into<String>, message: impl Into<String>) -> Self {
        VerifyResult {
            failure: Some(VerifyFailure {
                location: location.into(),
                message: message.into(),
            }),
        }
    }
}

macro_rules! check {
    ($cond:expr, $loc:expr, $msg:expr) => {
        if !$cond {
            return VerifyResult::fail($loc, $msg);
        }
    };
}

macro_rules! try_parse {
    ($res:expr, $loc:expr) => {
        match $res {
            Ok(v) => v,
            Err(e) => return VerifyResult::fail($loc, e.to_string()),
        }
    };
}

/// Re-derives every claim in the report from the generating set and the
/// report's words alone. Returns the first located failure, if any.
pub fn verify_report<E: Homeo>(gens: &GeneratingSet<E>, report: &TowerReport) -> VerifyResult {
    check!(
        report.version == REPORT_VERSION,
        "version",
        format!("unsupported version {}", report.version)
    );
    check!(
        Ambient::from_name(&report.ambient) == Some(E::ambient()),
        "ambient",
        format!("report ambient `{}` does not match", report.ambient)
    );
    {
        let mut want: Vec<&String> = gens.names().iter().collect();
        let mut got: Vec<&String> = report.generator_names.iter().collect();
        want.sort();
        got.sort();
        check!(want == got, "generator_names", "generator names differ");
    }
    check!(
        report.germ_depth == 1 || report.germ_depth == 2,
        "germ_depth",
        "germ depth must be 1 or 2"
    );

    // Partition.
    let part = partition(gens);
    check!(
        report.partition.points.len() == part.points.len(),
        "partition.points",
        "partition point count differs"
    );
    for (i, s) in report.partition.points.iter().enumerate() {
        let p = try_parse!(parse_number(s), format!("partition.points[{}]", i));
        check!(
            p == part.points[i],
            format!("partition.points[{}]", i),
            format!("expected {}, found {}", part.points[i], p)
        );
    }
    check!(
        report.partition.cells.len() == part.cells.len(),
        "partition.cells",
        "cell count differs"
    );
    for (i, c) in report.partition.cells.iter().enumerate() {
        let span = try_parse!(parse_interval(&c.span), format!("partition.cells[{}]", i));
        check!(
            span == part.cells[i].span,
            format!("partition.cells[{}].span", i),
            "cell span differs"
        );
        check!(
            CellKind::from_name(&c.kind) == Some(part.cells[i].kind),
            format!("partition.cells[{}].kind", i),
            "cell kind differs"
        );
    }

    let resolve = |n: &str| gens.get(n).cloned();
    let mut cache: std::collections::HashMap<Word, E> = std::collections::HashMap::new();

    // Initial generators: words must evaluate to distinct nontrivial
    // elements of the recomputed derived set.
    let derived = derived_generators(gens, report.germ_depth);
    let mut current: Vec<(Word, E)> = Vec::new();
    for (i, s) in report.initial_generators.iter().enumerate() {
        let loc = format!("initial_generators[{}]", i);
        let w = try_parse!(parse_word(s), loc.clone());
        let e = match w.evaluate_memo(&resolve, &mut cache) {
            Ok(e) => e,
            Err(err) => return VerifyResult::fail(loc, err.to_string()),
        };
        check!(!e.is_identity(), loc.clone(), "initial generator is trivial");
        check!(
            derived.iter().any(|(_, d)| *d == e),
            loc.clone(),
            "not a derived generator"
        );
        check!(
            !current.iter().any(|(_, c)| *c == e),
            loc,
            "duplicate initial generator"
        );
        current.push((w, e));
    }
    if !report.initial_capped {
        check!(
            current.len() == derived.len(),
            "initial_generators",
            format!(
                "expected {} derived generators, found {}",
                derived.len(),
                current.len()
            )
        );
    }

    // Germ triviality of the initial level at every partition point.
    for (i, (_, e)) in current.iter().enumerate() {
        for p in &part.points {
            check!(
                e.identity_radii(p).is_some(),
                format!("initial_generators[{}]", i),
                format!("germ at {} is not trivial", p)
            );
        }
    }

    match report.outcome.as_str() {
        OUTCOME_ABELIAN => {
            check!(
                current.is_empty() && report.steps.is_empty() && report.terminal.is_none(),
                "outcome",
                "abelian-at-start requires no generators and no steps"
            );
            return VerifyResult::pass();
        }
        OUTCOME_TERMINATED => {
            check!(
                !report.steps.is_empty() && report.terminal.is_some(),
                "outcome",
                "terminated outcome requires steps and a terminal certificate"
            );
        }
        OUTCOME_EXHAUSTED => {
            return VerifyResult::fail("outcome", "partial report: displacement search exhausted");
        }
        other => {
            return VerifyResult::fail("outcome", format!("unknown outcome `{}`", other));
        }
    }

    let support_cells: Vec<(usize, crate::interval::Interval)> = part
        .support_cells()
        .map(|(i, c)| (i, c.span.clone()))
        .collect();
    let mut prev_cell: Option<usize> = None;

    for (idx, step) in report.steps.iter().enumerate() {
        let loc = |suffix: &str| format!("steps[{}].{}", idx, suffix);
        check!(step.level == idx, loc("level"), "levels must run 0,1,2,...");
        check!(
            !current.is_empty(),
            loc("level"),
            "level has no generators to displace"
        );

        // Leftmost occupied support cell.
        let occupied = current
            .iter()
            .map(|(_, e)| e.support())
            .fold(IntervalSet::empty(), |acc, s| acc.union(&s));
        let recomputed = support_cells
            .iter()
            .find(|(_, span)| !occupied.intersect_interval(span).is_empty());
        let (cell_index, cell_span) = match recomputed {
            Some((i, s)) => (*i, s.clone()),
            None => return VerifyResult::fail(loc("cell_index"), "level support is empty"),
        };
        check!(
            step.cell_index == cell_index,
            loc("cell_index"),
            format!("leftmost occupied cell is {}", cell_index)
        );
        if let Some(p) = prev_cell {
            check!(
                cell_index > p,
                loc("cell_index"),
                "cell indices must strictly increase"
            );
        }
        prev_cell = Some(cell_index);
        let cell = try_parse!(parse_interval(&step.cell), loc("cell"));
        check!(cell == cell_span, loc("cell"), "cell span differs");

        // Target = level support within the cell.
        let target = occupied.intersect_interval(&cell);
        let mut stored_target = Vec::new();
        for (i, s) in step.target.iter().enumerate() {
            stored_target.push(try_parse!(
                parse_interval(s),
                format!("steps[{}].target[{}]", idx, i)
            ));
        }
        check!(
            IntervalSet::from_intervals(stored_target) == target,
            loc("target"),
            "target differs from the level support in the cell"
        );

        // Displacement word and certificate, rechecked from scratch.
        let w = try_parse!(parse_word(&step.displacement_word), loc("displacement_word"));
        let k = match w.evaluate_memo(&resolve, &mut cache) {
            Ok(e) => e,
            Err(err) => return VerifyResult::fail(loc("displacement_word"), err.to_string()),
        };
        let image = target.image_under(&|x| k.apply(x));
        let cert_loc = loc("certificate");
        let moved_left = match step.certificate.direction.as_str() {
            "left" => true,
            "right" => false,
            other => {
                return VerifyResult::fail(cert_loc, format!("unknown direction `{}`", other))
            }
        };
        let mut cert_original = Vec::new();
        for s in &step.certificate.original {
            cert_original.push(try_parse!(parse_interval(s), cert_loc.clone()));
        }
        check!(
            IntervalSet::from_intervals(cert_original) == target,
            cert_loc.clone(),
            "certificate original differs from the target"
        );
        let mut cert_image = Vec::new();
        for s in &step.certificate.image {
            cert_image.push(try_parse!(parse_interval(s), cert_loc.clone()));
        }
        check!(
            IntervalSet::from_intervals(cert_image) == image,
            cert_loc.clone(),
            "certificate image differs from the recomputed image"
        );
        let image_bound = try_parse!(parse_number(&step.certificate.image_bound), cert_loc.clone());
        let original_bound = try_parse!(
            parse_number(&step.certificate.original_bound),
            cert_loc.clone()
        );
        let (want_image_bound, want_original_bound) = if moved_left {
            (image.sup().unwrap(), target.inf().unwrap())
        } else {
            (image.inf().unwrap(), target.sup().unwrap())
        };
        check!(
            image_bound == want_image_bound && original_bound == want_original_bound,
            cert_loc.clone(),
            "certificate bounds differ from the recomputed extremes"
        );
        let strict = if moved_left {
            image_bound < original_bound
        } else {
            image_bound > original_bound
        };
        check!(
            strict && image.is_disjoint(&target),
            cert_loc,
            "displaced image is not disjoint from the target"
        );

        // Next level: stored words must evaluate to the recomputed
        // conjugated pairwise commutators.
        let mut recomputed_next: Vec<E> = Vec::new();
        let mut all_identity = true;
        for (_, a) in &current {
            let conj = a.conjugate_by(&k);
            for (_, b) in &current {
                let c = conj.commutator(b);
                if c.is_identity() {
                    continue;
                }
                all_identity = false;
                if !recomputed_next.contains(&c) {
                    recomputed_next.push(c);
                }
            }
        }
        let mut next: Vec<(Word, E)> = Vec::new();
        for (i, s) in step.next_generators.iter().enumerate() {
            let gloc = format!("steps[{}].next_generators[{}]", idx, i);
            let w = try_parse!(parse_word(s), gloc.clone());
            let e = match w.evaluate_memo(&resolve, &mut cache) {
                Ok(e) => e,
                Err(err) => return VerifyResult::fail(gloc, err.to_string()),
            };
            check!(
                recomputed_next.contains(&e),
                gloc.clone(),
                "not a conjugated pairwise commutator of this level"
            );
            check!(
                !next.iter().any(|(_, c)| *c == e),
                gloc.clone(),
                "duplicate generator"
            );
            // Identity on every cell up to and including the displaced one.
            let fix = e.fix_set();
            check!(
                part.cells[..=cell_index]
                    .iter()
                    .all(|c| fix.contains_interval(&c.span)),
                gloc,
                "generator is not the identity left of the displaced cell"
            );
            next.push((w, e));
        }
        check!(
            step.left_cells_identity,
            loc("left_cells_identity"),
            "left-cells identity flag must be set"
        );
        if !step.capped {
            check!(
                next.len() == recomputed_next.len(),
                loc("next_generators"),
                format!(
                    "expected {} generators, found {}",
                    recomputed_next.len(),
                    next.len()
                )
            );
        }

        let is_last = idx == report.steps.len() - 1;
        if is_last {
            check!(
                all_identity && next.is_empty(),
                loc("next_generators"),
                "terminal step must have only trivial commutators"
            );
            let term = report.terminal.as_ref().unwrap();
            check!(
                term.level == idx && report.terminal_level == Some(idx),
                "terminal.level",
                "terminal level does not match the last step"
            );
            check!(
                term.pairs.len() == current.len() * current.len(),
                "terminal.pairs",
                format!(
                    "expected {} pairs, found {}",
                    current.len() * current.len(),
                    term.pairs.len()
                )
            );
            for (i, pair) in term.pairs.iter().enumerate() {
                let ploc = format!("terminal.pairs[{}]", i);
                check!(pair.identity, ploc.clone(), "pair not flagged identity");
                let wa = try_parse!(parse_word(&pair.conjugated), ploc.clone());
                let wb = try_parse!(parse_word(&pair.other), ploc.clone());
                let ea = match wa.evaluate_memo(&resolve, &mut cache) {
                    Ok(e) => e,
                    Err(err) => return VerifyResult::fail(ploc.clone(), err.to_string()),
                };
                let eb = match wb.evaluate_memo(&resolve, &mut cache) {
                    Ok(e) => e,
                    Err(err) => return VerifyResult::fail(ploc, err.to_string()),
                };
                check!(
                    ea.commutator(&eb).is_identity(),
                    ploc,
                    "terminal commutator is not the identity"
                );
            }
            check!(
                report.terminal_level.unwrap() <= support_cells.len(),
                "terminal_level",
                "terminal level exceeds the support cell count"
            );
        } else {
            check!(
                !next.is_empty(),
                loc("next_generators"),
                "non-terminal step with no surviving generators"
            );
        }
        current = next;
    }

    VerifyResult::pass()
}
