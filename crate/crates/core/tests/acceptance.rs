//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its instance count and elapsed time, and asserting its runtime budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! The workspace profiles optimize test builds, so the budgets hold for
//! `cargo test --workspace` as well.

use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pltower::analysis::{check_partition, partition};
use pltower::exact::{eval_quadratic, quad_roots, ExactNumber};
use pltower::homeo::{GeneratingSet, Homeo};
use pltower::interval::{Interval, IntervalSet};
use pltower::parse::{parse_element, parse_interval, parse_number, parse_word, ElementExpr};
use pltower::plmap::{x0, x1, PlMap};
use pltower::ppmap::{pp_a, pp_b, pp_c, PpMap};
use pltower::rational::{rat, rational_to_f64, Rational};
use pltower::report::{verify_report, TowerReport};
use pltower::testkit;
use pltower::tower::{build_tower, displace, Strategy, TowerConfig, TowerOutcome};

const SEED: u64 = 0x5eed_2026;

// Budgets in seconds, per criterion.
const BUDGET_KERNEL: f64 = 5.0;
const BUDGET_GROUP: f64 = 10.0;
const BUDGET_GERM: f64 = 30.0;
const BUDGET_PARTITION: f64 = 10.0;
const BUDGET_DISPLACE: f64 = 60.0;
const BUDGET_TOWER: f64 = 120.0;
const BUDGET_TREE: f64 = 5.0;
const BUDGET_WIRE: f64 = 5.0;

const FLOAT_ROOT_TOL: f64 = 1e-9;

/// Criteria run one at a time so each elapsed measurement is honest.
fn serial() -> std::sync::MutexGuard<'static, ()> {
    static GATE: Mutex<()> = Mutex::new(());
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn finish(name: &str, detail: String, start: Instant, budget: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("criterion {}: PASS ({}, {:.2}s)", name, detail, elapsed);
    assert!(
        elapsed < budget,
        "criterion {} exceeded its {}s budget: {:.2}s",
        name,
        budget,
        elapsed
    );
}

#[test]
fn criterion_1_exact_kernel_laws() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    let n = 10_000;
    let mut root_checks = 0usize;
    for _ in 0..n {
        // Field laws on rationals, exactly.
        let a = testkit::random_rational(&mut rng);
        let b = testkit::random_rational(&mut rng);
        let c = testkit::random_rational(&mut rng);
        assert_eq!((&a + &b) + &c, &a + (&b + &c));
        assert_eq!((&a * &b) * &c, &a * (&b * &c));
        if !num_traits::Zero::is_zero(&a) {
            assert_eq!(&a * a.recip(), Rational::from(num_bigint::BigInt::from(1)));
        }

        // Same-field quadratic arithmetic: associativity and inverses.
        let q = testkit::random_quad(&mut rng);
        let r = ExactNumber::Rat(testkit::random_rational(&mut rng));
        let lhs = q.try_add(&r).unwrap().try_add(&r).unwrap();
        let rhs = q.try_add(&r.try_add(&r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        if !q.is_zero() {
            assert_eq!(
                q.try_mul(&q.try_invert().unwrap()).unwrap(),
                ExactNumber::one()
            );
        }

        // Total order on random triples, including cross-field values.
        let x = testkit::random_exact(&mut rng);
        let y = testkit::random_exact(&mut rng);
        let z = testkit::random_exact(&mut rng);
        assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        if x <= y && y <= z {
            assert!(x <= z);
        }
        if x >= y && y >= z {
            assert!(x >= z);
        }

        // Roots satisfy their polynomial exactly and match float roots.
        let qa = testkit::random_rational(&mut rng);
        let qb = testkit::random_rational(&mut rng);
        let qc = testkit::random_rational(&mut rng);
        if let Ok(roots) = quad_roots(&qa, &qb, &qc) {
            for root in &roots {
                assert!(eval_quadratic(&qa, &qb, &qc, root).unwrap().is_zero());
            }
            let (fa, fb, fc) = (
                rational_to_f64(&qa),
                rational_to_f64(&qb),
                rational_to_f64(&qc),
            );
            let disc = fb * fb - 4.0 * fa * fc;
            if roots.len() == 2 && disc > 1e-6 {
                let lo = (-fb - disc.sqrt()) / (2.0 * fa);
                let hi = (-fb + disc.sqrt()) / (2.0 * fa);
                let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
                assert!((roots[0].to_f64() - lo).abs() < FLOAT_ROOT_TOL);
                assert!((roots[1].to_f64() - hi).abs() < FLOAT_ROOT_TOL);
                root_checks += 1;
            }
        }
    }
    finish(
        "1 (exact-kernel laws)",
        format!("{} instances, {} float-root cross-checks", n, root_checks),
        start,
        BUDGET_KERNEL,
    );
}

fn random_pl_word_map(rng: &mut StdRng, len: usize) -> PlMap {
    let base = [x0(), x1()];
    let mut out = PlMap::identity();
    for _ in 0..len {
        let pick = &base[rng.gen_range(0..2)];
        if rng.gen_bool(0.5) {
            out = out.compose(pick);
        } else {
            out = out.compose(&pick.inverse());
        }
    }
    out
}

#[test]
fn criterion_2_group_axioms_and_support_transport() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 2);
    let n = 1000;
    let pp_instances = 300;
    for i in 0..n {
        if i < pp_instances {
            let len = rng.gen_range(1..=12);
            let (_, f) = testkit::random_pp_word_map(&mut rng, len);
            let len = rng.gen_range(1..=12);
            let (_, g) = testkit::random_pp_word_map(&mut rng, len);
            assert!(f.compose(&f.inverse()).is_identity());
            assert_eq!(f.compose(&g).inverse(), g.inverse().compose(&f.inverse()));
            assert_eq!(
                f.conjugate_by(&g).support(),
                f.support().image_under(&|x| g.apply(x))
            );
            // Disjoint supports commute: translate one copy clear of the other.
            let c = pp_c();
            let far = pp_c().conjugate_by(&pp_a().pow(3));
            assert!(c.support().is_disjoint(&far.support()));
            assert!(c.commutator(&far).is_identity());
        } else {
            let len = rng.gen_range(1..=12);
            let f = random_pl_word_map(&mut rng, len);
            let len = rng.gen_range(1..=12);
            let g = random_pl_word_map(&mut rng, len);
            let k = testkit::random_f_map(&mut rng, 8);
            assert!(f.compose(&f.inverse()).is_identity());
            assert_eq!(f.compose(&g).inverse(), g.inverse().compose(&f.inverse()));
            assert_eq!(
                f.compose(&g).compose(&k),
                f.compose(&g.compose(&k)),
                "associativity"
            );
            assert_eq!(
                f.conjugate_by(&k).support(),
                f.support().image_under(&|x| k.apply(x))
            );
            let left = testkit::random_bump_on(&mut rng, &rat(1, 16), &rat(3, 8));
            let right = testkit::random_bump_on(&mut rng, &rat(1, 2), &rat(7, 8));
            assert!(left.support().is_disjoint(&right.support()));
            assert!(left.commutator(&right).is_identity());
        }
    }
    finish(
        "2 (group axioms, support transport)",
        format!("{} instances ({} projective)", n, pp_instances),
        start,
        BUDGET_GROUP,
    );
}

#[test]
fn criterion_3_germ_claims() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 3);

    // Unit interval: commutators of random words are the identity on a
    // neighborhood of every partition point.
    let pl_pairs = 500;
    for _ in 0..pl_pairs {
        let cells = rng.gen_range(1..=3);
        let (h, _) = testkit::random_pl_subgroup(&mut rng, cells);
        let p = partition(&h);
        let names: Vec<&str> = h.names().iter().map(|s| s.as_str()).collect();
        let len = rng.gen_range(1..=4);
        let w1 = testkit::random_word(&mut rng, &names, len);
        let len = rng.gen_range(1..=4);
        let w2 = testkit::random_word(&mut rng, &names, len);
        let resolve = |n: &str| h.get(n).cloned();
        let f = w1.evaluate(&resolve).unwrap();
        let g = w2.evaluate(&resolve).unwrap();
        let comm = f.commutator(&g);
        for point in &p.points {
            let radii = comm
                .identity_radii(point)
                .expect("derived element must be trivial near every partition point");
            for r in [&radii.left, &radii.right].into_iter().flatten() {
                assert!(*r > ExactNumber::zero());
            }
        }
    }

    // Real line, depth 2: double commutators of words fixing 0 have trivial
    // germs there.
    let pp_quads = 200;
    let alphabet = testkit::pp_fixing_zero_alphabet();
    let names: Vec<&str> = alphabet.iter().map(|(n, _)| n.as_str()).collect();
    let resolve = |n: &str| {
        alphabet
            .iter()
            .find(|(name, _)| name == n)
            .map(|(_, e)| e.clone())
    };
    for _ in 0..pp_quads {
        let es: Vec<PpMap> = (0..4)
            .map(|_| {
                let len = rng.gen_range(1..=4);
                testkit::random_word(&mut rng, &names, len)
                    .evaluate(&resolve)
                    .unwrap()
            })
            .collect();
        let double = es[0].commutator(&es[1]).commutator(&es[2].commutator(&es[3]));
        assert_eq!(double.apply(&ExactNumber::zero()), ExactNumber::zero());
        assert!(
            double.identity_radii(&ExactNumber::zero()).is_some(),
            "depth-2 germ at 0 must be trivial"
        );
    }

    // Depth-1 counterexample: [c, b] fixes 0 with derivative exactly 1 (a
    // parabolic germ) yet is not the identity on any neighborhood of 0.
    let counter = pp_c().commutator(&pp_b());
    assert!(!counter.is_identity());
    assert_eq!(counter.apply(&ExactNumber::zero()), ExactNumber::zero());
    assert_eq!(
        counter.derivative_at(&ExactNumber::zero(), true).unwrap(),
        ExactNumber::one()
    );
    assert!(counter.identity_radii(&ExactNumber::zero()).is_none());
    // Two parabolic germs at the same point commute, so the distinction
    // really is about depth, not about derivatives.
    let parabolic_pair = pp_b().commutator(&testkit::pp_w());
    assert!(parabolic_pair.identity_radii(&ExactNumber::zero()).is_some());

    finish(
        "3 (germ claims)",
        format!(
            "{} interval pairs, {} projective quadruples, depth-1 counterexample [c,b]",
            pl_pairs, pp_quads
        ),
        start,
        BUDGET_GERM,
    );
}

#[test]
fn criterion_4_partition_dichotomy() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 4);
    let n = 500;
    let pp_instances = 100;
    for i in 0..n {
        if i < pp_instances {
            let cells = rng.gen_range(1..=2);
            let h = testkit::random_pp_subgroup(&mut rng, cells);
            let p = partition(&h);
            check_partition(&h, &p).unwrap();
        } else {
            let cells = rng.gen_range(1..=4);
            let (h, _) = testkit::random_pl_subgroup(&mut rng, cells);
            let p = partition(&h);
            assert_eq!(p.support_cell_count(), cells);
            check_partition(&h, &p).unwrap();
        }
    }
    finish(
        "4 (partition dichotomy)",
        format!("{} generating sets ({} projective)", n, pp_instances),
        start,
        BUDGET_PARTITION,
    );
}

#[test]
fn criterion_5_displacement() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 5);
    let n = 500;
    let mut bfs_checked = 0usize;
    let bfs_cfg = TowerConfig {
        strategy: Strategy::Bfs,
        max_steps: 8,
        ..TowerConfig::default()
    };
    for i in 0..n {
        // Alternate between bump subgroups and the dyadic standard pair.
        let (h, cell_span) = if i % 3 == 0 {
            let h = GeneratingSet::new(vec![
                ("x0".to_string(), x0()),
                ("x1".to_string(), x1()),
            ])
            .unwrap();
            (h, (rat(0, 1), rat(1, 1)))
        } else {
            let cells = rng.gen_range(1..=3);
            let (h, spans) = testkit::random_pl_subgroup(&mut rng, cells);
            let span = spans[rng.gen_range(0..spans.len())].clone();
            (h, span)
        };
        let (lo, hi) = &cell_span;
        let width = hi - lo;
        let a = lo + &width * rat(rng.gen_range(1..=3), 8);
        let b = &a + &width * rat(rng.gen_range(1..=2), 8);
        let target =
            IntervalSet::from_interval(Interval::open(ExactNumber::Rat(a), ExactNumber::Rat(b)).unwrap());
        let cell = Interval::closed(ExactNumber::Rat(lo.clone()), ExactNumber::Rat(hi.clone()))
            .unwrap();
        let d = displace(&h, &target, &cell, &TowerConfig::default())
            .expect("greedy displacement succeeds");
        assert!(d.cert.holds());
        assert!(d.cert.image.is_disjoint(&target));
        // Independent oracle: on two-generator sets the search is complete
        // up to length 8, so it must find a word whenever greedy's is that
        // short, its word is never longer, and its certificate holds.
        if h.len() <= 2 {
            match displace(&h, &target, &cell, &bfs_cfg) {
                Ok(bfs) => {
                    assert!(bfs.cert.holds());
                    assert!(bfs.word.letter_len() <= d.word.letter_len());
                    bfs_checked += 1;
                }
                Err(_) => {
                    assert!(
                        d.word.letter_len() > 8,
                        "oracle missed a word of length {}",
                        d.word.letter_len()
                    );
                }
            }
        }
    }
    assert!(bfs_checked >= 100, "oracle must cover a real sample");
    finish(
        "5 (displacement)",
        format!("{} instances, {} BFS cross-checks", n, bfs_checked),
        start,
        BUDGET_DISPLACE,
    );
}

/// Towers built once and shared between criteria 6 and 8.
struct TowerFixture {
    pl: Vec<(GeneratingSet<PlMap>, TowerReport)>,
    pp: Vec<(GeneratingSet<PpMap>, TowerReport)>,
    build_and_verify_secs: f64,
    terminated: usize,
    abelian: usize,
}

fn tower_fixture() -> &'static TowerFixture {
    static FIXTURE: OnceLock<TowerFixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let start = Instant::now();
        let mut rng = StdRng::seed_from_u64(SEED ^ 6);
        let cfg = TowerConfig {
            max_gens: 12,
            ..TowerConfig::default()
        };
        let mut pl = Vec::new();
        let mut pp = Vec::new();
        let mut terminated = 0;
        let mut abelian = 0;
        let pl_count = 240;
        let pp_count = 60;
        // Cell counts cycle through 1..=6 with extra weight on the low end.
        let cell_pattern = [1usize, 2, 3, 1, 2, 4, 1, 3, 5, 2, 1, 6];
        for i in 0..pl_count {
            let cells = cell_pattern[i % cell_pattern.len()];
            let (h, _) = testkit::random_pl_subgroup(&mut rng, cells);
            let run = build_tower(&h, &cfg).expect("tower construction succeeds");
            audit_run(&run, cells);
            match run.outcome {
                TowerOutcome::Terminated { .. } => terminated += 1,
                TowerOutcome::AbelianAtStart => abelian += 1,
                TowerOutcome::SearchExhausted { .. } => unreachable!(),
            }
            let report = TowerReport::from_run(&run);
            let back = TowerReport::from_json(&report.to_json()).expect("report parses");
            let v = verify_report(&h, &back);
            assert!(v.ok(), "independent recheck failed: {:?}", v.failure);
            pl.push((h, report));
        }
        for i in 0..pp_count {
            let cells = 1 + (i % 2);
            let h = testkit::random_pp_subgroup(&mut rng, cells);
            let run = build_tower(&h, &cfg).expect("tower construction succeeds");
            match run.outcome {
                TowerOutcome::Terminated { .. } => terminated += 1,
                TowerOutcome::AbelianAtStart => abelian += 1,
                TowerOutcome::SearchExhausted { .. } => unreachable!(),
            }
            let report = TowerReport::from_run(&run);
            let back = TowerReport::from_json(&report.to_json()).expect("report parses");
            let v = verify_report(&h, &back);
            assert!(v.ok(), "independent recheck failed: {:?}", v.failure);
            pp.push((h, report));
        }
        TowerFixture {
            pl,
            pp,
            build_and_verify_secs: start.elapsed().as_secs_f64(),
            terminated,
            abelian,
        }
    })
}

fn audit_run(run: &pltower::tower::TowerRun<PlMap>, cells: usize) {
    if let TowerOutcome::Terminated { level } = run.outcome {
        assert!(level < run.partition.support_cell_count().max(1));
        assert!(level <= cells);
    }
    let mut prev = None;
    for step in &run.steps {
        if let Some(p) = prev {
            assert!(step.cell_index > p, "leftmost cell indices must increase");
        }
        prev = Some(step.cell_index);
        assert!(step.left_cells_identity);
        assert!(step.displacement.cert.holds());
    }
}

#[test]
fn criterion_6_tower_termination() {
    let _guard = serial();
    let fixture = tower_fixture();

    // Canonical trace for the standard pair.
    let h = GeneratingSet::new(vec![("x0".to_string(), x0()), ("x1".to_string(), x1())])
        .unwrap();
    let run = build_tower(&h, &TowerConfig::default()).unwrap();
    assert_eq!(
        run.partition.points,
        vec![ExactNumber::zero(), ExactNumber::one()]
    );
    assert_eq!(run.outcome, TowerOutcome::Terminated { level: 0 });
    let term = run.terminal.as_ref().unwrap();
    assert!(!term.pairs.is_empty());
    let report = TowerReport::from_run(&run);
    assert!(verify_report(&h, &report).ok());

    let total = fixture.pl.len() + fixture.pp.len();
    println!(
        "criterion 6 (tower termination): PASS ({} towers, {} terminated / {} abelian-at-start, canonical trace l=0, {:.2}s)",
        total, fixture.terminated, fixture.abelian, fixture.build_and_verify_secs
    );
    assert_eq!(total, 300);
    assert!(
        fixture.build_and_verify_secs < BUDGET_TOWER,
        "tower suite exceeded its {}s budget: {:.2}s",
        BUDGET_TOWER,
        fixture.build_and_verify_secs
    );
}

#[test]
fn criterion_7_representations() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 7);
    let n = 1000;
    for _ in 0..n {
        let tp = testkit::random_reduced_pair(&mut rng, 12);
        let m = tp.to_plmap();
        assert!(m.is_in_f());
        let back = pltower::treepair::from_plmap(&m).unwrap();
        assert_eq!(back, tp, "round trip through the map must reproduce the pair");
    }
    assert!(x0().is_in_f());
    assert!(x1().is_in_f());
    let slope3 = PlMap::new(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 4), rat(3, 4)),
        (rat(1, 1), rat(1, 1)),
    ])
    .unwrap();
    assert!(!slope3.is_in_f());
    assert!(pltower::treepair::from_plmap(&slope3).is_err());
    let third = PlMap::new(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 3), rat(1, 2)),
        (rat(1, 1), rat(1, 1)),
    ])
    .unwrap();
    assert!(!third.is_in_f());
    finish(
        "7 (representations)",
        format!("{} reduced pairs round-tripped", n),
        start,
        BUDGET_TREE,
    );
}

#[test]
fn criterion_8_wire_formats() {
    let _guard = serial();
    let fixture = tower_fixture();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(SEED ^ 8);
    let n = 1000;
    for i in 0..n {
        match i % 5 {
            0 => {
                let m = testkit::random_plmap(&mut rng, 4);
                let s = m.to_string();
                assert_eq!(parse_element(&s).unwrap(), ElementExpr::Pl(m.clone()));
                assert_eq!(m.to_string(), s);
            }
            1 => {
                let len = rng.gen_range(1..=5);
                let (_, m) = testkit::random_pp_word_map(&mut rng, len);
                assert_eq!(
                    parse_element(&m.to_string()).unwrap(),
                    ElementExpr::Pp(m.clone())
                );
            }
            2 => {
                let tp = testkit::random_reduced_pair(&mut rng, 10);
                assert_eq!(
                    parse_element(&tp.to_string()).unwrap(),
                    ElementExpr::Tree(tp.clone())
                );
            }
            3 => {
                let len = rng.gen_range(1..=6);
                let w = testkit::random_word(&mut rng, &["x0", "x1", "g2"], len);
                assert_eq!(parse_word(&w.to_string()).unwrap(), w);
            }
            _ => {
                let x = testkit::random_exact(&mut rng);
                assert_eq!(parse_number(&x.to_string()).unwrap(), x);
                let y = testkit::random_exact(&mut rng);
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                if lo < hi {
                    let iv = Interval::open(lo, hi).unwrap();
                    assert_eq!(parse_interval(&iv.to_string()).unwrap(), iv);
                }
            }
        }
    }

    // Every tower report from criterion 6 survives a JSON round trip.
    for (_, report) in fixture.pl.iter().chain(&[]) {
        let back = TowerReport::from_json(&report.to_json()).unwrap();
        assert_eq!(&back, report);
    }
    for (_, report) in &fixture.pp {
        let back = TowerReport::from_json(&report.to_json()).unwrap();
        assert_eq!(&back, report);
    }

    // Fault injection: tampering is caught with a located first failure.
    let (h, good) = fixture
        .pl
        .iter()
        .find(|(_, r)| !r.steps.is_empty())
        .expect("some tower has steps");
    let mut faults = 0;
    {
        let mut bad = good.clone();
        bad.steps[0].displacement_word = "g0a^-1".to_string();
        let v = verify_report(h, &bad);
        let f = v.failure.expect("tampered word must fail");
        assert!(f.location.contains("steps[0]"), "{:?}", f);
        faults += 1;
    }
    {
        let mut bad = good.clone();
        bad.partition.points.push("7/8".to_string());
        let v = verify_report(h, &bad);
        assert!(v.failure.unwrap().location.starts_with("partition"));
        faults += 1;
    }
    {
        let mut bad = good.clone();
        bad.initial_generators.push("g0a".to_string());
        let v = verify_report(h, &bad);
        assert!(v
            .failure
            .unwrap()
            .location
            .starts_with("initial_generators"));
        faults += 1;
    }
    {
        let mut bad = good.clone();
        if let Some(t) = bad.terminal.as_mut() {
            if !t.pairs.is_empty() {
                t.pairs[0].other = "g0a g0b".to_string();
            }
        }
        let v = verify_report(h, &bad);
        assert!(!v.ok());
        faults += 1;
    }
    {
        let mut bad = good.clone();
        bad.steps[0].certificate.image_bound = "0".to_string();
        let v = verify_report(h, &bad);
        assert!(v.failure.unwrap().location.contains("certificate"));
        faults += 1;
    }

    finish(
        "8 (wire formats)",
        format!(
            "{} element round trips, {} reports round-tripped, {} fault injections caught",
            n,
            fixture.pl.len() + fixture.pp.len(),
            faults
        ),
        start,
        BUDGET_WIRE,
    );
}
