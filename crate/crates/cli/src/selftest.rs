//! Condensed randomized property suites behind `pltower selftest`.
//! One line per suite; nonzero exit if any fails.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pltower::analysis::{check_partition, germ_trivial_at_partition, partition};
use pltower::exact::{eval_quadratic, quad_roots, ExactNumber};
use pltower::homeo::Homeo;
use pltower::parse::{parse_element, parse_word, ElementExpr};
use pltower::plmap::PlMap;
use pltower::report::{verify_report, TowerReport};
use pltower::testkit;
use pltower::tower::{build_tower, displace, Strategy, TowerConfig, TowerOutcome};
use pltower::word::Word;

type Suite = fn(&mut StdRng) -> Result<String, String>;

pub fn run(seed: u64) -> Result<(), String> {
    let suites: Vec<(&str, Suite)> = vec![
        ("exact-kernel-laws", kernel_laws),
        ("pl-group-axioms", pl_group_axioms),
        ("pp-group-axioms", pp_group_axioms),
        ("partition-soundness", partition_soundness),
        ("germ-triviality", germ_triviality),
        ("displacement", displacement),
        ("tower-and-verify", tower_and_verify),
        ("wire-round-trips", wire_round_trips),
    ];
    let mut failed = 0;
    for (name, f) in suites {
        let mut rng = StdRng::seed_from_u64(seed ^ fxhash(name));
        let start = std::time::Instant::now();
        match f(&mut rng) {
            Ok(detail) => println!(
                "{}: PASS ({}, {:.2}s)",
                name,
                detail,
                start.elapsed().as_secs_f64()
            ),
            Err(e) => {
                println!("{}: FAIL ({})", name, e);
                failed += 1;
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(format!("{} suite(s) failed", failed))
    }
}

fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

fn kernel_laws(rng: &mut StdRng) -> Result<String, String> {
    let n = 1000;
    for i in 0..n {
        let x = testkit::random_exact(rng);
        let r = testkit::random_rational(rng);
        let y = ExactNumber::Rat(r.clone());
        // Mixed-operand associativity within one field.
        let lhs = x
            .try_add(&y)
            .and_then(|s| s.try_add(&y))
            .map_err(|e| format!("instance {}: {}", i, e))?;
        let rhs = y
            .try_add(&y)
            .and_then(|s| x.try_add(&s))
            .map_err(|e| format!("instance {}: {}", i, e))?;
        if lhs != rhs {
            return Err(format!("instance {}: associativity failed", i));
        }
        if !x.is_zero() {
            let inv = x.try_invert().map_err(|e| e.to_string())?;
            if x.try_mul(&inv).map_err(|e| e.to_string())? != ExactNumber::one() {
                return Err(format!("instance {}: inverse law failed", i));
            }
        }
        // Total order on a random triple.
        let a = testkit::random_exact(rng);
        let b = testkit::random_exact(rng);
        let c = testkit::random_exact(rng);
        if (a <= b && b <= c && a > c) || (a >= b && b >= c && a < c) {
            return Err(format!("instance {}: transitivity failed", i));
        }
        // Roots satisfy their polynomial exactly.
        let qa = testkit::random_rational(rng);
        let qb = testkit::random_rational(rng);
        let qc = testkit::random_rational(rng);
        if let Ok(roots) = quad_roots(&qa, &qb, &qc) {
            for root in roots {
                let v = eval_quadratic(&qa, &qb, &qc, &root).map_err(|e| e.to_string())?;
                if !v.is_zero() {
                    return Err(format!("instance {}: root does not satisfy polynomial", i));
                }
            }
        }
    }
    Ok(format!("{} instances", n))
}

fn pl_group_axioms(rng: &mut StdRng) -> Result<String, String> {
    let n = 150;
    for i in 0..n {
        let f = random_pl_word_map(rng);
        let g = random_pl_word_map(rng);
        if f.compose(&f.inverse()) != PlMap::identity() {
            return Err(format!("instance {}: f f^-1 != id", i));
        }
        if f.compose(&g).inverse() != g.inverse().compose(&f.inverse()) {
            return Err(format!("instance {}: (fg)^-1 != g^-1 f^-1", i));
        }
        let k = random_pl_word_map(rng);
        let lhs = f.conjugate_by(&k).support();
        let rhs = f.support().image_under(&|x| k.apply(x));
        if lhs != rhs {
            return Err(format!("instance {}: support transport failed", i));
        }
    }
    Ok(format!("{} instances", n))
}

fn random_pl_word_map(rng: &mut StdRng) -> PlMap {
    let base = [pltower::plmap::x0(), pltower::plmap::x1()];
    let len = rng.gen_range(1..=8);
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

fn pp_group_axioms(rng: &mut StdRng) -> Result<String, String> {
    let n = 60;
    for i in 0..n {
        let len_f = rng.gen_range(1..=6);
        let len_g = rng.gen_range(1..=6);
        let (_, f) = testkit::random_pp_word_map(rng, len_f);
        let (_, g) = testkit::random_pp_word_map(rng, len_g);
        if !f.compose(&f.inverse()).is_identity() {
            return Err(format!("instance {}: f f^-1 != id", i));
        }
        let lhs = f.conjugate_by(&g).support();
        let rhs = f.support().image_under(&|x| g.apply(x));
        if lhs != rhs {
            return Err(format!("instance {}: support transport failed", i));
        }
    }
    Ok(format!("{} instances", n))
}

fn partition_soundness(rng: &mut StdRng) -> Result<String, String> {
    let n = 60;
    for i in 0..n {
        let cells = rng.gen_range(1..=4);
        let (h, _) = testkit::random_pl_subgroup(rng, cells);
        let p = partition(&h);
        if p.support_cell_count() != cells {
            return Err(format!("instance {}: wrong support cell count", i));
        }
        check_partition(&h, &p).map_err(|e| format!("instance {}: {}", i, e))?;
    }
    Ok(format!("{} instances", n))
}

fn germ_triviality(rng: &mut StdRng) -> Result<String, String> {
    let n = 40;
    for i in 0..n {
        let cells = rng.gen_range(1..=3);
        let (h, _) = testkit::random_pl_subgroup(rng, cells);
        let report = germ_trivial_at_partition(&h, 1);
        if !report.trivial() {
            return Err(format!("instance {}: depth-1 germ not trivial", i));
        }
    }
    // Projective: depth-2 quadruples over words fixing 0.
    let alphabet = testkit::pp_fixing_zero_alphabet();
    let names: Vec<&str> = alphabet.iter().map(|(n, _)| n.as_str()).collect();
    let resolve = |n: &str| {
        alphabet
            .iter()
            .find(|(name, _)| name == n)
            .map(|(_, e)| e.clone())
    };
    for i in 0..20 {
        let ws: Vec<Word> = (0..4)
            .map(|_| {
                let len = rng.gen_range(1..=4);
                testkit::random_word(rng, &names, len)
            })
            .collect();
        let es: Vec<_> = ws
            .iter()
            .map(|w| w.evaluate(&resolve).expect("alphabet bound"))
            .collect();
        let double = es[0].commutator(&es[1]).commutator(&es[2].commutator(&es[3]));
        if double.apply(&ExactNumber::zero()) != ExactNumber::zero() {
            return Err(format!("pp instance {}: 0 not fixed", i));
        }
        if !double.is_identity() && !double.identity_near(&ExactNumber::zero()) {
            return Err(format!("pp instance {}: depth-2 germ not trivial", i));
        }
    }
    Ok("40 pl + 20 pp instances".to_string())
}

fn displacement(rng: &mut StdRng) -> Result<String, String> {
    let n = 40;
    let mut bfs_checked = 0;
    for i in 0..n {
        let cells = rng.gen_range(1..=3);
        let (h, spans) = testkit::random_pl_subgroup(rng, cells);
        let p = partition(&h);
        let (lo, hi) = &spans[rng.gen_range(0..spans.len())];
        let cell = p
            .cells
            .iter()
            .find(|c| {
                c.span.lo() == &ExactNumber::Rat(lo.clone())
                    && c.span.hi() == &ExactNumber::Rat(hi.clone())
            })
            .ok_or_else(|| format!("instance {}: cell not in partition", i))?;
        let width = hi - lo;
        let quarter = &width / pltower::rational::rat_int(4);
        let target = pltower::interval::IntervalSet::from_interval(
            pltower::interval::Interval::open(
                ExactNumber::Rat(lo + &quarter),
                ExactNumber::Rat(hi - &quarter),
            )
            .unwrap(),
        );
        let d = displace(&h, &target, &cell.span, &TowerConfig::default())
            .map_err(|e| format!("instance {}: {}", i, e))?;
        if !d.cert.holds() {
            return Err(format!("instance {}: certificate does not hold", i));
        }
        let bfs_cfg = TowerConfig {
            strategy: Strategy::Bfs,
            max_steps: 6,
            ..TowerConfig::default()
        };
        if h.len() > 3 {
            continue;
        }
        if let Ok(b) = displace(&h, &target, &cell.span, &bfs_cfg) {
            bfs_checked += 1;
            if !b.cert.holds() {
                return Err(format!("instance {}: bfs certificate does not hold", i));
            }
            if b.word.letter_len() > d.word.letter_len() {
                return Err(format!("instance {}: bfs word longer than greedy", i));
            }
        }
    }
    Ok(format!("{} instances, {} bfs-checked", n, bfs_checked))
}

fn tower_and_verify(rng: &mut StdRng) -> Result<String, String> {
    let mut done = 0;
    for i in 0..12 {
        let cells = rng.gen_range(1..=3);
        let (h, _) = testkit::random_pl_subgroup(rng, cells);
        let run = build_tower(&h, &TowerConfig::default())
            .map_err(|e| format!("pl instance {}: {}", i, e))?;
        if let TowerOutcome::Terminated { level } = run.outcome {
            if level >= run.partition.support_cell_count() {
                return Err(format!("pl instance {}: level bound violated", i));
            }
        }
        let report = TowerReport::from_run(&run);
        let json = report.to_json();
        let back = TowerReport::from_json(&json).map_err(|e| e.to_string())?;
        let v = verify_report(&h, &back);
        if !v.ok() {
            return Err(format!("pl instance {}: verify failed: {:?}", i, v.failure));
        }
        done += 1;
    }
    for i in 0..4 {
        let cells = rng.gen_range(1..=2);
        let h = testkit::random_pp_subgroup(rng, cells);
        let run = build_tower(&h, &TowerConfig::default())
            .map_err(|e| format!("pp instance {}: {}", i, e))?;
        let report = TowerReport::from_run(&run);
        let back = TowerReport::from_json(&report.to_json()).map_err(|e| e.to_string())?;
        let v = verify_report(&h, &back);
        if !v.ok() {
            return Err(format!("pp instance {}: verify failed: {:?}", i, v.failure));
        }
        done += 1;
    }
    Ok(format!("{} towers verified", done))
}

fn wire_round_trips(rng: &mut StdRng) -> Result<String, String> {
    let n = 200;
    for i in 0..n {
        match rng.gen_range(0..4) {
            0 => {
                let m = testkit::random_plmap(rng, 4);
                let s = m.to_string();
                match parse_element(&s) {
                    Ok(ElementExpr::Pl(back)) if back == m => {}
                    other => return Err(format!("instance {}: pl round trip: {:?}", i, other)),
                }
            }
            1 => {
                let len = rng.gen_range(1..=5);
                let (_, m) = testkit::random_pp_word_map(rng, len);
                let s = m.to_string();
                match parse_element(&s) {
                    Ok(ElementExpr::Pp(back)) if back == m => {}
                    other => return Err(format!("instance {}: pp round trip: {:?}", i, other)),
                }
            }
            2 => {
                let tp = testkit::random_reduced_pair(rng, 10);
                let s = tp.to_string();
                match parse_element(&s) {
                    Ok(ElementExpr::Tree(back)) if back == tp => {}
                    other => return Err(format!("instance {}: tree round trip: {:?}", i, other)),
                }
            }
            _ => {
                let len = rng.gen_range(1..=6);
                let w = testkit::random_word(rng, &["x0", "x1", "g2"], len);
                let s = w.to_string();
                let back = parse_word(&s).map_err(|e| e.to_string())?;
                if back != w {
                    return Err(format!("instance {}: word round trip", i));
                }
            }
        }
    }
    Ok(format!("{} instances", n))
}
