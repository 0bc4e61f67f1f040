//! Command-line front end: element expressions, environment files, and the
//! partition / displacement / tower / verify pipeline.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 displacement search exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use pltower::analysis::{partition, Partition};
use pltower::env::{Element, ElementEnvironment};
use pltower::exact::ExactNumber;
use pltower::homeo::{Ambient, GeneratingSet, Homeo};
use pltower::interval::{Interval, IntervalSet};
use pltower::parse::{parse_interval, parse_number};
use pltower::rational::{rat_int, Rational};
use pltower::report::{verify_report, TowerReport};
use pltower::tower::{
    build_tower, displace, Direction, DisplaceError, GermDepth, Strategy, TowerConfig, TowerError,
};

mod selftest;

const EXIT_VERIFY_FAILED: i32 = 1;
const EXIT_INPUT_ERROR: i32 = 2;
const EXIT_SEARCH_EXHAUSTED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "pltower",
    version,
    about = "Exact piecewise-linear and piecewise-projective homeomorphisms: supports, partitions, displacement words, and commutator towers with recheckable certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GermDepthArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Auto,
}

impl From<GermDepthArg> for GermDepth {
    fn from(d: GermDepthArg) -> Self {
        match d {
            GermDepthArg::One => GermDepth::One,
            GermDepthArg::Two => GermDepth::Two,
            GermDepthArg::Auto => GermDepth::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Bfs,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an element at an exact point
    Eval {
        /// Bound name or inline expression
        target: String,
        /// Exact point, e.g. `1/2` or `root(1,-1,-1;[1,2])`
        point: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two elements (right-action order) and print the canonical form
    Compose {
        lhs: String,
        rhs: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Open set of points moved by an element
    Support {
        target: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed set of fixed points of an element
    Fixset {
        target: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed/support cell partition of the group generated by the environment
    Partition {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the commutator tower and write its certificate report
    Tower {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        germ_depth: GermDepthArg,
        #[arg(long, value_enum, default_value = "greedy")]
        strategy: StrategyArg,
        /// Greedy: generator applications; BFS: word length (default 8)
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, default_value_t = 16)]
        max_gens: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a word displacing an interval off itself within a cell
    Displace {
        /// Interval to displace, e.g. `(1/4,1/2)`
        interval: String,
        /// Support cell containing it, e.g. `[0,1]`
        cell: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "greedy")]
        strategy: StrategyArg,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a tower report against the environment from scratch
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// CSV of (x, f(x)) at uniformly spaced rational points
    Sample {
        target: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized property suites
    Selftest {
        #[arg(long, default_value_t = 0xF01D)]
        seed: u64,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT_ERROR,
            msg: msg.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("error: {}", f.msg);
            std::process::exit(f.code);
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::input(format!("cannot write {}: {}", path.display(), e))),
        None => {
            let mut stdout = std::io::stdout();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| {
                    if content.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| Failure::input(e.to_string()))
        }
    }
}

fn load_env(path: &Path) -> Result<ElementEnvironment, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {}", path.display(), e)))?;
    ElementEnvironment::from_text(&text).map_err(|e| Failure::input(e.to_string()))
}

fn load_env_opt(path: &Option<PathBuf>) -> Result<ElementEnvironment, Failure> {
    match path {
        Some(p) => load_env(p),
        None => Ok(ElementEnvironment::default()),
    }
}

fn resolve(env: &ElementEnvironment, text: &str) -> Result<Element, Failure> {
    env.resolve_expr(text)
        .map_err(|e| Failure::input(e.to_string()))
}

fn interval_set_json(s: &IntervalSet) -> serde_json::Value {
    serde_json::Value::Array(
        s.iter()
            .map(|iv| serde_json::Value::String(iv.to_string()))
            .collect(),
    )
}

fn partition_json(p: &Partition) -> serde_json::Value {
    serde_json::json!({
        "points": p.points.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "cells": p.cells.iter().map(|c| serde_json::json!({
            "span": c.span.to_string(),
            "kind": c.kind.name(),
        })).collect::<Vec<_>>(),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Eval {
            target,
            point,
            input,
            format,
            out,
        } => {
            let env = load_env_opt(&input)?;
            let element = resolve(&env, &target)?;
            let x = parse_number(&point).map_err(|e| Failure::input(e.to_string()))?;
            let y = element.evaluate(&x).map_err(Failure::input)?;
            let text = match format {
                FormatArg::Text => y.to_string(),
                FormatArg::Json => serde_json::json!({ "value": y.to_string() }).to_string(),
            };
            emit(&out, &text)
        }
        Cmd::Compose {
            lhs,
            rhs,
            input,
            format,
            out,
        } => {
            let env = load_env_opt(&input)?;
            let a = resolve(&env, &lhs)?;
            let b = resolve(&env, &rhs)?;
            let c = a.compose(&b).map_err(Failure::input)?;
            let text = match format {
                FormatArg::Text => c.to_string(),
                FormatArg::Json => serde_json::json!({ "element": c.to_string() }).to_string(),
            };
            emit(&out, &text)
        }
        Cmd::Support {
            target,
            input,
            format,
            out,
        } => {
            let env = load_env_opt(&input)?;
            let s = resolve(&env, &target)?.support();
            let text = match format {
                FormatArg::Text => s.to_string(),
                FormatArg::Json => interval_set_json(&s).to_string(),
            };
            emit(&out, &text)
        }
        Cmd::Fixset {
            target,
            input,
            format,
            out,
        } => {
            let env = load_env_opt(&input)?;
            let s = resolve(&env, &target)?.fix_set();
            let text = match format {
                FormatArg::Text => s.to_string(),
                FormatArg::Json => interval_set_json(&s).to_string(),
            };
            emit(&out, &text)
        }
        Cmd::Partition { input, format, out } => {
            let env = load_env(&input)?;
            let part = match env.ambient().map_err(|e| Failure::input(e.to_string()))? {
                Ambient::UnitInterval => partition(
                    &env.pl_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?,
                ),
                Ambient::RealLine => partition(
                    &env.pp_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?,
                ),
            };
            let text = match format {
                FormatArg::Text => {
                    let mut s = format!(
                        "points: {}\n",
                        part.points
                            .iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    for (i, c) in part.cells.iter().enumerate() {
                        s.push_str(&format!("cell {}: {} {}\n", i, c.span, c.kind.name()));
                    }
                    s
                }
                FormatArg::Json => partition_json(&part).to_string(),
            };
            emit(&out, &text)
        }
        Cmd::Tower {
            input,
            germ_depth,
            strategy,
            max_steps,
            max_gens,
            out,
        } => {
            let env = load_env(&input)?;
            let cfg = make_config(germ_depth, strategy, max_steps, max_gens);
            let report = match env.ambient().map_err(|e| Failure::input(e.to_string()))? {
                Ambient::UnitInterval => {
                    let gens = env
                        .pl_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?;
                    run_tower(&gens, &cfg, &out)?
                }
                Ambient::RealLine => {
                    let gens = env
                        .pp_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?;
                    run_tower(&gens, &cfg, &out)?
                }
            };
            if let Some(level) = report.terminal_level {
                eprintln!("terminated at level {}", level);
            }
            Ok(())
        }
        Cmd::Displace {
            interval,
            cell,
            input,
            strategy,
            max_steps,
            format,
            out,
        } => {
            let env = load_env(&input)?;
            let target = parse_interval(&interval).map_err(|e| Failure::input(e.to_string()))?;
            let cell = parse_interval(&cell).map_err(|e| Failure::input(e.to_string()))?;
            let cfg = make_config(GermDepthArg::Auto, strategy, max_steps, 16);
            match env.ambient().map_err(|e| Failure::input(e.to_string()))? {
                Ambient::UnitInterval => {
                    let gens = env
                        .pl_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?;
                    run_displace(&gens, target, cell, &cfg, format, &out)
                }
                Ambient::RealLine => {
                    let gens = env
                        .pp_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?;
                    run_displace(&gens, target, cell, &cfg, format, &out)
                }
            }
        }
        Cmd::Verify { input, report } => {
            let env = load_env(&input)?;
            let text = fs::read_to_string(&report)
                .map_err(|e| Failure::input(format!("cannot read {}: {}", report.display(), e)))?;
            let report =
                TowerReport::from_json(&text).map_err(|e| Failure::input(e.to_string()))?;
            let result = match env.ambient().map_err(|e| Failure::input(e.to_string()))? {
                Ambient::UnitInterval => {
                    let gens = env
                        .pl_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?;
                    verify_report(&gens, &report)
                }
                Ambient::RealLine => {
                    let gens = env
                        .pp_generating_set()
                        .map_err(|e| Failure::input(e.to_string()))?;
                    verify_report(&gens, &report)
                }
            };
            match result.failure {
                None => {
                    println!("verification passed");
                    Ok(())
                }
                Some(f) => Err(Failure {
                    code: EXIT_VERIFY_FAILED,
                    msg: format!("verification failed at {}: {}", f.location, f.message),
                }),
            }
        }
        Cmd::Sample {
            target,
            input,
            samples,
            out,
        } => {
            let env = load_env_opt(&input)?;
            let element = resolve(&env, &target)?;
            if samples < 2 {
                return Err(Failure::input("--samples must be at least 2"));
            }
            let (lo, hi) = match element {
                Element::Pl(_) => (rat_int(0), rat_int(1)),
                Element::Pp(_) => (rat_int(-4), rat_int(4)),
            };
            let mut csv = String::from("x,fx\n");
            let n = rat_int(samples as i64 - 1);
            for i in 0..samples {
                let t: Rational = rat_int(i as i64) / &n;
                let x = &lo + (&hi - &lo) * t;
                let y = element
                    .evaluate(&ExactNumber::Rat(x.clone()))
                    .map_err(Failure::input)?;
                csv.push_str(&format!("{},{}\n", x, y));
            }
            emit(&out, &csv)
        }
        Cmd::Selftest { seed } => selftest::run(seed).map_err(|msg| Failure {
            code: EXIT_VERIFY_FAILED,
            msg,
        }),
    }
}

fn make_config(
    germ_depth: GermDepthArg,
    strategy: StrategyArg,
    max_steps: Option<usize>,
    max_gens: usize,
) -> TowerConfig {
    let strategy = match strategy {
        StrategyArg::Greedy => Strategy::Greedy,
        StrategyArg::Bfs => Strategy::Bfs,
    };
    let max_steps = max_steps.unwrap_or(match strategy {
        Strategy::Greedy => 256,
        Strategy::Bfs => 8,
    });
    TowerConfig {
        germ_depth: germ_depth.into(),
        strategy,
        direction: Direction::LeftFirst,
        max_steps,
        max_gens,
    }
}

fn run_tower<E: Homeo>(
    gens: &GeneratingSet<E>,
    cfg: &TowerConfig,
    out: &Option<PathBuf>,
) -> Result<TowerReport, Failure> {
    match build_tower(gens, cfg) {
        Ok(run) => {
            let report = TowerReport::from_run(&run);
            emit(out, &report.to_json())?;
            Ok(report)
        }
        Err(TowerError::SearchExhausted { level, partial }) => {
            let report = TowerReport::from_run(&partial);
            emit(out, &report.to_json())?;
            Err(Failure {
                code: EXIT_SEARCH_EXHAUSTED,
                msg: format!(
                    "displacement search exhausted at level {}; partial report written",
                    level
                ),
            })
        }
        Err(e) => Err(Failure::input(e.to_string())),
    }
}

fn run_displace<E: Homeo>(
    gens: &GeneratingSet<E>,
    target: Interval,
    cell: Interval,
    cfg: &TowerConfig,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let target_set = IntervalSet::from_interval(target);
    match displace(gens, &target_set, &cell, cfg) {
        Ok(d) => {
            let text = match format {
                FormatArg::Text => format!(
                    "word: {}\nimage: {}\ndirection: {}\nbound: {} vs {}\n",
                    d.word,
                    d.cert.image,
                    if d.cert.moved_left { "left" } else { "right" },
                    d.cert.image_bound,
                    d.cert.original_bound,
                ),
                FormatArg::Json => serde_json::json!({
                    "word": d.word.to_string(),
                    "image": d.cert.image.iter().map(|iv| iv.to_string()).collect::<Vec<_>>(),
                    "direction": if d.cert.moved_left { "left" } else { "right" },
                    "image_bound": d.cert.image_bound.to_string(),
                    "original_bound": d.cert.original_bound.to_string(),
                })
                .to_string(),
            };
            emit(out, &text)
        }
        Err(DisplaceError::SearchExhausted { steps }) => Err(Failure {
            code: EXIT_SEARCH_EXHAUSTED,
            msg: format!("search exhausted after {} steps", steps),
        }),
        Err(e) => Err(Failure::input(e.to_string())),
    }
}
