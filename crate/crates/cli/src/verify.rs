use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

use ik_lab::convergence::{
    verify_mode_relations, verify_oracle_agreement, Evaluator, FastPath, ModeRelationBounds, Oracle,
};
use ik_lab::points::{verify_cluster_points, ClusterBounds, Semantics};
use ik_lab::report::Report;
use ik_lab::seqspace::{verify_sequential_spaces, SequentialBounds};

use crate::{EXIT_NEGATIVE, EXIT_OK};

/// Which battery to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Mode relations.
    S2,
    /// Mode-open sets and sequential spaces.
    S3,
    /// Cluster and limit points.
    S4,
    /// Fast path against the definition-following oracle.
    Oracle,
    /// All of the above, in that order.
    All,
}

/// `k=3,n=4` as a map; every key must be used by some selected suite.
pub(crate) struct Bounds {
    values: BTreeMap<String, usize>,
}

impl Bounds {
    pub(crate) fn parse(text: Option<&str>) -> Result<Bounds> {
        let mut values = BTreeMap::new();
        for part in text
            .unwrap_or("")
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
        {
            let (k, v) = part
                .split_once('=')
                .with_context(|| format!("bound {part:?} is not key=value"))?;
            let v = v
                .trim()
                .parse()
                .with_context(|| format!("bound {part:?} needs a number"))?;
            values.insert(k.trim().to_string(), v);
        }
        Ok(Bounds { values })
    }

    pub(crate) fn get(&self, key: &str, default: usize) -> usize {
        self.values.get(key).copied().unwrap_or(default)
    }

    pub(crate) fn only(&self, allowed: &[&str]) -> Result<()> {
        for k in self.values.keys() {
            if !allowed.contains(&k.as_str()) {
                bail!(
                    "unknown bound {k:?}; expected one of {}",
                    allowed.join(", ")
                );
            }
        }
        Ok(())
    }
}

const S2_KEYS: [&str; 4] = ["k", "n", "p", "m"];
const S3_KEYS: [&str; 6] = ["k", "m", "n", "q", "c", "p"];
const S4_KEYS: [&str; 5] = ["k", "p", "m", "n", "r"];
const ORACLE_KEYS: [&str; 2] = ["k", "n"];

fn s2(b: &Bounds, eval: &dyn Evaluator) -> Result<Report> {
    let d = ModeRelationBounds::default();
    let bounds = ModeRelationBounds {
        max_points: b.get("k", d.max_points),
        finite_domain: b.get("n", d.finite_domain),
        max_period: b.get("p", d.max_period),
        max_modulus: b.get("m", d.max_modulus as usize) as u64,
    };
    Ok(verify_mode_relations(bounds, eval)?)
}

fn s3(b: &Bounds) -> Result<Report> {
    let d = SequentialBounds::default();
    Ok(verify_sequential_spaces(SequentialBounds {
        max_points: b.get("k", d.max_points),
        max_modulus: b.get("m", d.max_modulus as usize) as u64,
        finite_domain: b.get("n", d.finite_domain),
        quotient_points: b.get("q", d.quotient_points),
        map_points: b.get("c", d.map_points),
        max_period: b.get("p", d.max_period),
    })?)
}

fn s4(b: &Bounds, semantics: Option<Semantics>) -> Result<Report> {
    let d = ClusterBounds::default();
    Ok(verify_cluster_points(ClusterBounds {
        max_points: b.get("k", d.max_points),
        max_period: b.get("p", d.max_period),
        max_modulus: b.get("m", d.max_modulus as usize) as u64,
        finite_domain: b.get("n", d.finite_domain),
        realize_points: b.get("r", d.realize_points),
        semantics,
    })?)
}

fn oracle(b: &Bounds) -> Result<Report> {
    Ok(verify_oracle_agreement(
        b.get("k", 3),
        b.get("n", 4),
        &FastPath,
        &Oracle::default(),
    )?)
}

/// Runs `suite` with the bounds it understands; `All` hands each battery its own keys.
pub(crate) fn run_suite(
    suite: Suite,
    bounds: &Bounds,
    semantics: Option<Semantics>,
    use_oracle: bool,
) -> Result<Report> {
    let eval: Box<dyn Evaluator> = if use_oracle {
        Box::new(Oracle::default())
    } else {
        Box::new(FastPath)
    };
    match suite {
        Suite::S2 => {
            bounds.only(&S2_KEYS)?;
            s2(bounds, eval.as_ref())
        }
        Suite::S3 => {
            bounds.only(&S3_KEYS)?;
            s3(bounds)
        }
        Suite::S4 => {
            bounds.only(&S4_KEYS)?;
            s4(bounds, semantics)
        }
        Suite::Oracle => {
            bounds.only(&ORACLE_KEYS)?;
            oracle(bounds)
        }
        Suite::All => {
            let keys: Vec<&str> = S2_KEYS
                .iter()
                .chain(&S3_KEYS)
                .chain(&S4_KEYS)
                .copied()
                .collect();
            bounds.only(&keys)?;
            let pick = |allowed: &[&str]| Bounds {
                values: bounds
                    .values
                    .iter()
                    .filter(|(k, _)| allowed.contains(&k.as_str()))
                    .map(|(k, v)| (k.clone(), *v))
                    .collect(),
            };
            Ok(Report::combine(
                "all",
                vec![
                    s2(&pick(&S2_KEYS), eval.as_ref())?,
                    s3(&pick(&S3_KEYS))?,
                    s4(&pick(&S4_KEYS), semantics)?,
                    oracle(&pick(&ORACLE_KEYS))?,
                ],
            ))
        }
    }
}

pub(crate) fn verify(
    suite: Suite,
    bounds: Option<&str>,
    semantics: Option<Semantics>,
    report: Option<&Path>,
    use_oracle: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let bounds = Bounds::parse(bounds)?;
    let start = Instant::now();
    let r = run_suite(suite, &bounds, semantics, use_oracle)?;
    let json = r.to_json();
    writeln!(out, "{json}")?;
    if let Some(path) = report {
        std::fs::write(path, format!("{json}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    writeln!(
        err,
        "{}: {} instances, {} gating violations, {:.1}s",
        r.suite,
        r.instances,
        r.gating_violations(),
        start.elapsed().as_secs_f64()
    )?;
    Ok(if r.passed() { EXIT_OK } else { EXIT_NEGATIVE })
}
