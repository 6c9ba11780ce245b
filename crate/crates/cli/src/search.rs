use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::json;

use ik_lab::config::LabConfig;
use ik_lab::convergence::{
    all_finite_functions, decide, limit_set, periodic_functions, FunctionSeq, IdealEnv, Mode,
};
use ik_lab::ideals::{enumerate_ideals_finite, residue_library, Ideal};
use ik_lab::indexsets::IndexDomain;
use ik_lab::points::{cluster_points, Semantics};
use ik_lab::topology::{enumerate_topologies, FiniteSpace, PointSet};

use crate::verify::Bounds;
use crate::{DomainKind, EXIT_EXHAUSTED, EXIT_OK};

/// What `search` looks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Predicate {
    /// Converges in the `--in` mode but in none of the `--not-in` modes.
    ConvergesInNotIn,
    /// Trace and padded cluster sets differ.
    ClusterSetDiffers,
    /// A function with two distinct I^K-limits.
    NonUniqueLimit,
    /// An ideal pair whose join is improper.
    IdealityFails,
    /// A non-Hausdorff space and pair for which no single ideal J gives
    /// the same convergence as I^K.
    #[value(name = "J-equivalence-fails", alias = "j-equivalence-fails")]
    JEquivalenceFails,
}

impl Predicate {
    fn id(self) -> &'static str {
        match self {
            Predicate::ConvergesInNotIn => "converges-in-not-in",
            Predicate::ClusterSetDiffers => "cluster-set-differs",
            Predicate::NonUniqueLimit => "non-unique-limit",
            Predicate::IdealityFails => "ideality-fails",
            Predicate::JEquivalenceFails => "J-equivalence-fails",
        }
    }
}

pub(crate) struct Options {
    pub(crate) domain: DomainKind,
    pub(crate) in_mode: String,
    pub(crate) not_in: Vec<String>,
    pub(crate) proper: bool,
    pub(crate) discrete: bool,
    pub(crate) limit: usize,
}

/// Writes matches as one JSON config per line and stops at the limit.
struct Sink<'a> {
    out: &'a mut dyn Write,
    limit: usize,
    found: usize,
    searched: u64,
}

impl Sink<'_> {
    fn emit(&mut self, cfg: LabConfig) -> Result<()> {
        writeln!(self.out, "{}", serde_json::to_string(&cfg)?)?;
        self.found += 1;
        Ok(())
    }

    fn full(&self) -> bool {
        self.limit != 0 && self.found >= self.limit
    }
}

/// Labeled spaces, so matches come out in every labeling.
struct Model {
    domains: Vec<IndexDomain>,
    k: usize,
    m: u64,
    p: usize,
}

impl Model {
    fn ideals(&self, domain: IndexDomain) -> Result<Vec<Ideal>> {
        Ok(match domain {
            IndexDomain::Finite(_) => enumerate_ideals_finite(domain)?.collect(),
            IndexDomain::PeriodicOmega => residue_library(self.m)
                .into_iter()
                .map(|(_, i)| i)
                .collect(),
        })
    }

    fn functions(&self, domain: IndexDomain, points: usize) -> Result<Vec<FunctionSeq>> {
        Ok(match domain {
            IndexDomain::Finite(n) => all_finite_functions(n, points)?,
            IndexDomain::PeriodicOmega => periodic_functions(points, self.p),
        })
    }

    fn spaces(&self, discrete: bool) -> Result<Vec<FiniteSpace>> {
        let mut out = Vec::new();
        for k in 1..=self.k {
            out.extend(
                enumerate_topologies(k)?
                    .into_iter()
                    .filter(|s| !discrete || s.is_discrete()),
            );
        }
        Ok(out)
    }
}

fn config(
    space: &FiniteSpace,
    domain: IndexDomain,
    i: &Ideal,
    k: &Ideal,
    p: Predicate,
) -> LabConfig {
    LabConfig::describe(space, domain)
        .with_ideal("I", i)
        .with_ideal("K", k)
        .with_check(p.id())
}

pub(crate) fn search(
    predicate: Predicate,
    bounds: Option<&str>,
    opts: &Options,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let b = Bounds::parse(bounds)?;
    b.only(&["k", "n", "m", "p"])?;
    let n = b.get("n", 4);
    let domains = match opts.domain {
        // cluster sets are searched on every smaller domain as well
        DomainKind::Finite if predicate == Predicate::ClusterSetDiffers => (1..=n)
            .map(IndexDomain::finite)
            .collect::<ik_lab::Result<_>>()?,
        DomainKind::Finite => vec![IndexDomain::finite(n)?],
        DomainKind::Omega => vec![IndexDomain::PeriodicOmega],
    };
    let model = Model {
        domains,
        k: b.get("k", 2),
        m: b.get("m", 6) as u64,
        p: b.get("p", 4),
    };
    let mut sink = Sink {
        out,
        limit: opts.limit,
        found: 0,
        searched: 0,
    };
    for &domain in &model.domains {
        if sink.full() {
            break;
        }
        let ideals = model.ideals(domain)?;
        let spaces = model.spaces(opts.discrete)?;
        match predicate {
            Predicate::IdealityFails => ideality_fails(&ideals, domain, &mut sink)?,
            Predicate::JEquivalenceFails => {
                j_equivalence(&model, &ideals, &spaces, domain, &mut sink)?
            }
            _ => per_function(predicate, &model, opts, &ideals, &spaces, domain, &mut sink)?,
        }
    }
    writeln!(
        err,
        "{}: {} instances searched, {} found",
        predicate.id(),
        sink.searched,
        sink.found
    )?;
    Ok(if sink.found > 0 {
        EXIT_OK
    } else {
        EXIT_EXHAUSTED
    })
}

fn ideality_fails(ideals: &[Ideal], domain: IndexDomain, sink: &mut Sink) -> Result<()> {
    let space = FiniteSpace::sierpinski();
    for i in ideals {
        for k in ideals {
            sink.searched += 1;
            if !i.join(k)?.is_proper() {
                sink.emit(config(&space, domain, i, k, Predicate::IdealityFails).with_mode("I^K"))?;
                if sink.full() {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn per_function(
    predicate: Predicate,
    model: &Model,
    opts: &Options,
    ideals: &[Ideal],
    spaces: &[FiniteSpace],
    domain: IndexDomain,
    sink: &mut Sink,
) -> Result<()> {
    let not_in: Vec<String> = if opts.not_in.is_empty() {
        vec!["I".into(), "K".into()]
    } else {
        opts.not_in.clone()
    };
    for space in spaces {
        for f in model.functions(domain, space.len())? {
            for i in ideals {
                for k in ideals {
                    let proper = i.join(k)?.is_proper();
                    if opts.proper && !proper {
                        continue;
                    }
                    sink.searched += 1;
                    let base = || config(space, domain, i, k, predicate).with_function(&f, space);
                    match predicate {
                        Predicate::ConvergesInNotIn => {
                            let env = IdealEnv::new(domain)
                                .with("I", i.clone())?
                                .with("K", k.clone())?;
                            let good = env.parse_mode(&opts.in_mode)?;
                            let bad: Vec<Mode> = not_in
                                .iter()
                                .map(|m| env.parse_mode(m))
                                .collect::<ik_lab::Result<_>>()?;
                            for x in space.points() {
                                if !decide(&f, x, &good, space)?.converges {
                                    continue;
                                }
                                if bad.iter().try_fold(true, |acc, m| {
                                    Ok::<_, ik_lab::Error>(
                                        acc && !decide(&f, x, m, space)?.converges,
                                    )
                                })? {
                                    let cfg = base()
                                        .with_mode(&opts.in_mode)
                                        .with_point(x, space)
                                        .with_context(json!({ "not_in": not_in }));
                                    sink.emit(cfg)?;
                                    if sink.full() {
                                        return Ok(());
                                    }
                                }
                            }
                        }
                        Predicate::ClusterSetDiffers => {
                            let trace = cluster_points(&f, i, k, space, Semantics::Trace)?;
                            let padded = cluster_points(&f, i, k, space, Semantics::Padded)?;
                            if trace != padded {
                                let names = |a: PointSet| {
                                    a.iter()
                                        .map(|p| space.name(p).to_string())
                                        .collect::<Vec<_>>()
                                };
                                let cfg = base().with_semantics(Semantics::Padded).with_context(
                                    json!({ "trace": names(trace), "padded": names(padded) }),
                                );
                                sink.emit(cfg)?;
                            }
                        }
                        Predicate::NonUniqueLimit => {
                            let l = limit_set(&f, &Mode::ik(i.clone(), k.clone())?, space)?;
                            if l.len() > 1 {
                                let names: Vec<&str> = l.iter().map(|p| space.name(p)).collect();
                                sink.emit(
                                    base()
                                        .with_mode("I^K")
                                        .with_context(json!({ "limits": names })),
                                )?;
                            }
                        }
                        Predicate::IdealityFails | Predicate::JEquivalenceFails => {
                            unreachable!("handled per pair")
                        }
                    }
                    if sink.full() {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

/// For each non-Hausdorff space and pair with a proper join, looks for an
/// ideal `J` among the candidates (every enumerated ideal and the join
/// itself) whose convergence matches `I^K` on every function and point.
fn j_equivalence(
    model: &Model,
    ideals: &[Ideal],
    spaces: &[FiniteSpace],
    domain: IndexDomain,
    sink: &mut Sink,
) -> Result<()> {
    for space in spaces.iter().filter(|s| !s.is_hausdorff()) {
        let functions = model.functions(domain, space.len())?;
        for i in ideals {
            for k in ideals {
                let join = i.join(k)?;
                if !join.is_proper() {
                    continue;
                }
                sink.searched += 1;
                let ik = Mode::ik(i.clone(), k.clone())?;
                let mut candidates = ideals.to_vec();
                candidates.push(join);
                let target: Vec<PointSet> = functions
                    .iter()
                    .map(|f| limit_set(f, &ik, space))
                    .collect::<ik_lab::Result<_>>()?;
                let mut matched = false;
                for j in candidates {
                    let mode = Mode::base(j);
                    let mut same = true;
                    for (f, want) in functions.iter().zip(&target) {
                        if limit_set(f, &mode, space)? != *want {
                            same = false;
                            break;
                        }
                    }
                    if same {
                        matched = true;
                        break;
                    }
                }
                if !matched {
                    sink.emit(
                        config(space, domain, i, k, Predicate::JEquivalenceFails).with_mode("I^K"),
                    )?;
                    if sink.full() {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}
