//! Exhaustive checks of mode-open sets and sequentiality.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{open_by_characterization, open_by_search};
use crate::config::LabConfig;
use crate::convergence::{
    decide, modify_on_set, periodic_functions, replay_witnesses, FastPath, FunctionSeq, Mode,
};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals_finite, residue_library, Ideal};
use crate::indexsets::{EpSet, Index, IndexDomain};
use crate::report::{CheckSpec, Report, Tally};
use crate::topology::{
    all_maps, enumerate_topologies, topologies_up_to_homeomorphism, FiniteSpace, PointSet,
    MAX_ENUMERATED_POINTS,
};

/// Instance bounds for [`verify_sequential_spaces`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequentialBounds {
    /// Largest labeled space whose mode-open family is computed.
    pub max_points: usize,
    /// Largest modulus in the residue ideal library.
    pub max_modulus: Index,
    /// Finite index domain for the exhaustive ideal-pair battery; 0 skips it.
    pub finite_domain: usize,
    /// Size of the labeled spaces whose partitions give quotients.
    pub quotient_points: usize,
    /// Largest space (up to homeomorphism) for the map and modification checks.
    pub map_points: usize,
    /// Longest period of the functions in the map and modification checks.
    pub max_period: usize,
}

impl Default for SequentialBounds {
    fn default() -> Self {
        SequentialBounds {
            max_points: 4,
            max_modulus: 4,
            finite_domain: 3,
            quotient_points: 3,
            map_points: 3,
            max_period: 3,
        }
    }
}

impl SequentialBounds {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("points", self.max_points, MAX_ENUMERATED_POINTS),
            ("modulus", self.max_modulus as usize, 6),
            ("finite domain", self.finite_domain, 4),
            (
                "quotient points",
                self.quotient_points,
                MAX_ENUMERATED_POINTS,
            ),
            ("map points", self.map_points, 3),
            ("period", self.max_period, 4),
        ];
        for (what, got, max) in caps {
            if got > max {
                return Err(Error::TooLarge { what, got, max });
            }
        }
        if self.max_points == 0 {
            return Err(Error::Config("at least one point is needed".into()));
        }
        Ok(())
    }

    fn to_map(self) -> BTreeMap<String, Value> {
        BTreeMap::from([
            ("k".to_string(), json!(self.max_points)),
            ("m".to_string(), json!(self.max_modulus)),
            ("n".to_string(), json!(self.finite_domain)),
            ("q".to_string(), json!(self.quotient_points)),
            ("c".to_string(), json!(self.map_points)),
            ("p".to_string(), json!(self.max_period)),
        ])
    }
}

#[derive(Clone, Copy)]
#[repr(usize)]
enum C {
    MethodsAgree,
    CounterexampleReplays,
    TrivialSetsOpen,
    OpenImpliesModeOpen,
    ClosedImpliesModeClosed,
    UnionsOfOpens,
    UnionsOfClosed,
    MonotoneInner,
    MonotoneOuter,
    DiscreteCoincidence,
    Sequential,
    ImproperJoinTrivial,
    Tightness,
    SubspaceSequential,
    QuotientSequential,
    QuotientPreimages,
    SumSequential,
    SumComponentwise,
    MapsPreserveLimits,
    ModificationInvariant,
}

const CHECKS: [CheckSpec; 20] = [
    CheckSpec {
        id: "methods-agree",
        statement:
            "sequence search and minimal-neighborhood characterization agree on mode-openness",
        gating: true,
    },
    CheckSpec {
        id: "counterexample-replays",
        statement: "each refuting sequence lies outside O and converges to its point of O",
        gating: true,
    },
    CheckSpec {
        id: "trivial-sets-mode-open",
        statement: "∅ and X are mode-open",
        gating: true,
    },
    CheckSpec {
        id: "open-implies-mode-open",
        statement: "I∪K proper: every open set is I^K-open",
        gating: true,
    },
    CheckSpec {
        id: "closed-implies-mode-closed",
        statement: "I∪K proper: every closed set is I^K-closed",
        gating: true,
    },
    CheckSpec {
        id: "unions-of-mode-opens",
        statement: "A, B I^K-open ⟹ A ∪ B I^K-open",
        gating: true,
    },
    CheckSpec {
        id: "unions-of-mode-closed",
        statement: "A, B I^K-closed ⟹ A ∪ B I^K-closed",
        gating: true,
    },
    CheckSpec {
        id: "monotone-inner",
        statement: "K1 ⊆ K2: I^K2-open ⟹ I^K1-open",
        gating: true,
    },
    CheckSpec {
        id: "monotone-outer",
        statement: "I1 ⊆ I2: I2^K-open ⟹ I1^K-open",
        gating: true,
    },
    CheckSpec {
        id: "discrete-coincidence",
        statement: "discrete X, I∪K proper: every set is I^K-open",
        gating: true,
    },
    CheckSpec {
        id: "sequential",
        statement: "every I^K-open set is open",
        gating: true,
    },
    CheckSpec {
        id: "improper-join-trivial-opens",
        statement: "I∪K improper: the I^K-open sets are exactly ∅ and X",
        gating: true,
    },
    CheckSpec {
        id: "tightness",
        statement: "closure(A) = ∪ closure({a}), a ∈ A",
        gating: true,
    },
    CheckSpec {
        id: "subspace-sequential",
        statement: "I^K-open and I^K-closed subspaces are I^K-sequential",
        gating: true,
    },
    CheckSpec {
        id: "quotient-sequential",
        statement: "every quotient is I^K-sequential",
        gating: true,
    },
    CheckSpec {
        id: "quotient-preimages",
        statement: "the projection pulls I^K-open sets back to I^K-open sets",
        gating: true,
    },
    CheckSpec {
        id: "sum-sequential",
        statement: "a disjoint sum is I^K-sequential",
        gating: true,
    },
    CheckSpec {
        id: "sum-componentwise",
        statement: "I∪K proper: F is I^K-closed in a sum iff each trace on a summand is",
        gating: true,
    },
    CheckSpec {
        id: "maps-preserve-limits",
        statement: "continuous h: f → x in I^K ⟹ h∘f → h(x) in I^K",
        gating: true,
    },
    CheckSpec {
        id: "modification-invariant",
        statement: "changing f on a member of the ideal keeps its limits",
        gating: true,
    },
];

/// Ideal pairs of one index domain, with their order and ideality.
struct Pairs {
    domain: IndexDomain,
    ideals: Vec<Ideal>,
    modes: Vec<Mode>,
    proper: Vec<bool>,
    sub: Vec<Vec<bool>>,
}

impl Pairs {
    fn new(domain: IndexDomain, ideals: Vec<Ideal>) -> Result<Pairs> {
        let n = ideals.len();
        let mut modes = Vec::with_capacity(n * n);
        let mut proper = Vec::with_capacity(n * n);
        for i in &ideals {
            for k in &ideals {
                modes.push(Mode::ik(i.clone(), k.clone())?);
                proper.push(i.join(k)?.is_proper());
            }
        }
        let sub = ideals
            .iter()
            .map(|a| {
                ideals
                    .iter()
                    .map(|b| a.is_subideal_of(b))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Pairs {
            domain,
            ideals,
            modes,
            proper,
            sub,
        })
    }

    fn len(&self) -> usize {
        self.ideals.len()
    }

    fn config(&self, space: &FiniteSpace, pair: usize) -> LabConfig {
        let n = self.len();
        LabConfig::describe(space, self.domain)
            .with_ideal("I", &self.ideals[pair / n])
            .with_ideal("K", &self.ideals[pair % n])
            .with_mode("I^K")
    }
}

fn sample(cfg: LabConfig, space: &FiniteSpace, set: Option<PointSet>, check: C) -> Value {
    let cfg = match set {
        Some(a) => cfg.with_set(a, space),
        None => cfg,
    };
    cfg.with_check(CHECKS[check as usize].id).to_value()
}

fn bit(a: PointSet) -> u64 {
    1 << a.bits()
}

fn members(fam: u64, k: usize) -> impl Iterator<Item = PointSet> {
    PointSet::all_subsets(k).filter(move |&a| fam & bit(a) != 0)
}

fn open_family(space: &FiniteSpace) -> u64 {
    space.opens().iter().fold(0, |acc, &o| acc | bit(o))
}

/// Mode-open family as a bitmask over subsets, recording method agreement
/// and counterexample replay along the way.
fn family(
    space: &FiniteSpace,
    mode: &Mode,
    t: &mut Tally,
    cfg: &dyn Fn() -> LabConfig,
) -> Result<u64> {
    let mut fam = 0;
    for o in PointSet::all_subsets(space.len()) {
        let searched = open_by_search(space, o, mode, &FastPath)?;
        let characterized = open_by_characterization(space, o, mode)?;
        t.record(
            C::MethodsAgree as usize,
            searched.is_mode_open == characterized.is_mode_open,
            || sample(cfg(), space, Some(o), C::MethodsAgree),
        );
        if let Some((f, x)) = &searched.counterexample {
            let v = decide(f, *x, mode, space)?;
            let ok = f.range().is_subset(space.whole().difference(o))
                && o.contains(*x)
                && v.converges
                && replay_witnesses(f, *x, mode, space, &v.witnesses)?;
            t.record(C::CounterexampleReplays as usize, ok, || {
                let c = cfg().with_function(f, space).with_point(*x, space);
                sample(c, space, Some(o), C::CounterexampleReplays)
            });
        }
        if searched.is_mode_open {
            fam |= bit(o);
        }
    }
    Ok(fam)
}

fn record_sequential(
    t: &mut Tally,
    check: C,
    space: &FiniteSpace,
    fam: u64,
    cfg: &dyn Fn() -> LabConfig,
) {
    let bad = members(fam & !open_family(space), space.len()).next();
    t.record(check as usize, bad.is_none(), || {
        sample(cfg(), space, bad, check)
    });
}

/// All checks that need only one space and its families, one per pair.
fn space_checks(space: &FiniteSpace, pairs: &Pairs) -> Result<(Tally, Vec<u64>)> {
    let mut t = Tally::new(CHECKS.len());
    let k = space.len();
    let whole = space.whole();
    let mut fams = Vec::with_capacity(pairs.modes.len());
    for (p, mode) in pairs.modes.iter().enumerate() {
        let cfg = || pairs.config(space, p);
        let fam = family(space, mode, &mut t, &cfg)?;
        fams.push(fam);
        t.instances += 1;
        let has = |a: PointSet| fam & bit(a) != 0;
        t.record(
            C::TrivialSetsOpen as usize,
            has(PointSet::EMPTY) && has(whole),
            || sample(cfg(), space, None, C::TrivialSetsOpen),
        );
        if pairs.proper[p] {
            for &o in space.opens() {
                t.record(C::OpenImpliesModeOpen as usize, has(o), || {
                    sample(cfg(), space, Some(o), C::OpenImpliesModeOpen)
                });
                let closed = whole.difference(o);
                t.record(
                    C::ClosedImpliesModeClosed as usize,
                    has(whole.difference(closed)),
                    || sample(cfg(), space, Some(closed), C::ClosedImpliesModeClosed),
                );
            }
            if space.is_discrete() {
                let all = PointSet::all_subsets(k).fold(0, |acc, a| acc | bit(a));
                t.record(C::DiscreteCoincidence as usize, fam == all, || {
                    sample(cfg(), space, None, C::DiscreteCoincidence)
                });
            }
        } else {
            t.degenerate += 1;
            t.record(
                C::ImproperJoinTrivial as usize,
                fam == bit(PointSet::EMPTY) | bit(whole),
                || sample(cfg(), space, None, C::ImproperJoinTrivial),
            );
        }
        for a in members(fam, k) {
            for b in members(fam, k) {
                t.record(C::UnionsOfOpens as usize, has(a.union(b)), || {
                    sample(cfg(), space, Some(a.union(b)), C::UnionsOfOpens)
                });
                // complements of mode-opens are the mode-closed sets
                let (ca, cb) = (whole.difference(a), whole.difference(b));
                t.record(
                    C::UnionsOfClosed as usize,
                    has(whole.difference(ca.union(cb))),
                    || sample(cfg(), space, Some(ca.union(cb)), C::UnionsOfClosed),
                );
            }
        }
        record_sequential(&mut t, C::Sequential, space, fam, &cfg);
    }
    let n = pairs.len();
    for i in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                if !pairs.sub[k1][k2] {
                    continue;
                }
                let (small, large) = (fams[i * n + k1], fams[i * n + k2]);
                t.record(C::MonotoneInner as usize, large & !small == 0, || {
                    let cfg = pairs
                        .config(space, i * n + k1)
                        .with_ideal("J", &pairs.ideals[k2]);
                    sample(
                        cfg,
                        space,
                        members(large & !small, space.len()).next(),
                        C::MonotoneInner,
                    )
                });
                // the same triple read with the roles of I and K swapped
                let (small, large) = (fams[k1 * n + i], fams[k2 * n + i]);
                t.record(C::MonotoneOuter as usize, large & !small == 0, || {
                    let cfg = pairs
                        .config(space, k1 * n + i)
                        .with_ideal("J", &pairs.ideals[k2]);
                    sample(
                        cfg,
                        space,
                        members(large & !small, space.len()).next(),
                        C::MonotoneOuter,
                    )
                });
            }
        }
    }
    for a in PointSet::all_subsets(k) {
        let pointwise = a.iter().fold(PointSet::EMPTY, |acc, x| {
            acc.union(space.closure(PointSet::singleton(x)))
        });
        t.record(C::Tightness as usize, space.closure(a) == pointwise, || {
            sample(
                LabConfig::describe(space, pairs.domain),
                space,
                Some(a),
                C::Tightness,
            )
        });
    }
    Ok((t, fams))
}

fn subspace_checks(space: &FiniteSpace, pairs: &Pairs, fams: &[u64]) -> Result<Tally> {
    let mut t = Tally::new(CHECKS.len());
    let whole = space.whole();
    for (p, mode) in pairs.modes.iter().enumerate() {
        let fam = fams[p];
        for y in PointSet::all_subsets(space.len()) {
            let open = fam & bit(y) != 0;
            let closed = fam & bit(whole.difference(y)) != 0;
            if y.is_empty() || y == whole || !(open || closed) {
                continue;
            }
            let sub = space.subspace(y)?;
            let cfg = || pairs.config(&sub, p);
            let sub_fam = family(&sub, mode, &mut t, &cfg)?;
            record_sequential(&mut t, C::SubspaceSequential, &sub, sub_fam, &cfg);
        }
    }
    Ok(t)
}

/// Partitions of `{0..k}` into nonempty blocks.
fn partitions(k: usize) -> Vec<Vec<PointSet>> {
    fn grow(x: usize, k: usize, blocks: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        if x == k {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].insert(x);
            grow(x + 1, k, blocks, out);
            blocks[b] = blocks[b].difference(PointSet::singleton(x));
        }
        blocks.push(PointSet::singleton(x));
        grow(x + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    grow(0, k, &mut Vec::new(), &mut out);
    out
}

fn quotient_checks(space: &FiniteSpace, pairs: &Pairs) -> Result<Tally> {
    let mut t = Tally::new(CHECKS.len());
    let mut fams = Vec::with_capacity(pairs.modes.len());
    for (p, mode) in pairs.modes.iter().enumerate() {
        fams.push(family(space, mode, &mut t, &|| pairs.config(space, p))?);
    }
    for blocks in partitions(space.len()) {
        let (y, proj) = space.quotient(&blocks)?;
        for (p, mode) in pairs.modes.iter().enumerate() {
            let cfg = || pairs.config(&y, p);
            let fam = family(&y, mode, &mut t, &cfg)?;
            record_sequential(&mut t, C::QuotientSequential, &y, fam, &cfg);
            for v in members(fam, y.len()) {
                let pre = proj.preimage(v);
                t.record(
                    C::QuotientPreimages as usize,
                    fams[p] & bit(pre) != 0,
                    || {
                        sample(
                            pairs.config(space, p),
                            space,
                            Some(pre),
                            C::QuotientPreimages,
                        )
                    },
                );
            }
        }
    }
    Ok(t)
}

fn sum_checks(a: &FiniteSpace, b: &FiniteSpace, pairs: &Pairs) -> Result<Tally> {
    let mut t = Tally::new(CHECKS.len());
    let sum = FiniteSpace::disjoint_sum(&[a, b])?;
    let shift = a.len();
    for (p, mode) in pairs.modes.iter().enumerate() {
        let cfg = || pairs.config(&sum, p);
        let fam = family(&sum, mode, &mut t, &cfg)?;
        record_sequential(&mut t, C::SumSequential, &sum, fam, &cfg);
        let fa = family(a, mode, &mut t, &|| pairs.config(a, p))?;
        let fb = family(b, mode, &mut t, &|| pairs.config(b, p))?;
        if !pairs.proper[p] {
            continue;
        }
        let closed = |fam: u64, space: &FiniteSpace, f: PointSet| {
            fam & bit(space.whole().difference(f)) != 0
        };
        for f in PointSet::all_subsets(sum.len()) {
            let fa_part = PointSet::from_bits(f.bits() & a.whole().bits());
            let fb_part = PointSet::from_bits(f.bits() >> shift);
            let whole = closed(fam, &sum, f);
            let parts = closed(fa, a, fa_part) && closed(fb, b, fb_part);
            t.record(C::SumComponentwise as usize, whole == parts, || {
                sample(cfg(), &sum, Some(f), C::SumComponentwise)
            });
        }
    }
    Ok(t)
}

fn map_checks(
    src: &FiniteSpace,
    tgt: &FiniteSpace,
    pairs: &Pairs,
    max_period: usize,
) -> Result<Tally> {
    let mut t = Tally::new(CHECKS.len());
    let maps: Vec<_> = all_maps(src, tgt)
        .into_iter()
        .filter(|h| h.is_continuous())
        .collect();
    for f in periodic_functions(src.len(), max_period) {
        for (p, mode) in pairs.modes.iter().enumerate() {
            let limits: Vec<_> = src
                .points()
                .filter_map(|x| {
                    decide(&f, x, mode, src)
                        .map(|v| v.converges.then_some(x))
                        .transpose()
                })
                .collect::<Result<_>>()?;
            for h in &maps {
                let g = f.compose(h);
                for &x in &limits {
                    let ok = decide(&g, h.apply(x), mode, tgt)?.converges;
                    t.record(C::MapsPreserveLimits as usize, ok, || {
                        let context = json!({
                            "map": h.image().iter().map(|&q| tgt.name(q)).collect::<Vec<_>>(),
                            "target": LabConfig::describe(tgt, pairs.domain).space,
                        });
                        let cfg = pairs
                            .config(src, p)
                            .with_function(&f, src)
                            .with_point(x, src);
                        sample(cfg.with_context(context), src, None, C::MapsPreserveLimits)
                    });
                }
            }
        }
    }
    Ok(t)
}

// Members of `j` to modify on: its generators, a finite set, and a
// generator padded with a finite set.
fn modification_sets(j: &Ideal) -> Result<Vec<EpSet>> {
    let finite = EpSet::from_indices(j.domain(), &[0, 2])?;
    let mut out = vec![finite.clone()];
    out.extend(j.generators().iter().cloned());
    if let Some(g) = j.generators().first() {
        out.push(g.union(&finite)?);
    }
    Ok(out)
}

fn modification_checks(space: &FiniteSpace, pairs: &Pairs, max_period: usize) -> Result<Tally> {
    let mut t = Tally::new(CHECKS.len());
    let n = pairs.len();
    let sets: Vec<Vec<EpSet>> = pairs
        .ideals
        .iter()
        .map(modification_sets)
        .collect::<Result<_>>()?;
    for f in periodic_functions(space.len(), max_period) {
        for i in 0..n {
            for k in 0..n {
                let ik = &pairs.modes[i * n + k];
                let cases = [
                    ("I", Mode::base(pairs.ideals[i].clone()), &sets[i]),
                    ("K", Mode::base(pairs.ideals[k].clone()), &sets[k]),
                    ("I^K", ik.clone(), &sets[i]),
                    ("I^K", ik.clone(), &sets[k]),
                ];
                for (name, mode, sets) in &cases {
                    for a in sets.iter() {
                        for y in space.points() {
                            let g = modify_on_set(&f, a, &FunctionSeq::constant(pairs.domain, y))?;
                            for x in space.points() {
                                let same = decide(&f, x, mode, space)?.converges
                                    == decide(&g, x, mode, space)?.converges;
                                t.record(C::ModificationInvariant as usize, same, || {
                                    let cfg = pairs
                                        .config(space, i * n + k)
                                        .with_mode(name)
                                        .with_function(&f, space)
                                        .with_point(x, space)
                                        .with_context(json!({ "modified_on": a.to_string(), "value": space.name(y) }));
                                    sample(cfg, space, None, C::ModificationInvariant)
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(t)
}

fn labeled(max_points: usize) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for k in 1..=max_points {
        out.extend(enumerate_topologies(k)?);
    }
    Ok(out)
}

fn classes(max_points: usize) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for k in 1..=max_points {
        out.extend(topologies_up_to_homeomorphism(k)?);
    }
    Ok(out)
}

fn battery(pairs: &Pairs, bounds: &SequentialBounds, omega: bool) -> Result<Tally> {
    let n_checks = CHECKS.len();
    let max_points = if omega {
        bounds.max_points
    } else {
        bounds.max_points.min(3)
    };
    let spaces = labeled(max_points)?;
    let mut parts: Vec<Tally> = spaces
        .par_iter()
        .map(|s| space_checks(s, pairs).map(|(t, _)| t))
        .collect::<Result<_>>()?;
    let reps = classes(max_points)?;
    parts.extend(
        reps.par_iter()
            .map(|s| {
                let (_, fams) = space_checks(s, pairs)?;
                subspace_checks(s, pairs, &fams)
            })
            .collect::<Result<Vec<_>>>()?,
    );
    let quotient_sources = if bounds.quotient_points == 0 {
        Vec::new()
    } else {
        enumerate_topologies(bounds.quotient_points)?
    };
    parts.extend(
        quotient_sources
            .par_iter()
            .map(|s| quotient_checks(s, pairs))
            .collect::<Result<Vec<_>>>()?,
    );
    let sums: Vec<(&FiniteSpace, &FiniteSpace)> = reps
        .iter()
        .flat_map(|a| reps.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.len() + b.len() <= max_points)
        .collect();
    parts.extend(
        sums.par_iter()
            .map(|(a, b)| sum_checks(a, b, pairs))
            .collect::<Result<Vec<_>>>()?,
    );
    if omega && bounds.max_period > 0 {
        let small = classes(bounds.map_points)?;
        let map_pairs: Vec<(&FiniteSpace, &FiniteSpace)> = small
            .iter()
            .flat_map(|a| small.iter().map(move |b| (a, b)))
            .collect();
        parts.extend(
            map_pairs
                .par_iter()
                .map(|(a, b)| map_checks(a, b, pairs, bounds.max_period))
                .collect::<Result<Vec<_>>>()?,
        );
        parts.extend(
            small
                .par_iter()
                .map(|s| modification_checks(s, pairs, bounds.max_period))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(Tally::merge_all(n_checks, parts))
}

/// Runs the mode-openness battery: agreement of the two openness procedures,
/// the closure properties of mode-open families, monotonicity in both
/// ideals, sequentiality of every enumerated space and of subspaces,
/// quotients and sums, preservation of limits by continuous maps and by
/// modification on a member of the ideal, and the tightness identity.
/// Pairs whose join is improper are counted as degenerate.
pub fn verify_sequential_spaces(bounds: SequentialBounds) -> Result<Report> {
    bounds.validate()?;
    let lib = residue_library(bounds.max_modulus)
        .into_iter()
        .map(|(_, i)| i)
        .collect();
    let omega = Pairs::new(IndexDomain::PeriodicOmega, lib)?;
    let mut tally = battery(&omega, &bounds, true)?;
    if bounds.finite_domain > 0 {
        let domain = IndexDomain::finite(bounds.finite_domain)?;
        let finite = Pairs::new(domain, enumerate_ideals_finite(domain)?.collect())?;
        tally.merge(battery(&finite, &bounds, false)?);
    }
    Ok(tally.into_report("s3", &CHECKS, bounds.to_map()))
}
