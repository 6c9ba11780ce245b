//! Exhaustive checks of cluster and limit points.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    cluster_points, cluster_points_by_search, limit_points, limit_points_by_search,
    plain_cluster_points, plain_limit_points, realize_cluster_set, Semantics,
};
use crate::config::LabConfig;
use crate::convergence::{all_finite_functions, periodic_functions, FunctionSeq};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals_finite, residue_library, Ideal};
use crate::indexsets::{Index, IndexDomain};
use crate::report::{CheckSpec, Report, Tally};
use crate::topology::{
    enumerate_topologies, topologies_up_to_homeomorphism, FiniteSpace, PointSet,
    MAX_ENUMERATED_POINTS,
};

/// Instance bounds for [`verify_cluster_points`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterBounds {
    /// Largest space (up to homeomorphism) in the ω and finite-domain batteries.
    pub max_points: usize,
    /// Longest period of the functions on ω.
    pub max_period: usize,
    /// Largest modulus in the residue ideal library.
    pub max_modulus: Index,
    /// Finite index domains `1..=n` for the closed-form cross-check; 0 skips it.
    pub finite_domain: usize,
    /// Largest labeled space for the realization round trip.
    pub realize_points: usize,
    /// Restrict to one reading; both when `None`.
    pub semantics: Option<Semantics>,
}

impl Default for ClusterBounds {
    fn default() -> Self {
        ClusterBounds {
            max_points: 3,
            max_period: 4,
            max_modulus: 6,
            finite_domain: 5,
            realize_points: 4,
            semantics: None,
        }
    }
}

impl ClusterBounds {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("points", self.max_points, MAX_ENUMERATED_POINTS),
            (
                "realization points",
                self.realize_points,
                MAX_ENUMERATED_POINTS,
            ),
            ("period", self.max_period, 4),
            ("modulus", self.max_modulus as usize, 6),
            ("finite domain", self.finite_domain, 5),
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

    fn semantics(&self) -> Vec<Semantics> {
        match self.semantics {
            Some(s) => vec![s],
            None => Semantics::BOTH.to_vec(),
        }
    }

    fn to_map(self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::from([
            ("k".to_string(), json!(self.max_points)),
            ("p".to_string(), json!(self.max_period)),
            ("m".to_string(), json!(self.max_modulus)),
            ("n".to_string(), json!(self.finite_domain)),
            ("r".to_string(), json!(self.realize_points)),
        ]);
        if let Some(s) = self.semantics {
            m.insert("semantics".to_string(), json!(s.name()));
        }
        m
    }
}

// Per-semantics checks come first, trace block then padded block.
const PER_SEMANTICS: usize = 7;
const CLOSED: usize = 0;
const UNION_CLUSTERS: usize = 1;
const LIMITS_IN_CLUSTERS: usize = 2;
const UNION_LIMITS: usize = 3;
const OBSERVATION: usize = 4;
const LIMIT_SEARCH: usize = 5;
const CLOSED_FORM: usize = 6;
const REALIZE_FIN: usize = 2 * PER_SEMANTICS;
const REALIZE_RESIDUE: usize = REALIZE_FIN + 1;
const PARTITION_FOUND: usize = REALIZE_FIN + 2;
const REALIZE_SOME_PAIR: usize = REALIZE_FIN + 3;

macro_rules! semantic_checks {
    ($sem:literal, $gate_observation:literal) => {
        [
            CheckSpec {
                id: concat!($sem, "/cluster-set-closed"),
                statement: "C_f(I^K) is closed",
                gating: true,
            },
            CheckSpec {
                id: concat!($sem, "/union-clusters-inside"),
                statement: "C_f(I∪K) ⊆ C_f(I^K)",
                gating: true,
            },
            CheckSpec {
                id: concat!($sem, "/limits-inside-clusters"),
                statement: "L_f(I^K) ⊆ C_f(I^K)",
                gating: true,
            },
            CheckSpec {
                id: concat!($sem, "/union-limits-inside"),
                statement: "L_f(I∪K) ⊆ L_f(I^K) (finite-model evidence)",
                gating: true,
            },
            CheckSpec {
                id: concat!($sem, "/clusters-inside-k-clusters"),
                statement: "C_f(I^K) ⊆ C_f(K)",
                gating: $gate_observation,
            },
            CheckSpec {
                id: concat!($sem, "/limit-search-agrees"),
                statement: "limit points by residue search = limit points by characterization",
                gating: true,
            },
            CheckSpec {
                id: concat!($sem, "/closed-form-matches-search"),
                statement: "closed form of C_f(I^K) = witness search, finite index domains",
                gating: true,
            },
        ]
    };
}

const TRACE_CHECKS: [CheckSpec; PER_SEMANTICS] = semantic_checks!("trace", true);
const PADDED_CHECKS: [CheckSpec; PER_SEMANTICS] = semantic_checks!("padded", false);
const OTHER_CHECKS: [CheckSpec; 4] = [
    CheckSpec {
        id: "realize-round-trip-fin",
        statement: "I = K = Fin, F nonempty closed: C of the realized function = F",
        gating: true,
    },
    CheckSpec {
        id: "realize-round-trip-residue",
        statement: "residue pairs with I∪K proper: C of the realized function = F",
        gating: true,
    },
    CheckSpec {
        id: "realize-partition-found",
        statement: "a partition into blocks outside I and K exists within the modulus bound",
        gating: false,
    },
    CheckSpec {
        id: "realize-some-residue-pair",
        statement: "every nonempty closed F: some residue pair other than Fin/Fin realizes F",
        gating: true,
    },
];

fn all_checks() -> Vec<CheckSpec> {
    TRACE_CHECKS
        .iter()
        .chain(&PADDED_CHECKS)
        .chain(&OTHER_CHECKS)
        .copied()
        .collect()
}

fn slot(sem: Semantics, check: usize) -> usize {
    match sem {
        Semantics::Trace => check,
        Semantics::Padded => PER_SEMANTICS + check,
    }
}

/// Runs the cluster-point battery: closedness, the inclusions between
/// cluster and limit sets of `I^K`, `I∪K` and `K`, a residue search for limit
/// points, the closed forms against a witness search on finite index
/// domains, and round trips of [`realize_cluster_set`].
pub fn verify_cluster_points(bounds: ClusterBounds) -> Result<Report> {
    bounds.validate()?;
    let specs = all_checks();
    let mut tally = Tally::new(specs.len());
    let sems = bounds.semantics();
    if bounds.max_period > 0 {
        tally.merge(omega_battery(&bounds, &sems, specs.len())?);
    }
    if bounds.finite_domain > 0 {
        tally.merge(finite_battery(&bounds, &sems, specs.len())?);
    }
    tally.merge(realize_battery(&bounds, specs.len())?);
    let mut report = tally.into_report("s4", &specs, bounds.to_map());
    let keep: Vec<&str> = sems.iter().map(|s| s.name()).collect();
    report.checks.retain(|c| match c.id.split_once('/') {
        Some((prefix, _)) => keep.contains(&prefix),
        None => true,
    });
    Ok(report)
}

fn spaces(max_points: usize) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for k in 1..=max_points {
        out.extend(topologies_up_to_homeomorphism(k)?);
    }
    Ok(out)
}

fn instance(
    space: &FiniteSpace,
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    sem: Semantics,
    id: &str,
) -> LabConfig {
    LabConfig::describe(space, f.domain())
        .with_function(f, space)
        .with_ideal("I", i)
        .with_ideal("K", k)
        .with_mode("I^K")
        .with_semantics(sem)
        .with_check(id)
}

fn sample(
    space: &FiniteSpace,
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    sem: Semantics,
    id: &str,
) -> Value {
    instance(space, f, i, k, sem, id).to_value()
}

fn omega_battery(bounds: &ClusterBounds, sems: &[Semantics], n_checks: usize) -> Result<Tally> {
    let lib: Vec<Ideal> = residue_library(bounds.max_modulus)
        .into_iter()
        .map(|(_, i)| i)
        .collect();
    let spaces = spaces(bounds.max_points)?;
    let specs = all_checks();
    let work: Vec<(usize, FunctionSeq)> = spaces
        .iter()
        .enumerate()
        .flat_map(|(si, s)| {
            periodic_functions(s.len(), bounds.max_period)
                .into_iter()
                .map(move |f| (si, f))
        })
        .collect();
    let parts = work
        .par_iter()
        .map(|(si, f)| -> Result<Tally> {
            let space = &spaces[*si];
            let mut t = Tally::new(n_checks);
            for i in &lib {
                for k in &lib {
                    let join = i.join(k)?;
                    let ideality = join.is_proper();
                    t.instances += 1;
                    if !ideality {
                        t.degenerate += 1;
                    }
                    let k_clusters = plain_cluster_points(f, k, space)?;
                    let union_clusters = plain_cluster_points(f, &join, space)?;
                    let union_limits = plain_limit_points(f, &join, space)?;
                    for &sem in sems {
                        let c = cluster_points(f, i, k, space, sem)?;
                        let l = limit_points(f, i, k, space, sem)?;
                        let rec = |t: &mut Tally, check: usize, ok: bool| {
                            let idx = slot(sem, check);
                            t.record(idx, ok, || sample(space, f, i, k, sem, specs[idx].id));
                        };
                        rec(&mut t, CLOSED, space.is_closed_set(c));
                        rec(&mut t, OBSERVATION, c.is_subset(k_clusters));
                        rec(
                            &mut t,
                            LIMIT_SEARCH,
                            limit_points_by_search(f, i, k, space, sem)? == l,
                        );
                        if ideality {
                            rec(&mut t, UNION_CLUSTERS, union_clusters.is_subset(c));
                            rec(&mut t, LIMITS_IN_CLUSTERS, l.is_subset(c));
                            rec(&mut t, UNION_LIMITS, union_limits.is_subset(l));
                        }
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tally::merge_all(n_checks, parts))
}

fn closed_form(
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    space: &FiniteSpace,
    sem: Semantics,
) -> Result<PointSet> {
    let k_clusters = plain_cluster_points(f, k, space)?;
    Ok(match sem {
        Semantics::Trace => k_clusters,
        Semantics::Padded if !i.is_subideal_of(k)? => space.whole(),
        Semantics::Padded => k_clusters,
    })
}

fn finite_battery(bounds: &ClusterBounds, sems: &[Semantics], n_checks: usize) -> Result<Tally> {
    let spaces = spaces(bounds.max_points)?;
    let specs = all_checks();
    let mut work = Vec::new();
    for n in 1..=bounds.finite_domain {
        let ideals: Vec<Ideal> = enumerate_ideals_finite(IndexDomain::finite(n)?)?.collect();
        for (si, s) in spaces.iter().enumerate() {
            for f in all_finite_functions(n, s.len())? {
                work.push((si, f, ideals.clone()));
            }
        }
    }
    let parts = work
        .par_iter()
        .map(|(si, f, ideals)| -> Result<Tally> {
            let space = &spaces[*si];
            let mut t = Tally::new(n_checks);
            for i in ideals {
                for k in ideals {
                    t.instances += 1;
                    for &sem in sems {
                        let expected = closed_form(f, i, k, space, sem)?;
                        let c = cluster_points(f, i, k, space, sem)?;
                        let searched = cluster_points_by_search(f, i, k, space, sem, u64::MAX)?;
                        let idx = slot(sem, CLOSED_FORM);
                        t.record(idx, expected == c && c == searched, || {
                            sample(space, f, i, k, sem, specs[idx].id)
                        });
                        let idx = slot(sem, CLOSED);
                        t.record(idx, space.is_closed_set(c), || {
                            sample(space, f, i, k, sem, specs[idx].id)
                        });
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tally::merge_all(n_checks, parts))
}

fn realize_battery(bounds: &ClusterBounds, n_checks: usize) -> Result<Tally> {
    let specs = all_checks();
    let fin = Ideal::fin();
    let mut labeled = Vec::new();
    for k in 1..=bounds.realize_points {
        labeled.extend(enumerate_topologies(k)?);
    }
    let round_trip =
        |t: &mut Tally, idx: usize, space: &FiniteSpace, target: PointSet, i: &Ideal, k: &Ideal| {
            match realize_cluster_set(space, target, i, k) {
                Ok(f) => {
                    if idx == REALIZE_RESIDUE {
                        t.record(PARTITION_FOUND, true, || Value::Null);
                    }
                    let c = cluster_points(&f, i, k, space, Semantics::Trace)?;
                    t.record(idx, c == target, || {
                        instance(space, &f, i, k, Semantics::Trace, specs[idx].id)
                            .with_set(target, space)
                            .to_value()
                    });
                    Ok(())
                }
                Err(Error::NoPartition {
                    max_modulus,
                    detail,
                }) => {
                    t.record(PARTITION_FOUND, false, || {
                        LabConfig::describe(space, IndexDomain::PeriodicOmega)
                            .with_ideal("I", i)
                            .with_ideal("K", k)
                            .with_set(target, space)
                            .with_context(json!({ "max_modulus": max_modulus, "detail": detail }))
                            .with_check(specs[PARTITION_FOUND].id)
                            .to_value()
                    });
                    Ok(())
                }
                Err(e) => Err(e),
            }
        };
    let mut t = Tally::new(n_checks);
    for space in &labeled {
        for target in PointSet::all_subsets(space.len()) {
            if !target.is_empty() && space.is_closed_set(target) {
                round_trip(&mut t, REALIZE_FIN, space, target, &fin, &fin)?;
            }
        }
    }
    let lib: Vec<Ideal> = residue_library(bounds.max_modulus)
        .into_iter()
        .map(|(_, i)| i)
        .collect();
    let mut pairs = Vec::new();
    for i in &lib {
        for k in &lib {
            if !(i.generators().is_empty() && k.generators().is_empty()) && i.join(k)?.is_proper() {
                pairs.push((i, k));
            }
        }
    }
    for space in &labeled {
        for target in PointSet::all_subsets(space.len()) {
            if target.is_empty() || !space.is_closed_set(target) {
                continue;
            }
            let mut found = false;
            for &(i, k) in &pairs {
                if let Ok(f) = realize_cluster_set(space, target, i, k) {
                    if cluster_points(&f, i, k, space, Semantics::Trace)? == target {
                        found = true;
                        break;
                    }
                }
            }
            t.record(REALIZE_SOME_PAIR, found, || {
                LabConfig::describe(space, IndexDomain::PeriodicOmega)
                    .with_set(target, space)
                    .with_check(specs[REALIZE_SOME_PAIR].id)
                    .to_value()
            });
        }
    }
    for space in spaces(bounds.max_points.min(3))? {
        for target in PointSet::all_subsets(space.len()) {
            if target.is_empty() || !space.is_closed_set(target) {
                continue;
            }
            for i in &lib {
                for k in &lib {
                    if i.generators().is_empty() && k.generators().is_empty()
                        || !i.join(k)?.is_proper()
                    {
                        continue;
                    }
                    round_trip(&mut t, REALIZE_RESIDUE, &space, target, i, k)?;
                }
            }
        }
    }
    Ok(t)
}
