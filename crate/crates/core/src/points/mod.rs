//! Cluster points and limit points of a function under an ideal pair.
//!
//! For a point `x` write `A_x = {s : f(s) ∈ U(x)}`, `U(x)` the minimal
//! neighborhood. The witness scheme asks for some `M ∈ I*`; how the indices
//! off `M` are treated gives two readings:
//!
//! - [`Semantics::Trace`] looks only at `{s ∈ M : f(s) ∈ U}`. Taking `M = S`
//!   is best, so `x` is a cluster point iff `A_x ∉ K`: the `K`-cluster points.
//! - [`Semantics::Padded`] sets the function to `x` off `M` first, which adds
//!   `S \ M` to every hit set. Taking `S \ M` as large as possible (the grand
//!   union `G` of `I`), `x` is a cluster point iff `A_x ∪ G ∉ K`. When
//!   `I ⊄ K` that holds for every point.
//!
//! Limit points need a set `N ∉ K` along which the function converges in the
//! ordinary sense. On a finite space that is the case iff the hit set is
//! `K`-positive, so limit points and cluster points coincide.

mod battery;
mod realize;

pub use battery::{verify_cluster_points, ClusterBounds};
pub use realize::realize_cluster_set;

use serde::{Deserialize, Serialize};

use crate::convergence::{bad_set, candidates, hit_set, pad_outside, FunctionSeq};
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::indexsets::{lcm, EpSet, Index, IndexDomain};
use crate::topology::{FiniteSpace, Point, PointSet};

/// How the witness scheme is read when deciding cluster points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Only the indices inside the witness set count.
    #[default]
    Trace,
    /// The function is padded with the candidate point off the witness set.
    Padded,
}

impl Semantics {
    pub const BOTH: [Semantics; 2] = [Semantics::Trace, Semantics::Padded];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Trace => "trace",
            Semantics::Padded => "padded",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Semantics> {
        match s {
            "trace" => Ok(Semantics::Trace),
            "padded" => Ok(Semantics::Padded),
            _ => Err(Error::Config(format!(
                "unknown semantics {s:?}, expected trace or padded"
            ))),
        }
    }
}

/// How one point was decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterRow {
    pub point: Point,
    /// `A_x = {s : f(s) ∈ U(x)}`.
    pub hits: EpSet,
    pub hits_in_i: bool,
    pub hits_in_k: bool,
    /// The set tested against `K`: `A_x`, or `A_x ∪ G` when padded.
    pub tested: EpSet,
    pub cluster: bool,
}

fn check_pair(f: &FunctionSeq, i: &Ideal, k: &Ideal, space: &FiniteSpace) -> Result<()> {
    f.domain().check_same(i.domain())?;
    f.domain().check_same(k.domain())?;
    f.check_in(space)?;
    if !i.is_proper() || !k.is_proper() {
        return Err(Error::ImproperIdeal);
    }
    Ok(())
}

/// Every point with the sets that decide it.
pub fn cluster_details(
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    space: &FiniteSpace,
    sem: Semantics,
) -> Result<Vec<ClusterRow>> {
    check_pair(f, i, k, space)?;
    space
        .points()
        .map(|x| {
            let hits = hit_set(f, space.min_nbhd(x));
            let tested = match sem {
                Semantics::Trace => hits.clone(),
                Semantics::Padded => &hits | i.grand_union(),
            };
            Ok(ClusterRow {
                point: x,
                hits_in_i: i.contains(&hits)?,
                hits_in_k: k.contains(&hits)?,
                cluster: !k.contains(&tested)?,
                hits,
                tested,
            })
        })
        .collect()
}

/// `C_f(I^K)` under `sem`.
pub fn cluster_points(
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    space: &FiniteSpace,
    sem: Semantics,
) -> Result<PointSet> {
    Ok(cluster_details(f, i, k, space, sem)?
        .into_iter()
        .filter(|r| r.cluster)
        .map(|r| r.point)
        .collect())
}

/// `C_f(K)`: points whose hit set is `K`-positive. May be called with an
/// improper ideal, which has no cluster points.
pub fn plain_cluster_points(f: &FunctionSeq, k: &Ideal, space: &FiniteSpace) -> Result<PointSet> {
    f.domain().check_same(k.domain())?;
    f.check_in(space)?;
    let mut out = PointSet::EMPTY;
    for x in space.points() {
        if !k.contains(&hit_set(f, space.min_nbhd(x)))? {
            out.insert(x);
        }
    }
    Ok(out)
}

fn search_window(f: &FunctionSeq, ideals: &[&Ideal]) -> Index {
    if f.domain().is_finite() {
        return 0;
    }
    let (mut q, mut p) = f.shape();
    for g in ideals.iter().flat_map(|i| i.generators()) {
        q = q.max(g.head_len());
        p = lcm(p, g.modulus());
    }
    q + 2 * p
}

/// Cluster points by searching witnesses `M ∈ I*` and testing every open
/// neighborhood, as the definition reads. Slow; for cross-checks.
pub fn cluster_points_by_search(
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    space: &FiniteSpace,
    sem: Semantics,
    budget: u64,
) -> Result<PointSet> {
    check_pair(f, i, k, space)?;
    let window = search_window(f, &[i, k]);
    let needed: u128 = match f.domain() {
        IndexDomain::Finite(n) => 1 << n,
        IndexDomain::PeriodicOmega => {
            1u128 << (i.generators().len() as u32 + window as u32).min(120)
        }
    };
    if needed > budget as u128 {
        return Err(Error::OracleBudget { needed, budget });
    }
    let ms = candidates(i, window);
    let mut out = PointSet::EMPTY;
    for x in space.points() {
        for m in &ms {
            let g = match sem {
                Semantics::Trace => None,
                Semantics::Padded => Some(pad_outside(f, m, x)?),
            };
            let mut all = true;
            for &u in space.opens().iter().filter(|u| u.contains(x)) {
                let hits = match &g {
                    None => &hit_set(f, u) & m,
                    Some(g) => hit_set(g, u),
                };
                if k.contains(&hits)? {
                    all = false;
                    break;
                }
            }
            if all {
                out.insert(x);
                break;
            }
        }
    }
    Ok(out)
}

/// `L_f(I^K)` under `sem`; index domain ω only.
pub fn limit_points(
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    space: &FiniteSpace,
    sem: Semantics,
) -> Result<PointSet> {
    if f.domain().is_finite() {
        return Err(Error::NeedsOmega { op: "limit points" });
    }
    // N = the tested set itself: the function stays in U(x) along it.
    cluster_points(f, i, k, space, sem)
}

/// `L_f(K)`: points reached along some `K`-positive set; ω only.
pub fn plain_limit_points(f: &FunctionSeq, k: &Ideal, space: &FiniteSpace) -> Result<PointSet> {
    if f.domain().is_finite() {
        return Err(Error::NeedsOmega { op: "limit points" });
    }
    plain_cluster_points(f, k, space)
}

/// Limit points by direct search: witnesses `M` are complements of unions
/// of `I`'s generators; sets `N` range over unions of residue classes
/// modulo the lcm of every period in the instance, from the longest head on.
/// `x` qualifies if some `N ∉ K` meets the bad set of `U(x)` (of the
/// function as seen through `M`) in a finite set.
pub fn limit_points_by_search(
    f: &FunctionSeq,
    i: &Ideal,
    k: &Ideal,
    space: &FiniteSpace,
    sem: Semantics,
) -> Result<PointSet> {
    check_pair(f, i, k, space)?;
    if f.domain().is_finite() {
        return Err(Error::NeedsOmega { op: "limit points" });
    }
    let (mut q, mut p) = f.shape();
    for g in i.generators().iter().chain(k.generators()) {
        q = q.max(g.head_len());
        p = lcm(p, g.modulus());
    }
    if p > 16 {
        return Err(Error::TooLarge {
            what: "residue search modulus",
            got: p as usize,
            max: 16,
        });
    }
    let residues = |set: &EpSet| -> u32 {
        (0..p)
            .filter(|&r| set.get(q + r))
            .fold(0, |acc, r| acc | 1 << r)
    };
    let k_mask = residues(k.grand_union());
    let gens = i.generators();
    let mut out = PointSet::EMPTY;
    for x in space.points() {
        let u = space.min_nbhd(x);
        let mut found = false;
        for pick in 0u32..1 << gens.len() {
            let mut dropped = EpSet::empty(IndexDomain::PeriodicOmega);
            for (j, g) in gens.iter().enumerate() {
                if pick >> j & 1 == 1 {
                    dropped = &dropped | g;
                }
            }
            let m = dropped.complement();
            // trace: N must stay inside M; padded: off M the function sits at x
            let bad = match sem {
                Semantics::Trace => &bad_set(f, u) | &dropped,
                Semantics::Padded => bad_set(&pad_outside(f, &m, x)?, u),
            };
            let bad_mask = residues(&bad);
            // along N the bad indices are finite iff N avoids every bad class;
            // N ∉ K iff N has a class outside K's grand union
            found = (1u32..1 << p).any(|n| n & bad_mask == 0 && n & !k_mask != 0);
            if found {
                break;
            }
        }
        if found {
            out.insert(x);
        }
    }
    Ok(out)
}
