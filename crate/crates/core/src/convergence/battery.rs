//! Exhaustive checks of the relations between convergence modes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    all_finite_functions, periodic_functions, replay_witnesses, Evaluator, FunctionSeq, Mode,
    Verdict,
};
use crate::config::LabConfig;
use crate::error::{Error, Result};
use crate::ideals::{residue_library, Ideal};
use crate::indexsets::{EpSet, Index, IndexDomain};
use crate::report::{CheckSpec, Report, Tally};
use crate::topology::{
    enumerate_topologies, topologies_up_to_homeomorphism, FiniteSpace, Point, MAX_ENUMERATED_POINTS,
};

/// Instance bounds for [`verify_mode_relations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeRelationBounds {
    /// Largest space, in points.
    pub max_points: usize,
    /// Size of the finite index domain; 0 skips the finite battery.
    pub finite_domain: usize,
    /// Longest period of the functions on ω; 0 skips the ω battery.
    pub max_period: usize,
    /// Largest modulus in the residue ideal library.
    pub max_modulus: Index,
}

impl Default for ModeRelationBounds {
    fn default() -> Self {
        ModeRelationBounds {
            max_points: 3,
            finite_domain: 4,
            max_period: 6,
            max_modulus: 6,
        }
    }
}

impl ModeRelationBounds {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("points", self.max_points, MAX_ENUMERATED_POINTS),
            ("finite domain", self.finite_domain, 6),
            ("period", self.max_period, 8),
            ("modulus", self.max_modulus as usize, 12),
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
            ("n".to_string(), json!(self.finite_domain)),
            ("p".to_string(), json!(self.max_period)),
            ("m".to_string(), json!(self.max_modulus)),
        ])
    }
}

#[derive(Clone, Copy)]
enum C {
    StarCollapse,
    IkImpliesUnion,
    IImpliesIkStar,
    KImpliesIkStar,
    IkStarImpliesIWhenKInI,
    IkStarImpliesKWhenIInK,
    IkStarImpliesI,
    IkStarImpliesK,
    IkImpliesIWhenKInI,
    IkImpliesKWhenIInK,
    KImpliesIk,
    ExtensionImpliesIk,
    KImpliesExtension,
    ExtensionImpliesUnion,
    IStarImpliesIk,
    IStarImpliesUnionStar,
    IkStarImpliesNested,
    MonotoneOuter,
    MonotoneInner,
    Degenerate,
    Witnesses,
    HausdorffExtension,
    HausdorffUnique,
    HausdorffIsDiscrete,
}

const CHECKS: [CheckSpec; 24] = [
    CheckSpec {
        id: "star-collapse",
        statement: "I^(K*) ≡ (I∪K)*",
        gating: true,
    },
    CheckSpec {
        id: "ik-implies-union",
        statement: "I^K ⟹ I∪K",
        gating: true,
    },
    CheckSpec {
        id: "i-implies-ik-star",
        statement: "I ⟹ I^(K*)",
        gating: true,
    },
    CheckSpec {
        id: "k-implies-ik-star",
        statement: "K ⟹ I^(K*)",
        gating: true,
    },
    CheckSpec {
        id: "ik-star-implies-i-when-k-in-i",
        statement: "K ⊆ I: I^(K*) ⟹ I",
        gating: true,
    },
    CheckSpec {
        id: "ik-star-implies-k-when-i-in-k",
        statement: "I ⊆ K: I^(K*) ⟹ K",
        gating: true,
    },
    // False without an inclusion between I and K; kept to show the counterexamples.
    CheckSpec {
        id: "ik-star-implies-i",
        statement: "I^(K*) ⟹ I, with no inclusion assumed",
        gating: false,
    },
    CheckSpec {
        id: "ik-star-implies-k",
        statement: "I^(K*) ⟹ K, with no inclusion assumed",
        gating: false,
    },
    CheckSpec {
        id: "ik-implies-i-when-k-in-i",
        statement: "K ⊆ I: I^K ⟹ I",
        gating: true,
    },
    CheckSpec {
        id: "ik-implies-k-when-i-in-k",
        statement: "I ⊆ K: I^K ⟹ K",
        gating: true,
    },
    CheckSpec {
        id: "k-implies-ik",
        statement: "K ⟹ I^K",
        gating: true,
    },
    CheckSpec {
        id: "extension-implies-ik",
        statement: "J ∈ I, 𝒥 = ⟨K ∪ {J}⟩: 𝒥 ⟹ I^K",
        gating: true,
    },
    CheckSpec {
        id: "k-implies-extension",
        statement: "K ⟹ 𝒥",
        gating: true,
    },
    CheckSpec {
        id: "extension-implies-union",
        statement: "𝒥 ⟹ I∪K",
        gating: true,
    },
    CheckSpec {
        id: "i-star-implies-ik",
        statement: "I* ⟹ I^K",
        gating: true,
    },
    CheckSpec {
        id: "i-star-implies-union-star",
        statement: "I* ⟹ (I∪K)*",
        gating: true,
    },
    CheckSpec {
        id: "ik-star-implies-nested",
        statement: "I^(K*) ⟹ I^(K^J)",
        gating: true,
    },
    CheckSpec {
        id: "monotone-outer",
        statement: "I₁ ⊆ I₂: I₁^K ⟹ I₂^K",
        gating: true,
    },
    CheckSpec {
        id: "monotone-inner",
        statement: "K₁ ⊆ K₂: I^K₁ ⟹ I^K₂",
        gating: true,
    },
    CheckSpec {
        id: "degenerate-converges",
        statement: "I∪K improper: every function I^K-converges to every point, flagged degenerate",
        gating: true,
    },
    CheckSpec {
        id: "witnesses-replay",
        statement: "I^K witnesses lie in I* and replay through the definition",
        gating: true,
    },
    CheckSpec {
        id: "hausdorff-extension",
        statement:
            "Hausdorff X, x₀ an I^K-limit with witness M, 𝒥 = ⟨K ∪ {Mᶜ}⟩: I^K-limits = 𝒥-limits",
        gating: true,
    },
    CheckSpec {
        id: "hausdorff-unique-limit",
        statement: "Hausdorff X: at most one I^K-limit",
        gating: true,
    },
    CheckSpec {
        id: "hausdorff-is-discrete",
        statement: "finite X: Hausdorff ⟺ T1 ⟺ discrete",
        gating: true,
    },
];

/// Runs the mode-relation battery with `eval` answering every query.
///
/// Two batteries: every labeled space with at most `max_points` points and
/// every pair of proper ideals on a finite index domain; and on ω, spaces up
/// to homeomorphism, the residue ideal library and every purely periodic
/// function with period at most `max_period`. Implications are checked for
/// pairs satisfying the ideality condition; pairs failing it are checked
/// for degeneracy instead.
pub fn verify_mode_relations(bounds: ModeRelationBounds, eval: &dyn Evaluator) -> Result<Report> {
    bounds.validate()?;
    let mut tally = Tally::new(CHECKS.len());
    if bounds.finite_domain > 0 {
        tally.merge(finite_battery(bounds, eval)?);
    }
    if bounds.max_period > 0 {
        tally.merge(omega_battery(bounds, eval)?);
    }
    Ok(tally.into_report("s2", &CHECKS, bounds.to_map()))
}

struct Ctx<'a> {
    space: &'a FiniteSpace,
    f: &'a FunctionSeq,
}

impl Ctx<'_> {
    fn sample(&self, check: C, ideals: &[(&str, &Ideal)], mode: &str, x: Option<Point>) -> Value {
        let mut cfg = LabConfig::describe(self.space, self.f.domain())
            .with_function(self.f, self.space)
            .with_mode(mode)
            .with_check(CHECKS[check as usize].id);
        for (name, ideal) in ideals {
            cfg = cfg.with_ideal(name, ideal);
        }
        if let Some(x) = x {
            cfg = cfg.with_point(x, self.space);
        }
        cfg.to_value()
    }
}

fn spaces_up_to(max_points: usize, labeled: bool) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for k in 1..=max_points {
        out.extend(if labeled {
            enumerate_topologies(k)?
        } else {
            topologies_up_to_homeomorphism(k)?
        });
    }
    Ok(out)
}

fn hausdorff_per_space(tally: &mut Tally, space: &FiniteSpace) {
    let h = space.is_hausdorff();
    let ok = h == space.is_t1() && h == space.is_discrete();
    tally.record(C::HausdorffIsDiscrete as usize, ok, || {
        json!({ "check": CHECKS[C::HausdorffIsDiscrete as usize].id, "space": crate::config::SpaceSpec::from_space(space) })
    });
}

// Ideals on {0..n-1} are indexed by the bitmask B of ↓B; the full mask is the improper one.
fn finite_battery(bounds: ModeRelationBounds, eval: &dyn Evaluator) -> Result<Tally> {
    let n = bounds.finite_domain;
    let full = (1usize << n) - 1;
    let ideals: Vec<Ideal> = (0..=full)
        .map(|b| Ideal::principal(EpSet::from_bits(n, b as u32)))
        .collect();
    let base: Vec<Mode> = ideals.iter().cloned().map(Mode::Base).collect();
    let ik: Vec<Vec<Mode>> = ideals[..full]
        .iter()
        .map(|i| {
            ideals[..full]
                .iter()
                .map(|k| Mode::ik(i.clone(), k.clone()))
                .collect()
        })
        .collect::<Result<_>>()?;
    let spaces = spaces_up_to(bounds.max_points, true)?;
    let work: Vec<(usize, FunctionSeq)> = spaces
        .iter()
        .enumerate()
        .flat_map(|(si, s)| {
            all_finite_functions(n, s.len())
                .expect("bounded domain")
                .into_iter()
                .map(move |f| (si, f))
        })
        .collect();
    let parts = work
        .par_iter()
        .map(|(si, f)| -> Result<Tally> {
            let space = &spaces[*si];
            let mut t = Tally::new(CHECKS.len());
            if f.head().iter().all(|&v| v == 0) {
                hausdorff_per_space(&mut t, space);
            }
            let cx = Ctx { space, f };
            let mut ik_v: Vec<Vec<Vec<Verdict>>> = Vec::with_capacity(space.len());
            let mut base_v: Vec<Vec<bool>> = Vec::with_capacity(space.len());
            for x in space.points() {
                let b: Vec<bool> = base
                    .iter()
                    .map(|m| Ok(eval.decide(f, x, m, space)?.converges))
                    .collect::<Result<_>>()?;
                let v: Vec<Vec<Verdict>> = ik
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|m| eval.decide(f, x, m, space))
                            .collect::<Result<_>>()
                    })
                    .collect::<Result<_>>()?;
                finite_point_checks(&mut t, &cx, &ideals, x, &b, &v)?;
                base_v.push(b);
                ik_v.push(v);
            }
            if space.is_hausdorff() {
                for i in 0..full {
                    for k in 0..full {
                        if i | k == full {
                            continue;
                        }
                        hausdorff_checks(&mut t, &cx, eval, &ideals[i], &ideals[k], |x| {
                            &ik_v[x][i][k]
                        })?;
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tally::merge_all(CHECKS.len(), parts))
}

fn finite_point_checks(
    t: &mut Tally,
    cx: &Ctx,
    ideals: &[Ideal],
    x: Point,
    base: &[bool],
    ik: &[Vec<Verdict>],
) -> Result<()> {
    let full = ideals.len() - 1;
    for i in 0..full {
        for k in 0..full {
            let v = &ik[i][k];
            let pair = [("I", &ideals[i]), ("K", &ideals[k])];
            let sample = |c: C, mode: &str| cx.sample(c, &pair, mode, Some(x));
            t.instances += 1;
            t.record(C::KImpliesIk as usize, !base[k] || v.converges, || {
                sample(C::KImpliesIk, "I^K")
            });
            for i2 in (0..full).filter(|&i2| i2 != i && i & i2 == i) {
                t.record(
                    C::MonotoneOuter as usize,
                    !v.converges || ik[i2][k].converges,
                    || {
                        cx.sample(
                            C::MonotoneOuter,
                            &[("I", &ideals[i]), ("J", &ideals[i2]), ("K", &ideals[k])],
                            "J^K",
                            Some(x),
                        )
                    },
                );
            }
            for k2 in (0..full).filter(|&k2| k2 != k && k & k2 == k) {
                t.record(
                    C::MonotoneInner as usize,
                    !v.converges || ik[i][k2].converges,
                    || {
                        cx.sample(
                            C::MonotoneInner,
                            &[("I", &ideals[i]), ("J", &ideals[k2]), ("K", &ideals[k])],
                            "I^J",
                            Some(x),
                        )
                    },
                );
            }
            if i | k == full {
                t.degenerate += 1;
                t.record(C::Degenerate as usize, v.converges && v.degenerate, || {
                    sample(C::Degenerate, "I^K")
                });
                continue;
            }
            let union = base[i | k];
            t.record(C::IkImpliesUnion as usize, !v.converges || union, || {
                sample(C::IkImpliesUnion, "I^K")
            });
            if k & i == k {
                t.record(
                    C::IkImpliesIWhenKInI as usize,
                    !v.converges || base[i],
                    || sample(C::IkImpliesIWhenKInI, "I^K"),
                );
            }
            if i & k == i {
                t.record(
                    C::IkImpliesKWhenIInK as usize,
                    !v.converges || base[k],
                    || sample(C::IkImpliesKWhenIInK, "I^K"),
                );
            }
            // J ranges over all members of I; 𝒥 = ↓(K ∪ J).
            let mut j = i;
            loop {
                let ext = base[k | j];
                t.record(C::ExtensionImpliesIk as usize, !ext || v.converges, || {
                    extension_sample(cx, C::ExtensionImpliesIk, &ideals[i], &ideals[k], j, x)
                });
                if j == 0 {
                    break;
                }
                j = (j - 1) & i;
            }
            // the edges through 𝒥 use J = Mᶜ for the canonical witness, i.e. J = I's union
            let ext = base[k | i];
            t.record(C::KImpliesExtension as usize, !base[k] || ext, || {
                extension_sample(cx, C::KImpliesExtension, &ideals[i], &ideals[k], i, x)
            });
            t.record(C::ExtensionImpliesUnion as usize, !ext || union, || {
                extension_sample(cx, C::ExtensionImpliesUnion, &ideals[i], &ideals[k], i, x)
            });
            if v.converges {
                let mode = Mode::ik(ideals[i].clone(), ideals[k].clone())?;
                let ok = v.witnesses.len() == 1
                    && ideals[i].in_dual_filter(&v.witnesses[0])?
                    && replay_witnesses(cx.f, x, &mode, cx.space, &v.witnesses)?;
                t.record(C::Witnesses as usize, ok, || sample(C::Witnesses, "I^K"));
            }
        }
    }
    Ok(())
}

fn extension_sample(cx: &Ctx, c: C, i: &Ideal, k: &Ideal, j_bits: usize, x: Point) -> Value {
    let n = i.domain().size().expect("finite domain");
    let j = k
        .extend_by_member(&EpSet::from_bits(n, j_bits as u32))
        .expect("same domain");
    cx.sample(c, &[("I", i), ("J", &j), ("K", k)], "J", Some(x))
}

fn hausdorff_checks<'v>(
    t: &mut Tally,
    cx: &Ctx,
    eval: &dyn Evaluator,
    i: &Ideal,
    k: &Ideal,
    ik: impl Fn(Point) -> &'v Verdict,
) -> Result<()> {
    let space = cx.space;
    let limits: Vec<Point> = space.points().filter(|&x| ik(x).converges).collect();
    let pair = [("I", i), ("K", k)];
    t.record(C::HausdorffUnique as usize, limits.len() <= 1, || {
        cx.sample(C::HausdorffUnique, &pair, "I^K", None)
    });
    if let Some(&x0) = limits.first() {
        let m = &ik(x0).witnesses[0];
        let j = k.extend_by_member(&m.complement())?;
        let jm = Mode::Base(j.clone());
        for y in space.points() {
            let jv = eval.decide(cx.f, y, &jm, space)?.converges;
            t.record(
                C::HausdorffExtension as usize,
                jv == ik(y).converges,
                || {
                    cx.sample(
                        C::HausdorffExtension,
                        &[("I", i), ("J", &j), ("K", k)],
                        "J",
                        Some(y),
                    )
                },
            );
        }
    }
    Ok(())
}

struct OmegaModes {
    ideals: Vec<Ideal>,
    base: Vec<Mode>,
    star: Vec<Mode>,
    // indexed [i][k]
    union: Vec<Vec<Mode>>,
    union_star: Vec<Vec<Mode>>,
    ik: Vec<Vec<Mode>>,
    ik_star: Vec<Vec<Mode>>,
    // [i][k][j] over the J sample
    nested: Vec<Vec<Vec<Mode>>>,
    // [i][k][e] over members of I used to extend K
    extension: Vec<Vec<Vec<Mode>>>,
    proper_join: Vec<Vec<bool>>,
    subideal: Vec<Vec<bool>>,
}

// Third ideals for the nested mode I^(K^J).
const NESTED_SAMPLE: [usize; 3] = [0, 2, 3];

fn omega_modes(max_modulus: Index) -> Result<OmegaModes> {
    let lib = residue_library(max_modulus);
    let ideals: Vec<Ideal> = lib.into_iter().map(|(_, i)| i).collect();
    let l = ideals.len();
    let nested_sample: Vec<usize> = NESTED_SAMPLE.iter().copied().filter(|&j| j < l).collect();
    let grid = |f: &dyn Fn(&Ideal, &Ideal) -> Result<Mode>| -> Result<Vec<Vec<Mode>>> {
        ideals
            .iter()
            .map(|i| ideals.iter().map(|k| f(i, k)).collect())
            .collect()
    };
    let members: Vec<Vec<EpSet>> = ideals
        .iter()
        .map(|i| {
            let g = i.grand_union().clone();
            let evens = EpSet::residues(2, &[0]).expect("valid");
            let with_zero =
                &g | &EpSet::from_indices(IndexDomain::PeriodicOmega, &[0]).expect("valid");
            vec![g.clone(), &g & &evens, with_zero]
        })
        .collect();
    Ok(OmegaModes {
        base: ideals.iter().cloned().map(Mode::Base).collect(),
        star: ideals
            .iter()
            .cloned()
            .map(Mode::star)
            .collect::<Result<_>>()?,
        union: grid(&|i, k| Mode::union(i, k))?,
        union_star: grid(&|i, k| Mode::union_star(i, k))?,
        ik: grid(&|i, k| Mode::ik(i.clone(), k.clone()))?,
        ik_star: grid(&|i, k| Mode::sup(i.clone(), Mode::star(k.clone())?))?,
        nested: ideals
            .iter()
            .map(|i| {
                ideals
                    .iter()
                    .map(|k| {
                        nested_sample
                            .iter()
                            .map(|&j| Mode::sup(i.clone(), Mode::ik(k.clone(), ideals[j].clone())?))
                            .collect()
                    })
                    .collect()
            })
            .collect::<Result<_>>()?,
        extension: ideals
            .iter()
            .zip(&members)
            .map(|(_, js)| {
                ideals
                    .iter()
                    .map(|k| {
                        js.iter()
                            .map(|j| Ok(Mode::Base(k.extend_by_member(j)?)))
                            .collect()
                    })
                    .collect()
            })
            .collect::<Result<_>>()?,
        proper_join: ideals
            .iter()
            .map(|i| {
                ideals
                    .iter()
                    .map(|k| i.join(k).map(|u| u.is_proper()))
                    .collect()
            })
            .collect::<Result<_>>()?,
        subideal: ideals
            .iter()
            .map(|i| ideals.iter().map(|k| i.is_subideal_of(k)).collect())
            .collect::<Result<_>>()?,
        ideals,
    })
}

fn omega_battery(bounds: ModeRelationBounds, eval: &dyn Evaluator) -> Result<Tally> {
    let modes = omega_modes(bounds.max_modulus)?;
    let spaces = spaces_up_to(bounds.max_points, false)?;
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
        .map(|(si, f)| omega_instance(&modes, &spaces[*si], f, eval))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tally::merge_all(CHECKS.len(), parts))
}

fn omega_instance(
    modes: &OmegaModes,
    space: &FiniteSpace,
    f: &FunctionSeq,
    eval: &dyn Evaluator,
) -> Result<Tally> {
    let mut t = Tally::new(CHECKS.len());
    if f.cycle().iter().all(|&v| v == 0) {
        hausdorff_per_space(&mut t, space);
    }
    let cx = Ctx { space, f };
    let l = modes.ideals.len();
    let conv = |m: &Mode, x: Point| -> Result<bool> { Ok(eval.decide(f, x, m, space)?.converges) };
    let grid = |g: &Vec<Vec<Mode>>, x: Point| -> Result<Vec<Vec<bool>>> {
        g.iter()
            .map(|row| row.iter().map(|m| conv(m, x)).collect())
            .collect()
    };
    let mut ik_all: Vec<Vec<Vec<Verdict>>> = Vec::with_capacity(space.len());
    for x in space.points() {
        let base: Vec<bool> = modes
            .base
            .iter()
            .map(|m| conv(m, x))
            .collect::<Result<_>>()?;
        let star: Vec<bool> = modes
            .star
            .iter()
            .map(|m| conv(m, x))
            .collect::<Result<_>>()?;
        let union = grid(&modes.union, x)?;
        let union_star = grid(&modes.union_star, x)?;
        let ik_star = grid(&modes.ik_star, x)?;
        let ik: Vec<Vec<Verdict>> = modes
            .ik
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| eval.decide(f, x, m, space))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        for i in 0..l {
            for k in 0..l {
                let pair = [("I", &modes.ideals[i]), ("K", &modes.ideals[k])];
                let sample = |c: C, mode: &str| cx.sample(c, &pair, mode, Some(x));
                let v = &ik[i][k];
                t.instances += 1;
                t.record(C::KImpliesIk as usize, !base[k] || v.converges, || {
                    sample(C::KImpliesIk, "I^K")
                });
                for i2 in (0..l).filter(|&i2| i2 != i && modes.subideal[i][i2]) {
                    t.record(
                        C::MonotoneOuter as usize,
                        !v.converges || ik[i2][k].converges,
                        || {
                            cx.sample(
                                C::MonotoneOuter,
                                &[
                                    ("I", &modes.ideals[i]),
                                    ("J", &modes.ideals[i2]),
                                    ("K", &modes.ideals[k]),
                                ],
                                "J^K",
                                Some(x),
                            )
                        },
                    );
                }
                for k2 in (0..l).filter(|&k2| k2 != k && modes.subideal[k][k2]) {
                    t.record(
                        C::MonotoneInner as usize,
                        !v.converges || ik[i][k2].converges,
                        || {
                            cx.sample(
                                C::MonotoneInner,
                                &[
                                    ("I", &modes.ideals[i]),
                                    ("J", &modes.ideals[k2]),
                                    ("K", &modes.ideals[k]),
                                ],
                                "I^J",
                                Some(x),
                            )
                        },
                    );
                }
                if !modes.proper_join[i][k] {
                    t.degenerate += 1;
                    t.record(C::Degenerate as usize, v.converges && v.degenerate, || {
                        sample(C::Degenerate, "I^K")
                    });
                    continue;
                }
                let u = union[i][k];
                let ks = ik_star[i][k];
                t.record(C::StarCollapse as usize, ks == union_star[i][k], || {
                    sample(C::StarCollapse, "I^K*")
                });
                t.record(C::IkImpliesUnion as usize, !v.converges || u, || {
                    sample(C::IkImpliesUnion, "I^K")
                });
                t.record(C::IImpliesIkStar as usize, !base[i] || ks, || {
                    sample(C::IImpliesIkStar, "I^K*")
                });
                t.record(C::KImpliesIkStar as usize, !base[k] || ks, || {
                    sample(C::KImpliesIkStar, "I^K*")
                });
                if modes.subideal[k][i] {
                    t.record(C::IkStarImpliesIWhenKInI as usize, !ks || base[i], || {
                        sample(C::IkStarImpliesIWhenKInI, "I^K*")
                    });
                }
                if modes.subideal[i][k] {
                    t.record(C::IkStarImpliesKWhenIInK as usize, !ks || base[k], || {
                        sample(C::IkStarImpliesKWhenIInK, "I^K*")
                    });
                }
                t.record(C::IkStarImpliesI as usize, !ks || base[i], || {
                    sample(C::IkStarImpliesI, "I^K*")
                });
                t.record(C::IkStarImpliesK as usize, !ks || base[k], || {
                    sample(C::IkStarImpliesK, "I^K*")
                });
                if modes.subideal[k][i] {
                    t.record(
                        C::IkImpliesIWhenKInI as usize,
                        !v.converges || base[i],
                        || sample(C::IkImpliesIWhenKInI, "I^K"),
                    );
                }
                if modes.subideal[i][k] {
                    t.record(
                        C::IkImpliesKWhenIInK as usize,
                        !v.converges || base[k],
                        || sample(C::IkImpliesKWhenIInK, "I^K"),
                    );
                }
                t.record(C::IStarImpliesIk as usize, !star[i] || v.converges, || {
                    sample(C::IStarImpliesIk, "I*")
                });
                t.record(
                    C::IStarImpliesUnionStar as usize,
                    !star[i] || union_star[i][k],
                    || sample(C::IStarImpliesUnionStar, "I*"),
                );
                for (s, m) in modes.nested[i][k].iter().enumerate() {
                    let nv = conv(m, x)?;
                    t.record(C::IkStarImpliesNested as usize, !ks || nv, || {
                        let j = &modes.ideals[NESTED_SAMPLE[s]];
                        cx.sample(
                            C::IkStarImpliesNested,
                            &[("I", &modes.ideals[i]), ("J", j), ("K", &modes.ideals[k])],
                            "I^(K^J)",
                            Some(x),
                        )
                    });
                }
                for (e, m) in modes.extension[i][k].iter().enumerate() {
                    let ext = conv(m, x)?;
                    let ext_sample = |c: C| {
                        let j = match m {
                            Mode::Base(j) => j,
                            Mode::Sup(..) => unreachable!("extensions are plain modes"),
                        };
                        cx.sample(
                            c,
                            &[("I", &modes.ideals[i]), ("J", j), ("K", &modes.ideals[k])],
                            "J",
                            Some(x),
                        )
                    };
                    t.record(C::ExtensionImpliesIk as usize, !ext || v.converges, || {
                        ext_sample(C::ExtensionImpliesIk)
                    });
                    // the first member is I's grand union, the complement of the canonical witness
                    if e == 0 {
                        t.record(C::KImpliesExtension as usize, !base[k] || ext, || {
                            ext_sample(C::KImpliesExtension)
                        });
                        t.record(C::ExtensionImpliesUnion as usize, !ext || u, || {
                            ext_sample(C::ExtensionImpliesUnion)
                        });
                    }
                }
                if v.converges {
                    let ok = v.witnesses.len() == 1
                        && modes.ideals[i].in_dual_filter(&v.witnesses[0])?
                        && replay_witnesses(f, x, &modes.ik[i][k], space, &v.witnesses)?;
                    t.record(C::Witnesses as usize, ok, || sample(C::Witnesses, "I^K"));
                }
            }
        }
        ik_all.push(ik);
    }
    if space.is_hausdorff() {
        for (i, row) in modes.proper_join.iter().enumerate() {
            for k in (0..l).filter(|&k| row[k]) {
                hausdorff_checks(&mut t, &cx, eval, &modes.ideals[i], &modes.ideals[k], |x| {
                    &ik_all[x][i][k]
                })?;
            }
        }
    }
    Ok(t)
}

/// Compares `fast` and `slow` on every labeled space with at most
/// `max_points` points, every pair of proper ideals on `Finite(n)`, every
/// function and point, for the modes `I`, `K`, `I^K` and `I∪K`.
pub fn verify_oracle_agreement(
    max_points: usize,
    n: usize,
    fast: &dyn Evaluator,
    slow: &dyn Evaluator,
) -> Result<Report> {
    const AGREE: [CheckSpec; 1] = [CheckSpec {
        id: "evaluators-agree",
        statement: "fast path ≡ definition-following oracle on I, K, I^K, I∪K",
        gating: true,
    }];
    if max_points > MAX_ENUMERATED_POINTS || max_points == 0 {
        return Err(Error::TooLarge {
            what: "points",
            got: max_points,
            max: MAX_ENUMERATED_POINTS,
        });
    }
    let domain = IndexDomain::finite(n)?;
    let ideals: Vec<Ideal> = crate::ideals::enumerate_ideals_finite(domain)?.collect();
    let mut modes = Vec::new();
    for i in &ideals {
        for k in &ideals {
            modes.push((
                i,
                k,
                [
                    ("I", Mode::Base(i.clone())),
                    ("K", Mode::Base(k.clone())),
                    ("I^K", Mode::ik(i.clone(), k.clone())?),
                    ("IuK", Mode::union(i, k)?),
                ],
            ));
        }
    }
    let spaces = spaces_up_to(max_points, true)?;
    let spaces: Vec<FiniteSpace> = spaces
        .into_iter()
        .filter(|s| s.len() == max_points)
        .collect();
    let work: Vec<(usize, FunctionSeq)> = spaces
        .iter()
        .enumerate()
        .flat_map(|(si, s)| {
            all_finite_functions(n, s.len())
                .expect("bounded domain")
                .into_iter()
                .map(move |f| (si, f))
        })
        .collect();
    let parts = work
        .par_iter()
        .map(|(si, f)| -> Result<Tally> {
            let space = &spaces[*si];
            let cx = Ctx { space, f };
            let mut t = Tally::new(1);
            for x in space.points() {
                for (i, k, ms) in &modes {
                    for (name, m) in ms {
                        t.instances += 1;
                        let a = fast.decide(f, x, m, space)?;
                        let b = slow.decide(f, x, m, space)?;
                        t.record(
                            0,
                            a.converges == b.converges && a.degenerate == b.degenerate,
                            || {
                                let mut v =
                                    cx.sample(C::KImpliesIk, &[("I", i), ("K", k)], name, Some(x));
                                v["check"] = json!(AGREE[0].id);
                                v
                            },
                        );
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let bounds = BTreeMap::from([
        ("k".to_string(), json!(max_points)),
        ("n".to_string(), json!(n)),
    ]);
    Ok(Tally::merge_all(1, parts).into_report("oracle", &AGREE, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::{decide, FastPath};

    fn small() -> ModeRelationBounds {
        ModeRelationBounds {
            max_points: 2,
            finite_domain: 3,
            max_period: 3,
            max_modulus: 4,
        }
    }

    #[test]
    fn small_battery_is_clean() {
        let r = verify_mode_relations(small(), &FastPath).unwrap();
        for c in &r.checks {
            assert!(c.instances > 0, "{} never exercised", c.id);
            if c.gating {
                assert_eq!(c.violations, 0, "{}: {:?}", c.id, c.samples.first());
            }
        }
        assert!(r.passed());
        assert!(r.degenerate_instances > 0);
        // the unrestricted forms fail, e.g. I = Fin, K = gen(evens)
        assert!(r.check("ik-star-implies-i").unwrap().violations > 0);
        assert!(r.check("ik-star-implies-k").unwrap().violations > 0);
    }

    // Ignores the degenerate case: an improper effective ideal is treated as "no convergence".
    struct DropsImproperJoins;

    impl Evaluator for DropsImproperJoins {
        fn decide(
            &self,
            f: &FunctionSeq,
            x: Point,
            mode: &Mode,
            space: &FiniteSpace,
        ) -> Result<Verdict> {
            let mut v = decide(f, x, mode, space)?;
            if v.degenerate {
                v.converges = false;
                v.witnesses.clear();
                v.failing_neighborhood = Some(space.min_nbhd(x));
            }
            Ok(v)
        }
    }

    // Evaluates I^K as plain K-convergence.
    struct ForgetsOuterIdeal;

    impl Evaluator for ForgetsOuterIdeal {
        fn decide(
            &self,
            f: &FunctionSeq,
            x: Point,
            mode: &Mode,
            space: &FiniteSpace,
        ) -> Result<Verdict> {
            match mode {
                Mode::Sup(_, inner) => {
                    let mut v = decide(f, x, inner, space)?;
                    if v.converges {
                        v.witnesses.insert(0, EpSet::full(f.domain()));
                    }
                    Ok(v)
                }
                m => decide(f, x, m, space),
            }
        }
    }

    #[test]
    fn broken_evaluators_are_caught() {
        let r = verify_mode_relations(small(), &DropsImproperJoins).unwrap();
        assert!(r.check("degenerate-converges").unwrap().violations > 0);
        assert!(!r.passed());
        let r = verify_mode_relations(small(), &ForgetsOuterIdeal).unwrap();
        assert!(r.check("extension-implies-ik").unwrap().violations > 0);
        assert!(!r.passed());
    }

    #[test]
    fn violation_samples_replay() {
        let r = verify_mode_relations(small(), &DropsImproperJoins).unwrap();
        let s = &r.check("degenerate-converges").unwrap().samples[0];
        let inst = LabConfig::from_json(&s.to_string())
            .unwrap()
            .resolve()
            .unwrap();
        let f = inst.function().unwrap();
        let x = inst.point().unwrap();
        let m = inst.mode().unwrap();
        assert!(decide(f, x, m, &inst.space).unwrap().degenerate);
        assert!(
            !DropsImproperJoins
                .decide(f, x, m, &inst.space)
                .unwrap()
                .converges
        );
    }

    #[test]
    fn oracle_agreement_on_two_points() {
        let r = verify_oracle_agreement(2, 3, &FastPath, &super::super::Oracle::default()).unwrap();
        assert_eq!(r.checks[0].violations, 0);
        // 4 spaces, 8 functions, 2 points, 7 × 7 pairs, 4 modes
        assert_eq!(r.instances, 4 * 8 * 2 * 49 * 4);
    }

    #[test]
    fn bounds_are_validated() {
        let b = ModeRelationBounds {
            max_points: 5,
            ..ModeRelationBounds::default()
        };
        assert!(verify_mode_relations(b, &FastPath).is_err());
    }
}
