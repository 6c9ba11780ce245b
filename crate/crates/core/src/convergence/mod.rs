//! Convergence modes and their two evaluators.
//!
//! [`decide`] is the fast path: one bad set, one ideal membership test.
//! [`oracle`] follows the definition literally, trying every neighborhood
//! and searching for witness sets. They are kept independent so each can
//! check the other.

mod battery;
mod function;
mod mode;

pub use battery::{verify_mode_relations, verify_oracle_agreement, ModeRelationBounds};
pub use function::{
    all_finite_functions, bad_set, hit_set, modify_on_set, pad_outside, periodic_functions,
    FunctionSeq,
};
pub use mode::{IdealEnv, Mode};

use crate::error::{Error, Result};
use crate::ideals::{negligible, Ideal};
use crate::indexsets::{enumerate_subsets, lcm, EpSet, Index, IndexDomain};
use crate::topology::{FiniteSpace, Point, PointSet};

/// Outcome of a convergence query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub converges: bool,
    /// The witness sets `M`, outermost `Sup` first; empty unless converging.
    pub witnesses: Vec<EpSet>,
    /// A neighborhood of the limit whose bad set escapes the ideal.
    pub failing_neighborhood: Option<PointSet>,
    /// The effective ideal is improper, so everything converges everywhere.
    pub degenerate: bool,
}

/// Something that can answer convergence queries.
pub trait Evaluator: Sync {
    fn decide(
        &self,
        f: &FunctionSeq,
        x: Point,
        mode: &Mode,
        space: &FiniteSpace,
    ) -> Result<Verdict>;
}

/// The minimal-neighborhood evaluator behind [`decide`].
#[derive(Debug, Clone, Copy, Default)]
pub struct FastPath;

impl Evaluator for FastPath {
    fn decide(
        &self,
        f: &FunctionSeq,
        x: Point,
        mode: &Mode,
        space: &FiniteSpace,
    ) -> Result<Verdict> {
        decide(f, x, mode, space)
    }
}

/// The definition-following evaluator behind [`oracle`].
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub budget: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            budget: DEFAULT_ORACLE_BUDGET,
        }
    }
}

impl Evaluator for Oracle {
    fn decide(
        &self,
        f: &FunctionSeq,
        x: Point,
        mode: &Mode,
        space: &FiniteSpace,
    ) -> Result<Verdict> {
        oracle_with_budget(f, x, mode, space, self.budget)
    }
}

/// Witness candidates the oracle may try per query before giving up.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 22;

fn check_instance(f: &FunctionSeq, x: Point, mode: &Mode, space: &FiniteSpace) -> Result<()> {
    f.domain().check_same(mode.domain())?;
    f.check_in(space)?;
    if x >= space.len() {
        return Err(Error::PointOutOfRange(x));
    }
    Ok(())
}

/// Decides whether `f` converges to `x` in `mode`.
///
/// Converges iff the bad set of `x`'s minimal neighborhood belongs to the
/// mode's effective ideal. The witnesses are the complements of the grand
/// unions of the `Sup` ideals, which are the largest possible choices.
pub fn decide(f: &FunctionSeq, x: Point, mode: &Mode, space: &FiniteSpace) -> Result<Verdict> {
    check_instance(f, x, mode, space)?;
    let u = space.min_nbhd(x);
    let bad = bad_set(f, u);
    let union = mode.effective_union();
    let converges = negligible(&bad.setminus(&union)?);
    let witnesses = if converges {
        mode.witness_ideals()
            .into_iter()
            .map(|i| i.grand_union().complement())
            .collect()
    } else {
        Vec::new()
    };
    Ok(Verdict {
        converges,
        witnesses,
        failing_neighborhood: (!converges).then_some(u),
        degenerate: negligible(&union.complement()),
    })
}

/// Definition-following evaluation with the default budget.
pub fn oracle(f: &FunctionSeq, x: Point, mode: &Mode, space: &FiniteSpace) -> Result<Verdict> {
    oracle_with_budget(f, x, mode, space, DEFAULT_ORACLE_BUDGET)
}

/// Definition-following evaluation.
///
/// `Base(I)` checks the bad set of every open set containing `x`.
/// `Sup(I, m)` searches for `M ∈ I*` such that `f` padded with `x` off `M`
/// converges in `m`. On a finite domain every subset is a candidate. On ω
/// the candidates are complements of a union of some of `I`'s generators
/// with a subset of the window `[0, Q)`, `Q` being the longest head in the
/// instance plus twice the lcm of all moduli. A search that would try more
/// than `budget` candidates fails with [`Error::OracleBudget`] up front.
pub fn oracle_with_budget(
    f: &FunctionSeq,
    x: Point,
    mode: &Mode,
    space: &FiniteSpace,
    budget: u64,
) -> Result<Verdict> {
    check_instance(f, x, mode, space)?;
    let window = witness_window(f, mode);
    let needed = candidate_count(mode, window);
    if needed > budget as u128 {
        return Err(Error::OracleBudget { needed, budget });
    }
    let degenerate = !mode.effective_ideal().is_proper();
    Ok(match search(f, x, mode, space, window)? {
        Ok(witnesses) => Verdict {
            converges: true,
            witnesses,
            failing_neighborhood: None,
            degenerate,
        },
        Err(u) => Verdict {
            converges: false,
            witnesses: Vec::new(),
            failing_neighborhood: Some(u),
            degenerate,
        },
    })
}

fn witness_window(f: &FunctionSeq, mode: &Mode) -> Index {
    if f.domain().is_finite() {
        return 0;
    }
    let (qf, pf) = f.shape();
    let mut q = qf;
    let mut p = pf;
    let mut m = mode;
    loop {
        let ideal = match m {
            Mode::Base(i) | Mode::Sup(i, _) => i,
        };
        for g in ideal.generators() {
            q = q.max(g.head_len());
            p = lcm(p, g.modulus());
        }
        match m {
            Mode::Base(_) => break,
            Mode::Sup(_, inner) => m = inner,
        }
    }
    q + 2 * p
}

fn candidate_count(mode: &Mode, window: Index) -> u128 {
    let mut total: u128 = 1;
    for i in mode.witness_ideals() {
        let per = match i.domain() {
            IndexDomain::Finite(n) => 1u128 << n,
            IndexDomain::PeriodicOmega => {
                let bits = i.generators().len() as u32 + window as u32;
                if bits >= 120 {
                    return u128::MAX;
                }
                1u128 << bits
            }
        };
        total = total.saturating_mul(per);
    }
    total
}

/// Members of `ideal`'s dual filter tried by witness searches: every
/// qualifying subset on a finite domain; on ω, complements of a union of
/// some generators with a subset of `[0, window)`.
pub(crate) fn candidates(ideal: &Ideal, window: Index) -> Vec<EpSet> {
    match ideal.domain() {
        IndexDomain::Finite(_) => enumerate_subsets(ideal.domain())
            .expect("finite domain")
            .filter(|m| ideal.contains(&m.complement()).expect("same domain"))
            .collect(),
        IndexDomain::PeriodicOmega => {
            let gens = ideal.generators();
            let mut out = Vec::new();
            for pick in 0u64..1 << gens.len() {
                let mut drop = EpSet::empty(IndexDomain::PeriodicOmega);
                for (i, g) in gens.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        drop = &drop | g;
                    }
                }
                for head in 0u64..1 << window {
                    let members: Vec<Index> = (0..window).filter(|s| head >> s & 1 == 1).collect();
                    let h =
                        EpSet::from_indices(IndexDomain::PeriodicOmega, &members).expect("omega");
                    out.push((&drop | &h).complement());
                }
            }
            out
        }
    }
}

// Ok(witness chain) or Err(a failing neighborhood)
fn search(
    f: &FunctionSeq,
    x: Point,
    mode: &Mode,
    space: &FiniteSpace,
    window: Index,
) -> Result<std::result::Result<Vec<EpSet>, PointSet>> {
    match mode {
        Mode::Base(ideal) => {
            for &u in space.opens().iter().filter(|u| u.contains(x)) {
                if !ideal.contains(&bad_set(f, u))? {
                    return Ok(Err(u));
                }
            }
            Ok(Ok(Vec::new()))
        }
        Mode::Sup(ideal, inner) => {
            let mut first_failure = None;
            for m in candidates(ideal, window) {
                let g = pad_outside(f, &m, x)?;
                match search(&g, x, inner, space, window)? {
                    Ok(mut rest) => {
                        rest.insert(0, m);
                        return Ok(Ok(rest));
                    }
                    Err(u) => {
                        first_failure.get_or_insert(u);
                    }
                }
            }
            // An empty candidate list only happens for an empty dual filter,
            // which cannot occur since M = S always qualifies.
            Ok(Err(first_failure.unwrap_or_else(|| space.whole())))
        }
    }
}

/// Replays a witness chain through the definition: pads `f` with each
/// witness in turn and checks the bottom ideal on every neighborhood.
pub fn replay_witnesses(
    f: &FunctionSeq,
    x: Point,
    mode: &Mode,
    space: &FiniteSpace,
    witnesses: &[EpSet],
) -> Result<bool> {
    check_instance(f, x, mode, space)?;
    let ideals = mode.witness_ideals();
    if ideals.len() != witnesses.len() {
        return Ok(false);
    }
    let mut g = f.clone();
    for (i, m) in ideals.iter().zip(witnesses) {
        if !i.contains(&m.complement())? {
            return Ok(false);
        }
        g = pad_outside(&g, m, x)?;
    }
    let base = mode.base_ideal();
    for &u in space.opens().iter().filter(|u| u.contains(x)) {
        if !base.contains(&bad_set(&g, u))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All points `f` converges to.
pub fn limit_set(f: &FunctionSeq, mode: &Mode, space: &FiniteSpace) -> Result<PointSet> {
    limit_set_with(&FastPath, f, mode, space)
}

pub fn limit_set_with(
    eval: &dyn Evaluator,
    f: &FunctionSeq,
    mode: &Mode,
    space: &FiniteSpace,
) -> Result<PointSet> {
    let mut out = PointSet::EMPTY;
    for x in space.points() {
        if eval.decide(f, x, mode, space)?.converges {
            out.insert(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::Ideal;

    const A: Point = 0;
    const B: Point = 1;

    fn down(bits: u32) -> Ideal {
        Ideal::principal(EpSet::from_bits(4, bits))
    }

    #[test]
    fn sierpinski_instance() {
        let s = FiniteSpace::sierpinski();
        let f = FunctionSeq::finite(vec![B, A, B, A]).unwrap();
        let i = down(0b0011);
        let k = down(0b0100);
        let ik = Mode::ik(i.clone(), k.clone()).unwrap();
        let v = decide(&f, A, &ik, &s).unwrap();
        assert!(v.converges);
        assert_eq!(v.witnesses, vec![EpSet::from_bits(4, 0b1100)]);
        assert!(replay_witnesses(&f, A, &ik, &s, &v.witnesses).unwrap());
        assert!(!decide(&f, A, &Mode::Base(i.clone()), &s).unwrap().converges);
        let vk = decide(&f, A, &Mode::Base(k.clone()), &s).unwrap();
        assert!(!vk.converges);
        assert_eq!(vk.failing_neighborhood, Some(PointSet::singleton(A)));
        for m in [ik, Mode::Base(i), Mode::Base(k)] {
            assert_eq!(
                decide(&f, A, &m, &s).unwrap().converges,
                oracle(&f, A, &m, &s).unwrap().converges
            );
        }
    }

    #[test]
    fn constants_and_whole_neighborhoods() {
        let s = FiniteSpace::sierpinski();
        let m = Mode::ik(down(0b0001), down(0b0010)).unwrap();
        let c = FunctionSeq::constant(IndexDomain::Finite(4), A);
        assert!(decide(&c, A, &m, &s).unwrap().converges);
        // U(b) is the whole space
        let f = FunctionSeq::finite(vec![A, B, A, A]).unwrap();
        assert!(decide(&f, B, &m, &s).unwrap().converges);
    }

    #[test]
    fn discrete_space_means_eventually_constant_modulo_the_ideal() {
        let d = FiniteSpace::discrete(2).unwrap();
        let i = down(0b0011);
        let m = Mode::Base(i.clone());
        for code in 0..16u32 {
            let f =
                FunctionSeq::finite((0..4).map(|s| (code >> s & 1) as usize).collect()).unwrap();
            for x in d.points() {
                let off: u32 = (0..4).filter(|&s| f.value(s) != x).map(|s| 1 << s).sum();
                let expected = i.contains(&EpSet::from_bits(4, off)).unwrap();
                assert_eq!(oracle(&f, x, &m, &d).unwrap().converges, expected);
            }
        }
    }

    #[test]
    fn improper_join_makes_everything_converge() {
        let d = FiniteSpace::discrete(2).unwrap();
        let m = Mode::ik(down(0b0011), down(0b1100)).unwrap();
        let f = FunctionSeq::finite(vec![A, B, A, B]).unwrap();
        for x in d.points() {
            let v = decide(&f, x, &m, &d).unwrap();
            assert!(v.converges && v.degenerate);
            let o = oracle(&f, x, &m, &d).unwrap();
            assert!(o.converges && o.degenerate);
        }
        assert_eq!(limit_set(&f, &m, &d).unwrap(), d.whole());
    }

    #[test]
    fn periodic_oracle_agrees_on_small_instances() {
        let s = FiniteSpace::sierpinski();
        let i = Ideal::principal(EpSet::residues(2, &[0]).unwrap());
        let k = Ideal::fin();
        let modes = [
            Mode::ik(i.clone(), k.clone()).unwrap(),
            Mode::ik(k.clone(), i.clone()).unwrap(),
            Mode::Base(i.clone()),
            Mode::star(i.clone()).unwrap(),
        ];
        for cycle in [vec![A], vec![B], vec![A, B], vec![B, A], vec![B, B, A]] {
            for head in [vec![], vec![B]] {
                let f = FunctionSeq::periodic(head.clone(), cycle.clone()).unwrap();
                for m in &modes {
                    for x in s.points() {
                        let fast = decide(&f, x, m, &s).unwrap();
                        let slow = oracle(&f, x, m, &s).unwrap();
                        assert_eq!(fast.converges, slow.converges, "{f:?} {x} {m:?}");
                        if slow.converges {
                            assert!(replay_witnesses(&f, x, m, &s, &slow.witnesses).unwrap());
                            assert!(replay_witnesses(&f, x, m, &s, &fast.witnesses).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn star_inner_mode_does_not_imply_the_outer_ideal() {
        // f = (b,a)^ω on discrete {a,b}: bad set of {a} is the evens
        let d = FiniteSpace::discrete(2).unwrap();
        let f = FunctionSeq::periodic(vec![], vec![B, A]).unwrap();
        let evens = Ideal::principal(EpSet::residues(2, &[0]).unwrap());
        let m = Mode::sup(Ideal::fin(), Mode::star(evens.clone()).unwrap()).unwrap();
        let v = oracle(&f, A, &m, &d).unwrap();
        assert!(v.converges);
        assert!(replay_witnesses(&f, A, &m, &d, &v.witnesses).unwrap());
        assert!(
            !oracle(&f, A, &Mode::Base(Ideal::fin()), &d)
                .unwrap()
                .converges
        );
        // and symmetrically with the roles swapped
        let m = Mode::sup(evens, Mode::star(Ideal::fin()).unwrap()).unwrap();
        assert!(oracle(&f, A, &m, &d).unwrap().converges);
        assert!(
            !oracle(&f, A, &Mode::Base(Ideal::fin()), &d)
                .unwrap()
                .converges
        );
    }

    #[test]
    fn oracle_budget_is_reported() {
        let s = FiniteSpace::sierpinski();
        let i = Ideal::principal(EpSet::residues(6, &[0]).unwrap());
        let m = Mode::sup(i.clone(), Mode::star(i).unwrap()).unwrap();
        let f = FunctionSeq::periodic(vec![], vec![A, B]).unwrap();
        assert!(matches!(
            oracle_with_budget(&f, A, &m, &s, 1000),
            Err(Error::OracleBudget { .. })
        ));
    }

    #[test]
    fn discrete_limits_are_unique_under_ideality() {
        let d = FiniteSpace::discrete(2).unwrap();
        let m = Mode::ik(down(0b0001), down(0b0100)).unwrap();
        let f = FunctionSeq::finite(vec![A, A, B, A]).unwrap();
        assert_eq!(limit_set(&f, &m, &d).unwrap(), PointSet::singleton(A));
        let ind = FiniteSpace::indiscrete(2).unwrap();
        assert_eq!(limit_set(&f, &m, &ind).unwrap(), ind.whole());
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let s = FiniteSpace::sierpinski();
        let f = FunctionSeq::finite(vec![A, B, A]).unwrap();
        let m = Mode::Base(down(1));
        assert!(matches!(
            decide(&f, A, &m, &s),
            Err(Error::DomainMismatch(..))
        ));
        let g = FunctionSeq::finite(vec![A, 5, A, A]).unwrap();
        assert!(decide(&g, A, &m, &s).is_err());
    }
}
