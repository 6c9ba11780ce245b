//! Mode-open and mode-closed sets, and sequential spaces.
//!
//! `O` is mode-open when no sequence valued in `X \ O` converges to a point
//! of `O`. Two procedures decide it:
//!
//! - a bounded search over sequences valued in `X \ O`: purely periodic
//!   with period at most `|X|` on ω, every function on a finite domain;
//! - the characterization: with a proper effective ideal, `O` is mode-open
//!   iff `U(x) ⊆ O` for every `x ∈ O`; with an improper one iff `O` is
//!   `∅` or `X`.
//!
//! The search is complete. Convergence to `x` depends only on the bad set of
//! `U(x)`, so if any sequence in `X \ O` converges to `x` then either the
//! ideal is improper or some `y ∉ O` lies in `U(x)`, and the constant
//! sequence at `y` converges to `x`. [`mode_open`] runs both and reports a
//! disagreement as an error.

mod battery;

pub use battery::{verify_sequential_spaces, SequentialBounds};

use crate::convergence::{
    all_finite_functions, periodic_functions, Evaluator, FastPath, FunctionSeq, Mode,
};
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::indexsets::IndexDomain;
use crate::topology::{FiniteSpace, Point, PointSet};

/// How an openness verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpennessMethod {
    Characterization,
    BoundedSequenceSearch,
}

/// Whether a set is mode-open, with a converging sequence when it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpennessVerdict {
    pub is_mode_open: bool,
    /// A sequence valued in `X \ O` and a point of `O` it converges to.
    pub counterexample: Option<(FunctionSeq, Point)>,
    pub method: OpennessMethod,
}

impl OpennessVerdict {
    fn open(method: OpennessMethod) -> OpennessVerdict {
        OpennessVerdict {
            is_mode_open: true,
            counterexample: None,
            method,
        }
    }

    fn refuted(method: OpennessMethod, f: FunctionSeq, x: Point) -> OpennessVerdict {
        OpennessVerdict {
            is_mode_open: false,
            counterexample: Some((f, x)),
            method,
        }
    }
}

fn check_set(space: &FiniteSpace, o: PointSet) -> Result<()> {
    match o.difference(space.whole()).iter().next() {
        Some(p) => Err(Error::PointOutOfRange(p)),
        None => Ok(()),
    }
}

/// Decides mode-openness from minimal neighborhoods and the effective ideal.
/// The counterexample is a constant sequence.
pub fn open_by_characterization(
    space: &FiniteSpace,
    o: PointSet,
    mode: &Mode,
) -> Result<OpennessVerdict> {
    check_set(space, o)?;
    let method = OpennessMethod::Characterization;
    let rest = space.whole().difference(o);
    let domain = mode.domain();
    if !mode.effective_ideal().is_proper() {
        return Ok(match (o.iter().next(), rest.iter().next()) {
            (Some(x), Some(y)) => {
                OpennessVerdict::refuted(method, FunctionSeq::constant(domain, y), x)
            }
            _ => OpennessVerdict::open(method),
        });
    }
    for x in o.iter() {
        if let Some(y) = space.min_nbhd(x).intersection(rest).iter().next() {
            return Ok(OpennessVerdict::refuted(
                method,
                FunctionSeq::constant(domain, y),
                x,
            ));
        }
    }
    Ok(OpennessVerdict::open(method))
}

/// Every sequence the bounded search tries for sets missing `o`, in order:
/// shorter periods first, so constant sequences lead.
pub fn sequences_outside(
    space: &FiniteSpace,
    o: PointSet,
    domain: IndexDomain,
) -> Result<Vec<FunctionSeq>> {
    check_set(space, o)?;
    let rest: Vec<Point> = space.whole().difference(o).iter().collect();
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    let local = match domain {
        IndexDomain::Finite(n) => all_finite_functions(n, rest.len())?,
        IndexDomain::PeriodicOmega => periodic_functions(rest.len(), space.len()),
    };
    Ok(local
        .into_iter()
        .map(|f| f.map_points(|p| rest[p]))
        .collect())
}

/// Decides mode-openness by trying every sequence of [`sequences_outside`]
/// against every point of `o` with `eval`.
pub fn open_by_search(
    space: &FiniteSpace,
    o: PointSet,
    mode: &Mode,
    eval: &dyn Evaluator,
) -> Result<OpennessVerdict> {
    let method = OpennessMethod::BoundedSequenceSearch;
    for f in sequences_outside(space, o, mode.domain())? {
        for x in o.iter() {
            if eval.decide(&f, x, mode, space)?.converges {
                return Ok(OpennessVerdict::refuted(method, f, x));
            }
        }
    }
    Ok(OpennessVerdict::open(method))
}

/// Mode-openness by search, cross-checked against the characterization.
pub fn mode_open(space: &FiniteSpace, o: PointSet, mode: &Mode) -> Result<OpennessVerdict> {
    let searched = open_by_search(space, o, mode, &FastPath)?;
    let characterized = open_by_characterization(space, o, mode)?;
    if searched.is_mode_open != characterized.is_mode_open {
        return Err(Error::MethodDisagreement {
            set: space.format_set(o),
            characterization: characterized.is_mode_open,
            search: searched.is_mode_open,
        });
    }
    Ok(searched)
}

/// [`mode_open`] for the mode `I^K`.
pub fn is_mode_open(
    space: &FiniteSpace,
    o: PointSet,
    i: &Ideal,
    k: &Ideal,
) -> Result<OpennessVerdict> {
    mode_open(space, o, &Mode::ik(i.clone(), k.clone())?)
}

/// `a` is mode-closed iff its complement is mode-open.
pub fn is_mode_closed(space: &FiniteSpace, a: PointSet, mode: &Mode) -> Result<bool> {
    check_set(space, a)?;
    Ok(mode_open(space, space.whole().difference(a), mode)?.is_mode_open)
}

/// Every mode-open subset, in bitmask order.
pub fn mode_open_sets(space: &FiniteSpace, mode: &Mode) -> Result<Vec<PointSet>> {
    let mut out = Vec::new();
    for o in PointSet::all_subsets(space.len()) {
        if mode_open(space, o, mode)?.is_mode_open {
            out.push(o);
        }
    }
    Ok(out)
}

/// Whether every mode-open set is open.
pub fn is_sequential(space: &FiniteSpace, mode: &Mode) -> Result<bool> {
    Ok(mode_open_sets(space, mode)?
        .into_iter()
        .all(|o| space.is_open_set(o)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::decide;
    use crate::indexsets::EpSet;

    const A: Point = 0;
    const B: Point = 1;

    fn fin_fin() -> Mode {
        Mode::ik(Ideal::fin(), Ideal::fin()).unwrap()
    }

    #[test]
    fn sierpinski_opens() {
        let s = FiniteSpace::sierpinski();
        let fin = Ideal::fin();
        let v = is_mode_open(&s, PointSet::singleton(A), &fin, &fin).unwrap();
        assert!(v.is_mode_open && v.counterexample.is_none());
        assert_eq!(v.method, OpennessMethod::BoundedSequenceSearch);

        let v = is_mode_open(&s, PointSet::singleton(B), &fin, &fin).unwrap();
        let (f, x) = v.counterexample.unwrap();
        assert_eq!((f.cycle(), x), (&[A][..], B));
        assert!(decide(&f, x, &fin_fin(), &s).unwrap().converges);
    }

    #[test]
    fn improper_join_leaves_only_the_trivial_opens() {
        let s = FiniteSpace::sierpinski();
        let evens = Ideal::principal(EpSet::residues(2, &[0]).unwrap());
        let odds = Ideal::principal(EpSet::residues(2, &[1]).unwrap());
        assert!(
            !is_mode_open(&s, PointSet::singleton(A), &evens, &odds)
                .unwrap()
                .is_mode_open
        );
        let mode = Mode::ik(evens, odds).unwrap();
        assert_eq!(
            mode_open_sets(&s, &mode).unwrap(),
            vec![PointSet::EMPTY, s.whole()]
        );
        assert!(is_sequential(&s, &mode).unwrap());
    }

    #[test]
    fn closed_sets() {
        let s = FiniteSpace::sierpinski();
        let m = fin_fin();
        assert!(is_mode_closed(&s, PointSet::singleton(B), &m).unwrap());
        assert!(!is_mode_closed(&s, PointSet::singleton(A), &m).unwrap());
        assert!(is_mode_closed(&s, PointSet::EMPTY, &m).unwrap());
        assert!(is_mode_closed(&s, s.whole(), &m).unwrap());
    }

    #[test]
    fn finite_domains_are_searched_exhaustively() {
        let s = FiniteSpace::sierpinski();
        let i = Ideal::principal(EpSet::from_bits(3, 0b001));
        let k = Ideal::principal(EpSet::from_bits(3, 0b010));
        let mode = Mode::ik(i, k).unwrap();
        assert_eq!(
            sequences_outside(&s, PointSet::singleton(B), mode.domain())
                .unwrap()
                .len(),
            1
        );
        assert_eq!(mode_open_sets(&s, &mode).unwrap(), s.opens().to_vec());
    }

    #[test]
    fn discrete_and_indiscrete() {
        let m = fin_fin();
        let d = FiniteSpace::discrete(3).unwrap();
        assert_eq!(mode_open_sets(&d, &m).unwrap().len(), 8);
        let ind = FiniteSpace::indiscrete(3).unwrap();
        assert_eq!(
            mode_open_sets(&ind, &m).unwrap(),
            vec![PointSet::EMPTY, ind.whole()]
        );
    }

    #[test]
    fn methods_run_separately() {
        struct Never;
        impl Evaluator for Never {
            fn decide(
                &self,
                _: &FunctionSeq,
                _: Point,
                _: &Mode,
                _: &FiniteSpace,
            ) -> Result<crate::convergence::Verdict> {
                Ok(crate::convergence::Verdict {
                    converges: false,
                    witnesses: vec![],
                    failing_neighborhood: None,
                    degenerate: false,
                })
            }
        }
        let s = FiniteSpace::sierpinski();
        let v = open_by_search(&s, PointSet::singleton(B), &fin_fin(), &Never).unwrap();
        assert!(v.is_mode_open);
        assert!(
            !open_by_characterization(&s, PointSet::singleton(B), &fin_fin())
                .unwrap()
                .is_mode_open
        );
        assert_eq!(
            is_mode_open(&s, PointSet::from_bits(0b100), &Ideal::fin(), &Ideal::fin()),
            Err(Error::PointOutOfRange(2))
        );
    }
}
