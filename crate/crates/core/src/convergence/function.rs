use std::fmt;

use crate::error::{Error, Result};
use crate::indexsets::{lcm, EpSet, Index, IndexDomain};
use crate::topology::{FiniteSpace, Point, PointMap, PointSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Finite(Vec<Point>),
    // f(s) = head[s] for s < q, cycle[(s - q) mod p] afterwards
    Periodic { head: Vec<Point>, cycle: Vec<Point> },
}

/// A function from the index domain into the points of a finite space.
///
/// On ω the function is eventually periodic: an explicit head followed by a
/// repeating cycle. Like [`EpSet`], it is stored in canonical form (shortest
/// cycle, then shortest head), so `==` is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSeq {
    repr: Repr,
}

impl FunctionSeq {
    pub fn finite(values: Vec<Point>) -> Result<FunctionSeq> {
        IndexDomain::finite(values.len())?;
        Ok(FunctionSeq {
            repr: Repr::Finite(values),
        })
    }

    /// `head` first, then `cycle` repeated forever.
    pub fn periodic(head: Vec<Point>, cycle: Vec<Point>) -> Result<FunctionSeq> {
        if cycle.is_empty() {
            return Err(Error::EmptyFunction);
        }
        Ok(FunctionSeq::canonical(head, cycle))
    }

    pub fn constant(domain: IndexDomain, x: Point) -> FunctionSeq {
        match domain {
            IndexDomain::Finite(n) => FunctionSeq {
                repr: Repr::Finite(vec![x; n]),
            },
            IndexDomain::PeriodicOmega => FunctionSeq::canonical(Vec::new(), vec![x]),
        }
    }

    fn canonical(mut head: Vec<Point>, mut cycle: Vec<Point>) -> FunctionSeq {
        let p = cycle.len();
        let d = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (d..p).all(|i| cycle[i] == cycle[i % d]))
            .unwrap_or(p);
        cycle.truncate(d);
        // Pull the cycle one step earlier while the head agrees with it.
        while let Some(&last) = head.last() {
            if last == cycle[d - 1] {
                head.pop();
                cycle.rotate_right(1);
            } else {
                break;
            }
        }
        FunctionSeq {
            repr: Repr::Periodic { head, cycle },
        }
    }

    /// Builds a function on ω from a rule that is periodic with period `p` from `q` on.
    pub(crate) fn from_rule(q: Index, p: Index, rule: impl Fn(Index) -> Point) -> FunctionSeq {
        let head = (0..q).map(&rule).collect();
        let cycle = (q..q + p).map(&rule).collect();
        FunctionSeq::canonical(head, cycle)
    }

    pub fn domain(&self) -> IndexDomain {
        match &self.repr {
            Repr::Finite(v) => IndexDomain::Finite(v.len()),
            Repr::Periodic { .. } => IndexDomain::PeriodicOmega,
        }
    }

    #[inline]
    pub fn value(&self, s: Index) -> Point {
        match &self.repr {
            Repr::Finite(v) => v[s as usize],
            Repr::Periodic { head, cycle } => {
                let q = head.len() as Index;
                if s < q {
                    head[s as usize]
                } else {
                    cycle[((s - q) % cycle.len() as Index) as usize]
                }
            }
        }
    }

    /// The value list on a finite domain, the head on ω.
    pub fn head(&self) -> &[Point] {
        match &self.repr {
            Repr::Finite(v) => v,
            Repr::Periodic { head, .. } => head,
        }
    }

    /// The repeating part on ω; empty on a finite domain.
    pub fn cycle(&self) -> &[Point] {
        match &self.repr {
            Repr::Finite(_) => &[],
            Repr::Periodic { cycle, .. } => cycle,
        }
    }

    /// Every value the function takes.
    pub fn range(&self) -> PointSet {
        self.head().iter().chain(self.cycle()).copied().collect()
    }

    pub(crate) fn check_in(&self, space: &FiniteSpace) -> Result<()> {
        match self
            .head()
            .iter()
            .chain(self.cycle())
            .find(|&&p| p >= space.len())
        {
            Some(&p) => Err(Error::PointOutOfRange(p)),
            None => Ok(()),
        }
    }

    /// `s ↦ c(f(s))`.
    pub fn compose(&self, map: &PointMap) -> FunctionSeq {
        self.map_points(|p| map.apply(p))
    }

    pub fn map_points(&self, g: impl Fn(Point) -> Point) -> FunctionSeq {
        match &self.repr {
            Repr::Finite(v) => FunctionSeq {
                repr: Repr::Finite(v.iter().map(|&p| g(p)).collect()),
            },
            Repr::Periodic { head, cycle } => FunctionSeq::canonical(
                head.iter().map(|&p| g(p)).collect(),
                cycle.iter().map(|&p| g(p)).collect(),
            ),
        }
    }

    /// Smallest `(q, p)` such that the function is periodic with period `p` from `q` on.
    pub(crate) fn shape(&self) -> (Index, Index) {
        match &self.repr {
            Repr::Finite(_) => (0, 1),
            Repr::Periodic { head, cycle } => (head.len() as Index, cycle.len() as Index),
        }
    }

    pub fn display_in(&self, space: &FiniteSpace) -> String {
        let names = |v: &[Point]| {
            v.iter()
                .map(|&p| space.name(p))
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.repr {
            Repr::Finite(v) => format!("[{}]", names(v)),
            Repr::Periodic { head, cycle } if head.is_empty() => format!("({})^ω", names(cycle)),
            Repr::Periodic { head, cycle } => format!("[{}]({})^ω", names(head), names(cycle)),
        }
    }
}

impl fmt::Debug for FunctionSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Finite(v) => write!(f, "FunctionSeq{v:?}"),
            Repr::Periodic { head, cycle } => write!(f, "FunctionSeq{head:?}{cycle:?}^ω"),
        }
    }
}

/// Every function `{0..n-1} → {0..k-1}`, with index 0 varying fastest.
pub fn all_finite_functions(n: usize, k: usize) -> Result<Vec<FunctionSeq>> {
    IndexDomain::finite(n)?;
    let total = k
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or(Error::TooLarge {
            what: "function enumeration",
            got: n,
            max: 24,
        })?;
    Ok((0..total)
        .map(|mut code| {
            let values = (0..n)
                .map(|_| {
                    let v = code % k;
                    code /= k;
                    v
                })
                .collect();
            FunctionSeq {
                repr: Repr::Finite(values),
            }
        })
        .collect())
}

/// Every purely periodic function on ω into `{0..k-1}` with minimal period
/// at most `max_period`, each exactly once, shorter periods first.
pub fn periodic_functions(k: usize, max_period: usize) -> Vec<FunctionSeq> {
    let mut out = Vec::new();
    for d in 1..=max_period {
        let total = k.pow(d as u32);
        for mut code in 0..total {
            let cycle: Vec<Point> = (0..d)
                .map(|_| {
                    let v = code % k;
                    code /= k;
                    v
                })
                .collect();
            let f = FunctionSeq::canonical(Vec::new(), cycle);
            if f.cycle().len() == d {
                out.push(f);
            }
        }
    }
    out
}

/// `{s : f(s) ∉ U}`.
pub fn bad_set(f: &FunctionSeq, u: PointSet) -> EpSet {
    match &f.repr {
        Repr::Finite(v) => {
            let bits = v
                .iter()
                .enumerate()
                .filter(|(_, &p)| !u.contains(p))
                .fold(0u32, |acc, (s, _)| acc | 1 << s);
            EpSet::from_bits(v.len(), bits)
        }
        Repr::Periodic { .. } => {
            let (q, p) = f.shape();
            EpSet::from_predicate(q, p, |s| !u.contains(f.value(s)))
        }
    }
}

/// `{s : f(s) ∈ U}`.
pub fn hit_set(f: &FunctionSeq, u: PointSet) -> EpSet {
    bad_set(f, u).complement()
}

/// `g(s) = replacement(s)` for `s ∈ A`, `f(s)` elsewhere.
pub fn modify_on_set(f: &FunctionSeq, a: &EpSet, replacement: &FunctionSeq) -> Result<FunctionSeq> {
    f.domain().check_same(a.domain())?;
    f.domain().check_same(replacement.domain())?;
    Ok(match &f.repr {
        Repr::Finite(v) => FunctionSeq {
            repr: Repr::Finite(
                (0..v.len() as Index)
                    .map(|s| {
                        if a.get(s) {
                            replacement.value(s)
                        } else {
                            v[s as usize]
                        }
                    })
                    .collect(),
            ),
        },
        Repr::Periodic { .. } => {
            let (qf, pf) = f.shape();
            let (qr, pr) = replacement.shape();
            let q = qf.max(qr).max(a.head_len());
            let p = lcm(lcm(pf, pr), a.modulus());
            FunctionSeq::from_rule(q, p, |s| {
                if a.get(s) {
                    replacement.value(s)
                } else {
                    f.value(s)
                }
            })
        }
    })
}

/// `f` on `M`, the constant `x` off `M`: the padded function of the witness scheme.
pub fn pad_outside(f: &FunctionSeq, m: &EpSet, x: Point) -> Result<FunctionSeq> {
    modify_on_set(f, &m.complement(), &FunctionSeq::constant(f.domain(), x))
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: IndexDomain = IndexDomain::PeriodicOmega;

    #[test]
    fn canonical_functions() {
        let f = FunctionSeq::periodic(vec![1, 0], vec![1, 0, 1, 0]).unwrap();
        assert_eq!(f, FunctionSeq::periodic(vec![], vec![1, 0]).unwrap());
        let g = FunctionSeq::periodic(vec![2], vec![0, 1]).unwrap();
        assert_eq!(g.head(), &[2]);
        for s in 0..12 {
            let expected = if s == 0 { 2 } else { (s - 1) % 2 };
            assert_eq!(g.value(s as u64), expected);
        }
        assert!(FunctionSeq::periodic(vec![0], vec![]).is_err());
        assert!(FunctionSeq::finite(vec![]).is_err());
    }

    #[test]
    fn bad_sets() {
        let b = 1;
        let a = 0;
        let f = FunctionSeq::periodic(vec![], vec![b, a]).unwrap();
        assert_eq!(
            bad_set(&f, PointSet::singleton(a)),
            EpSet::residues(2, &[0]).unwrap()
        );
        let c = FunctionSeq::constant(W, 2);
        assert!(bad_set(&c, PointSet::from_bits(0b100)).is_empty());
        let g = FunctionSeq::finite(vec![b, a, b, a]).unwrap();
        assert_eq!(
            bad_set(&g, PointSet::singleton(a)),
            EpSet::from_bits(4, 0b0101)
        );
    }

    #[test]
    fn bad_set_with_head_matches_pointwise() {
        let f = FunctionSeq::periodic(vec![2, 2, 0], vec![0, 1, 1]).unwrap();
        let u = PointSet::singleton(1);
        let b = bad_set(&f, u);
        for s in 0..40 {
            assert_eq!(b.get(s), f.value(s) != 1, "s = {s}");
        }
    }

    #[test]
    fn enumerations() {
        let all = all_finite_functions(4, 3).unwrap();
        assert_eq!(all.len(), 81);
        assert_eq!(all[1].head(), &[1, 0, 0, 0]);
        let per = periodic_functions(2, 6);
        // primitive binary words of length 1..6
        assert_eq!(per.len(), 2 + 2 + 6 + 12 + 30 + 54);
        let mut sorted = per.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), per.len());
        assert_eq!(periodic_functions(3, 6).len(), 3 + 6 + 24 + 72 + 240 + 696);
    }

    #[test]
    fn modification() {
        let f = FunctionSeq::periodic(vec![], vec![0, 1]).unwrap();
        let r = FunctionSeq::constant(W, 2);
        assert_eq!(modify_on_set(&f, &EpSet::empty(W), &r).unwrap(), f);
        assert_eq!(modify_on_set(&f, &EpSet::full(W), &r).unwrap(), r);
        let a = EpSet::residues(3, &[0]).unwrap();
        let g = modify_on_set(&f, &a, &r).unwrap();
        for s in 0..30 {
            let expected = if s % 3 == 0 { 2 } else { s as usize % 2 };
            assert_eq!(g.value(s), expected);
        }
        assert!(modify_on_set(&f, &EpSet::from_bits(2, 1), &r).is_err());
    }
}
