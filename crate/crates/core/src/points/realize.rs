use crate::convergence::FunctionSeq;
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::indexsets::{EpSet, Index, IndexDomain};
use crate::topology::{FiniteSpace, Point, PointSet};

/// Moduli tried per point of the target set.
const MODULUS_FACTOR: Index = 8;

/// A function on ω whose cluster set (trace reading) is exactly `target`.
///
/// With `target = {s_1 .. s_k}`, the residues modulo `m = k, 2k, .., 8k` are
/// split into blocks `P_1 .. P_k`, each neither in `I` nor in `K`, and the
/// function takes the value `s_i` on `P_i`. Residue classes in neither ideal
/// form blocks on their own; a class outside `I` only is paired with one
/// outside `K` only; classes in both go to `P_1`. On `U(y)` for `y` in the
/// target the hit set contains the block of `y`, so it is `K`-positive; off
/// the target `U(y)` misses it because the target is closed.
pub fn realize_cluster_set(
    space: &FiniteSpace,
    target: PointSet,
    i: &Ideal,
    k: &Ideal,
) -> Result<FunctionSeq> {
    if i.domain() != IndexDomain::PeriodicOmega || k.domain() != IndexDomain::PeriodicOmega {
        return Err(Error::NeedsOmega {
            op: "cluster set realization",
        });
    }
    if target.is_empty() {
        return Err(Error::EmptyClusterTarget);
    }
    if !target.is_subset(space.whole()) {
        return Err(Error::PointOutOfRange(target.iter().last().unwrap_or(0)));
    }
    if !space.is_closed_set(target) {
        return Err(Error::NotClosed);
    }
    if !i.join(k)?.is_proper() {
        return Err(Error::IdealityFails);
    }
    let points: Vec<Point> = target.iter().collect();
    let n = points.len() as Index;
    for m in (1..=MODULUS_FACTOR).map(|t| t * n) {
        if let Some(blocks) = partition(m, n as usize, i, k)? {
            let mut cycle = vec![points[0]; m as usize];
            for (block, &p) in blocks.iter().zip(&points) {
                for &r in block {
                    cycle[r as usize] = p;
                }
            }
            return FunctionSeq::periodic(Vec::new(), cycle);
        }
    }
    Err(Error::NoPartition {
        max_modulus: MODULUS_FACTOR * n,
        detail: explain(MODULUS_FACTOR * n, n as usize, i, k)?,
    })
}

fn class(m: Index, r: Index) -> EpSet {
    EpSet::residues(m, &[r]).expect("residue below modulus")
}

fn union_of(m: Index, rs: &[Index]) -> EpSet {
    EpSet::residues(m, rs).expect("residues below modulus")
}

// k blocks of residues mod m, each outside both ideals, or None.
fn partition(m: Index, k_blocks: usize, i: &Ideal, k: &Ideal) -> Result<Option<Vec<Vec<Index>>>> {
    let (mut both_out, mut out_of_i, mut out_of_k, mut inside) = (vec![], vec![], vec![], vec![]);
    for r in 0..m {
        let c = class(m, r);
        match (i.contains(&c)?, k.contains(&c)?) {
            (false, false) => both_out.push(r),
            (false, true) => out_of_i.push(r),
            (true, false) => out_of_k.push(r),
            (true, true) => inside.push(r),
        }
    }
    let mut blocks: Vec<Vec<Index>> = both_out.iter().map(|&r| vec![r]).collect();
    let pairs = out_of_i.len().min(out_of_k.len());
    for t in 0..pairs {
        blocks.push(vec![out_of_i[t], out_of_k[t]]);
    }
    if blocks.len() < k_blocks {
        return Ok(None);
    }
    let mut extra: Vec<Index> = blocks.drain(k_blocks..).flatten().collect();
    extra.extend(&out_of_i[pairs..]);
    extra.extend(&out_of_k[pairs..]);
    extra.extend(inside);
    blocks[0].extend(extra);
    for b in &mut blocks {
        b.sort_unstable();
    }
    for b in &blocks {
        let set = union_of(m, b);
        if i.contains(&set)? || k.contains(&set)? {
            return Ok(None);
        }
    }
    Ok(Some(blocks))
}

// Which blocks of a round-robin split fall into which ideal.
fn explain(m: Index, k_blocks: usize, i: &Ideal, k: &Ideal) -> Result<String> {
    let mut parts = Vec::new();
    for b in 0..k_blocks {
        let rs: Vec<Index> = (0..m).filter(|r| *r as usize % k_blocks == b).collect();
        let set = union_of(m, &rs);
        let mut inside = Vec::new();
        if i.contains(&set)? {
            inside.push("I");
        }
        if k.contains(&set)? {
            inside.push("K");
        }
        let verdict = if inside.is_empty() {
            "in neither".to_string()
        } else {
            format!("in {}", inside.join(" and "))
        };
        parts.push(format!("P{} = {set} {verdict}", b + 1));
    }
    Ok(format!("round-robin split mod {m}: {}", parts.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::{cluster_points, Semantics};

    #[test]
    fn discrete_two_of_three() {
        let d = FiniteSpace::discrete(3).unwrap();
        let fin = Ideal::fin();
        let f = realize_cluster_set(&d, PointSet::from_bits(0b011), &fin, &fin).unwrap();
        assert_eq!(f.cycle(), &[0, 1]);
        assert_eq!(
            cluster_points(&f, &fin, &fin, &d, Semantics::Trace).unwrap(),
            PointSet::from_bits(0b011)
        );
    }

    #[test]
    fn sierpinski_whole_space() {
        let s = FiniteSpace::sierpinski();
        let fin = Ideal::fin();
        let f = realize_cluster_set(&s, s.whole(), &fin, &fin).unwrap();
        assert_eq!(f.cycle().len(), 2);
        assert_eq!(
            cluster_points(&f, &fin, &fin, &s, Semantics::Trace).unwrap(),
            s.whole()
        );
    }

    #[test]
    fn evens_force_modulus_four() {
        let d = FiniteSpace::discrete(2).unwrap();
        let i = Ideal::principal(EpSet::residues(2, &[0]).unwrap());
        let fin = Ideal::fin();
        let f = realize_cluster_set(&d, d.whole(), &i, &fin).unwrap();
        assert_eq!(f.cycle().len(), 4);
        // P_2 is {3 mod 4}, P_1 the rest
        assert_eq!(f.cycle(), &[0, 0, 0, 1]);
        assert_eq!(
            cluster_points(&f, &i, &fin, &d, Semantics::Trace).unwrap(),
            d.whole()
        );
    }

    #[test]
    fn rejections() {
        let s = FiniteSpace::sierpinski();
        let fin = Ideal::fin();
        assert_eq!(
            realize_cluster_set(&s, PointSet::EMPTY, &fin, &fin),
            Err(Error::EmptyClusterTarget)
        );
        // {a} is open, not closed
        assert_eq!(
            realize_cluster_set(&s, PointSet::singleton(0), &fin, &fin),
            Err(Error::NotClosed)
        );
        let evens = Ideal::principal(EpSet::residues(2, &[0]).unwrap());
        let odds = Ideal::principal(EpSet::residues(2, &[1]).unwrap());
        assert_eq!(
            realize_cluster_set(&s, s.whole(), &evens, &odds),
            Err(Error::IdealityFails)
        );
        let fin4 = Ideal::principal(EpSet::from_bits(4, 1));
        assert!(matches!(
            realize_cluster_set(&s, s.whole(), &fin4, &fin4),
            Err(Error::NeedsOmega { .. })
        ));
    }

    #[test]
    fn reports_why_no_partition_exists() {
        // only 0 mod 1680 escapes the ideals; 1680 is a multiple of every even m ≤ 16,
        // so each modulus tried leaves a single class outside them
        let d = FiniteSpace::discrete(2).unwrap();
        let rest: Vec<Index> = (1..1680).collect();
        let i = Ideal::principal(EpSet::residues(1680, &rest).unwrap());
        match realize_cluster_set(&d, d.whole(), &i, &i) {
            Err(Error::NoPartition {
                max_modulus,
                detail,
            }) => {
                assert_eq!(max_modulus, 16);
                assert!(
                    detail.contains("P1") && detail.contains("in I and K"),
                    "{detail}"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
