use ik_lab::ideals::{enumerate_ideals_finite, ideality_condition, residue_library, Ideal};
use ik_lab::indexsets::{EpSet, Index, IndexDomain};
use proptest::prelude::*;

const OMEGA: IndexDomain = IndexDomain::PeriodicOmega;

fn set() -> impl Strategy<Value = EpSet> {
    (
        prop::collection::vec(0u64..5, 0..3),
        1u64..=4,
        prop::collection::vec(0u64..4, 0..3),
    )
        .prop_map(|(head, p, tail)| {
            let tail: Vec<Index> = tail.into_iter().filter(|&r| r < p).collect();
            EpSet::periodic(&head, 5, p, &tail).unwrap()
        })
}

fn ideal() -> impl Strategy<Value = Ideal> {
    prop::collection::vec(set(), 0..3).prop_map(|g| Ideal::generated(OMEGA, g).unwrap())
}

/// `A ∖ G` finite, read off on residues past every head.
fn member_by_residues(a: &EpSet, gens: &[EpSet]) -> bool {
    // moduli ≤ 4 and heads shorter than 5; one period of lcm 12 past 5 decides
    (5..5 + 12).all(|s| !a.member(s).unwrap() || gens.iter().any(|g| g.member(s).unwrap()))
}

proptest! {
    #[test]
    fn membership_is_containment_modulo_finite(gens in prop::collection::vec(set(), 0..3), a in set()) {
        let i = Ideal::generated(OMEGA, gens.clone()).unwrap();
        prop_assert_eq!(i.contains(&a).unwrap(), member_by_residues(&a, &gens));
        for g in &gens {
            prop_assert!(i.contains(g).unwrap());
        }
        prop_assert!(i.contains(&EpSet::from_indices(OMEGA, &[0, 3, 7]).unwrap()).unwrap());
    }

    #[test]
    fn closed_under_subsets_and_unions(i in ideal(), a in set(), b in set()) {
        if i.contains(&a).unwrap() {
            prop_assert!(i.contains(&a.intersect(&b).unwrap()).unwrap());
            if i.contains(&b).unwrap() {
                prop_assert!(i.contains(&a.union(&b).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn dual_filter_and_positive_sets(i in ideal(), a in set()) {
        prop_assert_eq!(i.is_positive(&a).unwrap(), !i.contains(&a).unwrap());
        if i.is_proper() {
            prop_assert_eq!(i.in_dual_filter(&a).unwrap(), i.contains(&a.complement()).unwrap());
            prop_assert!(!(i.contains(&a).unwrap() && i.in_dual_filter(&a).unwrap()));
        } else {
            prop_assert!(i.in_dual_filter(&a).is_err());
        }
        prop_assert_eq!(i.is_proper(), !i.contains(&EpSet::full(OMEGA)).unwrap());
    }

    #[test]
    fn join_is_the_least_upper_bound(i in ideal(), k in ideal(), a in set()) {
        let j = i.join(&k).unwrap();
        prop_assert!(i.is_subideal_of(&j).unwrap() && k.is_subideal_of(&j).unwrap());
        let mut gens = i.generators().to_vec();
        gens.extend(k.generators().iter().cloned());
        prop_assert_eq!(j.contains(&a).unwrap(), member_by_residues(&a, &gens));
        prop_assert_eq!(ideality_condition(&i, &k).unwrap(), j.is_proper());
        prop_assert!(j.same_family(&k.join(&i).unwrap()).unwrap());
    }

    #[test]
    fn extending_by_a_member_changes_nothing(i in ideal(), a in set()) {
        if i.contains(&a).unwrap() {
            prop_assert!(i.extend_by_member(&a).unwrap().same_family(&i).unwrap());
        }
    }
}

#[test]
fn finite_domains_have_one_proper_ideal_per_proper_subset() {
    for n in 1..=6 {
        let d = IndexDomain::finite(n).unwrap();
        let all: Vec<Ideal> = enumerate_ideals_finite(d).unwrap().collect();
        assert_eq!(all.len(), (1 << n) - 1);
        assert!(all.iter().all(Ideal::is_proper));
        for (x, i) in all.iter().enumerate() {
            for (y, k) in all.iter().enumerate() {
                assert_eq!(i.is_subideal_of(k).unwrap(), x & !y == 0);
            }
        }
    }
}

#[test]
fn residue_library_is_proper_and_distinct() {
    let lib = residue_library(6);
    assert!(lib.iter().all(|(_, i)| i.is_proper()));
    for (a, (_, i)) in lib.iter().enumerate() {
        for (_, k) in &lib[a + 1..] {
            assert!(!i.same_family(k).unwrap());
        }
    }
}
