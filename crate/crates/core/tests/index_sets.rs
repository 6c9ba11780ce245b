use ik_lab::indexsets::{EpSet, Index, IndexDomain};
use num_rational::Ratio;
use proptest::prelude::*;

/// A set on ω as raw data, with membership read off directly.
#[derive(Debug, Clone)]
struct Raw {
    head: Vec<bool>,
    tail: Vec<bool>,
}

impl Raw {
    fn member(&self, s: Index) -> bool {
        match self.head.get(s as usize) {
            Some(&b) => b,
            None => self.tail[(s % self.tail.len() as u64) as usize],
        }
    }

    fn build(&self) -> EpSet {
        let head: Vec<Index> = (0..self.head.len() as u64)
            .filter(|&s| self.head[s as usize])
            .collect();
        let tail: Vec<Index> = (0..self.tail.len() as u64)
            .filter(|&r| self.tail[r as usize])
            .collect();
        EpSet::periodic(&head, self.head.len() as u64, self.tail.len() as u64, &tail).unwrap()
    }
}

fn raw() -> impl Strategy<Value = Raw> {
    (
        prop::collection::vec(any::<bool>(), 0..6),
        (1usize..=6).prop_flat_map(|p| prop::collection::vec(any::<bool>(), p)),
    )
        .prop_map(|(head, tail)| Raw { head, tail })
}

// lcm of two periods ≤ 6 is at most 30, heads are shorter than 6
const WINDOW: Index = 80;

proptest! {
    #[test]
    fn membership_matches_the_description(a in raw()) {
        let e = a.build();
        for s in 0..WINDOW {
            prop_assert_eq!(e.member(s).unwrap(), a.member(s));
        }
    }

    #[test]
    fn boolean_operations_are_pointwise(a in raw(), b in raw()) {
        let (x, y) = (a.build(), b.build());
        let (u, i, d, c) = (x.union(&y).unwrap(), x.intersect(&y).unwrap(), x.setminus(&y).unwrap(), x.complement());
        for s in 0..WINDOW {
            let (p, q) = (a.member(s), b.member(s));
            prop_assert_eq!(u.member(s).unwrap(), p || q);
            prop_assert_eq!(i.member(s).unwrap(), p && q);
            prop_assert_eq!(d.member(s).unwrap(), p && !q);
            prop_assert_eq!(c.member(s).unwrap(), !p);
        }
        prop_assert_eq!(&x | &y, u.clone());
        prop_assert_eq!((&x & &y).complement(), &c | &y.complement());
    }

    #[test]
    fn equality_is_set_equality(a in raw(), b in raw()) {
        let same = (0..WINDOW).all(|s| a.member(s) == b.member(s));
        prop_assert_eq!(a.build() == b.build(), same);
    }

    #[test]
    fn subset_and_finiteness(a in raw(), b in raw()) {
        let (x, y) = (a.build(), b.build());
        prop_assert_eq!(x.is_subset(&y).unwrap(), (0..WINDOW).all(|s| !a.member(s) || b.member(s)));
        prop_assert_eq!(x.is_finite_set(), !a.tail.iter().any(|&t| t));
        prop_assert_eq!(x.is_empty(), (0..WINDOW).all(|s| !a.member(s)));
        let ones = a.tail.iter().filter(|&&t| t).count() as u64;
        prop_assert_eq!(x.tail_density().unwrap(), Ratio::new(ones, a.tail.len() as u64));
    }

    #[test]
    fn canonical_form_is_minimal(a in raw()) {
        let x = a.build();
        let p = x.modulus();
        prop_assert!(p as usize <= a.tail.len() && a.tail.len() % p as usize == 0);
        prop_assert!(x.head_len() as usize <= a.head.len());
        let rebuilt = EpSet::periodic(&x.head_members(), x.head_len(), p, &x.tail_residues()).unwrap();
        prop_assert_eq!(rebuilt, x);
    }

    #[test]
    fn finite_domains_behave_like_bitmasks(n in 1usize..=10, a in any::<u32>(), b in any::<u32>()) {
        let mask = (1u32 << n) - 1;
        let (x, y) = (EpSet::from_bits(n, a), EpSet::from_bits(n, b));
        prop_assert_eq!(x.union(&y).unwrap().bits(), Some((a | b) & mask));
        prop_assert_eq!(x.intersect(&y).unwrap().bits(), Some(a & b & mask));
        prop_assert_eq!(x.complement().bits(), Some(!a & mask));
        prop_assert_eq!(x.is_subset(&y).unwrap(), a & mask & !b == 0);
        prop_assert_eq!(x.cardinality(), Some((a & mask).count_ones() as usize));
    }
}

#[test]
fn mixing_domains_is_an_error() {
    let a = EpSet::empty(IndexDomain::Finite(3));
    let b = EpSet::empty(IndexDomain::PeriodicOmega);
    assert!(a.union(&b).is_err());
    assert!(EpSet::periodic(&[3], 2, 1, &[]).is_err());
    assert!(EpSet::periodic(&[], 0, 0, &[]).is_err());
}
