use std::sync::OnceLock;

use ik_lab::convergence::{decide, limit_set, oracle, replay_witnesses, FunctionSeq, Mode};
use ik_lab::ideals::Ideal;
use ik_lab::indexsets::{EpSet, IndexDomain};
use ik_lab::points::{cluster_points, limit_points, limit_points_by_search, Semantics};
use ik_lab::topology::{enumerate_topologies, FiniteSpace, PointSet};
use proptest::prelude::*;

fn spaces() -> &'static [FiniteSpace] {
    static ALL: OnceLock<Vec<FiniteSpace>> = OnceLock::new();
    ALL.get_or_init(|| {
        (1..=3)
            .flat_map(|k| enumerate_topologies(k).unwrap())
            .collect()
    })
}

// moduli and cycle lengths divide 4 so the oracle's witness window stays small
fn residue_ideal() -> impl Strategy<Value = Ideal> {
    prop_oneof![
        Just(Ideal::fin()),
        (prop::sample::select(vec![2u64, 4]), any::<u8>()).prop_map(|(p, r)| {
            let tail: Vec<u64> = (0..p).filter(|&x| r >> x & 1 == 1).collect();
            Ideal::principal(EpSet::residues(p, &tail).unwrap())
        }),
    ]
}

#[derive(Debug, Clone)]
struct Case {
    space: FiniteSpace,
    f: FunctionSeq,
    i: Ideal,
    k: Ideal,
}

fn case() -> impl Strategy<Value = Case> {
    (0..spaces().len()).prop_flat_map(|si| {
        let space = spaces()[si].clone();
        let n = space.len();
        (
            prop::collection::vec(0..n, 0..2),
            prop::sample::select(vec![1usize, 2, 4])
                .prop_flat_map(move |p| prop::collection::vec(0..n, p)),
            residue_ideal(),
            residue_ideal(),
        )
            .prop_map(move |(head, cycle, i, k)| Case {
                space: space.clone(),
                f: FunctionSeq::periodic(head, cycle).unwrap(),
                i,
                k,
            })
    })
}

fn modes(c: &Case) -> Vec<Mode> {
    vec![
        Mode::base(c.i.clone()),
        Mode::ik(c.i.clone(), c.k.clone()).unwrap(),
        Mode::union(&c.i, &c.k).unwrap(),
        Mode::sup(c.i.clone(), Mode::star(c.k.clone()).unwrap()).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fast_path_matches_the_definition(c in case()) {
        for mode in modes(&c) {
            for x in c.space.points() {
                let fast = decide(&c.f, x, &mode, &c.space).unwrap();
                let slow = oracle(&c.f, x, &mode, &c.space).unwrap();
                prop_assert_eq!(fast.converges, slow.converges);
                prop_assert_eq!(fast.degenerate, slow.degenerate);
                if fast.converges {
                    prop_assert!(replay_witnesses(&c.f, x, &mode, &c.space, &fast.witnesses).unwrap());
                }
            }
        }
    }

    #[test]
    fn constant_functions_converge_on_the_point_closure(c in case(), p in 0usize..3) {
        let p = p % c.space.len();
        let f = FunctionSeq::constant(IndexDomain::PeriodicOmega, p);
        let closure = c.space.closure(PointSet::singleton(p));
        for mode in modes(&c) {
            let limits = limit_set(&f, &mode, &c.space).unwrap();
            if mode.effective_ideal().is_proper() {
                prop_assert_eq!(limits, closure);
            } else {
                prop_assert_eq!(limits, c.space.whole());
            }
        }
    }

    #[test]
    fn cluster_sets(c in case()) {
        prop_assume!(c.i.join(&c.k).unwrap().is_proper());
        let trace = cluster_points(&c.f, &c.i, &c.k, &c.space, Semantics::Trace).unwrap();
        prop_assert!(c.space.is_closed_set(trace));
        let limits = limit_set(&c.f, &Mode::ik(c.i.clone(), c.k.clone()).unwrap(), &c.space).unwrap();
        prop_assert!(limits.is_subset(trace));
        for sem in Semantics::BOTH {
            let by_search = limit_points_by_search(&c.f, &c.i, &c.k, &c.space, sem).unwrap();
            prop_assert_eq!(limit_points(&c.f, &c.i, &c.k, &c.space, sem).unwrap(), by_search);
        }
        let padded = cluster_points(&c.f, &c.i, &c.k, &c.space, Semantics::Padded).unwrap();
        if !c.i.is_subideal_of(&c.k).unwrap() {
            prop_assert_eq!(padded, c.space.whole());
        } else {
            prop_assert_eq!(padded, trace);
        }
    }
}
