use std::collections::BTreeSet;

use proptest::prelude::*;
use sinvaut_core::galois::{
    aut, encode_single, galois_closure, gamma, generate_group, invariant_image_op,
    is_galois_closed, ka_closure, loc_o, sinv, ssup, PermGroup, RelationSet,
};
use sinvaut_core::perm::all_permutations;
use sinvaut_core::{BaseSet, Perm, Relation};

fn base(n: usize) -> BaseSet {
    BaseSet::new(n).unwrap()
}

fn perm_from_rank(n: usize, rank: usize) -> Perm {
    all_permutations(n)
        .nth(rank % (1..=n).product::<usize>())
        .unwrap()
}

fn relation_from_bits(b: BaseSet, arity: usize, bits: &[bool]) -> Relation {
    Relation::from_fn(b, arity, |t| {
        let idx = t.iter().fold(0, |acc, &a| acc * b.size() + a);
        bits[idx % bits.len()]
    })
    .unwrap()
}

/// Up to three relations of arity at most 2 on a base of 2 to 4 elements.
fn arb_relation_set() -> impl Strategy<Value = RelationSet> {
    (
        2usize..5,
        prop::collection::vec((1usize..3, prop::collection::vec(any::<bool>(), 16)), 0..4),
    )
        .prop_map(|(n, specs)| {
            let b = base(n);
            let rels: Vec<Relation> = specs
                .iter()
                .map(|(m, bits)| relation_from_bits(b, *m, bits))
                .collect();
            RelationSet::from_relations(b, &rels).unwrap()
        })
}

fn arb_group() -> impl Strategy<Value = PermGroup> {
    (1usize..5, prop::collection::vec(any::<usize>(), 0..3)).prop_map(|(n, ranks)| {
        let gens: Vec<Perm> = ranks.iter().map(|&r| perm_from_rank(n, r)).collect();
        generate_group(base(n), &gens).unwrap()
    })
}

fn element_set(g: &PermGroup) -> BTreeSet<Perm> {
    g.elements().unwrap().iter().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_operators_are_extensive(r in arb_relation_set()) {
        let closed = galois_closure(&r, 2).unwrap();
        prop_assert!(r.is_subset(&closed));
        let g = aut(&r);
        let back = aut(&closed);
        prop_assert_eq!(element_set(&g), element_set(&back));
    }

    #[test]
    fn group_side_is_extensive(g in arb_group()) {
        let n = g.base().size();
        let s = sinv(&g, n).unwrap();
        let aut_sinv = s.aut();
        prop_assert!(element_set(&g).is_subset(&element_set(&aut_sinv)));
        prop_assert_eq!(element_set(&aut_sinv), element_set(&g));
    }

    #[test]
    fn aut_is_antitone(r in arb_relation_set(), extra in prop::collection::vec(any::<bool>(), 16)) {
        let mut bigger = r.clone();
        bigger.insert(relation_from_bits(r.base(), 2, &extra)).unwrap();
        prop_assert!(element_set(&aut(&bigger)).is_subset(&element_set(&aut(&r))));
    }

    #[test]
    fn sinv_is_antitone(g in arb_group(), rank in any::<usize>()) {
        let n = g.base().size();
        let mut gens = g.generators().to_vec();
        gens.push(perm_from_rank(n, rank));
        let bigger = generate_group(g.base(), &gens).unwrap();
        let small = sinv(&bigger, 2).unwrap();
        let large = sinv(&g, 2).unwrap();
        for m in 1..=2 {
            for orbit in small.orbits(m) {
                prop_assert!(large.contains(orbit));
            }
        }
    }

    #[test]
    fn gamma_of_sinv_is_the_orbit(g in arb_group(), seed in prop::collection::vec(any::<usize>(), 3)) {
        let n = g.base().size();
        let s = sinv(&g, 3).unwrap();
        let elements = g.elements().unwrap();
        for m in 1..=3 {
            let t: Vec<usize> = seed[..m].iter().map(|x| x % n).collect();
            let orbit: BTreeSet<Vec<usize>> = elements.iter().map(|p| p.apply_tuple(&t)).collect();
            let got: BTreeSet<Vec<usize>> = s.gamma(&t).unwrap().tuples().collect();
            prop_assert_eq!(&got, &orbit);
            if let Some(rels) = s.relations(m) {
                let set = RelationSet::from_relations(g.base(), rels).unwrap();
                let via_set: BTreeSet<Vec<usize>> = gamma(&set, &t).unwrap().tuples().collect();
                prop_assert_eq!(via_set, orbit);
            }
        }
    }

    #[test]
    fn krasner_closure_equals_galois_closure(r in arb_relation_set()) {
        prop_assert_eq!(ka_closure(&r, 2).unwrap(), galois_closure(&r, 2).unwrap());
    }

    #[test]
    fn galois_closures_are_galois_closed(r in arb_relation_set()) {
        let closed = galois_closure(&r, 2).unwrap();
        prop_assert!(is_galois_closed(&closed, 2).unwrap().is_closed());
    }

    #[test]
    fn ssup_is_invariant(bits in prop::collection::vec(any::<bool>(), 16), a in (0usize..3, 0usize..3)) {
        let b = base(3);
        let r = relation_from_bits(b, 2, &bits);
        let s = ssup(&[a.0, a.1], &[(vec![0, 1], r.clone())], b).unwrap();
        let group = aut(&RelationSet::from_relations(b, [&r]).unwrap());
        for g in group.elements().unwrap() {
            prop_assert!(s.is_invariant_under(g));
        }
    }

    #[test]
    fn invariant_op_commutes_with_permutations(
        t_bits in prop::collection::vec(any::<bool>(), 16),
        s_bits in prop::collection::vec(any::<bool>(), 4),
        in_rank in any::<usize>(),
        rank in any::<usize>(),
    ) {
        let b = base(4);
        let target = relation_from_bits(b, 2, &t_bits);
        let sigma = relation_from_bits(b, 1, &s_bits);
        let input = target.permuted(&perm_from_rank(4, in_rank)).unwrap();
        let g = perm_from_rank(4, rank);
        let lhs = invariant_image_op(std::slice::from_ref(&target), &sigma, &[input.permuted(&g).unwrap()]).unwrap();
        let rhs = invariant_image_op(&[target], &sigma, &[input]).unwrap().permuted(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn aut_matches_brute_force_on_small_digraphs() {
    for n in 1..=3usize {
        let b = base(n);
        for code in 0u32..(1 << (n * n)) {
            let r = Relation::from_fn(b, 2, |t| code >> (t[0] * n + t[1]) & 1 == 1).unwrap();
            let brute: Vec<Perm> = all_permutations(n)
                .filter(|g| r.is_invariant_under(g))
                .collect();
            let got = aut(&RelationSet::from_relations(b, [&r]).unwrap());
            assert_eq!(got.elements().unwrap(), &brute[..]);
        }
    }
}

#[test]
fn encoder_is_exact_on_all_unary_families_of_three_points() {
    let b = base(3);
    let unary: Vec<Relation> = (0u32..8)
        .map(|bits| Relation::from_fn(b, 1, |t| bits >> t[0] & 1 == 1).unwrap())
        .collect();
    let mut families = 0;
    for mask in 0u32..256 {
        let q: Vec<Relation> = (0..8)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| unary[i].clone())
            .collect();
        if !q.iter().all(|r| q.contains(&r.complement())) {
            continue;
        }
        families += 1;
        let enc = encode_single(&q, b, 1).unwrap();
        let lhs = aut(&RelationSet::from_relations(b, [&enc]).unwrap());
        let rhs = aut(&RelationSet::from_relations(b, &q).unwrap());
        assert_eq!(lhs.elements(), rhs.elements());
    }
    assert_eq!(families, 16);
}

#[test]
fn loc_o_recovers_every_subgroup_of_sym3() {
    let b = base(3);
    let all: Vec<Perm> = all_permutations(3).collect();
    let mut subgroups = BTreeSet::new();
    for i in 0..6 {
        for j in 0..6 {
            let g = generate_group(b, &[all[i].clone(), all[j].clone()]).unwrap();
            subgroups.insert(g.elements().unwrap().to_vec());
        }
    }
    assert_eq!(subgroups.len(), 6);
    for h in subgroups {
        assert_eq!(loc_o(&h, b, 3).unwrap(), h);
    }
}
