use proptest::prelude::*;
use sinvaut_core::perm::all_permutations;
use sinvaut_core::{apply_permutation, intersect_all, BaseSet, Perm, Relation};

fn arb_relation(n: usize, arity: usize) -> impl Strategy<Value = Relation> {
    let b = BaseSet::new(n).unwrap();
    prop::collection::vec(any::<bool>(), n.pow(arity as u32)).prop_map(move |bits| {
        Relation::from_tuples(
            b,
            arity,
            b.tuples(arity)
                .zip(&bits)
                .filter(|(_, &on)| on)
                .map(|(t, _)| t),
        )
        .unwrap()
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    let count = (1..=n).product::<usize>();
    (0..count).prop_map(move |k| all_permutations(n).nth(k).unwrap())
}

fn arb_case() -> impl Strategy<Value = (Relation, Perm, Perm)> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(n, m)| (arb_relation(n, m), arb_perm(n), arb_perm(n)))
}

fn arb_family() -> impl Strategy<Value = (BaseSet, Vec<Relation>, Relation)> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(n, m)| {
        (
            Just(BaseSet::new(n).unwrap()),
            prop::collection::vec(arb_relation(n, m), 0..5),
            arb_relation(n, m),
        )
    })
}

proptest! {
    #[test]
    fn permutations_act_on_relations((r, g, h) in arb_case()) {
        let composed = apply_permutation(&g.compose(&h), &r).unwrap();
        let stepwise = apply_permutation(&g, &apply_permutation(&h, &r).unwrap()).unwrap();
        prop_assert_eq!(composed, stepwise);
        prop_assert_eq!(apply_permutation(&Perm::identity(r.base().size()), &r).unwrap(), r);
    }

    #[test]
    fn complement_commutes_with_permutations((r, g, _) in arb_case()) {
        prop_assert_eq!(
            apply_permutation(&g, &r.complement()).unwrap(),
            apply_permutation(&g, &r).unwrap().complement()
        );
        prop_assert_eq!(r.complement().complement(), r);
    }

    #[test]
    fn intersect_all_is_a_meet((b, family, extra) in arb_family()) {
        let m = extra.arity();
        let meet = intersect_all(&family, b, m).unwrap();
        let doubled: Vec<Relation> = family.iter().chain(&family).cloned().collect();
        prop_assert_eq!(intersect_all(&doubled, b, m).unwrap(), meet.clone());
        let reversed: Vec<Relation> = family.iter().rev().cloned().collect();
        prop_assert_eq!(intersect_all(&reversed, b, m).unwrap(), meet.clone());
        let larger: Vec<Relation> = family.iter().cloned().chain([extra]).collect();
        prop_assert!(intersect_all(&larger, b, m).unwrap().is_subset(&meet));
        prop_assert!(family.iter().all(|r| meet.is_subset(r)));
    }
}
