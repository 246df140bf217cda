mod common;

use common::*;
use hornmodal::chase::{is_closed, saturate};
use hornmodal::constructions::{build_phi, build_phi_prime, MidConvention};
use hornmodal::semantics::{check_frame_condition, KripkeStructure};
use hornmodal::{FrameTheory, HornClause};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn theories() -> Vec<FrameTheory> {
    let c = |body: &[(usize, &str, &str)], head| HornClause::from_named(body, head);
    vec![
        FrameTheory::new(0, 1, vec![HornClause::transitivity(1)]).unwrap(),
        FrameTheory::new(
            1,
            0,
            vec![c(&[(1, "x", "y")], (1, "y", "x")), c(&[(1, "x", "y"), (1, "x", "z")], (1, "y", "z"))],
        )
        .unwrap(),
        FrameTheory::new(
            2,
            0,
            vec![
                c(&[(1, "x", "y"), (1, "y", "z")], (2, "x", "z")),
                c(&[(2, "x", "y")], (1, "y", "x")),
            ],
        )
        .unwrap(),
        build_phi(1, 1, MidConvention::A).unwrap(),
        build_phi_prime(0, 2, MidConvention::B).unwrap(),
    ]
}

fn check_saturation(s: &KripkeStructure, th: &FrameTheory) {
    let sat = saturate(s, th).unwrap();
    let out = &sat.structure;
    let closure = naive_closure(s, th);
    // least closed superset
    assert_eq!(edge_set(out), edge_set(&closure), "{}", s.to_json());
    assert!(edge_set(s).is_subset(&edge_set(out)));
    assert!(check_frame_condition(out, th).unwrap().holds());
    assert_eq!(sat.added(), out.edge_count() - s.edge_count());
    // idempotent
    let again = saturate(out, th).unwrap();
    assert_eq!(again.added(), 0);
    assert!(is_closed(out, th).unwrap());
    // every derivation is an instance whose body holds by its round
    let mut known = edge_set(s);
    let mut round = 0;
    let mut pending = Vec::new();
    for d in &sat.derivations {
        if d.round != round {
            known.extend(pending.drain(..));
            round = d.round;
        }
        let clause = &th.clauses()[d.clause_index];
        let world = |v: usize| {
            let name = &clause.variables[v];
            d.assignment.iter().find(|(x, _)| x == name).map(|(_, w)| w.clone()).unwrap()
        };
        for a in &clause.body {
            assert!(known.contains(&(a.rel, world(a.from), world(a.to))), "{d}");
        }
        assert_eq!((clause.head.rel, world(clause.head.from), world(clause.head.to)), (d.rel, d.from.clone(), d.to.clone()));
        pending.push((d.rel, d.from.clone(), d.to.clone()));
    }
}

#[test]
fn saturation_on_all_small_frames() {
    for th in theories() {
        let rels = th.relation_count();
        let max = if rels == 1 { 3 } else { 2 };
        for n in 1..=max {
            for s in all_frames(n, rels) {
                check_saturation(&s, &th);
            }
        }
    }
}

proptest! {
    #[test]
    fn saturation_on_random_frames(seed in any::<u64>(), which in 0usize..5) {
        let th = &theories()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 5, th.relation_count(), &[]);
        check_saturation(&s, th);
    }

    #[test]
    fn clause_order_does_not_matter(seed in any::<u64>(), which in 0usize..5) {
        let th = &theories()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 5, th.relation_count(), &[]);
        let order: Vec<usize> = (0..th.len()).rev().collect();
        let a = saturate(&s, th).unwrap();
        let b = saturate(&s, &th.reordered(&order)).unwrap();
        prop_assert_eq!(edge_set(&a.structure), edge_set(&b.structure));
    }

    #[test]
    fn saturation_keeps_labels(seed in any::<u64>()) {
        let th = &theories()[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 5, 1, &["p", "q"]);
        let out = saturate(&s, th).unwrap().structure;
        prop_assert_eq!(out.worlds(), s.worlds());
        for w in 0..s.world_count() {
            prop_assert_eq!(out.labels(w), s.labels(w));
        }
    }
}

#[test]
fn transitive_chain_closes_in_log_rounds() {
    let mut s = KripkeStructure::new(world_names(9), 1).unwrap();
    for i in 0..8 {
        s.add_edge_ids(1, i, i + 1).unwrap();
    }
    let sat = saturate(&s, &theories()[0]).unwrap();
    assert_eq!(sat.structure.edge_count(), 36);
    assert!(sat.rounds <= 4, "rounds = {}", sat.rounds);
}
