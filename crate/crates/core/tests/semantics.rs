mod common;

use common::*;
use hornmodal::semantics::{
    check_frame_condition, check_global, check_local, check_transitive, type_of, Evaluation, FrameCheck,
    KripkeStructure,
};
use hornmodal::{FrameTheory, HornClause, ModalFormula};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PROPS: [&str; 3] = ["p", "q", "r"];

fn instance(seed: u64, max_worlds: usize, rels: usize, size: usize) -> (KripkeStructure, ModalFormula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_structure(&mut rng, max_worlds, rels, &PROPS);
    let f = random_formula(&mut rng, size, rels, &PROPS);
    (s, f)
}

proptest! {
    #[test]
    fn evaluation_matches_recursive_definition(seed in any::<u64>(), size in 1usize..16) {
        let (s, f) = instance(seed, 6, 2, size);
        let eval = Evaluation::new(&s, &f).unwrap();
        for w in 0..s.world_count() {
            prop_assert_eq!(eval.holds_at(w), naive_holds(&s, w, &f), "{} at {}", f, s.world_name(w));
        }
    }

    #[test]
    fn box_is_dual_of_diamond(seed in any::<u64>(), size in 1usize..10, rel in 1usize..3) {
        let (s, f) = instance(seed, 8, 2, size);
        let boxed = ModalFormula::boxed(rel, f.clone());
        let dual = ModalFormula::not(ModalFormula::diamond(rel, ModalFormula::not(f)));
        let (a, b) = (Evaluation::new(&s, &boxed).unwrap(), Evaluation::new(&s, &dual).unwrap());
        prop_assert_eq!(a.satisfying_worlds(), b.satisfying_worlds());
    }

    #[test]
    fn global_is_conjunction_of_local(seed in any::<u64>(), size in 1usize..13) {
        let (s, f) = instance(seed, 8, 2, size);
        let all = s.worlds().iter().all(|w| check_local(&s, w, &f).unwrap());
        prop_assert_eq!(check_global(&s, &f).unwrap(), all);
    }

    #[test]
    fn type_is_the_true_subformulas(seed in any::<u64>(), size in 1usize..13) {
        let (s, f) = instance(seed, 8, 2, size);
        for (w, name) in s.worlds().iter().enumerate() {
            let tp = type_of(&s, name, &f).unwrap();
            prop_assert!(tp.len() <= f.len());
            let want: Vec<_> = f.subformulas().into_iter().filter(|g| naive_holds(&s, w, g)).collect();
            prop_assert_eq!(tp.len(), want.len());
            for g in &want {
                prop_assert!(tp.contains(g));
            }
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let (s, _) = instance(seed, 6, 3, 1);
        let back = KripkeStructure::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.worlds(), s.worlds());
        prop_assert_eq!(edge_set(&back), edge_set(&s));
        for w in 0..s.world_count() {
            prop_assert_eq!(back.labels(w), s.labels(w));
        }
    }
}

fn assert_agrees(s: &KripkeStructure, clause: &HornClause) {
    let th = FrameTheory::new(clause.max_relation(), 0, vec![clause.clone()]).unwrap();
    let want = naive_violation(s, clause);
    match check_frame_condition(s, &th).unwrap() {
        FrameCheck::Holds => assert!(want.is_none(), "{clause} missed on {}", s.to_json()),
        FrameCheck::Violated(v) => {
            let a = want.unwrap_or_else(|| panic!("{clause} spurious on {}", s.to_json()));
            let expected: Vec<(String, String)> = clause
                .variables
                .iter()
                .zip(&a)
                .map(|(x, &w)| (x.clone(), s.world_name(w).to_string()))
                .collect();
            assert_eq!(v.assignment, expected, "{clause} on {}", s.to_json());
        }
    }
}

#[test]
fn frame_check_matches_naive_on_small_frames() {
    let one = small_clauses(1);
    for n in 1..=3 {
        for s in all_frames(n, 1) {
            for c in &one {
                assert_agrees(&s, c);
            }
        }
    }
    let two = small_clauses(2);
    for n in 1..=2 {
        for s in all_frames(n, 2) {
            for c in &two {
                assert_agrees(&s, c);
            }
        }
    }
}

#[test]
fn frame_check_matches_naive_on_four_worlds() {
    let clauses = core_clauses();
    for s in all_frames(4, 1).step_by(7) {
        for c in &clauses {
            assert_agrees(&s, c);
        }
    }
}

#[test]
fn transitivity_check_agrees_with_clause() {
    for s in all_frames(3, 1) {
        let direct = check_transitive(&s, 1).unwrap();
        assert_eq!(direct, naive_violation(&s, &HornClause::transitivity(1)).is_none());
    }
}

#[test]
fn worlds_are_byte_ordered() {
    let s = KripkeStructure::new(["b", "a", "B"], 1).unwrap();
    assert_eq!(s.worlds(), ["B", "a", "b"]);
    assert!(KripkeStructure::new(["a", "a"], 1).is_err());
}

#[test]
fn relation_out_of_range_is_an_error() {
    let s = structure_from_bits(2, 1, 0b0010, &[], &[]);
    assert!(check_local(&s, "w0", &ModalFormula::diamond(2, ModalFormula::Top)).is_err());
    assert!(check_local(&s, "w9", &ModalFormula::Top).is_err());
    let th = FrameTheory::new(2, 0, vec![HornClause::transitivity(2)]).unwrap();
    assert!(check_frame_condition(&s, &th).is_err());
}
