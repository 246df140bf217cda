mod common;

use common::*;
use hornmodal::chase::saturate;
use hornmodal::constructions::{
    build_phi, grid_model, phi_d, prune_no_predecessor, reduce, tile_torus, tiling_model, two_step_paths,
    verify_figure, Decoding, DominoSystem, GridModelSpec, MidConvention, Target, Topology,
};
use hornmodal::semantics::{check_frame_condition, check_global, check_local, Evaluation, KripkeStructure};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn names(s: &KripkeStructure) -> std::collections::BTreeSet<String> {
    s.worlds().iter().cloned().collect()
}

#[test]
fn patch_matches_drawing_rule() {
    for k in 1..=6 {
        let g = grid_model(&GridModelSpec::patch(k)).unwrap();
        let (worlds, edges) = grid_oracle(k, false);
        assert_eq!(names(&g), worlds);
        assert_eq!(edge_set(&g), edges);
        assert_eq!(g.world_count(), (k + 1) * (k + 1) + 3 * k * k);
        assert_eq!(g.edge_count(), 9 * k * k - 2 * k * (k - 1));
    }
    let g = grid_model(&GridModelSpec::patch(3)).unwrap();
    assert_eq!((g.world_count(), g.edge_count()), (43, 69));
}

#[test]
fn torus_matches_drawing_rule() {
    for k in [2, 4, 6] {
        let g = grid_model(&GridModelSpec::torus(k)).unwrap();
        let (worlds, edges) = grid_oracle(k, true);
        assert_eq!(names(&g), worlds);
        assert_eq!(edge_set(&g), edges);
    }
    assert!(grid_model(&GridModelSpec::torus(3)).is_err());
    assert!(grid_model(&GridModelSpec::patch(0)).is_err());
}

#[test]
fn other_decoding_swaps_relations() {
    let a = grid_model(&GridModelSpec::patch(3)).unwrap();
    let b = grid_model(&GridModelSpec::patch(3).with_decoding(Decoding::ThickR2)).unwrap();
    let swapped: std::collections::BTreeSet<_> = edge_set(&a).into_iter().map(|(r, u, v)| (3 - r, u, v)).collect();
    assert_eq!(edge_set(&b), swapped);
}

#[test]
fn grid_shape() {
    let g = grid_model(&GridModelSpec::patch(4)).unwrap();
    for (w, name) in g.worlds().iter().enumerate() {
        let out: Vec<(usize, usize)> = g.edges().filter(|e| e.1 == w).map(|e| (e.0, e.2)).collect();
        let rels: std::collections::BTreeSet<usize> = out.iter().map(|e| e.0).collect();
        assert!(rels.len() <= 1, "{name}");
        match &name[..1] {
            "U" => assert_eq!(out.len(), 3),
            "S" => assert_eq!(out.len(), 1),
            "T" => assert!(out.is_empty()),
            _ => assert!(!out.is_empty() || name.contains("_4"), "{name}"),
        }
    }
    let from = |p: &str| -> Vec<String> {
        let g = grid_model(&GridModelSpec::patch(1)).unwrap();
        let id = g.world_id(p).unwrap();
        g.edges().filter(|e| e.1 == id).map(|e| g.world_name(e.2).to_string()).collect()
    };
    assert_eq!(from("P_0_0").len(), 3);
    let true_at = check_local(
        &grid_model(&GridModelSpec::patch(3)).unwrap(),
        "P_0_0",
        &hornmodal::parse_formula("<1><2>true").unwrap(),
    )
    .unwrap();
    assert!(true_at);
}

#[test]
fn figure_closed_under_fixed_mid() {
    for k in 1..=5 {
        let r = verify_figure(k, MidConvention::B, Decoding::ThickR1, Topology::Patch).unwrap();
        assert!(r.all_models(), "patch {k}");
        assert!(r.only_gadget_paths && r.single_relation_out_edges && r.clause5_inert);
        assert_eq!(r.worlds, (k + 1) * (k + 1) + 3 * k * k);
    }
    for k in [2, 4] {
        let r = verify_figure(k, MidConvention::B, Decoding::ThickR1, Topology::Torus).unwrap();
        assert!(r.all_models(), "torus {k}");
    }
    let r = verify_figure(3, MidConvention::B, Decoding::ThickR2, Topology::Patch).unwrap();
    assert!(r.all_models());
}

#[test]
fn only_gadget_two_paths() {
    let g = grid_model(&GridModelSpec::patch(3)).unwrap();
    for rel in [1, 2] {
        for [a, b, c] in two_step_paths(&g, rel) {
            let cell = &a[2..];
            assert_eq!((a.clone(), b, c), (format!("U_{cell}"), format!("S_{cell}"), format!("T_{cell}")));
        }
    }
    let total = two_step_paths(&g, 1).len() + two_step_paths(&g, 2).len();
    assert_eq!(total, 9);
}

#[test]
fn indexed_mid_breaks_clause_two() {
    let r = verify_figure(3, MidConvention::A, Decoding::ThickR1, Topology::Patch).unwrap();
    let phi = r.theory("Phi(2,0)").unwrap();
    assert!(!phi.model);
    assert_eq!(phi.violated_clause, Some(2));
    assert!(phi.delta.iter().any(|d| d.relation == 1 && d.from == "P_1_1" && d.to == "S_0_1"));

    // the same violation found by brute force on the 7 worlds of cell (0,1)
    let g = grid_model(&GridModelSpec::patch(3)).unwrap();
    let cell = ["P_0_1", "P_1_1", "P_0_2", "P_1_2", "U_0_1", "S_0_1", "T_0_1"];
    let keep: Vec<bool> = g.worlds().iter().map(|w| cell.contains(&w.as_str())).collect();
    let sub = g.restrict(&keep);
    let th = build_phi(2, 0, MidConvention::A).unwrap();
    assert!(naive_violation(&sub, &th.clauses()[0]).is_none());
    let a = naive_violation(&sub, &th.clauses()[1]).expect("violated");
    let check = check_frame_condition(&sub, &th).unwrap();
    let v = check.violation().unwrap();
    assert_eq!(v.clause_index, 1);
    let want: Vec<(String, String)> =
        th.clauses()[1].variables.iter().zip(&a).map(|(x, &w)| (x.clone(), sub.world_name(w).to_string())).collect();
    assert_eq!(v.assignment, want);

    let sat = saturate(&g, &th).unwrap();
    let d = sat.derivation_of(1, "P_1_1", "S_0_1").expect("derived");
    assert_eq!(d.clause_index, 1);
    assert!(check_frame_condition(&sat.structure, &th).unwrap().holds());
}

fn domino(tiles: usize, h: u32, v: u32) -> DominoSystem {
    let names = ["t0", "t1"];
    let pairs = |mask: u32| -> Vec<(&str, &str)> {
        (0..tiles * tiles)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (names[i / tiles], names[i % tiles]))
            .collect()
    };
    DominoSystem::new(&names[..tiles], &pairs(h), &pairs(v)).unwrap()
}

fn all_small_dominoes() -> Vec<DominoSystem> {
    let mut out = Vec::new();
    for tiles in 1..=2 {
        let masks = 1u32 << (tiles * tiles);
        for h in 0..masks {
            for v in 0..masks {
                out.push(domino(tiles, h, v));
            }
        }
    }
    out
}

#[test]
fn tile_torus_matches_brute_force() {
    for d in all_small_dominoes() {
        for e in 1..=4 {
            let found = tile_torus(&d, e);
            assert_eq!(found.is_some(), brute_force_tiles(&d, e), "{} e={e}", d.to_json());
            if let Some(t) = found {
                for x in 0..e {
                    for y in 0..e {
                        let (a, r, u) = (t.tile(x, y), t.tile((x + 1) % e, y), t.tile(x, (y + 1) % e));
                        assert!(d.horizontal.contains(&(d.tiles[a].clone(), d.tiles[r].clone())));
                        assert!(d.vertical.contains(&(d.tiles[a].clone(), d.tiles[u].clone())));
                    }
                }
            }
        }
    }
    let all = domino(1, 1, 1);
    let none = domino(1, 0, 1);
    assert!(tile_torus(&all, 2).is_some());
    assert!(tile_torus(&none, 2).is_none());
}

#[test]
fn reduction_sound_on_all_small_dominoes() {
    let mut tiled = 0;
    for d in all_small_dominoes() {
        let red = reduce(&d, Target::Global, MidConvention::B).unwrap();
        for e in [2, 4] {
            let Some(t) = tile_torus(&d, e) else { continue };
            tiled += 1;
            let m = tiling_model(&d, &t).unwrap();
            let eval = Evaluation::new(&m, &red.formula).unwrap();
            assert!(eval.holds_everywhere(), "{} e={e}", d.to_json());
            assert!(check_frame_condition(&m, &red.theory).unwrap().holds());
            assert!(check_local(&m, "P_0_0", red.anchor.as_ref().unwrap()).unwrap());
        }
    }
    assert!(tiled > 100, "{tiled}");
}

#[test]
fn labelled_torus_for_all_tiles() {
    let d = DominoSystem::new(&["t0"], &[("t0", "t0")], &[("t0", "t0")]).unwrap();
    let m = tiling_model(&d, &tile_torus(&d, 4).unwrap()).unwrap();
    assert!(check_global(&m, &phi_d(&d)).unwrap());
    assert!(check_frame_condition(&m, &build_phi(2, 0, MidConvention::B).unwrap()).unwrap().holds());
}

#[test]
fn formula_grows_at_most_quadratically() {
    let sizes: Vec<usize> = (1..=6)
        .map(|t| {
            let names: Vec<String> = (0..t).map(|i| format!("t{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let pairs: Vec<(&str, &str)> = refs.iter().flat_map(|a| refs.iter().map(move |b| (*a, *b))).collect();
            phi_d(&DominoSystem::new(&refs, &pairs, &pairs).unwrap()).len()
        })
        .collect();
    for (t, s) in sizes.iter().enumerate() {
        let t = t + 1;
        assert!(*s <= sizes[0] * t * t, "{sizes:?}");
    }
}

#[test]
fn prune_examples() {
    let s = KripkeStructure::new(["root", "v"], 1).unwrap();
    assert_eq!(prune_no_predecessor(&s, "root").unwrap().worlds(), ["root"]);
    let mut c = KripkeStructure::new(["a", "b", "root"], 1).unwrap();
    c.add_edge(1, "root", "a").unwrap();
    c.add_edge(1, "a", "b").unwrap();
    c.add_edge(1, "b", "a").unwrap();
    assert_eq!(edge_set(&prune_no_predecessor(&c, "root").unwrap()), edge_set(&c));
    assert!(prune_no_predecessor(&c, "nope").is_err());
}

proptest! {
    #[test]
    fn prune_preserves_truth(seed in any::<u64>(), size in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 7, 2, &["p", "q"]);
        let f = random_formula(&mut rng, size, 2, &["p", "q"]);
        let root = s.world_name(0).to_string();
        let p = prune_no_predecessor(&s, &root).unwrap();
        prop_assert!(p.worlds().contains(&root));
        for w in p.worlds() {
            let id = s.world_id(w).unwrap();
            let has_pred = s.edges().any(|e| e.2 == id);
            prop_assert!(w == &root || has_pred);
            prop_assert_eq!(check_local(&p, w, &f).unwrap(), naive_holds(&s, id, &f));
        }
        for (w, name) in p.worlds().iter().enumerate() {
            prop_assert_eq!(p.labels(w), s.labels(s.world_id(name).unwrap()));
        }
    }
}
