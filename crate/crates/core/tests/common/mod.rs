//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the library's evaluation, join or chase code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hornmodal::constructions::DominoSystem;
use hornmodal::semantics::KripkeStructure;
use hornmodal::{FrameTheory, HornClause, ModalFormula};
use rand::Rng;

pub fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Structure over worlds `w0..w{n-1}`; `edges` bit `(r * n + u) * n + v` is
/// `u R_{r+1} v`, `labels[p]` bit `w` puts `props[p]` at `w`.
pub fn structure_from_bits(n: usize, rels: usize, edges: u64, props: &[&str], labels: &[u64]) -> KripkeStructure {
    let names = world_names(n);
    let mut s = KripkeStructure::new(names.clone(), rels).unwrap();
    for r in 0..rels {
        for u in 0..n {
            for v in 0..n {
                if edges >> ((r * n + u) * n + v) & 1 == 1 {
                    s.add_edge(r + 1, &names[u], &names[v]).unwrap();
                }
            }
        }
    }
    for (p, &bits) in props.iter().zip(labels) {
        for (w, name) in names.iter().enumerate() {
            if bits >> w & 1 == 1 {
                s.label(name, p).unwrap();
            }
        }
    }
    s
}

/// Every unlabelled structure with `n` worlds and `rels` relations.
pub fn all_frames(n: usize, rels: usize) -> impl Iterator<Item = KripkeStructure> {
    let bits = rels * n * n;
    assert!(bits < 32);
    (0u64..1 << bits).map(move |e| structure_from_bits(n, rels, e, &[], &[]))
}

pub fn naive_holds(s: &KripkeStructure, w: usize, f: &ModalFormula) -> bool {
    use ModalFormula as F;
    let succ = |rel: usize| (0..s.world_count()).filter(move |&v| s.has_edge(rel, w, v));
    match f {
        F::Var(p) => s.labels(w).contains(p),
        F::Top => true,
        F::Bottom => false,
        F::Not(c) => !naive_holds(s, w, c),
        F::And(l, r) => naive_holds(s, w, l) && naive_holds(s, w, r),
        F::Or(l, r) => naive_holds(s, w, l) || naive_holds(s, w, r),
        F::Implies(l, r) => !naive_holds(s, w, l) || naive_holds(s, w, r),
        F::Iff(l, r) => naive_holds(s, w, l) == naive_holds(s, w, r),
        F::Diamond(i, c) => succ(*i).any(|v| naive_holds(s, v, c)),
        F::Box(i, c) => succ(*i).all(|v| naive_holds(s, v, c)),
    }
}

/// Odometer over `worlds^vars`, first variable most significant.
fn assignments(vars: usize, worlds: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = worlds.pow(vars as u32);
    (0..total).map(move |mut i| {
        let mut a = vec![0; vars];
        for slot in a.iter_mut().rev() {
            *slot = i % worlds;
            i /= worlds;
        }
        a
    })
}

/// First assignment (lexicographic in variable order) under which the body
/// holds and the head does not.
pub fn naive_violation(s: &KripkeStructure, clause: &HornClause) -> Option<Vec<usize>> {
    let n = s.world_count();
    if n == 0 {
        return None;
    }
    assignments(clause.variables.len(), n).find(|a| {
        clause.body.iter().all(|at| s.has_edge(at.rel, a[at.from], a[at.to]))
            && !s.has_edge(clause.head.rel, a[clause.head.from], a[clause.head.to])
    })
}

/// First violated clause with its first violating assignment.
pub fn naive_frame_violation(s: &KripkeStructure, th: &FrameTheory) -> Option<(usize, Vec<usize>)> {
    th.clauses()
        .iter()
        .enumerate()
        .find_map(|(i, c)| naive_violation(s, c).map(|a| (i, a)))
}

/// Least superset of the frame closed under the theory, by Kleene iteration.
pub fn naive_closure(s: &KripkeStructure, th: &FrameTheory) -> KripkeStructure {
    let mut out = s.clone();
    out.ensure_relations(th.relation_count());
    loop {
        let mut new = Vec::new();
        for c in th.clauses() {
            for a in assignments(c.variables.len(), out.world_count()) {
                if c.body.iter().all(|at| out.has_edge(at.rel, a[at.from], a[at.to])) {
                    new.push((c.head.rel, a[c.head.from], a[c.head.to]));
                }
            }
        }
        let mut changed = false;
        for (r, u, v) in new {
            changed |= out.add_edge_ids(r, u, v).unwrap();
        }
        if !changed {
            return out;
        }
    }
}

pub fn edge_set(s: &KripkeStructure) -> BTreeSet<(usize, String, String)> {
    s.edges()
        .map(|(r, u, v)| (r, s.world_name(u).to_string(), s.world_name(v).to_string()))
        .collect()
}

/// Formulas in a battery refer to earlier entries by index.
#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Prop(usize),
    Bottom,
    Not(usize),
    Dia(usize),
    Box(usize),
    And(usize, usize),
    Or(usize, usize),
}

pub struct Battery {
    pub props: Vec<String>,
    pub formulas: Vec<ModalFormula>,
    pub shapes: Vec<Shape>,
}

/// Every formula with at most `size` nodes over `props`, `⊥`, `¬`, `∧`, `∨`,
/// `◇_1` and `□_1`.
pub fn formula_battery(size: usize, props: &[&str]) -> Battery {
    let mut b = Battery {
        props: props.iter().map(|p| p.to_string()).collect(),
        formulas: Vec::new(),
        shapes: Vec::new(),
    };
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); size + 1];
    let push = |b: &mut Battery, by_size: &mut Vec<Vec<usize>>, f: ModalFormula, shape: Shape| {
        let n = f.len();
        by_size[n].push(b.formulas.len());
        b.formulas.push(f);
        b.shapes.push(shape);
    };
    for (i, p) in props.iter().enumerate() {
        push(&mut b, &mut by_size, ModalFormula::var(*p), Shape::Prop(i));
    }
    push(&mut b, &mut by_size, ModalFormula::Bottom, Shape::Bottom);
    for n in 2..=size {
        for &c in &by_size[n - 1].clone() {
            let f = b.formulas[c].clone();
            push(&mut b, &mut by_size, ModalFormula::not(f.clone()), Shape::Not(c));
            push(&mut b, &mut by_size, ModalFormula::diamond(1, f.clone()), Shape::Dia(c));
            push(&mut b, &mut by_size, ModalFormula::boxed(1, f), Shape::Box(c));
        }
        for ls in 1..n - 1 {
            let rs = n - 1 - ls;
            for &l in &by_size[ls].clone() {
                for &r in &by_size[rs].clone() {
                    let (lf, rf) = (b.formulas[l].clone(), b.formulas[r].clone());
                    push(&mut b, &mut by_size, ModalFormula::and(lf.clone(), rf.clone()), Shape::And(l, r));
                    push(&mut b, &mut by_size, ModalFormula::or(lf, rf), Shape::Or(l, r));
                }
            }
        }
    }
    b
}

/// For each battery formula: (satisfiable at some world, valid in some
/// structure), over all one-relation structures with `1..=max_worlds` worlds.
pub fn battery_satisfiability(b: &Battery, max_worlds: usize) -> Vec<(bool, bool)> {
    let mut out = vec![(false, false); b.formulas.len()];
    let mut truth = vec![0u8; b.formulas.len()];
    let np = b.props.len();
    for n in 1..=max_worlds {
        let all = (1u16 << n) - 1;
        for edges in 0u32..1 << (n * n) {
            let succ: Vec<u16> = (0..n).map(|u| (edges >> (u * n) & all as u32) as u16).collect();
            for labels in 0u32..1 << (n * np) {
                for (i, shape) in b.shapes.iter().enumerate() {
                    let t: u16 = match *shape {
                        Shape::Prop(p) => (labels >> (p * n)) as u16 & all,
                        Shape::Bottom => 0,
                        Shape::Not(c) => !(truth[c] as u16) & all,
                        Shape::And(l, r) => (truth[l] & truth[r]) as u16,
                        Shape::Or(l, r) => (truth[l] | truth[r]) as u16,
                        Shape::Dia(c) => (0..n)
                            .filter(|&w| succ[w] & truth[c] as u16 != 0)
                            .fold(0, |m, w| m | 1 << w),
                        Shape::Box(c) => (0..n)
                            .filter(|&w| succ[w] & !(truth[c] as u16) == 0)
                            .fold(0, |m, w| m | 1 << w),
                    };
                    truth[i] = t as u8;
                    out[i].0 |= t != 0;
                    out[i].1 |= t == all;
                }
            }
        }
    }
    out
}

/// Whether some assignment of tiles to the `e × e` torus meets every
/// constraint, by enumerating all `|T|^(e²)` assignments.
pub fn brute_force_tiles(d: &DominoSystem, e: usize) -> bool {
    let t = d.tiles.len();
    let h: BTreeSet<(String, String)> = d.horizontal.iter().cloned().collect();
    let v: BTreeSet<(String, String)> = d.vertical.iter().cloned().collect();
    assignments(e * e, t).any(|a| {
        let at = |x: usize, y: usize| d.tiles[a[(y % e) * e + x % e]].clone();
        (0..e).all(|x| {
            (0..e).all(|y| h.contains(&(at(x, y), at(x + 1, y))) && v.contains(&(at(x, y), at(x, y + 1))))
        })
    })
}

/// Worlds and `(relation, from, to)` edges of the figure grid under the
/// thick = R1 decoding, enumerated directly from the drawing rule.
pub fn grid_oracle(k: usize, torus: bool) -> (BTreeSet<String>, BTreeSet<(usize, String, String)>) {
    let wrap = |c: usize| if torus { c % k } else { c };
    let p = |x: usize, y: usize| format!("P_{}_{}", wrap(x), wrap(y));
    let mut worlds = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for x in 0..k {
        for y in 0..k {
            let (u, s, t) = (format!("U_{x}_{y}"), format!("S_{x}_{y}"), format!("T_{x}_{y}"));
            let drawn = [
                (p(x, y), p(x + 1, y)),
                (p(x, y), p(x, y + 1)),
                (p(x, y), u.clone()),
                (u.clone(), p(x + 1, y + 1)),
                (u.clone(), s.clone()),
                (s.clone(), t.clone()),
                (u.clone(), t.clone()),
                (p(x + 1, y), p(x + 1, y + 1)),
                (p(x, y + 1), p(x + 1, y + 1)),
            ];
            let even = (x + y) % 2 == 0;
            for (i, (a, b)) in drawn.into_iter().enumerate() {
                let thick = (i < 3) == even;
                worlds.insert(a.clone());
                worlds.insert(b.clone());
                edges.insert((if thick { 1 } else { 2 }, a, b));
            }
        }
    }
    (worlds, edges)
}

pub fn random_structure(rng: &mut impl Rng, max_worlds: usize, rels: usize, props: &[&str]) -> KripkeStructure {
    let n = rng.gen_range(1..=max_worlds);
    let names = world_names(n);
    let mut s = KripkeStructure::new(names.clone(), rels).unwrap();
    let density: f64 = rng.gen_range(0.05..0.6);
    for r in 1..=rels {
        for u in &names {
            for v in &names {
                if rng.gen_bool(density) {
                    s.add_edge(r, u, v).unwrap();
                }
            }
        }
    }
    for w in &names {
        for p in props {
            if rng.gen_bool(0.5) {
                s.label(w, p).unwrap();
            }
        }
    }
    s
}

/// A random formula with exactly `size` nodes.
pub fn random_formula(rng: &mut impl Rng, size: usize, rels: usize, props: &[&str]) -> ModalFormula {
    use ModalFormula as F;
    if size <= 1 {
        return match rng.gen_range(0..props.len() + 2) {
            i if i < props.len() => F::var(props[i]),
            i if i == props.len() => F::Top,
            _ => F::Bottom,
        };
    }
    if size == 2 || rng.gen_bool(0.4) {
        let c = random_formula(rng, size - 1, rels, props);
        let r = rng.gen_range(1..=rels);
        return match rng.gen_range(0..3) {
            0 => F::not(c),
            1 => F::diamond(r, c),
            _ => F::boxed(r, c),
        };
    }
    let ls = rng.gen_range(1..size - 1);
    let l = random_formula(rng, ls, rels, props);
    let r = random_formula(rng, size - 1 - ls, rels, props);
    match rng.gen_range(0..4) {
        0 => F::and(l, r),
        1 => F::or(l, r),
        2 => F::implies(l, r),
        _ => F::iff(l, r),
    }
}

/// Every safe clause over relations `1..=rels` whose body has one or two
/// atoms, over at most four variables, up to variable renaming.
pub fn small_clauses(rels: usize) -> Vec<HornClause> {
    let names = ["x", "y", "z", "u"];
    let atoms: Vec<(usize, usize, usize)> =
        (1..=rels).flat_map(|r| (0..4).flat_map(move |a| (0..4).map(move |b| (r, a, b)))).collect();
    let mut out: Vec<HornClause> = Vec::new();
    let mut bodies: Vec<Vec<(usize, usize, usize)>> = atoms.iter().map(|&a| vec![a]).collect();
    for &a in &atoms {
        for &b in &atoms {
            bodies.push(vec![a, b]);
        }
    }
    for body in bodies {
        for &head in &atoms {
            let vars: Vec<usize> = body.iter().flat_map(|&(_, a, b)| [a, b]).collect();
            if !vars.contains(&head.1) || !vars.contains(&head.2) {
                continue;
            }
            let named: Vec<_> = body.iter().map(|&(r, a, b)| (r, names[a], names[b])).collect();
            let c = HornClause::from_named(&named, (head.0, names[head.1], names[head.2]));
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Longer clauses over at most four variables.
pub fn core_clauses() -> Vec<HornClause> {
    let c = |body: &[(usize, &str, &str)], head| HornClause::from_named(body, head);
    vec![
        HornClause::transitivity(1),
        c(&[(1, "x", "y")], (1, "y", "x")),
        c(&[(1, "x", "y"), (1, "x", "z")], (1, "y", "z")),
        c(&[(1, "x", "y"), (1, "y", "z"), (1, "z", "u")], (1, "u", "x")),
        c(&[(1, "x", "y"), (1, "x", "z"), (1, "z", "u")], (1, "y", "u")),
        c(&[(1, "x", "y"), (1, "y", "z"), (1, "x", "u"), (1, "u", "z")], (1, "y", "u")),
        c(&[(1, "x", "x"), (1, "x", "y")], (1, "y", "y")),
        c(&[(1, "x", "y"), (1, "z", "u")], (1, "x", "u")),
    ]
}
