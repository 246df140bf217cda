//! Explicit search engine: three-valued truth tables over (subformula, world)
//! and relation pairs, unit propagation of the modal and boolean rules,
//! chase propagation of the frame theory, and branching on open obligations.

use std::collections::VecDeque;

use super::dag::{Dag, Node, NodeId};
use super::{Deadline, Interrupted, RawModel};
use crate::semantics::frame::{for_each_match, FrameIndex, Flow};
use crate::syntax::{FrameTheory, RelIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Unknown,
    True,
    False,
}

impl Val {
    fn of(b: bool) -> Val {
        if b {
            Val::True
        } else {
            Val::False
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Truth(NodeId, usize),
    Edge(RelIndex, usize, usize),
}

#[derive(Debug, Clone, Copy)]
enum Assign {
    Truth(NodeId, usize, bool),
    Edge(RelIndex, usize, usize, bool),
}

struct Conflict;

type Step = Result<(), Conflict>;

pub(crate) struct Explicit<'a> {
    dag: &'a Dag,
    theory: &'a FrameTheory,
    n: usize,
    truth: Vec<Val>,
    edge: Vec<Val>,
    frame: FrameIndex,
    trail: Vec<Event>,
    queue: VecDeque<Event>,
    bool_parents: Vec<Vec<NodeId>>,
    modal_parents: Vec<Vec<NodeId>>,
    modal_by_rel: Vec<Vec<NodeId>>,
    base_truth: Vec<Val>,
    base_edge: Vec<Val>,
    /// World 0 is distinguished (witness or anchor) and never fresh.
    pinned_zero: bool,
    pub(crate) nodes: u64,
}

impl<'a> Explicit<'a> {
    pub(crate) fn new(
        dag: &'a Dag,
        theory: &'a FrameTheory,
        relations: usize,
        n: usize,
        pinned_zero: bool,
    ) -> Self {
        let parents = dag.parents();
        let mut bool_parents = vec![Vec::new(); dag.len()];
        let mut modal_parents = vec![Vec::new(); dag.len()];
        let mut modal_by_rel = vec![Vec::new(); relations];
        for (id, node) in dag.nodes.iter().enumerate() {
            for &p in &parents[id] {
                match dag.nodes[p] {
                    Node::Dia(..) | Node::Box(..) => modal_parents[id].push(p),
                    _ => bool_parents[id].push(p),
                }
            }
            if let Node::Dia(i, _) | Node::Box(i, _) = node {
                modal_by_rel[i - 1].push(id);
            }
        }
        Explicit {
            dag,
            theory,
            n,
            truth: vec![Val::Unknown; dag.len() * n],
            edge: vec![Val::Unknown; relations * n * n],
            frame: FrameIndex::new(n, relations),
            trail: Vec::new(),
            queue: VecDeque::new(),
            bool_parents,
            modal_parents,
            modal_by_rel,
            base_truth: Vec::new(),
            base_edge: Vec::new(),
            pinned_zero,
            nodes: 0,
        }
    }

    fn t(&self, node: NodeId, w: usize) -> Val {
        self.truth[node * self.n + w]
    }

    fn e(&self, rel: RelIndex, u: usize, v: usize) -> Val {
        self.edge[((rel - 1) * self.n + u) * self.n + v]
    }

    fn set_truth(&mut self, node: NodeId, w: usize, b: bool) -> Step {
        let slot = &mut self.truth[node * self.n + w];
        match *slot {
            Val::Unknown => {
                *slot = Val::of(b);
                self.trail.push(Event::Truth(node, w));
                self.queue.push_back(Event::Truth(node, w));
                Ok(())
            }
            v if v == Val::of(b) => Ok(()),
            _ => Err(Conflict),
        }
    }

    fn set_edge(&mut self, rel: RelIndex, u: usize, v: usize, b: bool) -> Step {
        let slot = &mut self.edge[((rel - 1) * self.n + u) * self.n + v];
        match *slot {
            Val::Unknown => {
                *slot = Val::of(b);
                if b {
                    self.frame.insert(rel, u, v);
                }
                self.trail.push(Event::Edge(rel, u, v));
                self.queue.push_back(Event::Edge(rel, u, v));
                Ok(())
            }
            x if x == Val::of(b) => Ok(()),
            _ => Err(Conflict),
        }
    }

    fn apply(&mut self, a: Assign) -> Step {
        match a {
            Assign::Truth(node, w, b) => self.set_truth(node, w, b),
            Assign::Edge(rel, u, v, b) => self.set_edge(rel, u, v, b),
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail above mark") {
                Event::Truth(node, w) => self.truth[node * self.n + w] = Val::Unknown,
                Event::Edge(rel, u, v) => {
                    let slot = ((rel - 1) * self.n + u) * self.n + v;
                    if self.edge[slot] == Val::True {
                        let popped = self.frame.pop(rel);
                        debug_assert_eq!(popped, Some((u, v)));
                    }
                    self.edge[slot] = Val::Unknown;
                }
            }
        }
        self.queue.clear();
    }

    fn propagate(&mut self) -> Step {
        while let Some(ev) = self.queue.pop_front() {
            let r = self.process(ev);
            if r.is_err() {
                self.queue.clear();
                return r;
            }
        }
        Ok(())
    }

    fn process(&mut self, ev: Event) -> Step {
        match ev {
            Event::Truth(node, w) => {
                self.check(node, w)?;
                for i in 0..self.bool_parents[node].len() {
                    self.check(self.bool_parents[node][i], w)?;
                }
                for i in 0..self.modal_parents[node].len() {
                    let p = self.modal_parents[node][i];
                    let rel = match self.dag.nodes[p] {
                        Node::Dia(r, _) | Node::Box(r, _) => r,
                        _ => unreachable!("modal parent"),
                    };
                    for u in 0..self.n {
                        if self.e(rel, u, w) != Val::False {
                            self.check(p, u)?;
                        }
                    }
                }
            }
            Event::Edge(rel, u, v) => {
                for i in 0..self.modal_by_rel[rel - 1].len() {
                    self.check(self.modal_by_rel[rel - 1][i], u)?;
                }
                if self.e(rel, u, v) == Val::True {
                    self.chase(rel, u, v)?;
                }
            }
        }
        Ok(())
    }

    /// Local consistency of `node` at world `w` against its children.
    fn check(&mut self, node: NodeId, w: usize) -> Step {
        use Val::*;
        let me = self.t(node, w);
        match self.dag.nodes[node] {
            Node::Var(_) => {}
            Node::Const(b) => self.set_truth(node, w, b)?,
            Node::Not(c) => {
                if me != Unknown {
                    self.set_truth(c, w, me == False)?;
                }
                let vc = self.t(c, w);
                if vc != Unknown {
                    self.set_truth(node, w, vc == False)?;
                }
            }
            Node::And(l, r) | Node::Or(l, r) => {
                // Or is And with every value flipped.
                let or = matches!(self.dag.nodes[node], Node::Or(..));
                let flip = |v: Val| match (or, v) {
                    (true, True) => False,
                    (true, False) => True,
                    (_, v) => v,
                };
                let (vl, vr) = (flip(self.t(l, w)), flip(self.t(r, w)));
                let me = flip(me);
                if vl == False || vr == False {
                    self.set_truth(node, w, or)?;
                } else if vl == True && vr == True {
                    self.set_truth(node, w, !or)?;
                }
                match me {
                    True => {
                        self.set_truth(l, w, !or)?;
                        self.set_truth(r, w, !or)?;
                    }
                    False => {
                        if vl == True {
                            self.set_truth(r, w, or)?;
                        }
                        if vr == True {
                            self.set_truth(l, w, or)?;
                        }
                    }
                    Unknown => {}
                }
            }
            Node::Dia(rel, c) | Node::Box(rel, c) => {
                // Box is Dia of the negated child with the result negated.
                let is_box = matches!(self.dag.nodes[node], Node::Box(..));
                let want = !is_box; // child value that witnesses the diamond reading
                let me = match (is_box, me) {
                    (true, True) => False,
                    (true, False) => True,
                    (_, v) => v,
                };
                let mut witnessed = false;
                let mut open = 0;
                let mut last = 0;
                for v in 0..self.n {
                    let e = self.e(rel, w, v);
                    let cv = self.t(c, v);
                    if e == True && cv == Val::of(want) {
                        witnessed = true;
                        break;
                    }
                    if e != False && cv != Val::of(!want) {
                        open += 1;
                        last = v;
                    }
                }
                if witnessed {
                    self.set_truth(node, w, !is_box)?;
                } else if open == 0 {
                    self.set_truth(node, w, is_box)?;
                }
                match me {
                    True if !witnessed && open == 1 => {
                        self.set_edge(rel, w, last, true)?;
                        self.set_truth(c, last, want)?;
                    }
                    False => {
                        for v in 0..self.n {
                            if self.e(rel, w, v) == True {
                                self.set_truth(c, v, !want)?;
                            }
                            if self.t(c, v) == Val::of(want) {
                                self.set_edge(rel, w, v, false)?;
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Forces the heads of clause instances whose body uses the new pair.
    fn chase(&mut self, rel: RelIndex, u: usize, v: usize) -> Step {
        let mut forced = Vec::new();
        let seed = [(u, v)];
        for clause in self.theory.clauses() {
            let head = clause.head;
            for (j, atom) in clause.body.iter().enumerate() {
                if atom.rel != rel {
                    continue;
                }
                let frame = &self.frame;
                let edge = &self.edge;
                let n = self.n;
                let mut conflict = false;
                for_each_match(
                    frame,
                    clause,
                    Some((j, &seed)),
                    &mut |a, b| !frame.contains(head.rel, a, b),
                    &mut |binding| {
                        let (a, b) = (binding[head.from], binding[head.to]);
                        if edge[((head.rel - 1) * n + a) * n + b] == Val::False {
                            conflict = true;
                            return Flow::Stop;
                        }
                        forced.push((head.rel, a, b));
                        Flow::Continue
                    },
                );
                if conflict {
                    return Err(Conflict);
                }
            }
        }
        for (r, a, b) in forced {
            self.set_edge(r, a, b, true)?;
        }
        Ok(())
    }

    /// Root assignments, then propagation; records the baseline used to
    /// recognise untouched worlds. Returns false on an immediate conflict.
    pub(crate) fn init(&mut self, roots: &[(NodeId, usize)]) -> bool {
        let consts: Vec<(NodeId, bool)> = self
            .dag
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(id, node)| match node {
                Node::Const(b) => Some((id, *b)),
                _ => None,
            })
            .collect();
        let mut ok = true;
        for (id, b) in consts {
            for w in 0..self.n {
                ok &= self.set_truth(id, w, b).is_ok();
            }
        }
        for &(node, w) in roots {
            ok &= self.set_truth(node, w, true).is_ok();
        }
        ok = ok && self.propagate().is_ok();
        self.base_truth = self.truth.clone();
        self.base_edge = self.edge.clone();
        ok
    }

    fn fresh(&self, w: usize) -> bool {
        if self.pinned_zero && w == 0 {
            return false;
        }
        let n = self.n;
        for node in 0..self.dag.len() {
            if self.truth[node * n + w] != self.base_truth[node * n + w] {
                return false;
            }
        }
        let rels = self.edge.len() / (n * n);
        for rel in 0..rels {
            for x in 0..n {
                let out = (rel * n + w) * n + x;
                let inc = (rel * n + x) * n + w;
                if self.edge[out] != self.base_edge[out] || self.edge[inc] != self.base_edge[inc] {
                    return false;
                }
            }
        }
        true
    }

    /// The first open obligation, as alternative assignment sets.
    fn obligation(&self) -> Option<Vec<Vec<Assign>>> {
        use Val::*;
        for w in 0..self.n {
            let mut modal: Option<Vec<Vec<Assign>>> = None;
            for node in (0..self.dag.len()).rev() {
                let me = self.t(node, w);
                if me == Unknown {
                    continue;
                }
                match self.dag.nodes[node] {
                    Node::Or(l, r) if me == True => {
                        if self.t(l, w) == Unknown && self.t(r, w) == Unknown {
                            return Some(vec![
                                vec![Assign::Truth(l, w, true)],
                                vec![Assign::Truth(l, w, false), Assign::Truth(r, w, true)],
                            ]);
                        }
                    }
                    Node::And(l, r) if me == False => {
                        if self.t(l, w) == Unknown && self.t(r, w) == Unknown {
                            return Some(vec![
                                vec![Assign::Truth(l, w, false)],
                                vec![Assign::Truth(l, w, true), Assign::Truth(r, w, false)],
                            ]);
                        }
                    }
                    Node::Dia(rel, c) | Node::Box(rel, c) if modal.is_none() => {
                        let want = matches!(self.dag.nodes[node], Node::Dia(..));
                        if (me == True) != want {
                            continue;
                        }
                        let witnessed = (0..self.n)
                            .any(|v| self.e(rel, w, v) == True && self.t(c, v) == Val::of(want));
                        if witnessed {
                            continue;
                        }
                        let mut choices = Vec::new();
                        let mut fresh_taken = false;
                        for v in 0..self.n {
                            if self.e(rel, w, v) == False || self.t(c, v) == Val::of(!want) {
                                continue;
                            }
                            if self.fresh(v) {
                                if fresh_taken {
                                    continue;
                                }
                                fresh_taken = true;
                            }
                            choices.push(vec![
                                Assign::Edge(rel, w, v, true),
                                Assign::Truth(c, v, want),
                            ]);
                        }
                        modal = Some(choices);
                    }
                    _ => {}
                }
            }
            if modal.is_some() {
                return modal;
            }
        }
        None
    }

    /// Closes the remaining unknowns: absent edges, false propositions.
    fn complete(&mut self) -> Step {
        let n = self.n;
        let rels = self.edge.len() / (n * n);
        for rel in 1..=rels {
            for u in 0..n {
                for v in 0..n {
                    if self.e(rel, u, v) == Val::Unknown {
                        self.set_edge(rel, u, v, false)?;
                    }
                }
            }
        }
        for node in 0..self.dag.len() {
            if let Node::Var(_) = self.dag.nodes[node] {
                for w in 0..n {
                    if self.t(node, w) == Val::Unknown {
                        self.set_truth(node, w, false)?;
                    }
                }
            }
        }
        self.propagate()?;
        debug_assert!(self.truth.iter().all(|&v| v != Val::Unknown));
        Ok(())
    }

    pub(crate) fn search(&mut self, deadline: &Deadline) -> Result<bool, Interrupted> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) && deadline.passed() {
            return Err(Interrupted);
        }
        let Some(choices) = self.obligation() else {
            let mark = self.trail.len();
            if self.complete().is_ok() {
                return Ok(true);
            }
            self.undo(mark);
            return Ok(false);
        };
        for choice in choices {
            let mark = self.trail.len();
            let ok = choice.into_iter().all(|a| self.apply(a).is_ok()) && self.propagate().is_ok();
            if ok && self.search(deadline)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    pub(crate) fn extract(&self) -> RawModel {
        let n = self.n;
        let rels = self.edge.len() / (n * n);
        let mut labels = vec![Vec::new(); n];
        for (id, node) in self.dag.nodes.iter().enumerate() {
            if let Node::Var(p) = node {
                for (w, l) in labels.iter_mut().enumerate() {
                    if self.t(id, w) == Val::True {
                        l.push(*p);
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for rel in 1..=rels {
            for u in 0..n {
                for v in 0..n {
                    if self.e(rel, u, v) == Val::True {
                        edges.push((rel, u, v));
                    }
                }
            }
        }
        RawModel { labels, edges }
    }
}
