//! Propositional engine: one variable per relation pair and per
//! (subformula, world), Tseitin constraints for the connectives and
//! modalities, and frame clause instances added lazily until the frame of
//! the returned assignment is closed.

use super::cdcl::{Lit, SatBackend, SatResult};
use super::dag::{Dag, Node, NodeId};
use super::{Deadline, Interrupted, RawModel};
use crate::semantics::frame::{for_each_match, FrameIndex, Flow};
use crate::syntax::FrameTheory;

pub(crate) struct Grounding<'a, B: SatBackend> {
    dag: &'a Dag,
    theory: &'a FrameTheory,
    n: usize,
    relations: usize,
    sat: B,
    truth: Vec<Option<Lit>>,
    edge: Vec<Lit>,
    top: Lit,
    pub(crate) conflicts: u64,
}

impl<'a, B: SatBackend> Grounding<'a, B> {
    pub(crate) fn new(dag: &'a Dag, theory: &'a FrameTheory, relations: usize, n: usize, mut sat: B) -> Self {
        let top = Lit::pos(sat.new_var());
        sat.add_clause(&[top]);
        let edge = (0..relations * n * n)
            .map(|_| Lit::pos(sat.new_var()))
            .collect();
        let mut g = Grounding {
            dag,
            theory,
            n,
            relations,
            sat,
            truth: vec![None; dag.len() * n],
            edge,
            top,
            conflicts: 0,
        };
        for node in 0..dag.len() {
            for w in 0..n {
                g.encode(node, w);
            }
        }
        g
    }

    fn e(&self, rel: usize, u: usize, v: usize) -> Lit {
        self.edge[((rel - 1) * self.n + u) * self.n + v]
    }

    fn t(&self, node: NodeId, w: usize) -> Lit {
        self.truth[node * self.n + w].expect("children are encoded first")
    }

    fn fresh(&mut self) -> Lit {
        Lit::pos(self.sat.new_var())
    }

    fn encode(&mut self, node: NodeId, w: usize) {
        let lit = match self.dag.nodes[node] {
            Node::Const(true) => self.top,
            Node::Const(false) => !self.top,
            Node::Not(c) => !self.t(c, w),
            Node::Var(_) => self.fresh(),
            Node::And(l, r) | Node::Or(l, r) => {
                let or = matches!(self.dag.nodes[node], Node::Or(..));
                let me = self.fresh();
                // Or(l, r) = ¬And(¬l, ¬r); encode And on possibly negated literals.
                let (a, b, x) = if or {
                    (!self.t(l, w), !self.t(r, w), !me)
                } else {
                    (self.t(l, w), self.t(r, w), me)
                };
                self.sat.add_clause(&[!x, a]);
                self.sat.add_clause(&[!x, b]);
                self.sat.add_clause(&[!a, !b, x]);
                me
            }
            Node::Dia(rel, c) | Node::Box(rel, c) => {
                let is_box = matches!(self.dag.nodes[node], Node::Box(..));
                let me = self.fresh();
                // Box i c = ¬Dia i ¬c.
                let d = if is_box { !me } else { me };
                let mut witnesses = vec![!d];
                for v in 0..self.n {
                    let e = self.e(rel, w, v);
                    let cv = if is_box { !self.t(c, v) } else { self.t(c, v) };
                    let aux = self.fresh();
                    self.sat.add_clause(&[!aux, e]);
                    self.sat.add_clause(&[!aux, cv]);
                    self.sat.add_clause(&[!e, !cv, d]);
                    witnesses.push(aux);
                }
                self.sat.add_clause(&witnesses);
                me
            }
        };
        self.truth[node * self.n + w] = Some(lit);
    }

    pub(crate) fn assert_true(&mut self, node: NodeId, w: usize) {
        let l = self.t(node, w);
        self.sat.add_clause(&[l]);
    }

    fn frame(&self) -> FrameIndex {
        let mut f = FrameIndex::new(self.n, self.relations);
        for rel in 1..=self.relations {
            for u in 0..self.n {
                for v in 0..self.n {
                    let l = self.e(rel, u, v);
                    if self.sat.value(l.var()) != l.is_negated() {
                        f.insert(rel, u, v);
                    }
                }
            }
        }
        f
    }

    /// Solves, adding violated frame clause instances until the frame closes.
    pub(crate) fn solve(&mut self, deadline: &Deadline) -> Result<bool, Interrupted> {
        loop {
            let res = self.sat.solve(deadline);
            self.conflicts = self.sat.conflicts();
            match res {
                SatResult::Unsat => return Ok(false),
                SatResult::Interrupted => return Err(Interrupted),
                SatResult::Sat => {}
            }
            let frame = self.frame();
            let mut instances: Vec<Vec<Lit>> = Vec::new();
            for clause in self.theory.clauses() {
                let head = clause.head;
                for_each_match(
                    &frame,
                    clause,
                    None,
                    &mut |a, b| !frame.contains(head.rel, a, b),
                    &mut |binding| {
                        let mut lits: Vec<Lit> = clause
                            .body
                            .iter()
                            .map(|a| !self.e(a.rel, binding[a.from], binding[a.to]))
                            .collect();
                        lits.push(self.e(head.rel, binding[head.from], binding[head.to]));
                        instances.push(lits);
                        Flow::Continue
                    },
                );
            }
            if instances.is_empty() {
                return Ok(true);
            }
            for c in instances {
                self.sat.add_clause(&c);
            }
        }
    }

    pub(crate) fn extract(&self) -> RawModel {
        let value = |l: Lit| self.sat.value(l.var()) != l.is_negated();
        let mut labels = vec![Vec::new(); self.n];
        for (id, node) in self.dag.nodes.iter().enumerate() {
            if let Node::Var(p) = node {
                for (w, l) in labels.iter_mut().enumerate() {
                    if value(self.t(id, w)) {
                        l.push(*p);
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for rel in 1..=self.relations {
            for u in 0..self.n {
                for v in 0..self.n {
                    if value(self.e(rel, u, v)) {
                        edges.push((rel, u, v));
                    }
                }
            }
        }
        RawModel { labels, edges }
    }
}
