//! Hash-consed formula graph shared by both engines. Implications and
//! biconditionals are rewritten into `¬`, `∧`, `∨`.

use std::collections::HashMap;

use crate::syntax::{ModalFormula, RelIndex};

pub(crate) type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Var(usize),
    Const(bool),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Dia(RelIndex, NodeId),
    Box(RelIndex, NodeId),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Dag {
    pub nodes: Vec<Node>,
    pub props: Vec<String>,
    index: HashMap<Node, NodeId>,
    prop_index: HashMap<String, usize>,
}

impl Dag {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    pub(crate) fn add(&mut self, f: &ModalFormula) -> NodeId {
        match f {
            ModalFormula::Var(p) => {
                let next = self.props.len();
                let ix = *self.prop_index.entry(p.clone()).or_insert(next);
                if ix == next {
                    self.props.push(p.clone());
                }
                self.intern(Node::Var(ix))
            }
            ModalFormula::Top => self.intern(Node::Const(true)),
            ModalFormula::Bottom => self.intern(Node::Const(false)),
            ModalFormula::Not(c) => {
                let c = self.add(c);
                self.intern(Node::Not(c))
            }
            ModalFormula::And(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                self.intern(Node::And(l, r))
            }
            ModalFormula::Or(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                self.intern(Node::Or(l, r))
            }
            ModalFormula::Implies(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                let nl = self.intern(Node::Not(l));
                self.intern(Node::Or(nl, r))
            }
            ModalFormula::Iff(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                let nl = self.intern(Node::Not(l));
                let nr = self.intern(Node::Not(r));
                let forward = self.intern(Node::Or(nl, r));
                let backward = self.intern(Node::Or(l, nr));
                self.intern(Node::And(forward, backward))
            }
            ModalFormula::Diamond(i, c) => {
                let c = self.add(c);
                self.intern(Node::Dia(*i, c))
            }
            ModalFormula::Box(i, c) => {
                let c = self.add(c);
                self.intern(Node::Box(*i, c))
            }
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    /// For each node, the nodes that have it as a child.
    pub(crate) fn parents(&self) -> Vec<Vec<NodeId>> {
        let mut parents = vec![Vec::new(); self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            match *node {
                Node::Not(c) | Node::Dia(_, c) | Node::Box(_, c) => parents[c].push(id),
                Node::And(l, r) | Node::Or(l, r) => {
                    parents[l].push(id);
                    if r != l {
                        parents[r].push(id);
                    }
                }
                Node::Var(_) | Node::Const(_) => {}
            }
        }
        parents
    }
}
