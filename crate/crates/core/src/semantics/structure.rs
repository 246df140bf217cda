use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::syntax::RelIndex;

/// Position of a world in the structure's world ordering (byte order of names).
pub type WorldId = usize;

/// A finite Kripke structure `⟨M, R_1, …, R_k, π⟩`.
///
/// Worlds are kept sorted by the byte order of their identifiers, so world ids,
/// relation iteration and serialization are all reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    worlds: Vec<String>,
    index: HashMap<String, WorldId>,
    relations: Vec<BTreeSet<(WorldId, WorldId)>>,
    valuation: Vec<BTreeSet<String>>,
}

impl KripkeStructure {
    pub fn new<I, S>(worlds: I, relation_count: usize) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = worlds.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateWorld(w[0].clone()));
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let valuation = vec![BTreeSet::new(); names.len()];
        Ok(KripkeStructure {
            worlds: names,
            index,
            relations: vec![BTreeSet::new(); relation_count],
            valuation,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: WorldId) -> &str {
        &self.worlds[w]
    }

    pub fn world_id(&self, name: &str) -> Result<WorldId, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    /// Grows the signature to at least `count` relations.
    pub fn ensure_relations(&mut self, count: usize) {
        if self.relations.len() < count {
            self.relations.resize(count, BTreeSet::new());
        }
    }

    pub(crate) fn check_relation(&self, rel: RelIndex) -> Result<(), ModelError> {
        if rel == 0 || rel > self.relations.len() {
            return Err(ModelError::RelationOutOfRange {
                index: rel,
                count: self.relations.len(),
            });
        }
        Ok(())
    }

    /// Pairs of `R_rel` as world ids, in lexicographic order.
    pub fn relation(&self, rel: RelIndex) -> &BTreeSet<(WorldId, WorldId)> {
        &self.relations[rel - 1]
    }

    pub fn has_edge(&self, rel: RelIndex, from: WorldId, to: WorldId) -> bool {
        self.relations
            .get(rel.wrapping_sub(1))
            .is_some_and(|r| r.contains(&(from, to)))
    }

    pub fn add_edge_ids(
        &mut self,
        rel: RelIndex,
        from: WorldId,
        to: WorldId,
    ) -> Result<bool, ModelError> {
        self.check_relation(rel)?;
        for w in [from, to] {
            if w >= self.worlds.len() {
                return Err(ModelError::UnknownWorld(format!("#{w}")));
            }
        }
        Ok(self.relations[rel - 1].insert((from, to)))
    }

    pub fn add_edge(&mut self, rel: RelIndex, from: &str, to: &str) -> Result<bool, ModelError> {
        let (u, v) = (self.world_id(from)?, self.world_id(to)?);
        self.add_edge_ids(rel, u, v)
    }

    pub fn remove_edge_ids(&mut self, rel: RelIndex, from: WorldId, to: WorldId) -> bool {
        self.relations
            .get_mut(rel.wrapping_sub(1))
            .is_some_and(|r| r.remove(&(from, to)))
    }

    pub fn label(&mut self, world: &str, prop: &str) -> Result<(), ModelError> {
        let w = self.world_id(world)?;
        self.valuation[w].insert(prop.to_string());
        Ok(())
    }

    pub fn label_id(&mut self, world: WorldId, prop: &str) {
        self.valuation[world].insert(prop.to_string());
    }

    pub fn labels(&self, w: WorldId) -> &BTreeSet<String> {
        &self.valuation[w]
    }

    /// Total number of pairs over all relations.
    pub fn edge_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    /// Iterates `(relation, from, to)` over every relation in index order.
    pub fn edges(&self) -> impl Iterator<Item = (RelIndex, WorldId, WorldId)> + '_ {
        self.relations
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(u, v)| (i + 1, u, v)))
    }

    /// The same frame with an empty valuation.
    pub fn frame(&self) -> KripkeStructure {
        let mut out = self.clone();
        out.valuation.iter_mut().for_each(BTreeSet::clear);
        out
    }

    /// The substructure on the worlds for which `keep` is true; edges and
    /// labels among kept worlds are preserved.
    pub fn restrict(&self, keep: &[bool]) -> KripkeStructure {
        let kept: Vec<WorldId> = (0..self.world_count()).filter(|&w| keep[w]).collect();
        let mut out = KripkeStructure::new(
            kept.iter().map(|&w| self.worlds[w].clone()),
            self.relation_count(),
        )
        .expect("names were already distinct");
        // kept ids stay in the same relative order, so position in `kept` is the new id
        let mut remap = vec![usize::MAX; self.world_count()];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
            out.valuation[new] = self.valuation[old].clone();
        }
        for (rel, u, v) in self.edges() {
            if keep[u] && keep[v] {
                out.relations[rel - 1].insert((remap[u], remap[v]));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: StructureFile =
            serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        Self::from_file(file)
    }

    fn to_file(&self) -> StructureFile {
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let pairs = r
                    .iter()
                    .map(|&(u, v)| (self.worlds[u].clone(), self.worlds[v].clone()))
                    .collect();
                (format!("R{}", i + 1), pairs)
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(w, l)| (self.worlds[w].clone(), l.iter().cloned().collect()))
            .collect();
        StructureFile {
            worlds: self.worlds.clone(),
            relations,
            valuation,
        }
    }

    fn from_file(file: StructureFile) -> Result<Self, ModelError> {
        let mut rels = Vec::new();
        for (name, pairs) in file.relations {
            let idx = name
                .strip_prefix('R')
                .filter(|d| !d.is_empty() && d.bytes().all(|c| c.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| ModelError::Format(format!("bad relation name `{name}`")))?;
            rels.push((idx, pairs));
        }
        let k = rels.iter().map(|(i, _)| *i).max().unwrap_or(0);
        let mut s = KripkeStructure::new(file.worlds, k)?;
        for (idx, pairs) in rels {
            for (a, b) in pairs {
                s.add_edge(idx, &a, &b)?;
            }
        }
        for (w, props) in file.valuation {
            for p in props {
                s.label(&w, &p)?;
            }
        }
        Ok(s)
    }

    /// Graphviz rendering: `R1` edges bold, `R2` edges dashed, labels under the world name.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph kripke {\n  node [shape=circle];\n");
        for (w, name) in self.worlds.iter().enumerate() {
            let labels: Vec<&str> = self.valuation[w].iter().map(String::as_str).collect();
            let text = if labels.is_empty() {
                name.clone()
            } else {
                format!("{name}\\n{{{}}}", labels.join(","))
            };
            let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", escape(name), escape_label(&text));
        }
        for (rel, u, v) in self.edges() {
            let style = match rel {
                1 => "bold",
                2 => "dashed",
                _ => "solid",
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"R{rel}\", style={style}];",
                escape(&self.worlds[u]),
                escape(&self.worlds[v])
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn escape_label(s: &str) -> String {
    // keep the `\n` line break produced above
    s.replace('"', "\\\"")
}

#[derive(Debug, Serialize, Deserialize)]
struct StructureFile {
    worlds: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}
