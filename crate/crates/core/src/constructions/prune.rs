use crate::semantics::{KripkeStructure, ModelError};

/// Removes, to a fixpoint, every world other than `root` that has no
/// incoming edge from a remaining world. A self-loop counts as incoming.
pub fn prune_no_predecessor(s: &KripkeStructure, root: &str) -> Result<KripkeStructure, ModelError> {
    let root = s.world_id(root)?;
    let n = s.world_count();
    let mut keep = vec![true; n];
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (_, u, v) in s.edges() {
        indegree[v] += 1;
        out[u].push(v);
    }
    let mut queue: Vec<usize> = (0..n).filter(|&w| w != root && indegree[w] == 0).collect();
    while let Some(w) = queue.pop() {
        if !keep[w] {
            continue;
        }
        keep[w] = false;
        for &v in &out[w] {
            indegree[v] -= 1;
            if indegree[v] == 0 && v != root && keep[v] {
                queue.push(v);
            }
        }
    }
    Ok(s.restrict(&keep))
}
