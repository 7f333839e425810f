//! Small-instance ground truth used by tests and by the harness'
//! verification mode.

use crate::blossom::static_max_matching;
use crate::graph::{DynamicGraph, VertexId};
use crate::matching::{AugmentingPath, Matching};
use thiserror::Error;

/// Largest edge count accepted by [`brute_force_max_matching_size`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {m} edges; exhaustive enumeration is limited to {limit}")]
    TooLarge { m: usize, limit: usize },
}

/// Maximum matching size by exhaustive enumeration of edge subsets.
pub fn brute_force_max_matching_size(g: &DynamicGraph) -> Result<usize, OracleError> {
    let edges: Vec<_> = g.edges().collect();
    if edges.len() > BRUTE_FORCE_MAX_EDGES {
        return Err(OracleError::TooLarge {
            m: edges.len(),
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }
    fn go(edges: &[(usize, usize)], used: &mut [bool], taken: usize, best: &mut usize) {
        if taken + edges.len() <= *best {
            return;
        }
        let Some((&(u, v), rest)) = edges.split_first() else {
            *best = (*best).max(taken);
            return;
        };
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            go(rest, used, taken + 1, best);
            used[u] = false;
            used[v] = false;
        }
        go(rest, used, taken, best);
    }
    let mut used = vec![false; g.n()];
    let mut best = 0;
    go(&edges, &mut used, 0, &mut best);
    Ok(best)
}

/// A shortest augmenting path of length at most `max_len`, found by
/// exhaustive enumeration of simple alternating paths (iterative deepening
/// over odd lengths).
pub fn augmenting_path_within(
    g: &DynamicGraph,
    m: &Matching,
    max_len: usize,
) -> Option<AugmentingPath> {
    let mut visited = vec![false; g.n()];
    let mut stack = Vec::new();
    let mut limit = 1;
    while limit <= max_len {
        for s in 0..g.n() {
            if !m.is_free(s) || g.degree(s) == 0 {
                continue;
            }
            visited[s] = true;
            stack.push(s);
            let found = extend(g, m, s, limit, &mut visited, &mut stack);
            visited[s] = false;
            if found {
                return Some(AugmentingPath::new(stack));
            }
            stack.pop();
        }
        limit += 2;
    }
    None
}

// `stack` holds the path so far; it ends at an "outer" vertex whose next edge
// must be unmatched.
fn extend(
    g: &DynamicGraph,
    m: &Matching,
    x: VertexId,
    limit: usize,
    visited: &mut [bool],
    stack: &mut Vec<VertexId>,
) -> bool {
    let len = stack.len() - 1;
    for &w in g.neighbors(x) {
        if visited[w] {
            continue;
        }
        match m.mate(w) {
            None => {
                stack.push(w);
                return true;
            }
            Some(z) => {
                if visited[z] || len + 3 > limit {
                    continue;
                }
                visited[w] = true;
                visited[z] = true;
                stack.push(w);
                stack.push(z);
                if extend(g, m, z, limit, visited, stack) {
                    return true;
                }
                stack.pop();
                stack.pop();
                visited[w] = false;
                visited[z] = false;
            }
        }
    }
    false
}

/// Length of a shortest augmenting path, or `None` when `m` is maximum.
///
/// Maximality of `m` is decided with the static blossom solver first so the
/// exhaustive search only runs when a path is known to exist.
pub fn shortest_augmenting_path_length(g: &DynamicGraph, m: &Matching) -> Option<usize> {
    if m.size() >= static_max_matching(g).size() {
        return None;
    }
    let bound = g.n().saturating_sub(1);
    augmenting_path_within(g, m, bound).map(|p| p.len())
}
