//! Greedy maximal matcher and the recompute-from-scratch optimum matcher.

use crate::blossom::{static_max_matching_with, SearchScratch};
use crate::graph::{DynamicGraph, GraphError, VertexId};
use crate::matcher::{DynamicMatcher, Guarantee};
use crate::matching::{free_neighbor, Matching};

/// Matches a freshly inserted edge when both endpoints are free.
pub fn greedy_insert(m: &mut Matching, u: VertexId, v: VertexId) {
    if m.is_free(u) && m.is_free(v) {
        m.match_edge(u, v);
    }
}

/// Handles a deleted edge. If it was matched, both endpoints are released
/// and each is re-matched to its first free neighbor, if any.
pub fn greedy_delete(g: &DynamicGraph, m: &mut Matching, u: VertexId, v: VertexId) {
    if !m.is_matched_edge(u, v) {
        return;
    }
    m.unmatch_edge(u, v);
    for x in [u, v] {
        if let Some(w) = free_neighbor(g, m, x) {
            m.match_edge(x, w);
        }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyMatcher {
    graph: DynamicGraph,
    matching: Matching,
}

impl GreedyMatcher {
    pub fn new(n: usize) -> Self {
        Self {
            graph: DynamicGraph::new(n),
            matching: Matching::new(n),
        }
    }
}

impl DynamicMatcher for GreedyMatcher {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    fn matching(&self) -> &Matching {
        &self.matching
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if !self.graph.insert_edge(u, v)? {
            return Ok(false);
        }
        greedy_insert(&mut self.matching, u, v);
        Ok(true)
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if !self.graph.delete_edge(u, v)? {
            return Ok(false);
        }
        greedy_delete(&self.graph, &mut self.matching, u, v);
        Ok(true)
    }

    fn guarantee(&self) -> Guarantee {
        Guarantee::Maximal
    }
}

/// Recomputes a maximum matching from scratch after every update.
#[derive(Debug, Clone)]
pub struct NaiveOptMatcher {
    graph: DynamicGraph,
    matching: Matching,
    scratch: SearchScratch,
}

impl NaiveOptMatcher {
    pub fn new(n: usize) -> Self {
        Self {
            graph: DynamicGraph::new(n),
            matching: Matching::new(n),
            scratch: SearchScratch::new(n),
        }
    }

    fn recompute(&mut self) {
        self.matching = naive_opt_update(&self.graph, &mut self.scratch);
    }
}

/// One naive update step: a fresh maximum matching of `g`.
pub fn naive_opt_update(g: &DynamicGraph, scratch: &mut SearchScratch) -> Matching {
    static_max_matching_with(g, scratch)
}

impl DynamicMatcher for NaiveOptMatcher {
    fn name(&self) -> String {
        "naive-opt".into()
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    fn matching(&self) -> &Matching {
        &self.matching
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if !self.graph.insert_edge(u, v)? {
            return Ok(false);
        }
        self.recompute();
        Ok(true)
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if !self.graph.delete_edge(u, v)? {
            return Ok(false);
        }
        self.recompute();
        Ok(true)
    }

    fn guarantee(&self) -> Guarantee {
        Guarantee::Maximum
    }
}
