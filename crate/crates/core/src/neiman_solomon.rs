//! Deterministic 3/2-approximate matcher: keeps the matching maximal, free
//! of augmenting paths of length 3, and every free vertex at degree at most
//! `√(2n + 2m)` by swapping in low-degree surrogates.

use crate::graph::{DynamicGraph, GraphError, IndexedSet, VertexId};
use crate::matcher::{AuditError, DynamicMatcher, Guarantee};
use crate::matching::Matching;

#[derive(Debug, Clone)]
pub struct NeimanSolomonMatcher {
    graph: DynamicGraph,
    matching: Matching,
    /// Free neighbors of every vertex.
    free_nbrs: Vec<IndexedSet>,
    /// Free vertices bucketed by degree.
    free_by_degree: Vec<IndexedSet>,
    surrogates: u64,
}

impl NeimanSolomonMatcher {
    pub fn new(n: usize) -> Self {
        let mut free_by_degree = vec![IndexedSet::new(); n.max(1)];
        for v in 0..n {
            free_by_degree[0].insert(v);
        }
        Self {
            graph: DynamicGraph::new(n),
            matching: Matching::new(n),
            free_nbrs: vec![IndexedSet::new(); n],
            free_by_degree,
            surrogates: 0,
        }
    }

    /// Degree bound for free vertices, `√(2n + 2m)`.
    pub fn degree_bound(&self) -> f64 {
        degree_bound(self.graph.n(), self.graph.m())
    }

    pub fn free_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.free_nbrs[v].as_slice()
    }

    /// Surrogate swaps performed so far.
    pub fn surrogate_count(&self) -> u64 {
        self.surrogates
    }

    fn set_status(&mut self, x: VertexId, free: bool) {
        let d = self.graph.degree(x);
        if free {
            self.free_by_degree[d].insert(x);
        } else {
            self.free_by_degree[d].remove(x);
        }
        for &w in self.graph.neighbors(x) {
            if free {
                self.free_nbrs[w].insert(x);
            } else {
                self.free_nbrs[w].remove(x);
            }
        }
    }

    fn pair(&mut self, a: VertexId, b: VertexId) {
        self.matching.match_edge(a, b);
        self.set_status(a, false);
        self.set_status(b, false);
    }

    fn split(&mut self, a: VertexId, b: VertexId) {
        self.matching.unmatch_edge(a, b);
        self.set_status(a, true);
        self.set_status(b, true);
    }

    // Flips the length-3 path x - w - w2 - y.
    fn augment3(&mut self, x: VertexId, w: VertexId, w2: VertexId, y: VertexId) {
        self.matching.unmatch_edge(w, w2);
        self.matching.match_edge(x, w);
        self.matching.match_edge(w2, y);
        self.set_status(x, false);
        self.set_status(y, false);
    }

    fn free_neighbor_except(&self, w: VertexId, skip: VertexId) -> Option<VertexId> {
        self.free_nbrs[w].iter().find(|&y| y != skip)
    }

    // Free neighbor, then a length-3 path, for a free vertex `x`.
    fn settle(&mut self, x: VertexId) -> bool {
        if let Some(&y) = self.free_nbrs[x].as_slice().first() {
            self.pair(x, y);
            return true;
        }
        for i in 0..self.graph.degree(x) {
            let w = self.graph.neighbors(x)[i];
            let w2 = self.matching.mate(w).expect("no free neighbor left");
            if let Some(y) = self.free_neighbor_except(w2, x) {
                self.augment3(x, w, w2, y);
                return true;
            }
        }
        false
    }

    /// Matches the free high-degree vertex `u`, freeing the mate `z` of one
    /// of its neighbors with `deg(z) ≤ √(2m)`. Returns the freed vertex.
    ///
    /// # Panics
    /// If no neighbor is free and no surrogate qualifies.
    pub fn find_surrogate(&mut self, u: VertexId) -> Option<VertexId> {
        assert!(self.matching.is_free(u), "find_surrogate: {u} is matched");
        let limit = (2.0 * self.graph.m() as f64).sqrt();
        for i in 0..self.graph.degree(u) {
            let w = self.graph.neighbors(u)[i];
            let Some(z) = self.matching.mate(w) else {
                self.pair(u, w);
                return None;
            };
            if self.graph.degree(z) as f64 <= limit {
                self.surrogates += 1;
                self.matching.unmatch_edge(w, z);
                self.matching.match_edge(u, w);
                self.set_status(u, false);
                self.set_status(z, true);
                return Some(z);
            }
        }
        panic!("find_surrogate: no surrogate for vertex {u} of degree {}", self.graph.degree(u));
    }

    // Restores both invariants around the free vertex `x`.
    fn restore(&mut self, x: VertexId) {
        let mut next = Some(x);
        while let Some(x) = next.take() {
            if !self.matching.is_free(x) || self.settle(x) {
                continue;
            }
            if self.graph.degree(x) as f64 > self.degree_bound() {
                if let Some(z) = self.find_surrogate(x) {
                    next = Some(z);
                }
            }
        }
    }

    // After `m` dropped, free vertices with degrees in (new, old] break the
    // degree bound.
    fn enforce_bound(&mut self, old_bound: f64) {
        let new_bound = self.degree_bound();
        let lo = new_bound.floor() as usize + 1;
        let hi = (old_bound.floor() as usize).min(self.free_by_degree.len() - 1);
        for d in lo..=hi {
            while let Some(&x) = self.free_by_degree[d].as_slice().first() {
                if let Some(z) = self.find_surrogate(x) {
                    self.restore(z);
                }
            }
        }
    }

    fn bump_degree(&mut self, x: VertexId, before: usize) {
        if self.matching.is_free(x) {
            self.free_by_degree[before].remove(x);
            self.free_by_degree[self.graph.degree(x)].insert(x);
        }
    }

    fn handle_insert(&mut self, u: VertexId, v: VertexId) {
        let du = self.graph.degree(u) - 1;
        let dv = self.graph.degree(v) - 1;
        self.bump_degree(u, du);
        self.bump_degree(v, dv);
        if self.matching.is_free(v) {
            self.free_nbrs[u].insert(v);
        }
        if self.matching.is_free(u) {
            self.free_nbrs[v].insert(u);
        }
        let (matched, free) = match (self.matching.mate(u), self.matching.mate(v)) {
            (None, None) => {
                self.pair(u, v);
                return;
            }
            (Some(_), Some(_)) => return,
            (Some(_), None) => (u, v),
            (None, Some(_)) => (v, u),
        };
        let m2 = self.matching.mate(matched).unwrap();
        if let Some(x) = self.free_neighbor_except(m2, free) {
            self.augment3(free, matched, m2, x);
            return;
        }
        if self.graph.degree(free) as f64 > self.degree_bound() {
            if let Some(z) = self.find_surrogate(free) {
                self.restore(z);
            }
        }
    }

    fn handle_delete(&mut self, u: VertexId, v: VertexId, old_bound: f64) {
        let du = self.graph.degree(u) + 1;
        let dv = self.graph.degree(v) + 1;
        self.bump_degree(u, du);
        self.bump_degree(v, dv);
        self.free_nbrs[u].remove(v);
        self.free_nbrs[v].remove(u);
        if self.matching.is_matched_edge(u, v) {
            self.split(u, v);
            self.restore(u);
            self.restore(v);
        }
        self.enforce_bound(old_bound);
    }

    fn invariant(&self, detail: String) -> AuditError {
        AuditError::Invariant {
            algorithm: "neiman-solomon".into(),
            detail,
        }
    }

    /// Checks free-neighbor sets, degree buckets, the absence of augmenting
    /// paths of length 1 and 3, and the free-vertex degree bound.
    pub fn audit_state(&self) -> Result<(), AuditError> {
        let g = &self.graph;
        let m = &self.matching;
        let bound = self.degree_bound();
        for v in 0..g.n() {
            let set = &self.free_nbrs[v];
            let want = g.neighbors(v).iter().filter(|&&w| m.is_free(w)).count();
            if !set.is_consistent()
                || set.len() != want
                || set.iter().any(|w| !m.is_free(w) || !g.has_edge(v, w))
            {
                return Err(self.invariant(format!("free-neighbor set of {v} is stale")));
            }
            let d = g.degree(v);
            if self.free_by_degree[d].contains(v) != m.is_free(v) {
                return Err(self.invariant(format!("degree bucket of {v} is stale")));
            }
            if !m.is_free(v) {
                continue;
            }
            if d as f64 > bound {
                return Err(self.invariant(format!(
                    "free vertex {v} has degree {d} above {bound:.3}"
                )));
            }
            for &w in g.neighbors(v) {
                let Some(w2) = m.mate(w) else {
                    return Err(self.invariant(format!("free edge ({v},{w})")));
                };
                if let Some(y) = self.free_neighbor_except(w2, v) {
                    return Err(self.invariant(format!(
                        "augmenting path {v}-{w}-{w2}-{y}"
                    )));
                }
            }
        }
        let bucketed: usize = self.free_by_degree.iter().map(IndexedSet::len).sum();
        if bucketed != m.n() - 2 * m.size() {
            return Err(self.invariant("degree buckets hold matched vertices".into()));
        }
        Ok(())
    }
}

pub fn degree_bound(n: usize, m: usize) -> f64 {
    ((2 * n + 2 * m) as f64).sqrt()
}

impl DynamicMatcher for NeimanSolomonMatcher {
    fn name(&self) -> String {
        "neiman-solomon".into()
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
        self.handle_insert(u, v);
        Ok(true)
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        let old_bound = self.degree_bound();
        if !self.graph.delete_edge(u, v)? {
            return Ok(false);
        }
        self.handle_delete(u, v, old_bound);
        Ok(true)
    }

    fn guarantee(&self) -> Guarantee {
        Guarantee::NoAugmentingPathWithin(3)
    }

    fn audit_invariants(&self) -> Result<(), AuditError> {
        self.audit_state()
    }
}
