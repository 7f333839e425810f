//! Two-level randomized maximal matching with edge ownership.
//!
//! Level-0 vertices own fewer than `c·√n` edges. A vertex crossing the
//! threshold is matched to a random owned neighbor and both move to level 1,
//! where they own all edges to level-0 neighbors.

use crate::graph::{DynamicGraph, GraphError, IndexedSet, VertexId};
use crate::matcher::{AuditError, DynamicMatcher, Guarantee};
use crate::matching::Matching;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
enum Task {
    /// Settle a free level-0 vertex by scanning its owned edges.
    Settle(VertexId),
    /// Re-check the ownership threshold of a level-0 vertex.
    Repair(VertexId),
}

#[derive(Debug, Clone)]
pub struct BgsMatcher {
    graph: DynamicGraph,
    matching: Matching,
    level: Vec<u8>,
    owned: Vec<IndexedSet>,
    threshold: f64,
    c: f64,
    rng: ChaCha8Rng,
    queue: VecDeque<Task>,
    settles: u64,
}

impl BgsMatcher {
    /// # Panics
    /// If `c` is not positive and finite.
    pub fn new(n: usize, c: f64, seed: u64) -> Self {
        assert!(c.is_finite() && c > 0.0, "threshold factor must be positive");
        Self {
            graph: DynamicGraph::new(n),
            matching: Matching::new(n),
            level: vec![0; n],
            owned: vec![IndexedSet::new(); n],
            threshold: c * (n as f64).sqrt(),
            c,
            rng: ChaCha8Rng::seed_from_u64(seed),
            queue: VecDeque::new(),
            settles: 0,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn level(&self, v: VertexId) -> u8 {
        self.level[v]
    }

    pub fn owned(&self, v: VertexId) -> &[VertexId] {
        self.owned[v].as_slice()
    }

    /// Number of random settles performed so far.
    pub fn settle_count(&self) -> u64 {
        self.settles
    }

    fn over_threshold(&self, v: VertexId) -> bool {
        self.owned[v].len() as f64 >= self.threshold
    }

    // Moves `x` to level 1: it becomes the sole owner of its edges to
    // level-0 neighbors. A level-0 vertex owns exactly those edges already.
    fn promote(&mut self, x: VertexId) {
        self.level[x] = 1;
        let mine = self.owned[x].as_slice().to_vec();
        for a in mine {
            if self.level[a] == 0 {
                self.owned[a].remove(x);
            }
        }
    }

    /// Matches `u` to a uniformly random neighbor `w` from its owned set and
    /// moves both to level 1. Returns `w`'s previous mate, now free.
    ///
    /// # Panics
    /// If `u` owns no edges or is matched.
    pub fn random_settle(&mut self, u: VertexId) -> Option<VertexId> {
        assert!(self.matching.is_free(u), "random_settle: {u} is matched");
        let w = self.owned[u]
            .sample(&mut self.rng)
            .unwrap_or_else(|| panic!("random_settle: {u} owns no edges"));
        self.settles += 1;
        let freed = self.matching.mate(w);
        if let Some(z) = freed {
            self.matching.unmatch_edge(w, z);
        }
        self.matching.match_edge(u, w);
        self.promote(u);
        self.promote(w);
        freed
    }

    // Level-0 vertex `x` crossed the threshold.
    fn repair(&mut self, x: VertexId) {
        if let Some(y) = self.matching.mate(x) {
            self.matching.unmatch_edge(x, y);
            self.queue.push_back(Task::Settle(y));
        }
        if let Some(z) = self.random_settle(x) {
            self.queue.push_back(Task::Settle(z));
        }
    }

    fn settle_by_scan(&mut self, x: VertexId) {
        let partner = self.owned[x]
            .iter()
            .find(|&a| self.matching.is_free(a));
        if let Some(a) = partner {
            self.matching.match_edge(x, a);
        }
    }

    fn drain(&mut self) {
        while let Some(task) = self.queue.pop_front() {
            match task {
                Task::Settle(x) => {
                    if self.level[x] == 0 && self.matching.is_free(x) {
                        self.settle_by_scan(x);
                    }
                }
                Task::Repair(x) => {
                    if self.level[x] == 0 && self.over_threshold(x) {
                        self.repair(x);
                    }
                }
            }
        }
    }

    // A level-1 vertex lost its matched edge.
    fn release_level1(&mut self, w: VertexId) {
        let mine = self.owned[w].as_slice().to_vec();
        for a in mine {
            if self.level[a] == 1 {
                self.owned[w].remove(a);
                self.owned[a].insert(w);
            }
        }
        if self.over_threshold(w) {
            if let Some(z) = self.random_settle(w) {
                self.queue.push_back(Task::Settle(z));
            }
            return;
        }
        self.level[w] = 0;
        let mine = self.owned[w].as_slice().to_vec();
        for a in mine {
            self.owned[a].insert(w);
            if self.over_threshold(a) {
                self.queue.push_back(Task::Repair(a));
            }
        }
        self.queue.push_back(Task::Settle(w));
    }

    fn handle_insert(&mut self, u: VertexId, v: VertexId) {
        match (self.level[u], self.level[v]) {
            (1, _) => {
                self.owned[u].insert(v);
            }
            (0, 1) => {
                self.owned[v].insert(u);
            }
            _ => {
                self.owned[u].insert(v);
                self.owned[v].insert(u);
                if self.matching.is_free(u) && self.matching.is_free(v) {
                    self.matching.match_edge(u, v);
                }
                let big = if self.owned[v].len() > self.owned[u].len() {
                    v
                } else {
                    u
                };
                if self.over_threshold(big) {
                    self.repair(big);
                    self.queue.push_back(Task::Repair(if big == u { v } else { u }));
                }
            }
        }
        self.drain();
    }

    fn handle_delete(&mut self, u: VertexId, v: VertexId) {
        self.owned[u].remove(v);
        self.owned[v].remove(u);
        if !self.matching.is_matched_edge(u, v) {
            return;
        }
        self.matching.unmatch_edge(u, v);
        if self.level[u] == 0 {
            self.queue.push_back(Task::Settle(u));
            self.queue.push_back(Task::Settle(v));
        } else {
            // Work queued by the first release is drained only afterwards,
            // so the second endpoint is still free at level 1 here.
            self.release_level1(u);
            self.release_level1(v);
        }
        self.drain();
    }

    fn invariant(&self, detail: String) -> AuditError {
        AuditError::Invariant {
            algorithm: "bgs".into(),
            detail,
        }
    }

    /// Checks the four level invariants and the ownership partition.
    pub fn audit_state(&self) -> Result<(), AuditError> {
        let g = &self.graph;
        let m = &self.matching;
        for v in 0..g.n() {
            if !self.owned[v].is_consistent() {
                return Err(self.invariant(format!("owned set of {v} is corrupt")));
            }
            match self.level[v] {
                1 => {
                    if m.is_free(v) {
                        return Err(self.invariant(format!("level-1 vertex {v} is free")));
                    }
                }
                0 => {
                    if m.is_free(v) {
                        if let Some(&w) = g.neighbors(v).iter().find(|&&w| m.is_free(w)) {
                            return Err(self.invariant(format!(
                                "free level-0 vertex {v} has free neighbor {w}"
                            )));
                        }
                    }
                    if self.over_threshold(v) {
                        return Err(self.invariant(format!(
                            "level-0 vertex {v} owns {} edges, threshold {}",
                            self.owned[v].len(),
                            self.threshold
                        )));
                    }
                }
                l => return Err(self.invariant(format!("vertex {v} has level {l}"))),
            }
            if let Some(w) = m.mate(v) {
                if self.level[w] != self.level[v] {
                    return Err(self.invariant(format!("matched edge ({v},{w}) spans levels")));
                }
            }
            for a in self.owned[v].iter() {
                if !g.has_edge(v, a) {
                    return Err(self.invariant(format!("{v} owns missing edge ({v},{a})")));
                }
            }
        }
        for (a, b) in g.edges() {
            let (oa, ob) = (self.owned[a].contains(b), self.owned[b].contains(a));
            let ok = match (self.level[a], self.level[b]) {
                (0, 0) => oa && ob,
                (1, 0) => oa && !ob,
                (0, 1) => !oa && ob,
                _ => oa != ob,
            };
            if !ok {
                return Err(self.invariant(format!(
                    "edge ({a},{b}) at levels ({},{}) has ownership ({oa},{ob})",
                    self.level[a], self.level[b]
                )));
            }
        }
        Ok(())
    }
}

impl DynamicMatcher for BgsMatcher {
    fn name(&self) -> String {
        if self.c == 1.0 {
            "bgs".into()
        } else {
            format!("bgs(c={})", self.c)
        }
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
        if !self.graph.delete_edge(u, v)? {
            return Ok(false);
        }
        self.handle_delete(u, v);
        Ok(true)
    }

    fn guarantee(&self) -> Guarantee {
        Guarantee::Maximal
    }

    fn audit_invariants(&self) -> Result<(), AuditError> {
        self.audit_state()
    }
}
