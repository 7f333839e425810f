//! Dynamic matcher built on the blossom search: after each update it looks
//! for an augmenting path from the affected free vertices, optionally
//! depth-bounded and optionally lazy.

use crate::blossom::SearchScratch;
use crate::graph::{DynamicGraph, GraphError, VertexId};
use crate::matcher::{DynamicMatcher, Guarantee};
use crate::matching::Matching;
use crate::random_walk::path_length_bound;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlossomConfig {
    /// Search across the new edge when both endpoints are matched.
    pub safe: bool,
    pub lazy: bool,
    /// `None` means unbounded search depth.
    pub epsilon: Option<f64>,
}

impl Default for BlossomConfig {
    fn default() -> Self {
        Self {
            safe: true,
            lazy: false,
            epsilon: None,
        }
    }
}

impl BlossomConfig {
    /// Search depth `ceil(2/ε) - 1`, rounded down to odd and at least 1
    /// since augmenting paths have odd length.
    pub fn depth_bound(&self) -> Option<usize> {
        self.epsilon.map(|e| {
            let b = path_length_bound(e).max(1);
            b - (1 - b % 2)
        })
    }

    pub fn is_exact(&self) -> bool {
        self.safe && !self.lazy && self.epsilon.is_none()
    }
}

/// Per-vertex record of the last search rooted there, plus the global
/// update counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyState {
    last_cost: Vec<Option<usize>>,
    last_tick: Vec<u64>,
    tick: u64,
}

impl LazyState {
    pub fn new(n: usize) -> Self {
        Self {
            last_cost: vec![None; n],
            last_tick: vec![0; n],
            tick: 0,
        }
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn advance(&mut self) {
        self.tick += 1;
    }

    /// True when `root` was never searched from, or at least half of the
    /// edges its last search touched have been updated since.
    pub fn gate(&self, root: VertexId) -> bool {
        match self.last_cost[root] {
            None => true,
            Some(cost) => 2 * (self.tick - self.last_tick[root]) >= cost as u64,
        }
    }

    pub fn record(&mut self, root: VertexId, cost: usize) {
        self.last_cost[root] = Some(cost);
        self.last_tick[root] = self.tick;
    }

    pub fn last_cost(&self, root: VertexId) -> Option<usize> {
        self.last_cost[root]
    }
}

#[derive(Debug, Clone)]
pub struct DynBlossomMatcher {
    graph: DynamicGraph,
    matching: Matching,
    cfg: BlossomConfig,
    scratch: SearchScratch,
    lazy: LazyState,
    skipped: u64,
}

impl DynBlossomMatcher {
    pub fn new(n: usize, cfg: BlossomConfig) -> Self {
        Self {
            graph: DynamicGraph::new(n),
            matching: Matching::new(n),
            cfg,
            scratch: SearchScratch::new(n),
            lazy: LazyState::new(n),
            skipped: 0,
        }
    }

    pub fn config(&self) -> &BlossomConfig {
        &self.cfg
    }

    pub fn lazy_state(&self) -> &LazyState {
        &self.lazy
    }

    /// Edges scanned by all searches so far.
    pub fn search_work(&self) -> usize {
        self.scratch.total_stats().edges
    }

    /// Searches suppressed by the lazy gate.
    pub fn skipped_searches(&self) -> u64 {
        self.skipped
    }

    // One augmenting path search from the free vertex `root`.
    fn search(&mut self, root: VertexId, on_delete: bool) -> bool {
        let bound = self.cfg.depth_bound();
        if !self.cfg.lazy {
            return self
                .scratch
                .augment_from(&self.graph, &mut self.matching, root, bound);
        }
        if self.lazy.gate(root) {
            let found = self
                .scratch
                .augment_from(&self.graph, &mut self.matching, root, bound);
            self.lazy.record(root, self.scratch.last_stats().edges);
            return found;
        }
        self.skipped += 1;
        if !on_delete {
            return false;
        }
        let short = bound.map_or(3, |b| b.min(3));
        self.scratch
            .augment_from(&self.graph, &mut self.matching, root, Some(short))
    }

    // Both endpoints matched: any augmenting path must use (u, v), so it
    // starts at a free vertex that reaches one endpoint through its mate.
    // Under lazy gating the endpoint, not the free vertex found, owns the
    // cost of both searches.
    fn search_across(&mut self, u: VertexId, v: VertexId) -> bool {
        let bound = self.cfg.depth_bound();
        for end in [u, v] {
            if self.cfg.lazy && !self.lazy.gate(end) {
                self.skipped += 1;
                continue;
            }
            let found = self
                .scratch
                .find_free_reachable(&self.graph, &self.matching, end);
            let mut cost = self.scratch.last_stats().edges;
            let augmented = found.is_some_and(|x| {
                let ok = self
                    .scratch
                    .augment_from(&self.graph, &mut self.matching, x, bound);
                cost += self.scratch.last_stats().edges;
                ok
            });
            if self.cfg.lazy {
                self.lazy.record(end, cost);
            }
            if augmented {
                return true;
            }
        }
        false
    }

    // Unbounded variant: if the matching was maximum before (u, v) arrived,
    // one forest search from all free vertices settles the question. The
    // lazy gate passes if either endpoint passes and both are charged.
    fn search_forest(&mut self, u: VertexId, v: VertexId) {
        if self.cfg.lazy && !self.lazy.gate(u) && !self.lazy.gate(v) {
            self.skipped += 1;
            return;
        }
        self.scratch
            .augment_from_all_free(&self.graph, &mut self.matching);
        if self.cfg.lazy {
            let cost = self.scratch.last_stats().edges;
            self.lazy.record(u, cost);
            self.lazy.record(v, cost);
        }
    }

    fn handle_insert(&mut self, u: VertexId, v: VertexId) {
        match (self.matching.is_free(u), self.matching.is_free(v)) {
            (true, true) => self.matching.match_edge(u, v),
            (true, false) => {
                self.search(u, false);
            }
            (false, true) => {
                self.search(v, false);
            }
            (false, false) if self.cfg.safe && self.cfg.epsilon.is_none() => self.search_forest(u, v),
            (false, false) => {
                if self.cfg.safe {
                    self.search_across(u, v);
                }
            }
        }
    }

    fn handle_delete(&mut self, u: VertexId, v: VertexId) {
        if !self.matching.is_matched_edge(u, v) {
            return;
        }
        self.matching.unmatch_edge(u, v);
        for x in [u, v] {
            if self.matching.is_free(x) {
                self.search(x, true);
            }
        }
    }
}

impl DynamicMatcher for DynBlossomMatcher {
    fn name(&self) -> String {
        let mut s = String::from("dyn-blossom");
        s.push_str(if self.cfg.safe { "-safe" } else { "-unsafe" });
        if self.cfg.lazy {
            s.push_str("-lazy");
        }
        if let Some(e) = self.cfg.epsilon {
            s.push_str(&format!("(eps={e})"));
        }
        s
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
        self.lazy.advance();
        self.handle_insert(u, v);
        Ok(true)
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if !self.graph.delete_edge(u, v)? {
            return Ok(false);
        }
        self.lazy.advance();
        self.handle_delete(u, v);
        Ok(true)
    }

    fn guarantee(&self) -> Guarantee {
        if self.cfg.is_exact() {
            Guarantee::Maximum
        } else {
            Guarantee::Maximal
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blossom::static_max_matching;
    use crate::matcher::check_guarantee;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(safe: bool, lazy: bool, epsilon: Option<f64>) -> BlossomConfig {
        BlossomConfig {
            safe,
            lazy,
            epsilon,
        }
    }

    #[test]
    fn depth_bounds() {
        assert_eq!(cfg(true, false, None).depth_bound(), None);
        assert_eq!(cfg(true, false, Some(1.0)).depth_bound(), Some(1));
        assert_eq!(cfg(true, false, Some(0.5)).depth_bound(), Some(3));
        assert_eq!(cfg(true, false, Some(0.4)).depth_bound(), Some(3));
        assert_eq!(cfg(true, false, Some(2.0)).depth_bound(), Some(1));
        assert_eq!(cfg(true, false, Some(0.1)).depth_bound(), Some(19));
    }

    #[test]
    fn lazy_gate_examples() {
        let mut lz = LazyState::new(2);
        assert!(lz.gate(0));
        lz.record(0, 10);
        for _ in 0..4 {
            lz.advance();
        }
        assert!(!lz.gate(0));
        lz.advance();
        assert!(lz.gate(0));
    }

    #[test]
    fn insert_examples() {
        let mut db = DynBlossomMatcher::new(2, BlossomConfig::default());
        db.insert(0, 1).unwrap();
        assert_eq!(db.size(), 1);

        let mut db = DynBlossomMatcher::new(4, BlossomConfig::default());
        db.insert(0, 1).unwrap();
        db.insert(2, 3).unwrap();
        let before = db.matching().clone();
        db.insert(1, 2).unwrap();
        assert_eq!(db.matching(), &before);
        assert_eq!(static_max_matching(db.graph()).size(), 2);
    }

    #[test]
    fn bounded_insert_on_p4() {
        // (1,2) matched, (2,3) present, then (0,1): the only augmenting
        // path is 0-1-2-3 of length 3.
        for (eps, expected) in [(1.0, 1), (0.5, 2)] {
            let mut db = DynBlossomMatcher::new(4, cfg(true, false, Some(eps)));
            db.insert(1, 2).unwrap();
            db.insert(2, 3).unwrap();
            db.insert(0, 1).unwrap();
            assert_eq!(db.size(), expected, "eps = {eps}");
            db.audit().unwrap();
        }
    }

    #[test]
    fn delete_examples() {
        let mut c4 = DynBlossomMatcher::new(4, BlossomConfig::default());
        for (u, v) in [(0, 1), (2, 3), (1, 2), (3, 0)] {
            c4.insert(u, v).unwrap();
        }
        assert_eq!(c4.size(), 2);
        let (a, b) = c4.matching().edges().next().unwrap();
        c4.delete(a, b).unwrap();
        assert_eq!(c4.size(), 2);

        let mut p4 = DynBlossomMatcher::new(4, BlossomConfig::default());
        for (u, v) in [(0, 1), (2, 3), (1, 2)] {
            p4.insert(u, v).unwrap();
        }
        let before = p4.matching().clone();
        p4.delete(1, 2).unwrap();
        assert_eq!(p4.matching(), &before);
    }

    #[test]
    fn unsafe_ignores_cross_insertions() {
        // Two matched edges joined by a third edge plus pendant free
        // vertices: the safe matcher augments, the unsafe one does not.
        let mut safe = DynBlossomMatcher::new(6, BlossomConfig::default());
        let mut unsafe_ = DynBlossomMatcher::new(6, cfg(false, false, None));
        for db in [&mut safe, &mut unsafe_] {
            for (u, v) in [(1, 2), (3, 4), (0, 1), (4, 5), (2, 3)] {
                db.insert(u, v).unwrap();
            }
        }
        assert_eq!(safe.size(), 3);
        assert_eq!(unsafe_.size(), 2);
        unsafe_.audit().unwrap();
    }

    fn random_run(c: BlossomConfig, n: usize, ops: usize, seed: u64) -> DynBlossomMatcher {
        let mut db = DynBlossomMatcher::new(n, c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ops {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            if rng.gen_bool(0.7) {
                db.insert(u, v).unwrap();
            } else {
                db.delete(u, v).unwrap();
            }
            db.audit().unwrap();
            check_guarantee(&db).unwrap();
        }
        db
    }

    #[test]
    fn safe_unbounded_stays_maximum() {
        for seed in 0..10 {
            random_run(BlossomConfig::default(), 14, 600, seed);
        }
    }

    #[test]
    fn other_configurations_stay_maximal() {
        for c in [
            cfg(false, false, None),
            cfg(true, true, None),
            cfg(true, false, Some(1.0)),
            cfg(false, true, Some(0.25)),
        ] {
            random_run(c, 16, 800, 5);
        }
    }

    fn work_per_op(c: BlossomConfig, n: usize, ops: usize) -> f64 {
        let mut db = DynBlossomMatcher::new(n, c);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..ops {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            if rng.gen_bool(0.6) {
                db.insert(u, v).unwrap();
            } else {
                db.delete(u, v).unwrap();
            }
        }
        db.audit().unwrap();
        db.search_work() as f64 / ops as f64
    }

    #[test]
    fn lazy_work_per_op_stays_flat() {
        let lazy = cfg(true, true, None);
        let short = work_per_op(lazy, 300, 10_000);
        let long = work_per_op(lazy, 300, 40_000);
        let eager = work_per_op(BlossomConfig::default(), 300, 10_000);
        eprintln!("lazy {short:.1} / {long:.1}, eager {eager:.1}");
        assert!(long < 1000.0 && long < 1.5 * short.max(100.0));
        assert!(short <= eager);
    }
}
