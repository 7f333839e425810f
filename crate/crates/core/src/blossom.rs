//! Single-root augmenting path search with blossom shrinking.
//!
//! The search state lives in a [`SearchScratch`] that is allocated once per
//! matcher. A search only writes entries of vertices it labels and records
//! them in a touched list; resetting walks that list, so a search costs time
//! proportional to the part of the graph it explores rather than `n + m`.
//!
//! Blossoms are represented by a union-find over vertices whose roots are
//! blossom bases. Shrinking never rewrites the graph, and the union-find
//! entries are rolled back together with the labels.

use crate::graph::{DynamicGraph, VertexId};
use crate::matching::Matching;
use std::collections::VecDeque;

const NONE: usize = usize::MAX;

// How a search ended successfully: at an unlabeled free vertex, or on an
// edge joining even vertices of two different trees.
#[derive(Debug, Clone, Copy)]
enum Hit {
    Free(VertexId),
    Bridge(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Unlabeled,
    Even,
    Odd,
}

/// Work done by a search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone)]
pub struct SearchScratch {
    label: Vec<Label>,
    pred: Vec<usize>,
    base: Vec<usize>,
    depth: Vec<usize>,
    tree: Vec<VertexId>,
    mark: Vec<u64>,
    epoch: u64,
    touched: Vec<VertexId>,
    queue: VecDeque<VertexId>,
    last: SearchStats,
    total: SearchStats,
    searches: u64,
}

impl SearchScratch {
    pub fn new(n: usize) -> Self {
        Self {
            label: vec![Label::Unlabeled; n],
            pred: vec![NONE; n],
            base: (0..n).collect(),
            depth: vec![0; n],
            tree: vec![NONE; n],
            mark: vec![0; n],
            epoch: 0,
            touched: Vec::new(),
            queue: VecDeque::new(),
            last: SearchStats::default(),
            total: SearchStats::default(),
            searches: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.label.len()
    }

    /// Work of the most recent search.
    pub fn last_stats(&self) -> SearchStats {
        self.last
    }

    /// Accumulated work since construction.
    pub fn total_stats(&self) -> SearchStats {
        self.total
    }

    pub fn searches(&self) -> u64 {
        self.searches
    }

    /// True when every per-vertex entry is back in its initial state.
    pub fn is_clear(&self) -> bool {
        self.touched.is_empty()
            && self.queue.is_empty()
            && self.label.iter().all(|&l| l == Label::Unlabeled)
            && self.pred.iter().all(|&p| p == NONE)
            && self.base.iter().enumerate().all(|(v, &b)| v == b)
            && self.depth.iter().all(|&d| d == 0)
    }

    /// Vertices labeled by the search in progress (empty between searches).
    pub fn touched(&self) -> &[VertexId] {
        &self.touched
    }

    /// Searches for an augmenting path starting at the free vertex `root`
    /// and applies the first one found. With `depth_bound`, vertices are only
    /// expanded while the alternating path through them stays within that
    /// many edges.
    ///
    /// # Panics
    /// If `root` is matched, or `depth_bound` is even or zero.
    pub fn augment_from(
        &mut self,
        g: &DynamicGraph,
        m: &mut Matching,
        root: VertexId,
        depth_bound: Option<usize>,
    ) -> bool {
        assert!(m.is_free(root), "augment_from: root {root} is not free");
        if let Some(b) = depth_bound {
            assert!(b % 2 == 1, "depth bound must be odd and positive, got {b}");
        }
        debug_assert_eq!(g.n(), self.n());
        self.begin();
        self.touch(root, Label::Even, 0, root);
        self.queue.push_back(root);
        let found = self.grow(g, m, depth_bound);
        self.finish_with(m, found)
    }

    /// Grows one alternating forest from every free non-isolated vertex and
    /// applies the first augmenting path found. When `m` is maximum before
    /// the last edge insertion this decides exactly whether the insertion
    /// raised the optimum, at the cost of exploring the forest only.
    pub fn augment_from_all_free(&mut self, g: &DynamicGraph, m: &mut Matching) -> bool {
        debug_assert_eq!(g.n(), self.n());
        self.begin();
        for r in 0..g.n() {
            if m.is_free(r) && g.degree(r) > 0 {
                self.touch(r, Label::Even, 0, r);
                self.queue.push_back(r);
            }
        }
        let found = self.grow(g, m, None);
        self.finish_with(m, found)
    }

    fn finish_with(&mut self, m: &mut Matching, found: Option<Hit>) -> bool {
        let path = match found {
            None => None,
            Some(Hit::Free(end)) => Some(self.trace_path(m, end)),
            Some(Hit::Bridge(x, y)) => {
                let mut p = self.trace_even(m, x);
                p.reverse();
                p.extend(self.trace_even(m, y));
                Some(p)
            }
        };
        self.finish();
        match path {
            Some(p) => {
                m.flip_path(&p);
                true
            }
            None => false,
        }
    }

    /// Some free vertex reachable from `root` by an alternating walk whose
    /// first edge is `root`'s matched edge, or `root` itself when free.
    pub fn find_free_reachable(
        &mut self,
        g: &DynamicGraph,
        m: &Matching,
        root: VertexId,
    ) -> Option<VertexId> {
        let Some(top) = m.mate(root) else {
            return Some(root);
        };
        self.begin();
        self.touch(root, Label::Odd, 0, root);
        self.touch(top, Label::Even, 0, root);
        self.queue.push_back(top);
        let found = self.grow(g, m, None);
        self.finish();
        match found {
            Some(Hit::Free(y)) => Some(y),
            _ => None,
        }
    }

    fn begin(&mut self) {
        debug_assert!(self.touched.is_empty());
        self.last = SearchStats::default();
        self.searches += 1;
    }

    fn finish(&mut self) {
        self.last.vertices = self.touched.len();
        self.total.vertices += self.last.vertices;
        self.total.edges += self.last.edges;
        for &v in &self.touched {
            self.label[v] = Label::Unlabeled;
            self.pred[v] = NONE;
            self.base[v] = v;
            self.depth[v] = 0;
        }
        self.touched.clear();
        self.queue.clear();
    }

    #[inline]
    fn touch(&mut self, v: VertexId, label: Label, depth: usize, tree: VertexId) {
        debug_assert_eq!(self.label[v], Label::Unlabeled);
        self.label[v] = label;
        self.depth[v] = depth;
        self.tree[v] = tree;
        self.touched.push(v);
    }

    fn grow(
        &mut self,
        g: &DynamicGraph,
        m: &Matching,
        bound: Option<usize>,
    ) -> Option<Hit> {
        while let Some(x) = self.queue.pop_front() {
            if bound.is_some_and(|b| self.depth[x] + 1 > b) {
                continue;
            }
            for &y in g.neighbors(x) {
                self.last.edges += 1;
                match self.label[y] {
                    Label::Unlabeled => {
                        let t = self.tree[x];
                        self.touch(y, Label::Odd, self.depth[x] + 1, t);
                        self.pred[y] = x;
                        match m.mate(y) {
                            None => return Some(Hit::Free(y)),
                            Some(z) => {
                                self.touch(z, Label::Even, self.depth[x] + 2, t);
                                self.queue.push_back(z);
                            }
                        }
                    }
                    Label::Even if self.tree[x] != self.tree[y] => {
                        return Some(Hit::Bridge(x, y));
                    }
                    Label::Even => {
                        if self.find(x) != self.find(y) {
                            let l = self.lca(m, x, y);
                            let through = self.depth[x] + 1 + self.depth[y];
                            self.shrink(m, x, y, l, through);
                            self.shrink(m, y, x, l, through);
                        }
                    }
                    Label::Odd => {}
                }
            }
        }
        None
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.base[r] != r {
            r = self.base[r];
        }
        let mut c = x;
        while self.base[c] != r {
            let next = self.base[c];
            self.base[c] = r;
            c = next;
        }
        r
    }

    // Base of the tree parent blossom of base `b`, or NONE at the top.
    fn parent_base(&mut self, m: &Matching, b: usize) -> usize {
        match m.mate(b) {
            None => NONE,
            Some(mb) => match self.pred[mb] {
                NONE => NONE,
                p => self.find(p),
            },
        }
    }

    fn lca(&mut self, m: &Matching, x: usize, y: usize) -> usize {
        self.epoch += 1;
        let stamp = self.epoch;
        let mut a = self.find(x);
        let mut b = self.find(y);
        loop {
            if a != NONE {
                if self.mark[a] == stamp {
                    return a;
                }
                self.mark[a] = stamp;
                a = self.parent_base(m, a);
            }
            std::mem::swap(&mut a, &mut b);
        }
    }

    // Walks from `x` up to base `l`, redirecting predecessor links across the
    // bridge `(x, y)` and turning odd vertices even.
    fn shrink(&mut self, m: &Matching, mut x: usize, mut y: usize, l: usize, through: usize) {
        while self.find(x) != l {
            self.pred[x] = y;
            let z = m.mate(x).expect("non-base blossom vertex is matched");
            if self.label[z] == Label::Odd {
                self.label[z] = Label::Even;
                self.depth[z] = (through + 1).saturating_sub(self.depth[x]);
                self.queue.push_back(z);
            }
            if self.find(x) == x {
                self.base[x] = l;
            }
            if self.find(z) == z {
                self.base[z] = l;
            }
            y = z;
            x = self.pred[z];
        }
    }

    // Even vertex back to its tree root.
    fn trace_even(&self, m: &Matching, x: VertexId) -> Vec<VertexId> {
        let mut path = Vec::new();
        let mut v = x;
        loop {
            path.push(v);
            match m.mate(v) {
                None => break,
                Some(w) => {
                    path.push(w);
                    v = self.pred[w];
                }
            }
            debug_assert!(path.len() <= self.n());
        }
        path
    }

    fn trace_path(&self, m: &Matching, end: VertexId) -> Vec<VertexId> {
        let mut path = vec![end];
        let mut v = end;
        loop {
            let p = self.pred[v];
            debug_assert_ne!(p, NONE);
            path.push(p);
            match m.mate(p) {
                None => break,
                Some(q) => {
                    path.push(q);
                    v = q;
                }
            }
            debug_assert!(path.len() <= self.n());
        }
        path
    }
}

/// Greedy maximal matching: scan edges and match those with two free ends.
pub fn greedy_matching(g: &DynamicGraph) -> Matching {
    let mut m = Matching::new(g.n());
    for u in 0..g.n() {
        if !m.is_free(u) {
            continue;
        }
        if let Some(&v) = g.neighbors(u).iter().find(|&&v| m.is_free(v)) {
            m.match_edge(u, v);
        }
    }
    m
}

/// Maximum cardinality matching: greedy initialization followed by one
/// augmenting path search from every remaining free vertex.
pub fn static_max_matching(g: &DynamicGraph) -> Matching {
    let mut scratch = SearchScratch::new(g.n());
    static_max_matching_with(g, &mut scratch)
}

pub fn static_max_matching_with(g: &DynamicGraph, scratch: &mut SearchScratch) -> Matching {
    let mut m = greedy_matching(g);
    // A vertex without an augmenting path keeps that property after other
    // augmentations, so a single pass suffices.
    for v in 0..g.n() {
        if m.is_free(v) && g.degree(v) > 0 {
            scratch.augment_from(g, &mut m, v, None);
        }
    }
    m
}
