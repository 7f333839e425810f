//! Fully dynamic undirected simple graph over a fixed vertex universe.
//!
//! Every vertex keeps its neighbors in a dense vector together with a hash
//! index from neighbor id to vector position. Insertion appends, deletion
//! swaps the victim with the last entry and pops, so both run in expected
//! constant time, and a uniformly random neighbor is a single index draw.

use rand::Rng;
use rustc_hash::FxHashMap;
use thiserror::Error;

/// Vertex identifier in `[0, n)`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(VertexId),
}

/// A set of vertex ids supporting O(1) expected insert, remove, membership
/// and uniform sampling. Iteration order is the internal array order.
#[derive(Debug, Clone, Default)]
pub struct IndexedSet {
    items: Vec<VertexId>,
    pos: FxHashMap<VertexId, usize>,
}

impl IndexedSet {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: VertexId) -> bool {
        self.pos.contains_key(&x)
    }

    /// Returns `false` if `x` was already present.
    pub fn insert(&mut self, x: VertexId) -> bool {
        if self.pos.contains_key(&x) {
            return false;
        }
        self.pos.insert(x, self.items.len());
        self.items.push(x);
        true
    }

    /// Swap-remove. Returns `false` if `x` was absent.
    pub fn remove(&mut self, x: VertexId) -> bool {
        let Some(i) = self.pos.remove(&x) else {
            return false;
        };
        let last = self.items.pop().expect("index and array out of sync");
        if last != x {
            self.items[i] = last;
            self.pos.insert(last, i);
        }
        true
    }

    #[inline]
    pub fn as_slice(&self) -> &[VertexId] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.items.iter().copied()
    }

    pub fn position(&self, x: VertexId) -> Option<usize> {
        self.pos.get(&x).copied()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<VertexId> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.gen_range(0..self.items.len())])
        }
    }

    pub fn clear(&mut self) {
        self.items.clear();
        self.pos.clear();
    }

    /// Checks that the position index and the array describe the same set.
    pub fn is_consistent(&self) -> bool {
        self.items.len() == self.pos.len()
            && self
                .items
                .iter()
                .enumerate()
                .all(|(i, x)| self.pos.get(x) == Some(&i))
    }
}

#[derive(Debug, Clone, Default)]
pub struct DynamicGraph {
    adj: Vec<IndexedSet>,
    m: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![IndexedSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, silently skipping duplicates.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.adj.len(),
            })
        }
    }

    fn check_pair(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Adds the undirected edge `{u, v}`. Returns `Ok(false)` and leaves the
    /// graph unchanged if the edge already exists.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_pair(u, v)?;
        if !self.adj[u].insert(v) {
            return Ok(false);
        }
        self.adj[v].insert(u);
        self.m += 1;
        Ok(true)
    }

    /// Removes the undirected edge `{u, v}`. Returns `Ok(false)` if absent.
    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_pair(u, v)?;
        if !self.adj[u].remove(v) {
            return Ok(false);
        }
        self.adj[v].remove(u);
        self.m -= 1;
        Ok(true)
    }

    /// # Panics
    /// If either id is out of range.
    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        assert!(v < self.n(), "vertex {v} out of range");
        self.adj[u].contains(v)
    }

    /// # Panics
    /// If `v` is out of range.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v` in internal array order.
    ///
    /// # Panics
    /// If `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj[v].as_slice()
    }

    /// Uniformly random neighbor of `v`, or `None` when `v` is isolated.
    #[inline]
    pub fn random_neighbor<R: Rng + ?Sized>(&self, v: VertexId, rng: &mut R) -> Option<VertexId> {
        self.adj[v].sample(rng)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(IndexedSet::len).max().unwrap_or(0)
    }

    /// All edges as `(u, v)` with `u < v`, in vertex then adjacency order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, set)| set.iter().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Full-structure consistency check: symmetry, index/array agreement,
    /// no self-loops, and the edge counter.
    pub fn audit(&self) -> Result<(), String> {
        let mut total = 0usize;
        for (v, set) in self.adj.iter().enumerate() {
            if !set.is_consistent() {
                return Err(format!("position index of vertex {v} is inconsistent"));
            }
            for u in set.iter() {
                if u >= self.n() {
                    return Err(format!("vertex {v} lists out-of-range neighbor {u}"));
                }
                if u == v {
                    return Err(format!("self-loop on vertex {v}"));
                }
                if !self.adj[u].contains(v) {
                    return Err(format!("edge ({v},{u}) is not symmetric"));
                }
            }
            total += set.len();
        }
        if total != 2 * self.m {
            return Err(format!(
                "edge counter {} disagrees with adjacency total {}",
                self.m,
                total / 2
            ));
        }
        Ok(())
    }
}
