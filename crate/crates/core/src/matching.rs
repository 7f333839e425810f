//! Matching state shared by every matcher.

use crate::graph::{DynamicGraph, VertexId};
use thiserror::Error;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("augmenting path must have an even number of vertices, got {0}")]
    WrongParity(usize),
    #[error("vertex {0} appears more than once on the path")]
    Repeated(VertexId),
    #[error("path endpoint {0} is not free")]
    EndpointMatched(VertexId),
    #[error("edge ({0},{1}) is not in the graph")]
    MissingEdge(VertexId, VertexId),
    #[error("edge ({0},{1}) breaks the unmatched/matched alternation")]
    NotAlternating(VertexId, VertexId),
    #[error("vertex {0} out of range")]
    OutOfRange(VertexId),
}

/// One reversible mutation of a [`Matching`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchEvent {
    Matched(VertexId, VertexId),
    Unmatched(VertexId, VertexId),
}

/// Ordered record of matching mutations; replaying it backwards restores the
/// state that existed when recording began.
#[derive(Debug, Clone, Default)]
pub struct UndoLog {
    events: Vec<MatchEvent>,
}

impl UndoLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current position, usable with [`Matching::rollback_to`].
    pub fn mark(&self) -> usize {
        self.events.len()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn clear(&mut self) {
        self.events.clear();
    }

    pub fn events(&self) -> &[MatchEvent] {
        &self.events
    }
}

/// Alternating path `v0, v1, ..., vk` between two free vertices whose odd
/// edges `(v0,v1), (v2,v3), ...` are unmatched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentingPath {
    pub vertices: Vec<VertexId>,
}

impl AugmentingPath {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        Self { vertices }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn validate(&self, g: &DynamicGraph, m: &Matching) -> Result<(), PathError> {
        let p = &self.vertices;
        if p.len() < 2 || !p.len().is_multiple_of(2) {
            return Err(PathError::WrongParity(p.len()));
        }
        let mut seen = rustc_hash::FxHashSet::default();
        for &v in p {
            if v >= g.n() || v >= m.n() {
                return Err(PathError::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(PathError::Repeated(v));
            }
        }
        for &end in [p[0], p[p.len() - 1]].iter() {
            if !m.is_free(end) {
                return Err(PathError::EndpointMatched(end));
            }
        }
        for (i, w) in p.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            if !g.has_edge(a, b) {
                return Err(PathError::MissingEdge(a, b));
            }
            let should_be_matched = i % 2 == 1;
            if m.is_matched_edge(a, b) != should_be_matched {
                return Err(PathError::NotAlternating(a, b));
            }
        }
        Ok(())
    }
}

/// Symmetric partial mate assignment over `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<usize>,
    size: usize,
}

impl Matching {
    pub fn new(n: usize) -> Self {
        Self {
            mate: vec![NONE; n],
            size: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.mate.len()
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        let m = self.mate[v];
        (m != NONE).then_some(m)
    }

    #[inline]
    pub fn is_free(&self, v: VertexId) -> bool {
        self.mate[v] == NONE
    }

    #[inline]
    pub fn is_matched_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.mate[u] == v
    }

    /// # Panics
    /// If either endpoint is already matched or `u == v`.
    #[inline]
    pub fn match_edge(&mut self, u: VertexId, v: VertexId) {
        assert!(u != v, "cannot match vertex {u} to itself");
        assert!(
            self.mate[u] == NONE && self.mate[v] == NONE,
            "match_edge({u},{v}): endpoint not free (mate {:?}, {:?})",
            self.mate(u),
            self.mate(v)
        );
        self.mate[u] = v;
        self.mate[v] = u;
        self.size += 1;
    }

    /// # Panics
    /// If `(u, v)` is not a matched edge.
    #[inline]
    pub fn unmatch_edge(&mut self, u: VertexId, v: VertexId) {
        assert!(
            self.mate[u] == v && self.mate[v] == u,
            "unmatch_edge({u},{v}): not a matched edge"
        );
        self.mate[u] = NONE;
        self.mate[v] = NONE;
        self.size -= 1;
    }

    pub fn match_logged(&mut self, u: VertexId, v: VertexId, log: &mut UndoLog) {
        self.match_edge(u, v);
        log.events.push(MatchEvent::Matched(u, v));
    }

    pub fn unmatch_logged(&mut self, u: VertexId, v: VertexId, log: &mut UndoLog) {
        self.unmatch_edge(u, v);
        log.events.push(MatchEvent::Unmatched(u, v));
    }

    /// Reverts every event recorded after `mark` and truncates the log.
    pub fn rollback_to(&mut self, log: &mut UndoLog, mark: usize) {
        while log.events.len() > mark {
            match log.events.pop().unwrap() {
                MatchEvent::Matched(u, v) => self.unmatch_edge(u, v),
                MatchEvent::Unmatched(u, v) => self.match_edge(u, v),
            }
        }
    }

    /// Flips a path that is known to be augmenting. Used by the search
    /// engines, which construct valid paths by design.
    pub(crate) fn flip_path(&mut self, path: &[VertexId]) {
        debug_assert!(path.len() >= 2 && path.len().is_multiple_of(2));
        for pair in path.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            let (ma, mb) = (self.mate[a], self.mate[b]);
            if ma != NONE && ma != b {
                self.mate[ma] = NONE;
            }
            if mb != NONE && mb != a {
                self.mate[mb] = NONE;
            }
            self.mate[a] = b;
            self.mate[b] = a;
        }
        self.size += 1;
    }

    /// Validates `path` against `g` and this matching, then flips it.
    pub fn apply_augmenting_path(
        &mut self,
        g: &DynamicGraph,
        path: &AugmentingPath,
    ) -> Result<(), PathError> {
        path.validate(g, self)?;
        self.flip_path(&path.vertices);
        Ok(())
    }

    /// Matched edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(u, &v)| v != NONE && u < v)
            .map(|(u, &v)| (u, v))
    }

    pub fn free_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m == NONE)
            .map(|(v, _)| v)
    }

    /// Checks symmetry, the size counter, and that every matched pair is a
    /// graph edge.
    pub fn audit(&self, g: &DynamicGraph) -> Result<(), String> {
        if self.n() != g.n() {
            return Err(format!(
                "matching covers {} vertices but graph has {}",
                self.n(),
                g.n()
            ));
        }
        let mut matched = 0;
        for (u, &v) in self.mate.iter().enumerate() {
            if v == NONE {
                continue;
            }
            if v >= self.n() || self.mate[v] != u {
                return Err(format!("mate of {u} is {v} but not vice versa"));
            }
            if !g.has_edge(u, v) {
                return Err(format!("matched pair ({u},{v}) is not an edge"));
            }
            matched += 1;
        }
        if matched != 2 * self.size {
            return Err(format!(
                "size counter {} but {} vertices are matched",
                self.size, matched
            ));
        }
        Ok(())
    }
}

pub fn verify_matching(g: &DynamicGraph, m: &Matching) -> bool {
    m.audit(g).is_ok()
}

/// First edge with both endpoints free, if any.
pub fn find_free_edge(g: &DynamicGraph, m: &Matching) -> Option<(VertexId, VertexId)> {
    g.edges().find(|&(u, v)| m.is_free(u) && m.is_free(v))
}

pub fn is_maximal(g: &DynamicGraph, m: &Matching) -> bool {
    find_free_edge(g, m).is_none()
}

/// First free neighbor of `v` in adjacency order.
#[inline]
pub fn free_neighbor(g: &DynamicGraph, m: &Matching, v: VertexId) -> Option<VertexId> {
    g.neighbors(v).iter().copied().find(|&w| m.is_free(w))
}
