//! Common interface of the dynamic matchers.

use crate::blossom::static_max_matching;
use crate::graph::{DynamicGraph, GraphError, VertexId};
use crate::matching::{find_free_edge, Matching};
use crate::oracle::augmenting_path_within;
use crate::workload::{OpKind, UpdateOp};
use thiserror::Error;

/// Quality guarantee a matcher configuration promises after every update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// The matching is maximum.
    Maximum,
    /// Maximal and free of augmenting paths up to the given odd length.
    NoAugmentingPathWithin(usize),
    /// Maximal, hence a 2-approximation.
    Maximal,
}

impl Guarantee {
    /// Smallest matching size compatible with the guarantee, given the
    /// maximum matching size `opt`. No augmenting path of length `2k - 3`
    /// or less gives a `k / (k - 1)` approximation.
    pub fn min_size(self, opt: usize) -> usize {
        match self {
            Guarantee::Maximum => opt,
            Guarantee::Maximal => opt.div_ceil(2),
            Guarantee::NoAugmentingPathWithin(len) => {
                let k = (len + 3) / 2;
                (opt * (k - 1)).div_ceil(k)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("graph structure: {0}")]
    Graph(String),
    #[error("matching state: {0}")]
    Matching(String),
    #[error("matching is not maximal: edge ({0},{1}) has two free endpoints")]
    NotMaximal(VertexId, VertexId),
    #[error("{algorithm} invariant violated: {detail}")]
    Invariant { algorithm: String, detail: String },
    #[error("matching size {size} violates the {guarantee:?} guarantee (optimum {opt})")]
    Quality {
        size: usize,
        opt: usize,
        guarantee: Guarantee,
    },
    #[error("augmenting path of length {0} remains")]
    ShortAugmentingPath(usize),
}

/// A fully dynamic matching algorithm owning its graph.
///
/// `insert`/`delete` mutate the graph and then run the algorithm's update
/// handler; they return `Ok(false)` for duplicate inserts and missing
/// deletes, which leave everything unchanged.
pub trait DynamicMatcher: Send {
    fn name(&self) -> String;

    fn graph(&self) -> &DynamicGraph;

    fn matching(&self) -> &Matching;

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError>;

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError>;

    fn guarantee(&self) -> Guarantee;

    /// Algorithm-specific invariants beyond the generic matching checks.
    fn audit_invariants(&self) -> Result<(), AuditError> {
        Ok(())
    }

    /// Structural audit: graph consistency, matching validity, maximality
    /// and the algorithm's own invariants.
    fn audit(&self) -> Result<(), AuditError> {
        let g = self.graph();
        g.audit().map_err(AuditError::Graph)?;
        self.matching().audit(g).map_err(AuditError::Matching)?;
        if let Some((u, v)) = find_free_edge(g, self.matching()) {
            return Err(AuditError::NotMaximal(u, v));
        }
        self.audit_invariants()
    }

    fn apply(&mut self, op: &UpdateOp) -> Result<bool, GraphError> {
        match op.kind {
            OpKind::Insert => self.insert(op.u, op.v),
            OpKind::Delete => self.delete(op.u, op.v),
        }
    }

    fn size(&self) -> usize {
        self.matching().size()
    }
}

/// Checks the matcher's guarantee against the exact optimum computed from
/// scratch. Returns the optimum on success.
pub fn check_guarantee(matcher: &dyn DynamicMatcher) -> Result<usize, AuditError> {
    let g = matcher.graph();
    let opt = static_max_matching(g).size();
    let size = matcher.size();
    let guarantee = matcher.guarantee();
    if size < guarantee.min_size(opt) || size > opt {
        return Err(AuditError::Quality {
            size,
            opt,
            guarantee,
        });
    }
    if let Guarantee::NoAugmentingPathWithin(len) = guarantee {
        if let Some(p) = augmenting_path_within(g, matcher.matching(), len) {
            return Err(AuditError::ShortAugmentingPath(p.len()));
        }
    }
    Ok(opt)
}
