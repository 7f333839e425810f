//! Random-walk matcher: short random alternating walks that flip matched
//! edges as they go, undone on failure or, with settling, finished by a
//! neighborhood scan of the last freed vertex.

use crate::graph::{DynamicGraph, GraphError, VertexId};
use crate::matcher::{DynamicMatcher, Guarantee};
use crate::matching::{free_neighbor, Matching, UndoLog};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkConfigError {
    #[error("epsilon must be a positive finite number, got {0}")]
    Epsilon(f64),
    #[error("walk repetitions must be at least 1")]
    Repetitions,
}

/// Number of walks started from one free vertex before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Repetitions {
    Fixed(u32),
    /// `ceil(Δ^L · ln n)` walks for walk length `L`, the schedule under
    /// which the approximation holds with high probability. Capped at
    /// [`DEGREE_SCHEDULE_CAP`].
    DegreeSchedule,
}

pub const DEGREE_SCHEDULE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub epsilon: f64,
    pub settling: bool,
    pub repetitions: Repetitions,
}

impl WalkConfig {
    pub fn new(epsilon: f64, settling: bool) -> Result<Self, WalkConfigError> {
        Self {
            epsilon,
            settling,
            repetitions: Repetitions::Fixed(1),
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self, WalkConfigError> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(WalkConfigError::Epsilon(self.epsilon));
        }
        if self.repetitions == Repetitions::Fixed(0) {
            return Err(WalkConfigError::Repetitions);
        }
        Ok(self)
    }

    /// Edge traversals per walk: `ceil(2/ε) - 1`.
    pub fn max_steps(&self) -> usize {
        path_length_bound(self.epsilon)
    }

    pub fn repetition_count(&self, max_degree: usize, n: usize) -> u64 {
        match self.repetitions {
            Repetitions::Fixed(k) => u64::from(k),
            Repetitions::DegreeSchedule => {
                let reps = (max_degree.max(1) as f64).powi(self.max_steps() as i32)
                    * (n.max(2) as f64).ln();
                (reps.ceil() as u64).clamp(1, DEGREE_SCHEDULE_CAP)
            }
        }
    }
}

/// `ceil(2/ε) - 1`, the longest augmenting path length an ε-approximation
/// has to rule out. A small tolerance keeps `2/0.1` at 20.
pub fn path_length_bound(epsilon: f64) -> usize {
    let ratio = 2.0 / epsilon;
    ((ratio - 1e-9).ceil().max(1.0) as usize) - 1
}

/// How a single walk ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkEnd {
    /// The matching grew by one.
    Augmented,
    /// Budget exhausted or dead end. Without settling the matching is back
    /// to its entry state; with settling it holds the walk's changes and
    /// the given vertex is the one left free.
    Stuck(VertexId),
}

/// One random alternating walk from the free vertex `start`.
///
/// At a free vertex `x` a uniformly random neighbor `w` is chosen. If `w` is
/// free, `(x, w)` is matched and the walk succeeds. Otherwise `w` is taken
/// from its mate `z`, `(x, w)` is matched and the walk continues at `z`.
/// Each random edge and each matched edge counts as one traversal against
/// `max_steps`. With `settling`, every visited vertex first scans its
/// neighborhood for a free partner, and an exhausted walk ends with such a
/// scan instead of being undone.
///
/// # Panics
/// If `start` is matched.
pub fn random_augmenting_walk<R: Rng + ?Sized>(
    g: &DynamicGraph,
    m: &mut Matching,
    start: VertexId,
    max_steps: usize,
    settling: bool,
    rng: &mut R,
    log: &mut UndoLog,
) -> WalkEnd {
    assert!(m.is_free(start), "random walk must start at a free vertex");
    let mark = log.mark();
    let mut x = start;
    let mut budget = max_steps;
    loop {
        if settling {
            if let Some(f) = free_neighbor(g, m, x) {
                m.match_logged(x, f, log);
                return WalkEnd::Augmented;
            }
        }
        if budget == 0 {
            break;
        }
        let Some(w) = g.random_neighbor(x, rng) else {
            break;
        };
        budget -= 1;
        match m.mate(w) {
            None => {
                m.match_logged(x, w, log);
                return WalkEnd::Augmented;
            }
            Some(z) => {
                m.unmatch_logged(w, z, log);
                m.match_logged(x, w, log);
                budget = budget.saturating_sub(1);
                x = z;
            }
        }
    }
    if !settling {
        m.rollback_to(log, mark);
        return WalkEnd::Stuck(start);
    }
    WalkEnd::Stuck(x)
}

#[derive(Debug, Clone)]
pub struct RandomWalkMatcher {
    graph: DynamicGraph,
    matching: Matching,
    cfg: WalkConfig,
    rng: ChaCha8Rng,
    log: UndoLog,
    walks: u64,
    successes: u64,
}

impl RandomWalkMatcher {
    pub fn new(n: usize, cfg: WalkConfig, seed: u64) -> Self {
        Self {
            graph: DynamicGraph::new(n),
            matching: Matching::new(n),
            cfg,
            rng: ChaCha8Rng::seed_from_u64(seed),
            log: UndoLog::new(),
            walks: 0,
            successes: 0,
        }
    }

    pub fn config(&self) -> &WalkConfig {
        &self.cfg
    }

    /// `(walks started, walks that augmented)`.
    pub fn walk_counts(&self) -> (u64, u64) {
        (self.walks, self.successes)
    }

    // Runs up to the configured number of walks from `start`.
    fn walk_from(&mut self, mut start: VertexId) -> bool {
        let reps = match self.cfg.repetitions {
            Repetitions::Fixed(k) => u64::from(k),
            Repetitions::DegreeSchedule => self
                .cfg
                .repetition_count(self.graph.max_degree(), self.graph.n()),
        };
        for _ in 0..reps {
            self.walks += 1;
            let end = random_augmenting_walk(
                &self.graph,
                &mut self.matching,
                start,
                self.cfg.max_steps(),
                self.cfg.settling,
                &mut self.rng,
                &mut self.log,
            );
            match end {
                WalkEnd::Augmented => {
                    self.successes += 1;
                    return true;
                }
                WalkEnd::Stuck(free) => start = free,
            }
        }
        false
    }

    fn handle_insert(&mut self, u: VertexId, v: VertexId) {
        let m = &mut self.matching;
        let (matched, free) = match (m.mate(u), m.mate(v)) {
            (None, None) => {
                m.match_edge(u, v);
                return;
            }
            (Some(_), Some(_)) => return,
            (Some(_), None) => (u, v),
            (None, Some(_)) => (v, u),
        };
        let old = m.mate(matched).unwrap();
        self.log.clear();
        m.unmatch_logged(matched, old, &mut self.log);
        m.match_logged(matched, free, &mut self.log);
        if !self.walk_from(old) && !self.cfg.settling {
            self.matching.rollback_to(&mut self.log, 0);
        }
        self.log.clear();
    }

    fn handle_delete(&mut self, u: VertexId, v: VertexId) {
        if !self.matching.is_matched_edge(u, v) {
            return;
        }
        self.matching.unmatch_edge(u, v);
        for x in [u, v] {
            if let Some(w) = free_neighbor(&self.graph, &self.matching, x) {
                self.matching.match_edge(x, w);
            }
        }
        for x in [u, v] {
            if self.matching.is_free(x) {
                self.log.clear();
                self.walk_from(x);
            }
        }
        self.log.clear();
    }
}

impl DynamicMatcher for RandomWalkMatcher {
    fn name(&self) -> String {
        format!(
            "random-walk{}(eps={})",
            if self.cfg.settling { "-settle" } else { "" },
            self.cfg.epsilon
        )
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
}
