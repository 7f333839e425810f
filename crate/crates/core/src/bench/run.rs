use super::config::{ConfigError, MatcherConfig};
use crate::blossom::static_max_matching;
use crate::graph::GraphError;
use crate::matcher::{check_guarantee, AuditError};
use crate::workload::{OpKind, UpdateSequence};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub op_index: usize,
    pub kind: OpKind,
    pub elapsed_ns: u64,
    pub size: usize,
}

/// Matching size against the optimum at a verification point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub op_index: usize,
    pub size: usize,
    pub opt: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Configuration label.
    pub algorithm: String,
    pub repetition: u32,
    pub n: usize,
    pub ops: usize,
    pub total_ns: u64,
    pub final_size: usize,
    /// Maximum matching size of the final graph.
    pub opt: Option<usize>,
    pub quality: Option<f64>,
    /// Number of audits run.
    pub audits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub summary: Summary,
    pub records: Vec<BenchRecord>,
    pub checkpoints: Vec<Checkpoint>,
}

impl ExperimentResult {
    /// Mean of size / opt over the checkpoints with a non-empty optimum.
    pub fn mean_checkpoint_quality(&self) -> Option<f64> {
        let q: Vec<f64> = self
            .checkpoints
            .iter()
            .filter(|c| c.opt > 0)
            .map(|c| c.size as f64 / c.opt as f64)
            .collect();
        (!q.is_empty()).then(|| q.iter().sum::<f64>() / q.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Audit every k operations (and after the last one).
    pub verify_every: Option<usize>,
    /// Largest n for which audits also compare against the exact optimum.
    pub oracle_max_n: usize,
    /// Compute the optimum of the final graph.
    pub final_oracle: bool,
    /// Keep per-operation records.
    pub keep_records: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            verify_every: None,
            oracle_max_n: 200,
            final_oracle: true,
            keep_records: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("operation {op_index}: {source}")]
    Graph {
        op_index: usize,
        source: GraphError,
    },
    #[error("operation {op_index} is a duplicate insert or a delete of a missing edge")]
    InvalidOp { op_index: usize },
    #[error("audit failed after operation {op_index}: {source}")]
    Audit {
        op_index: usize,
        source: AuditError,
    },
}

/// Replays `seq` through a fresh matcher for repetition `rep`, timing each
/// update call, which includes the graph mutation.
pub fn run_experiment(
    seq: &UpdateSequence,
    cfg: &MatcherConfig,
    rep: u32,
    opts: &RunOptions,
) -> Result<ExperimentResult, RunError> {
    let mut matcher = cfg.build(seq.n, rep)?;
    let oracle = seq.n <= opts.oracle_max_n;
    let mut records = Vec::with_capacity(if opts.keep_records { seq.ops.len() } else { 0 });
    let mut checkpoints = Vec::new();
    let mut total_ns = 0u64;
    let mut audits = 0;
    let last = seq.ops.len().saturating_sub(1);
    for (i, op) in seq.ops.iter().enumerate() {
        let start = Instant::now();
        let applied = matcher.apply(op);
        let elapsed_ns = start.elapsed().as_nanos() as u64;
        match applied {
            Ok(true) => {}
            Ok(false) => return Err(RunError::InvalidOp { op_index: i }),
            Err(source) => return Err(RunError::Graph { op_index: i, source }),
        }
        total_ns += elapsed_ns;
        if opts.keep_records {
            records.push(BenchRecord {
                op_index: i,
                kind: op.kind,
                elapsed_ns,
                size: matcher.size(),
            });
        }
        if let Some(k) = opts.verify_every.filter(|&k| k > 0) {
            if (i + 1) % k == 0 || i == last {
                audits += 1;
                let fail = |source| RunError::Audit { op_index: i, source };
                matcher.audit().map_err(fail)?;
                if oracle {
                    let opt = check_guarantee(matcher.as_ref()).map_err(fail)?;
                    checkpoints.push(Checkpoint {
                        op_index: i,
                        size: matcher.size(),
                        opt,
                    });
                }
            }
        }
    }
    let final_size = matcher.size();
    let opt = opts
        .final_oracle
        .then(|| static_max_matching(matcher.graph()).size());
    let quality = opt.map(|o| if o == 0 { 1.0 } else { final_size as f64 / o as f64 });
    Ok(ExperimentResult {
        summary: Summary {
            algorithm: cfg.label(),
            repetition: rep,
            n: seq.n,
            ops: seq.ops.len(),
            total_ns,
            final_size,
            opt,
            quality,
            audits,
        },
        records,
        checkpoints,
    })
}

/// All configured repetitions, in order.
pub fn run_repetitions(
    seq: &UpdateSequence,
    cfg: &MatcherConfig,
    opts: &RunOptions,
) -> Result<Vec<ExperimentResult>, RunError> {
    cfg.validate()?;
    (0..cfg.repetitions)
        .map(|rep| run_experiment(seq, cfg, rep, opts))
        .collect()
}
