//! Update sequences: parsing of static graphs and temporal edge streams,
//! random insertion orders, undo suffixes, validation and the native text
//! format.

use crate::graph::{DynamicGraph, VertexId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Insert,
    Delete,
}

impl OpKind {
    pub fn inverse(self) -> Self {
        match self {
            OpKind::Insert => OpKind::Delete,
            OpKind::Delete => OpKind::Insert,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpdateOp {
    pub kind: OpKind,
    pub u: VertexId,
    pub v: VertexId,
}

impl UpdateOp {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        Self { kind: OpKind::Insert, u, v }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        Self { kind: OpKind::Delete, u, v }
    }

    fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateSequence {
    pub n: usize,
    pub ops: Vec<UpdateOp>,
}

impl UpdateSequence {
    pub fn new(n: usize, ops: Vec<UpdateOp>) -> Self {
        Self { n, ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn insert_count(&self) -> usize {
        self.ops.iter().filter(|o| o.kind == OpKind::Insert).count()
    }

    /// Graph after replaying the whole sequence.
    ///
    /// # Panics
    /// If the sequence is not replay-valid.
    pub fn final_graph(&self) -> DynamicGraph {
        let mut g = DynamicGraph::new(self.n);
        for (i, op) in self.ops.iter().enumerate() {
            let changed = match op.kind {
                OpKind::Insert => g.insert_edge(op.u, op.v),
                OpKind::Delete => g.delete_edge(op.u, op.v),
            };
            assert!(
                changed.unwrap_or(false),
                "operation {i} is not valid on replay"
            );
        }
        g
    }

    /// Native text form: `n <n> ops <k>` followed by one `I u v` or
    /// `D u v` line per operation.
    pub fn to_native(&self) -> String {
        let mut out = String::with_capacity(16 + self.ops.len() * 12);
        writeln!(out, "n {} ops {}", self.n, self.ops.len()).unwrap();
        for op in &self.ops {
            let tag = match op.kind {
                OpKind::Insert => 'I',
                OpKind::Delete => 'D',
            };
            writeln!(out, "{tag} {} {}", op.u, op.v).unwrap();
        }
        out
    }
}

/// Static graph as read from a file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticGraph {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl StaticGraph {
    pub fn to_dynamic(&self) -> DynamicGraph {
        DynamicGraph::from_edges(self.n, &self.edges).expect("static graph edges are in range")
    }
}

impl From<&DynamicGraph> for StaticGraph {
    fn from(g: &DynamicGraph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().collect(),
        }
    }
}

/// Entries removed while reading or cleaning input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropCounts {
    pub self_loops: usize,
    pub parallel_edges: usize,
    pub duplicate_inserts: usize,
    pub phantom_deletes: usize,
}

impl DropCounts {
    pub fn total(&self) -> usize {
        self.self_loops + self.parallel_edges + self.duplicate_inserts + self.phantom_deletes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("adjacency is not symmetric: {u} lists {v} but {v} does not list {u}")]
    Asymmetric { u: usize, v: usize },
    #[error("expected {expected} vertex lines, found {found}")]
    MissingLines { expected: usize, found: usize },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a number, found {tok:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetisGraph {
    pub graph: StaticGraph,
    /// Edge count stated in the header.
    pub declared_edges: usize,
    pub dropped: DropCounts,
}

/// Reads a graph in METIS format. Lines starting with `%` are comments.
/// Vertex sizes, vertex weights and edge weights announced by the `fmt`
/// field are skipped.
pub fn parse_metis(text: &str) -> Result<MetisGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| syntax(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 4 {
        return Err(syntax(hline, "header must be `n m [fmt [ncon]]`"));
    }
    let n: usize = number(head[0], hline)?;
    let declared_edges: usize = number(head[1], hline)?;
    let fmt = head.get(2).copied().unwrap_or("0");
    if fmt.len() > 3 || !fmt.chars().all(|c| c == '0' || c == '1') {
        return Err(syntax(hline, format!("unsupported fmt {fmt:?}")));
    }
    let flag = |pos: usize| fmt.len() > pos && fmt.as_bytes()[fmt.len() - 1 - pos] == b'1';
    let (edge_weights, vertex_weights, vertex_sizes) = (flag(0), flag(1), flag(2));
    let ncon: usize = match head.get(3) {
        Some(t) => number(t, hline)?,
        None => usize::from(vertex_weights),
    };
    let skip_front = usize::from(vertex_sizes) + if vertex_weights { ncon } else { 0 };
    let stride = if edge_weights { 2 } else { 1 };

    let mut dropped = DropCounts::default();
    let mut arcs: FxHashSet<(usize, usize)> = FxHashSet::default();
    let mut found = 0;
    for (lno, line) in lines {
        if found == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(syntax(lno, "more vertex lines than the header declares"));
        }
        let u = found;
        found += 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < skip_front || !(toks.len() - skip_front).is_multiple_of(stride) {
            return Err(syntax(lno, "wrong number of fields"));
        }
        for t in &toks[..skip_front] {
            number::<i64>(t, lno)?;
        }
        for pair in toks[skip_front..].chunks(stride) {
            let w: usize = number(pair[0], lno)?;
            if w == 0 || w > n {
                return Err(syntax(lno, format!("neighbor {w} outside 1..={n}")));
            }
            if stride == 2 {
                number::<f64>(pair[1], lno)?;
            }
            let w = w - 1;
            if w == u {
                dropped.self_loops += 1;
            } else if !arcs.insert((u, w)) {
                dropped.parallel_edges += 1;
            }
        }
    }
    if found < n {
        return Err(ParseError::MissingLines { expected: n, found });
    }
    let mut edges = Vec::with_capacity(arcs.len() / 2);
    for &(u, w) in &arcs {
        if !arcs.contains(&(w, u)) {
            return Err(ParseError::Asymmetric { u: u + 1, v: w + 1 });
        }
        if u < w {
            edges.push((u, w));
        }
    }
    edges.sort_unstable();
    // Each undirected self-loop or parallel edge appears in two lines.
    dropped.self_loops = dropped.self_loops.div_ceil(2);
    dropped.parallel_edges = dropped.parallel_edges.div_ceil(2);
    Ok(MetisGraph {
        graph: StaticGraph { n, edges },
        declared_edges,
        dropped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStream {
    pub sequence: UpdateSequence,
    /// Original ID of each dense vertex.
    pub original_ids: Vec<u64>,
    pub dropped: DropCounts,
}

/// Reads a temporal edge stream: lines `u v [sign] [timestamp]`, with `%`
/// or `#` comments. A negative sign means deletion. When every line carries
/// a timestamp the events are stably sorted by it. IDs are remapped to
/// `0..n` in order of first appearance.
pub fn parse_edge_stream(text: &str) -> Result<EdgeStream, ParseError> {
    let mut raw: Vec<(u64, u64, OpKind, Option<f64>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 4 {
            return Err(syntax(lno, "expected `u v [sign] [timestamp]`"));
        }
        let u: u64 = number(toks[0], lno)?;
        let v: u64 = number(toks[1], lno)?;
        let kind = match toks.get(2) {
            None => OpKind::Insert,
            Some(t) => {
                let s: f64 = number(t, lno)?;
                if s < 0.0 {
                    OpKind::Delete
                } else {
                    OpKind::Insert
                }
            }
        };
        let ts = toks.get(3).map(|t| number::<f64>(t, lno)).transpose()?;
        raw.push((u, v, kind, ts));
    }
    if raw.iter().all(|r| r.3.is_some()) {
        raw.sort_by(|a, b| a.3.unwrap().total_cmp(&b.3.unwrap()));
    }

    let mut ids: FxHashMap<u64, usize> = FxHashMap::default();
    let mut original_ids = Vec::new();
    let mut dense = |x: u64| {
        *ids.entry(x).or_insert_with(|| {
            original_ids.push(x);
            original_ids.len() - 1
        })
    };
    let mut dropped = DropCounts::default();
    let mut ops = Vec::with_capacity(raw.len());
    for (u, v, kind, _) in raw {
        let (u, v) = (dense(u), dense(v));
        if u == v {
            dropped.self_loops += 1;
            continue;
        }
        ops.push(UpdateOp { kind, u, v });
    }
    let (sequence, clean_drops) = clean_sequence(&UpdateSequence::new(original_ids.len(), ops));
    dropped.duplicate_inserts = clean_drops.duplicate_inserts;
    dropped.phantom_deletes = clean_drops.phantom_deletes;
    Ok(EdgeStream {
        sequence,
        original_ids,
        dropped,
    })
}

/// Reads the native sequence format written by [`UpdateSequence::to_native`].
pub fn parse_native(text: &str) -> Result<UpdateSequence, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let head: Vec<&str> = header.split(' ').collect();
    if head.len() != 4 || head[0] != "n" || head[2] != "ops" {
        return Err(syntax(1, "header must be `n <n> ops <k>`"));
    }
    let n: usize = number(head[1], 1)?;
    let k: usize = number(head[3], 1)?;
    let mut ops = Vec::with_capacity(k);
    for (lno, line) in lines {
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.len() != 3 {
            return Err(syntax(lno, "expected `I u v` or `D u v`"));
        }
        let kind = match toks[0] {
            "I" => OpKind::Insert,
            "D" => OpKind::Delete,
            t => return Err(syntax(lno, format!("unknown operation {t:?}"))),
        };
        let u: usize = number(toks[1], lno)?;
        let v: usize = number(toks[2], lno)?;
        if u >= n || v >= n {
            return Err(syntax(lno, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(syntax(lno, "self-loop"));
        }
        ops.push(UpdateOp { kind, u, v });
    }
    if ops.len() != k {
        return Err(syntax(1, format!("header announces {k} ops, found {}", ops.len())));
    }
    Ok(UpdateSequence { n, ops })
}

/// Insertion of every edge exactly once, in a seeded uniformly random order.
pub fn random_insertion_sequence(g: &StaticGraph, seed: u64) -> UpdateSequence {
    let mut ops: Vec<UpdateOp> = g.edges.iter().map(|&(u, v)| UpdateOp::insert(u, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ops.shuffle(&mut rng);
    UpdateSequence { n: g.n, ops }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("undo percentage must lie in [0, 100], got {0}")]
pub struct UndoPercentError(pub f64);

/// Appends the last `floor(x% · len)` operations in reverse order with
/// their kinds inverted.
pub fn undo_suffix(seq: &UpdateSequence, percent: f64) -> Result<UpdateSequence, UndoPercentError> {
    if !(0.0..=100.0).contains(&percent) {
        return Err(UndoPercentError(percent));
    }
    let len = seq.ops.len();
    let k = ((percent * len as f64 / 100.0).floor() as usize).min(len);
    let mut ops = seq.ops.clone();
    ops.extend(seq.ops[len - k..].iter().rev().map(|op| UpdateOp {
        kind: op.kind.inverse(),
        ..*op
    }));
    Ok(UpdateSequence { n: seq.n, ops })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ops: usize,
    pub duplicate_inserts: usize,
    pub phantom_deletes: usize,
    pub out_of_range: usize,
    pub self_loops: usize,
    /// Index of the first offending operation.
    pub first_violation: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.first_violation.is_none()
    }
}

enum Verdict {
    Ok,
    OutOfRange,
    SelfLoop,
    Duplicate,
    Phantom,
}

fn replay(seq: &UpdateSequence, mut visit: impl FnMut(usize, Verdict)) {
    let mut present: FxHashSet<(usize, usize)> = FxHashSet::default();
    for (i, op) in seq.ops.iter().enumerate() {
        let verdict = if op.u >= seq.n || op.v >= seq.n {
            Verdict::OutOfRange
        } else if op.u == op.v {
            Verdict::SelfLoop
        } else {
            match op.kind {
                OpKind::Insert if !present.insert(op.key()) => Verdict::Duplicate,
                OpKind::Delete if !present.remove(&op.key()) => Verdict::Phantom,
                _ => Verdict::Ok,
            }
        };
        visit(i, verdict);
    }
}

/// Checks that the sequence replays without duplicate inserts, phantom
/// deletes, self-loops or out-of-range vertices. Offending operations are
/// counted and skipped.
pub fn validate_sequence(seq: &UpdateSequence) -> ValidationReport {
    let mut r = ValidationReport {
        ops: seq.ops.len(),
        ..Default::default()
    };
    replay(seq, |i, verdict| {
        let slot = match verdict {
            Verdict::Ok => return,
            Verdict::OutOfRange => &mut r.out_of_range,
            Verdict::SelfLoop => &mut r.self_loops,
            Verdict::Duplicate => &mut r.duplicate_inserts,
            Verdict::Phantom => &mut r.phantom_deletes,
        };
        *slot += 1;
        r.first_violation.get_or_insert(i);
    });
    r
}

/// Drops duplicate inserts and phantom deletes. Self-loops and out-of-range
/// operations are dropped as well and counted as self-loops and phantom
/// deletes respectively.
pub fn clean_sequence(seq: &UpdateSequence) -> (UpdateSequence, DropCounts) {
    let mut dropped = DropCounts::default();
    let mut ops = Vec::with_capacity(seq.ops.len());
    replay(seq, |i, verdict| match verdict {
        Verdict::Ok => ops.push(seq.ops[i]),
        Verdict::SelfLoop => dropped.self_loops += 1,
        Verdict::Duplicate => dropped.duplicate_inserts += 1,
        Verdict::Phantom | Verdict::OutOfRange => dropped.phantom_deletes += 1,
    });
    (UpdateSequence { n: seq.n, ops }, dropped)
}
