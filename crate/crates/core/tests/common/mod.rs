#![allow(dead_code)]

use dynmatch_core::graph::DynamicGraph;
use dynmatch_core::workload::{StaticGraph, UpdateOp, UpdateSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

const P: u64 = 1_000_000_007;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Maximum matching size as half the rank of a Tutte matrix with random
/// entries modulo a prime. Independent of the search-based solvers; wrong
/// with probability at most n / P per call.
pub fn tutte_matching_size(g: &DynamicGraph, rng: &mut ChaCha8Rng) -> usize {
    let n = g.n();
    let mut a = vec![vec![0u64; n]; n];
    for (u, v) in g.edges() {
        let x = rng.gen_range(1..P);
        a[u][v] = x;
        a[v][u] = P - x;
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][col], P - 2);
        for r in rank + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let f = a[r][col] * inv % P;
            let (top, bottom) = a.split_at_mut(r);
            for (x, &p) in bottom[0][col..].iter_mut().zip(&top[rank][col..]) {
                *x = (*x + P - f * p % P) % P;
            }
        }
        rank += 1;
    }
    rank / 2
}

/// Random fully dynamic sequence: with probability `p_insert` a uniformly
/// random absent pair is inserted, otherwise a uniformly random present edge
/// is deleted.
pub fn random_dynamic_sequence(n: usize, ops: usize, p_insert: f64, seed: u64) -> UpdateSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = n * (n - 1) / 2;
    let mut present: Vec<(usize, usize)> = Vec::new();
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    let mut seq = UpdateSequence::new(n, Vec::with_capacity(ops));
    while seq.ops.len() < ops {
        let insert = present.is_empty() || (present.len() < full && rng.gen_bool(p_insert));
        if insert {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            let key = (u.min(v), u.max(v));
            if pos.contains_key(&key) {
                continue;
            }
            pos.insert(key, present.len());
            present.push(key);
            seq.ops.push(UpdateOp::insert(u, v));
        } else {
            let i = rng.gen_range(0..present.len());
            let key = present.swap_remove(i);
            pos.remove(&key);
            if i < present.len() {
                pos.insert(present[i], i);
            }
            seq.ops.push(UpdateOp::delete(key.0, key.1));
        }
    }
    seq
}

/// Erdős-Rényi graph with exactly `m` distinct edges.
pub fn er_graph(n: usize, m: usize, seed: u64) -> StaticGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    StaticGraph { n, edges }
}

/// `rows × cols` grid.
pub fn grid_graph(rows: usize, cols: usize) -> StaticGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    StaticGraph {
        n: rows * cols,
        edges,
    }
}
