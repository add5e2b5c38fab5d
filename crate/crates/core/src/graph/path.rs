//! Longest simple path search.
//!
//! Exhaustive depth-first branch and bound, pruned with the size of the
//! component still reachable from the path's tail. When the expansion budget
//! runs out, seeded greedy walks with rotation-extension moves take over and
//! the result is reported as inexact.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ConnectivityGraph;
use crate::error::{Error, Result};

/// Graphs up to this size are always searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Tuning knobs for [`longest_simple_path`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSearch {
    /// Returned vertex count is truncated to a multiple of this (1 or 3).
    pub length_multiple: usize,
    /// Node-expansion limit for the exhaustive phase (ignored for small graphs).
    pub budget: u64,
    /// Number of randomized restarts once the budget is exhausted.
    pub restarts: usize,
    /// Rotation moves without improvement before a restart gives up.
    pub patience: usize,
    pub seed: u64,
}

impl Default for PathSearch {
    fn default() -> Self {
        Self {
            length_multiple: 1,
            budget: 200_000,
            restarts: 64,
            patience: 4_000,
            seed: 0x5eed_0fa7,
        }
    }
}

impl PathSearch {
    pub fn multiple(length_multiple: usize) -> Self {
        Self {
            length_multiple,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongestPath {
    /// Simple path, truncated to the requested multiple.
    pub path: Vec<usize>,
    /// Vertex count of the longest path found before truncation.
    pub longest_found: usize,
    /// True iff no longer simple path exists.
    pub exact: bool,
}

/// Finds a longest simple path in `g` (see the module docs for the strategy).
pub fn longest_simple_path(g: &ConnectivityGraph, opts: &PathSearch) -> Result<LongestPath> {
    if opts.length_multiple != 1 && opts.length_multiple != 3 {
        return Err(Error::InvalidArgument(format!(
            "length multiple must be 1 or 3, got {}",
            opts.length_multiple
        )));
    }
    let n = g.n_vertices();
    if n == 0 {
        return Ok(LongestPath {
            path: Vec::new(),
            longest_found: 0,
            exact: true,
        });
    }
    let budget = if n <= EXHAUSTIVE_LIMIT {
        u64::MAX
    } else {
        opts.budget
    };
    let mut search = Dfs::new(g, budget);
    search.run();
    let mut best = search.best;
    let exact = !search.exhausted;
    if !exact {
        let from_restarts = (0..opts.restarts)
            .into_par_iter()
            .map(|r| rotation_search(g, opts.seed.wrapping_add(r as u64), opts.patience))
            .map(normalize)
            .reduce(Vec::new, better);
        best = better(normalize(best), from_restarts);
    }
    let mut path = normalize(best);
    let longest_found = path.len();
    path.truncate(longest_found - longest_found % opts.length_multiple);
    Ok(LongestPath {
        path,
        longest_found,
        exact,
    })
}

/// Orientation with the smaller first vertex (lexicographic on ties).
fn normalize(mut p: Vec<usize>) -> Vec<usize> {
    let rev: Vec<usize> = p.iter().rev().copied().collect();
    if rev < p {
        p = rev;
    }
    p
}

/// Longer wins, then lexicographically smaller.
fn better(a: Vec<usize>, b: Vec<usize>) -> Vec<usize> {
    match a.len().cmp(&b.len()) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => a.min(b),
    }
}

struct Dfs<'g> {
    g: &'g ConnectivityGraph,
    upper: usize,
    budget: u64,
    expansions: u64,
    exhausted: bool,
    visited: Vec<bool>,
    path: Vec<usize>,
    best: Vec<usize>,
    // scratch for reachability counts
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<usize>,
}

impl<'g> Dfs<'g> {
    fn new(g: &'g ConnectivityGraph, budget: u64) -> Self {
        let n = g.n_vertices();
        let upper = largest_component(g);
        Self {
            g,
            upper,
            budget,
            expansions: 0,
            exhausted: false,
            visited: vec![false; n],
            path: Vec::with_capacity(n),
            best: Vec::new(),
            mark: vec![0; n],
            stamp: 0,
            stack: Vec::with_capacity(n),
        }
    }

    fn run(&mut self) {
        let g = self.g;
        let mut starts: Vec<usize> = (0..g.n_vertices()).collect();
        starts.sort_by_key(|&v| (g.degree(v), v));
        for s in starts {
            if self.done() {
                break;
            }
            self.visited[s] = true;
            self.path.push(s);
            self.extend();
            self.path.pop();
            self.visited[s] = false;
        }
    }

    fn done(&self) -> bool {
        self.exhausted || self.best.len() >= self.upper
    }

    /// Unvisited vertices reachable from `v` without crossing the path.
    fn reachable_from(&mut self, v: usize) -> usize {
        self.stamp += 1;
        let stamp = self.stamp;
        self.stack.clear();
        self.stack.push(v);
        self.mark[v] = stamp;
        let mut count = 0;
        while let Some(u) = self.stack.pop() {
            for w in self.g.neighbors(u) {
                if !self.visited[w] && self.mark[w] != stamp {
                    self.mark[w] = stamp;
                    count += 1;
                    self.stack.push(w);
                }
            }
        }
        count
    }

    fn extend(&mut self) {
        if self.path.len() > self.best.len() {
            self.best.clone_from(&self.path);
        }
        if self.done() {
            return;
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            self.exhausted = true;
            return;
        }
        let tail = *self.path.last().expect("nonempty path");
        if self.path.len() + self.reachable_from(tail) <= self.best.len() {
            return;
        }
        let g = self.g;
        let mut next: Vec<(usize, usize)> = g
            .neighbors(tail)
            .filter(|&w| !self.visited[w])
            .map(|w| (g.neighbors(w).filter(|&x| !self.visited[x]).count(), w))
            .collect();
        next.sort_unstable();
        for (_, w) in next {
            self.visited[w] = true;
            self.path.push(w);
            self.extend();
            self.path.pop();
            self.visited[w] = false;
            if self.done() {
                return;
            }
        }
    }
}

fn largest_component(g: &ConnectivityGraph) -> usize {
    let n = g.n_vertices();
    let mut seen = vec![false; n];
    let mut best = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// One randomized restart: greedy extension at both ends, then rotations
/// (re-route the tail through one of its path neighbors) to free a new
/// endpoint that can be extended again.
fn rotation_search(g: &ConnectivityGraph, seed: u64, patience: usize) -> Vec<usize> {
    let n = g.n_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut on_path = vec![false; n];
    let start = rng.random_range(0..n);
    let mut path = vec![start];
    on_path[start] = true;
    let mut best = path.clone();
    let mut stale = 0;

    let free_degree = |on_path: &[bool], v: usize| g.neighbors(v).filter(|&w| !on_path[w]).count();

    while stale < patience {
        let mut grew = false;
        for _ in 0..2 {
            loop {
                let tail = *path.last().unwrap();
                let cands: Vec<usize> = g.neighbors(tail).filter(|&w| !on_path[w]).collect();
                if cands.is_empty() {
                    break;
                }
                let min = cands
                    .iter()
                    .map(|&w| free_degree(&on_path, w))
                    .min()
                    .unwrap();
                let ties: Vec<usize> = cands
                    .into_iter()
                    .filter(|&w| free_degree(&on_path, w) == min)
                    .collect();
                let w = *ties.choose(&mut rng).unwrap();
                on_path[w] = true;
                path.push(w);
                grew = true;
            }
            path.reverse();
        }
        if path.len() > best.len() {
            best.clone_from(&path);
            stale = 0;
        } else {
            stale += 1;
        }
        if path.len() >= n {
            break;
        }
        if !grew || path.len() <= best.len() {
            // Rotate at a random end.
            if rng.random_bool(0.5) {
                path.reverse();
            }
            let tail = *path.last().unwrap();
            let last = path.len() - 1;
            let pivots: Vec<usize> = g
                .neighbors(tail)
                .filter(|&w| on_path[w])
                .filter_map(|w| path.iter().position(|&p| p == w))
                .filter(|&i| i + 1 < last)
                .collect();
            let extendable: Vec<usize> = pivots
                .iter()
                .copied()
                .filter(|&i| free_degree(&on_path, path[i + 1]) > 0)
                .collect();
            let pick = if !extendable.is_empty() {
                extendable.choose(&mut rng).copied()
            } else {
                pivots.choose(&mut rng).copied()
            };
            match pick {
                Some(i) => path[i + 1..].reverse(),
                None => {
                    if path.len() > 1 && rng.random_bool(0.3) {
                        // Dead end on both sides: drop a few vertices and retry.
                        let drop = rng.random_range(1..=path.len().min(4));
                        for v in path.drain(path.len() - drop..) {
                            on_path[v] = false;
                        }
                    }
                }
            }
        }
    }
    best
}
