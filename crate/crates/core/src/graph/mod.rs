//! Undirected simple graphs: device connectivity and graph-state graphs.

mod path;

pub use path::{longest_simple_path, LongestPath, PathSearch};

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Adjacency is kept as sorted neighbor sets so that every traversal visits
/// vertices lowest-index first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct ConnectivityGraph {
    adj: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n_vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for ConnectivityGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        ConnectivityGraph::from_edges(r.n_vertices, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<ConnectivityGraph> for GraphRepr {
    fn from(g: ConnectivityGraph) -> Self {
        GraphRepr {
            n_vertices: g.n_vertices(),
            edges: g.edges().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl ConnectivityGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![BTreeSet::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Path visiting `order` in sequence, on `n` vertices.
    pub fn path_through(n: usize, order: &[usize]) -> Result<Self> {
        Self::from_edges(n, order.windows(2).map(|w| (w[0], w[1])))
    }

    /// Star with the given center joined to every other vertex.
    pub fn star(n: usize, center: usize) -> Result<Self> {
        if center >= n {
            return Err(Error::InvalidVertex { vertex: center, n });
        }
        Self::from_edges(n, (0..n).filter(|&v| v != center).map(|v| (center, v)))
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
            .expect("valid complete graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.adj.len(),
            })
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        self.adj[a].remove(&b);
        self.adj[b].remove(&a);
        Ok(())
    }

    /// Adds the edge if absent, removes it otherwise. This is the graph
    /// action of a CZ gate on a graph state.
    pub fn toggle_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if self.has_edge(a, b) {
            self.remove_edge(a, b)
        } else {
            self.add_edge(a, b)
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].contains(&b)
    }

    /// Neighborhood N(v), ascending.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, nb)| nb.range(a + 1..).map(move |&b| (a, b)))
    }

    /// Vertex of maximum degree, lowest index on ties.
    pub fn max_degree_vertex(&self) -> Option<usize> {
        (0..self.n_vertices()).max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v)))
    }

    /// Breadth-first order from `root`, lowest-index neighbors first.
    pub fn bfs_order(&self, root: usize) -> Result<Vec<usize>> {
        self.check(root)?;
        let mut seen = vec![false; self.n_vertices()];
        let mut order = Vec::with_capacity(self.n_vertices());
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(order)
    }

    pub fn is_connected(&self) -> bool {
        match self.n_vertices() {
            0 => true,
            n => self.bfs_order(0).map(|o| o.len() == n).unwrap_or(false),
        }
    }

    /// Subgraph induced by `vertices`, relabelled so that `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self> {
        let mut local = vec![usize::MAX; self.n_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check(v)?;
            local[v] = i;
        }
        let mut g = Self::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.neighbors(v) {
                if local[w] != usize::MAX {
                    g.add_edge(i, local[w])?;
                }
            }
        }
        Ok(g)
    }

    /// Local complementation at `v`: complements the edge set inside N(v).
    pub fn local_complement(&self, v: usize) -> Result<Self> {
        self.check(v)?;
        let mut out = self.clone();
        let nb: Vec<usize> = self.neighbors(v).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                out.toggle_edge(a, b)?;
            }
        }
        Ok(out)
    }

    /// Breadth-first spanning tree rooted at vertex 0.
    pub fn spanning_tree(&self) -> Result<Self> {
        let n = self.n_vertices();
        let mut tree = Self::empty(n);
        if n == 0 {
            return Ok(tree);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    tree.add_edge(v, w)?;
                    queue.push_back(w);
                }
            }
        }
        if reached != n {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }

    pub fn is_tree(&self) -> bool {
        self.n_vertices() > 0 && self.n_edges() + 1 == self.n_vertices() && self.is_connected()
    }

    /// If the graph is a simple path on all its vertices, returns the vertex
    /// sequence starting from the lower-index endpoint.
    pub fn as_path(&self) -> Option<Vec<usize>> {
        let n = self.n_vertices();
        if n == 0 || self.n_edges() + 1 != n {
            return None;
        }
        if n == 1 {
            return Some(vec![0]);
        }
        let start = (0..n).find(|&v| self.degree(v) == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(next) = self.neighbors(cur).find(|&w| w != prev) {
            if order.len() > n || self.degree(next) > 2 {
                return None;
            }
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == n).then_some(order)
    }

    /// If the graph is a star on all its vertices, returns its center.
    /// For two vertices the lower index is reported.
    pub fn star_center(&self) -> Option<usize> {
        let n = self.n_vertices();
        if n < 2 || self.n_edges() != n - 1 {
            return None;
        }
        (0..n).find(|&v| self.degree(v) == n - 1)
    }

    /// Every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n_vertices() == other.n_vertices() && self.edges().all(|(a, b)| other.has_edge(a, b))
    }
}
