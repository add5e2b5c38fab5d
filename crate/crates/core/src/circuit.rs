//! Layered preparation circuits for GHZ and linear-cluster graph states.
//!
//! Circuits are built in program order and scheduled as soon as possible.
//! CZ gates commute with each other, so a CZ may slide past earlier CZs on
//! its qubits but never past a single-qubit gate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bell::{BellOperator, Family};
use crate::error::{Error, Result};
use crate::graph::ConnectivityGraph;
use crate::tableau::{Clifford, StabilizerTableau};

/// Local complementation at `vertex` with its current neighborhood.
/// Realized as `√X†` on the vertex and `S` on each neighbor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalComplementation {
    pub vertex: usize,
    pub neighbors: Vec<usize>,
}

impl LocalComplementation {
    pub fn on(state: &ConnectivityGraph, vertex: usize) -> Self {
        Self {
            vertex,
            neighbors: state.neighbors(vertex).collect(),
        }
    }

    pub fn cliffords(&self) -> impl Iterator<Item = Clifford> + '_ {
        std::iter::once(Clifford::SqrtXdg(self.vertex))
            .chain(self.neighbors.iter().map(|&w| Clifford::S(w)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    CZ(usize, usize),
    /// One fused layer of single-qubit Cliffords made of consecutive local
    /// complementations. Each touched qubit counts as one single-qubit gate.
    Lc(Vec<LocalComplementation>),
}

impl Gate {
    /// Touched qubits, ascending.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::H(q) => vec![*q],
            Gate::CZ(a, b) => vec![(*a).min(*b), (*a).max(*b)],
            Gate::Lc(steps) => steps
                .iter()
                .flat_map(|s| std::iter::once(s.vertex).chain(s.neighbors.iter().copied()))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::CZ(..))
    }

    pub fn cliffords(&self) -> Vec<Clifford> {
        match self {
            Gate::H(q) => vec![Clifford::H(*q)],
            Gate::CZ(a, b) => vec![Clifford::CZ(*a, *b)],
            Gate::Lc(steps) => steps.iter().flat_map(|s| s.cliffords()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    gate: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    steps: Vec<LocalComplementation>,
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (gate, qubits, steps) = match self {
            Gate::H(q) => ("H", vec![*q], Vec::new()),
            Gate::CZ(a, b) => ("CZ", vec![*a, *b], Vec::new()),
            Gate::Lc(steps) => ("LC", self.support(), steps.clone()),
        };
        GateRepr {
            gate: gate.into(),
            qubits,
            steps,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = GateRepr::deserialize(d)?;
        match (r.gate.as_str(), r.qubits.as_slice()) {
            ("H", &[q]) => Ok(Gate::H(q)),
            ("CZ", &[a, b]) => Ok(Gate::CZ(a, b)),
            ("LC", _) if !r.steps.is_empty() => {
                let g = Gate::Lc(r.steps);
                if g.support() != r.qubits {
                    return Err(D::Error::custom("LC qubits do not match its steps"));
                }
                Ok(g)
            }
            _ => Err(D::Error::custom(format!("malformed gate `{}`", r.gate))),
        }
    }
}

/// Gate counts used by the depolarization model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    /// Single-qubit gates, including one identity per idle qubit per layer.
    pub n1: usize,
    pub n2: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub layers: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut n1 = 0;
        let mut n2 = 0;
        for layer in &self.layers {
            let mut busy = 0;
            for g in layer {
                let s = g.support().len();
                busy += s;
                if g.is_two_qubit() {
                    n2 += 1;
                } else {
                    n1 += s;
                }
            }
            n1 += self.n_qubits - busy;
        }
        GateCounts {
            n1,
            n2,
            depth: self.depth(),
        }
    }

    /// Checks qubit ranges and that gates within a layer are disjoint.
    pub fn validate(&self) -> Result<()> {
        for (i, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; self.n_qubits];
            for g in layer {
                if let Gate::CZ(a, b) = g {
                    if a == b {
                        return Err(Error::RepeatedQubit(*a));
                    }
                }
                if let Gate::Lc(steps) = g {
                    for s in steps {
                        if s.neighbors.contains(&s.vertex) {
                            return Err(Error::RepeatedQubit(s.vertex));
                        }
                    }
                }
                for q in g.support() {
                    if q >= self.n_qubits {
                        return Err(Error::InvalidQubit {
                            qubit: q,
                            n: self.n_qubits,
                        });
                    }
                    if std::mem::replace(&mut used[q], true) {
                        return Err(Error::InvalidCircuit(format!(
                            "qubit {q} used twice in layer {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Validates the circuit and checks every CZ against device edges.
    pub fn check_on(&self, device: &ConnectivityGraph) -> Result<()> {
        self.validate()?;
        if device.n_vertices() != self.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: device.n_vertices(),
            });
        }
        for g in self.layers.iter().flatten() {
            if let Gate::CZ(a, b) = *g {
                if !device.has_edge(a, b) {
                    return Err(Error::InvalidCircuit(format!(
                        "CZ({a}, {b}) is not a device edge"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cliffords(&self) -> impl Iterator<Item = Clifford> + '_ {
        self.layers.iter().flatten().flat_map(Gate::cliffords)
    }

    /// Noiseless output state from |0…0⟩.
    pub fn simulate(&self) -> Result<StabilizerTableau> {
        let mut t = StabilizerTableau::zero_state(self.n_qubits);
        t.apply_all(self.cliffords())?;
        Ok(t)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }
}

/// ASAP scheduler used by all synthesis routines.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    n: usize,
    layers: Vec<Vec<Gate>>,
    occupied: Vec<Vec<bool>>,
    last_any: Vec<Option<usize>>,
    last_noncz: Vec<Option<usize>>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            layers: Vec::new(),
            occupied: Vec::new(),
            last_any: vec![None; n],
            last_noncz: vec![None; n],
        }
    }

    fn free(&self, layer: usize, qubits: &[usize]) -> bool {
        layer >= self.layers.len() || qubits.iter().all(|&q| !self.occupied[layer][q])
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let support = gate.support();
        for &q in &support {
            if q >= self.n {
                return Err(Error::InvalidQubit {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        if let Gate::CZ(a, b) = gate {
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
        }
        let after = |v: &[Option<usize>]| {
            support
                .iter()
                .filter_map(|&q| v[q])
                .max()
                .map_or(0, |l| l + 1)
        };
        let layer = if gate.is_two_qubit() {
            let mut l = after(&self.last_noncz);
            while !self.free(l, &support) {
                l += 1;
            }
            l
        } else {
            after(&self.last_any)
        };
        while self.layers.len() <= layer {
            self.layers.push(Vec::new());
            self.occupied.push(vec![false; self.n]);
        }
        for &q in &support {
            self.occupied[layer][q] = true;
            self.last_any[q] = Some(self.last_any[q].map_or(layer, |l| l.max(layer)));
            if !gate.is_two_qubit() {
                self.last_noncz[q] = Some(layer);
            }
        }
        self.layers[layer].push(gate);
        Ok(())
    }

    pub fn finish(self) -> Circuit {
        Circuit {
            n_qubits: self.n,
            layers: self.layers,
        }
    }
}

/// A preparation circuit together with the graph state it produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prepared {
    pub family: Family,
    pub circuit: Circuit,
    /// Graph of the prepared graph state.
    pub state: ConnectivityGraph,
    /// GHZ: center then leaves. LC: vertices along the path.
    pub order: Vec<usize>,
}

impl Prepared {
    pub fn bell_operator(&self) -> Result<BellOperator> {
        match self.family {
            Family::Ghz => BellOperator::ghz_on(&self.state, self.order[0]),
            Family::Lc => BellOperator::lc_on(&self.state, &self.order),
        }
    }
}

fn hadamard_layer(b: &mut CircuitBuilder, n: usize) -> Result<()> {
    (0..n).try_for_each(|q| b.push(Gate::H(q)))
}

/// Linear cluster on a path `0 - 1 - ... - (n-1)`: depth 3.
pub fn prep_lc_path(n: usize) -> Result<Prepared> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    let mut b = CircuitBuilder::new(n);
    hadamard_layer(&mut b, n)?;
    for i in 1..n {
        b.push(Gate::CZ(i - 1, i))?;
    }
    Ok(Prepared {
        family: Family::Lc,
        circuit: b.finish(),
        state: ConnectivityGraph::path(n),
        order: (0..n).collect(),
    })
}

/// GHZ (star graph state centered at 0) on line connectivity, CZs from the
/// center one at a time: depth `n`.
pub fn prep_ghz_line(n: usize) -> Result<Prepared> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    let mut b = CircuitBuilder::new(n);
    hadamard_layer(&mut b, n)?;
    for k in 1..n {
        b.push(Gate::CZ(0, k))?;
    }
    Ok(Prepared {
        family: Family::Ghz,
        circuit: b.finish(),
        state: ConnectivityGraph::star(n, 0)?,
        order: (0..n).collect(),
    })
}

/// GHZ on arbitrary connected device graph `g` by growing a star and moving
/// its center with two local complementations: depth at most `3n + 1`.
pub fn prep_ghz_connectivity(g: &ConnectivityGraph) -> Result<Prepared> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut b = CircuitBuilder::new(n);
    hadamard_layer(&mut b, n)?;
    let mut state = ConnectivityGraph::empty(n);
    let mut covered = vec![false; n];
    let mut center = g.max_degree_vertex().expect("nonempty graph");
    covered[center] = true;
    let mut n_covered = 1;
    let attach = |b: &mut CircuitBuilder,
                  state: &mut ConnectivityGraph,
                  c: usize,
                  covered: &mut [bool]|
     -> Result<usize> {
        let mut added = 0;
        for w in g.neighbors(c) {
            if !covered[w] {
                covered[w] = true;
                b.push(Gate::CZ(c, w))?;
                state.add_edge(c, w)?;
                added += 1;
            }
        }
        Ok(added)
    };
    n_covered += attach(&mut b, &mut state, center, &mut covered)?;
    while n_covered < n {
        let w = (0..n)
            .find(|&v| covered[v] && g.neighbors(v).any(|u| !covered[u]))
            .expect("connected graph has a frontier");
        if w != center {
            for v in [center, w] {
                b.push(Gate::Lc(vec![LocalComplementation::on(&state, v)]))?;
                state = state.local_complement(v)?;
            }
            center = w;
        }
        n_covered += attach(&mut b, &mut state, center, &mut covered)?;
    }
    debug_assert!(n == 1 || state.degree(center) == n - 1);
    let order = std::iter::once(center)
        .chain((0..n).filter(|&v| v != center))
        .collect();
    Ok(Prepared {
        family: Family::Ghz,
        circuit: b.finish(),
        state,
        order,
    })
}

fn push_cz_via_path(
    b: &mut CircuitBuilder,
    state: &mut ConnectivityGraph,
    path: &[usize],
) -> Result<()> {
    let m = path.len();
    if m < 2 {
        return Err(Error::InvalidArgument(
            "path needs at least two vertices".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for &v in path {
        if v >= state.n_vertices() {
            return Err(Error::InvalidQubit {
                qubit: v,
                n: state.n_vertices(),
            });
        }
        if !seen.insert(v) {
            return Err(Error::RepeatedQubit(v));
        }
    }
    if let Some(&v) = path[1..].iter().find(|&&v| state.degree(v) > 0) {
        return Err(Error::Precondition(format!(
            "intermediate and target qubits must be uncoupled, {v} is not"
        )));
    }
    let first = path[0];
    b.push(Gate::CZ(first, path[1]))?;
    state.toggle_edge(first, path[1])?;
    for w in path[1..].windows(2) {
        let (k, next) = (w[0], w[1]);
        b.push(Gate::CZ(k, next))?;
        state.toggle_edge(k, next)?;
        let lk = LocalComplementation::on(state, k);
        *state = state.local_complement(k)?;
        let lnext = LocalComplementation::on(state, next);
        *state = state.local_complement(next)?;
        b.push(Gate::Lc(vec![lk, lnext]))?;
        b.push(Gate::CZ(k, next))?;
        state.toggle_edge(k, next)?;
    }
    Ok(())
}

/// Circuit fragment that adds the edge `(path[0], path[m-1])` to the graph
/// state `state` using only CZs between consecutive path vertices.
///
/// `path[1..]` must be uncoupled in `state`. Depth is `3(m-2) + 1`.
/// Returns the fragment and the updated graph.
pub fn cz_via_path(
    state: &ConnectivityGraph,
    path: &[usize],
) -> Result<(Circuit, ConnectivityGraph)> {
    let mut b = CircuitBuilder::new(state.n_vertices());
    let mut out = state.clone();
    push_cz_via_path(&mut b, &mut out, path)?;
    Ok((b.finish(), out))
}

/// Linear cluster on an arbitrary connected graph: a postorder walk of a
/// spanning tree, bridging non-adjacent consecutive vertices with
/// [`cz_via_path`].
pub fn prep_lc_spanning_tree(g: &ConnectivityGraph) -> Result<Prepared> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    let tree = g.spanning_tree()?;
    let root = (0..n).find(|&v| tree.degree(v) == 1).unwrap_or(0);
    let mut parent = vec![usize::MAX; n];
    let order = postorder(&tree, root, &mut parent);

    let mut b = CircuitBuilder::new(n);
    hadamard_layer(&mut b, n)?;
    let mut state = ConnectivityGraph::empty(n);
    for w in order.windows(2) {
        let (u, v) = (w[0], w[1]);
        if tree.has_edge(u, v) {
            b.push(Gate::CZ(u, v))?;
            state.add_edge(u, v)?;
        } else {
            let route = tree_path(&parent, u, v);
            push_cz_via_path(&mut b, &mut state, &route)?;
        }
    }
    debug_assert_eq!(state, ConnectivityGraph::path_through(n, &order)?);
    Ok(Prepared {
        family: Family::Lc,
        circuit: b.finish(),
        state,
        order,
    })
}

/// Postorder with children visited lowest index first.
fn postorder(tree: &ConnectivityGraph, root: usize, parent: &mut [usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(tree.n_vertices());
    let mut stack = vec![(root, false)];
    parent[root] = root;
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            out.push(v);
            continue;
        }
        stack.push((v, true));
        let children: Vec<usize> = tree.neighbors(v).filter(|&w| w != parent[v]).collect();
        for &c in children.iter().rev() {
            parent[c] = v;
            stack.push((c, false));
        }
    }
    out
}

/// Unique tree path from `u` to `v` given parent pointers.
fn tree_path(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let ancestors = |mut x: usize| {
        let mut chain = vec![x];
        while parent[x] != x {
            x = parent[x];
            chain.push(x);
        }
        chain
    };
    let up = ancestors(u);
    let mut down = ancestors(v);
    let on_up: BTreeSet<usize> = up.iter().copied().collect();
    let meet = *down
        .iter()
        .find(|x| on_up.contains(x))
        .expect("common root");
    let mut path: Vec<usize> = up.into_iter().take_while(|&x| x != meet).collect();
    path.push(meet);
    down.truncate(down.iter().position(|&x| x == meet).expect("meet on chain"));
    path.extend(down.into_iter().rev());
    path
}
