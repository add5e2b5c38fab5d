//! GHZ and linear-cluster Bell operators as lazily indexed term families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ConnectivityGraph;
use crate::pauli::{graph_stabilizers, Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ghz,
    Lc,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ghz => "ghz",
            Family::Lc => "lc",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(Family::Ghz),
            "lc" => Ok(Family::Lc),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// Quantum bound, classical bound and their ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellBounds {
    pub q: f64,
    pub c: f64,
    pub d: f64,
    /// Smallest white-noise weight that still violates, `1/D`.
    pub alpha_min: f64,
}

impl Family {
    /// Largest supported size: the term count must fit in a `u128`.
    pub fn max_qubits(self) -> usize {
        match self {
            Family::Ghz => 128,
            Family::Lc => 189,
        }
    }

    pub fn check_size(self, n: usize) -> Result<()> {
        let min = match self {
            Family::Ghz => 2,
            Family::Lc => 3,
        };
        if n < min || n > self.max_qubits() {
            return Err(Error::InvalidOperator(format!(
                "{self} needs {min}..={} qubits, got {n}",
                self.max_qubits()
            )));
        }
        if self == Family::Lc && n % 3 != 0 {
            return Err(Error::InvalidOperator(format!(
                "lc needs a multiple of 3 qubits, got {n}"
            )));
        }
        Ok(())
    }

    /// Number of terms `M` (equal to the quantum bound).
    pub fn term_count(self, n: usize) -> Result<u128> {
        self.check_size(n)?;
        Ok(match self {
            Family::Ghz => 1u128 << (n - 1),
            Family::Lc => 1u128 << (2 * (n / 3)),
        })
    }

    /// Closed-form bounds for `n` qubits.
    pub fn bounds(self, n: usize) -> Result<BellBounds> {
        self.check_size(n)?;
        let (log_q, log_c) = match self {
            Family::Ghz => {
                let c = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
                (n - 1, c)
            }
            Family::Lc => (2 * n / 3, n / 3),
        };
        let q = (log_q as f64).exp2();
        let c = (log_c as f64).exp2();
        let d = ((log_q - log_c) as f64).exp2();
        Ok(BellBounds {
            q,
            c,
            d,
            alpha_min: 1.0 / d,
        })
    }
}

/// Bell operator `B = Σ_j B_j` built from the stabilizers of a star or path graph.
///
/// GHZ terms are `g_c · Π_{i∈S} g_i` where bit `b` of the index selects the
/// `b`-th leaf. LC terms take one base-4 digit `2s + t` per block of three
/// consecutive path vertices and contribute `g_{3i}^s · g_{3i+1} · g_{3i+2}^t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellOperator {
    family: Family,
    /// Device qubit for each local qubit.
    qubit_map: Vec<usize>,
    /// GHZ: center then leaves. LC: vertices along the path.
    order: Vec<usize>,
    generators: Vec<PauliString>,
    m: u128,
}

impl BellOperator {
    /// GHZ operator for the star graph state `state` with the given center.
    pub fn ghz_on(state: &ConnectivityGraph, center: usize) -> Result<Self> {
        let n = state.n_vertices();
        let m = Family::Ghz.term_count(n)?;
        if center >= n || state.degree(center) != n - 1 || state.n_edges() != n - 1 {
            return Err(Error::InvalidOperator(format!(
                "graph is not a star centered at {center}"
            )));
        }
        let order = std::iter::once(center)
            .chain((0..n).filter(|&v| v != center))
            .collect();
        Ok(Self {
            family: Family::Ghz,
            qubit_map: (0..n).collect(),
            order,
            generators: graph_stabilizers(state),
            m,
        })
    }

    /// LC operator for the path graph state visiting `order`.
    pub fn lc_on(state: &ConnectivityGraph, order: &[usize]) -> Result<Self> {
        let n = state.n_vertices();
        let m = Family::Lc.term_count(n)?;
        let expected = ConnectivityGraph::path_through(n, order)?;
        if order.len() != n || &expected != state {
            return Err(Error::InvalidOperator(
                "graph is not the path through the given order".into(),
            ));
        }
        Ok(Self {
            family: Family::Lc,
            qubit_map: (0..n).collect(),
            order: order.to_vec(),
            generators: graph_stabilizers(state),
            m,
        })
    }

    /// Builds the operator from a star (GHZ) or path (LC) graph, detecting the
    /// center or path order.
    pub fn build(family: Family, state: &ConnectivityGraph) -> Result<Self> {
        match family {
            Family::Ghz => {
                let center = state
                    .star_center()
                    .ok_or_else(|| Error::InvalidOperator("GHZ needs a star graph".into()))?;
                Self::ghz_on(state, center)
            }
            Family::Lc => {
                let order = state
                    .as_path()
                    .ok_or_else(|| Error::InvalidOperator("LC needs a path graph".into()))?;
                Self::lc_on(state, &order)
            }
        }
    }

    /// Canonical operator on `n` qubits: star centered at 0 or the path `0..n`.
    pub fn canonical(family: Family, n: usize) -> Result<Self> {
        family.check_size(n)?;
        match family {
            Family::Ghz => Self::ghz_on(&ConnectivityGraph::star(n, 0)?, 0),
            Family::Lc => {
                let order: Vec<usize> = (0..n).collect();
                Self::lc_on(&ConnectivityGraph::path(n), &order)
            }
        }
    }

    pub fn with_qubit_map(mut self, map: Vec<usize>) -> Result<Self> {
        if map.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: map.len(),
            });
        }
        self.qubit_map = map;
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn qubit_map(&self) -> &[usize] {
        &self.qubit_map
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Number of terms `M`.
    pub fn term_count(&self) -> u128 {
        self.m
    }

    pub fn bounds(&self) -> BellBounds {
        self.family
            .bounds(self.n())
            .expect("size checked at construction")
    }

    /// Term `B_j` as a signed Pauli string on the local qubits.
    pub fn term(&self, j: u128) -> Result<PauliString> {
        if j >= self.m {
            return Err(Error::TermIndex {
                index: j,
                m: self.m,
            });
        }
        let g = |k: usize| &self.generators[self.order[k]];
        let mut acc = PauliString::identity(self.n());
        match self.family {
            Family::Ghz => {
                acc.mul_assign_right(g(0));
                for b in 0..self.n() - 1 {
                    if j >> b & 1 == 1 {
                        acc.mul_assign_right(g(b + 1));
                    }
                }
            }
            Family::Lc => {
                for block in 0..self.n() / 3 {
                    let digit = (j >> (2 * block)) & 3;
                    let base = 3 * block;
                    if digit >> 1 == 1 {
                        acc.mul_assign_right(g(base));
                    }
                    acc.mul_assign_right(g(base + 1));
                    if digit & 1 == 1 {
                        acc.mul_assign_right(g(base + 2));
                    }
                }
            }
        }
        debug_assert!(acc.is_hermitian());
        Ok(acc)
    }

    /// Exhaustive local-hidden-variable maximum: every (qubit, letter) pair
    /// occurring in some term gets an independent ±1 value.
    pub fn lhv_bruteforce_bound(&self) -> Result<i64> {
        const MAX_VARS: usize = 24;
        const MAX_WORK: u128 = 1 << 32;
        if self.m > 1 << 16 {
            return Err(Error::TooLarge(format!("{} terms", self.m)));
        }
        let mut vars: BTreeMap<(usize, Pauli), usize> = BTreeMap::new();
        let mut terms: Vec<(i64, u32)> = Vec::with_capacity(self.m as usize);
        for j in 0..self.m {
            let t = self.term(j)?;
            let mut mask = 0u32;
            for q in t.support() {
                let next = vars.len();
                let id = *vars.entry((q, t.letter(q))).or_insert(next);
                if id >= MAX_VARS {
                    return Err(Error::TooLarge(format!(
                        "more than {MAX_VARS} LHV variables"
                    )));
                }
                mask |= 1 << id;
            }
            terms.push((t.sign().expect("Hermitian term") as i64, mask));
        }
        let n_vars = vars.len();
        if (1u128 << n_vars) * self.m > MAX_WORK {
            return Err(Error::TooLarge(format!(
                "{n_vars} variables x {} terms",
                self.m
            )));
        }
        // bit set in `assignment` means that variable takes the value -1
        let best = (0u32..1 << n_vars)
            .map(|assignment| {
                terms
                    .iter()
                    .map(|&(sign, mask)| {
                        if (assignment & mask).count_ones() % 2 == 0 {
                            sign
                        } else {
                            -sign
                        }
                    })
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0);
        Ok(best)
    }
}
