//! Dense state-vector and matrix oracles. Qubit 0 is the most significant
//! bit of a basis index, matching the leftmost letter of a Pauli string.
#![allow(dead_code)]

use bellmark_core::{Clifford, ConnectivityGraph, Pauli, PauliString};
use num_complex::Complex64 as C;
use rand::Rng;

pub type Mat = Vec<Vec<C>>;

pub const TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn letter_matrix(p: Pauli) -> [[C; 2]; 2] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => [[l, o], [o, l]],
        Pauli::X => [[o, l], [l, o]],
        Pauli::Y => [[o, -i], [i, o]],
        Pauli::Z => [[l, o], [o, -l]],
    }
}

pub fn i_pow(k: u8) -> C {
    [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(k & 3) as usize]
}

fn gate_matrix(g: Clifford) -> Option<[[C; 2]; 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let (pp, pm) = (c(0.5, 0.5), c(0.5, -0.5));
    Some(match g {
        Clifford::I(_) => letter_matrix(Pauli::I),
        Clifford::X(_) => letter_matrix(Pauli::X),
        Clifford::Y(_) => letter_matrix(Pauli::Y),
        Clifford::Z(_) => letter_matrix(Pauli::Z),
        Clifford::H(_) => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        Clifford::S(_) => [[l, o], [o, i]],
        Clifford::Sdg(_) => [[l, o], [o, -i]],
        Clifford::SqrtX(_) => [[pp, pm], [pm, pp]],
        Clifford::SqrtXdg(_) => [[pm, pp], [pp, pm]],
        Clifford::CZ(..) => return None,
    })
}

pub fn zero_state(n: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

pub fn apply_1q(state: &mut [C], n: usize, q: usize, m: [[C; 2]; 2]) {
    let b = bit(n, q);
    for idx in 0..state.len() {
        if idx & b == 0 {
            let (a0, a1) = (state[idx], state[idx | b]);
            state[idx] = m[0][0] * a0 + m[0][1] * a1;
            state[idx | b] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

pub fn apply_gate(state: &mut [C], n: usize, g: Clifford) {
    match g {
        Clifford::CZ(a, b) => {
            let (ba, bb) = (bit(n, a), bit(n, b));
            for (idx, amp) in state.iter_mut().enumerate() {
                if idx & ba != 0 && idx & bb != 0 {
                    *amp = -*amp;
                }
            }
        }
        other => {
            let (q, _) = other.qubits();
            apply_1q(state, n, q, gate_matrix(other).unwrap());
        }
    }
}

pub fn apply_pauli(state: &[C], p: &PauliString) -> Vec<C> {
    let n = p.n_qubits();
    let mut out = state.to_vec();
    for q in 0..n {
        apply_1q(&mut out, n, q, letter_matrix(p.letter(q)));
    }
    let ph = i_pow(p.display_phase());
    out.iter_mut().for_each(|a| *a *= ph);
    out
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn expectation(state: &[C], p: &PauliString) -> C {
    inner(state, &apply_pauli(state, p))
}

pub fn graph_state(g: &ConnectivityGraph) -> Vec<C> {
    let n = g.n_vertices();
    let mut s = zero_state(n);
    for q in 0..n {
        apply_gate(&mut s, n, Clifford::H(q));
    }
    for (a, b) in g.edges() {
        apply_gate(&mut s, n, Clifford::CZ(a, b));
    }
    s
}

/// `|⟨a|b⟩|`, equal to 1 iff the states agree up to global phase.
pub fn overlap(a: &[C], b: &[C]) -> f64 {
    inner(a, b).norm()
}

pub fn identity(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| c((i == j) as u8 as f64, 0.0)).collect())
        .collect()
}

pub fn pauli_matrix(p: &PauliString) -> Mat {
    let n = p.n_qubits();
    let d = 1 << n;
    // columns are images of basis vectors
    let mut m = vec![vec![c(0.0, 0.0); d]; d];
    for col in 0..d {
        let mut e = vec![c(0.0, 0.0); d];
        e[col] = c(1.0, 0.0);
        let img = apply_pauli(&e, p);
        for row in 0..d {
            m[row][col] = img[row];
        }
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut out = vec![vec![c(0.0, 0.0); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> ConnectivityGraph {
    let mut g = ConnectivityGraph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

pub fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliString {
    const L: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let letters: Vec<Pauli> = (0..n).map(|_| L[rng.random_range(0..4)]).collect();
    PauliString::from_letters(&letters, rng.random_bool(0.5))
}

pub fn random_clifford<R: Rng>(n: usize, rng: &mut R) -> Clifford {
    let q = rng.random_range(0..n);
    match rng.random_range(0..10) {
        0 => Clifford::H(q),
        1 => Clifford::S(q),
        2 => Clifford::Sdg(q),
        3 => Clifford::SqrtX(q),
        4 => Clifford::SqrtXdg(q),
        5 => Clifford::X(q),
        6 => Clifford::Y(q),
        7 => Clifford::Z(q),
        _ if n > 1 => {
            let mut b = rng.random_range(0..n - 1);
            if b >= q {
                b += 1;
            }
            Clifford::CZ(q, b)
        }
        _ => Clifford::H(q),
    }
}
