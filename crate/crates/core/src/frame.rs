//! Pauli-frame propagation: tracks only the accumulated error of a noisy
//! Clifford circuit relative to the ideal one.

use crate::pauli::{words_for, Pauli, PauliString};
use crate::tableau::{Clifford, PauliError};

/// Pauli error up to phase, propagated through Clifford gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn clear(&mut self) {
        self.x.fill(0);
        self.z.fill(0);
    }

    #[inline]
    fn get(v: &[u64], q: usize) -> bool {
        v[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    fn flip(v: &mut [u64], q: usize) {
        v[q / 64] ^= 1 << (q % 64);
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(Self::get(&self.x, q), Self::get(&self.z, q))
    }

    /// Multiplies a single-qubit Pauli into the frame.
    pub fn inject(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        if x {
            Self::flip(&mut self.x, q);
        }
        if z {
            Self::flip(&mut self.z, q);
        }
    }

    pub fn inject_error(&mut self, err: &PauliError) {
        for &(q, p) in err {
            self.inject(q, p);
        }
    }

    /// Conjugates the frame by `gate`. Phases are irrelevant for a frame.
    pub fn apply(&mut self, gate: Clifford) {
        match gate {
            Clifford::I(_) | Clifford::X(_) | Clifford::Y(_) | Clifford::Z(_) => {}
            Clifford::H(q) => {
                let (x, z) = (Self::get(&self.x, q), Self::get(&self.z, q));
                if x != z {
                    Self::flip(&mut self.x, q);
                    Self::flip(&mut self.z, q);
                }
            }
            Clifford::S(q) | Clifford::Sdg(q) => {
                if Self::get(&self.x, q) {
                    Self::flip(&mut self.z, q);
                }
            }
            Clifford::SqrtX(q) | Clifford::SqrtXdg(q) => {
                if Self::get(&self.z, q) {
                    Self::flip(&mut self.x, q);
                }
            }
            Clifford::CZ(a, b) => {
                let (xa, xb) = (Self::get(&self.x, a), Self::get(&self.x, b));
                if xb {
                    Self::flip(&mut self.z, a);
                }
                if xa {
                    Self::flip(&mut self.z, b);
                }
            }
        }
    }

    /// True iff the frame flips the outcome of measuring `obs`.
    pub fn anticommutes(&self, obs: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= (self.x[w] & obs.z[w]).count_ones() ^ (self.z[w] & obs.x[w]).count_ones();
        }
        parity & 1 == 1
    }

    pub fn to_pauli_string(&self) -> PauliString {
        let letters: Vec<Pauli> = (0..self.n).map(|q| self.letter(q)).collect();
        PauliString::from_letters(&letters, false)
    }
}
