//! Bit-packed Pauli strings with exact phase tracking.
//!
//! A string stores `i^phase · ⊗_q X^{x_q} Z^{z_q}` with X to the left of Z on
//! every qubit, so a `Y` contributes one unit of phase (`Y = i·X·Z`). Products
//! then reduce to word-wide XOR plus a popcount for the phase.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ConnectivityGraph;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    pub(crate) x: Vec<u64>,
    pub(crate) z: Vec<u64>,
    /// Exponent of `i` in the raw X-before-Z form, mod 4.
    pub(crate) phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// `+P` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        let mut s = Self::identity(n);
        s.set(q, p)?;
        Ok(s)
    }

    /// Signed string from letters (qubit 0 first) and a sign.
    pub fn from_letters(letters: &[Pauli], negative: bool) -> Self {
        let mut s = Self::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p).expect("index in range");
        }
        if negative {
            s.phase = (s.phase + 2) & 3;
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Raw phase exponent (see module docs).
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn letters(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(|q| self.letter(q))
    }

    /// Replaces the letter on `q`, keeping the displayed sign unchanged.
    pub fn set(&mut self, q: usize, p: Pauli) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidQubit {
                qubit: q,
                n: self.n,
            });
        }
        let old_y = (self.x_bit(q) && self.z_bit(q)) as u8;
        let (x, z) = p.bits();
        let (w, b) = (q / 64, 1u64 << (q % 64));
        self.x[w] = if x { self.x[w] | b } else { self.x[w] & !b };
        self.z[w] = if z { self.z[w] | b } else { self.z[w] & !b };
        let new_y = (x && z) as u8;
        self.phase = (self.phase + 4 + new_y - old_y) & 3;
        Ok(())
    }

    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// Exponent `k` such that the operator is `i^k ·` (tensor product of letters).
    pub fn display_phase(&self) -> u8 {
        ((self.phase as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        self.display_phase() % 2 == 0
    }

    /// `+1` or `-1` for Hermitian strings, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        match self.display_phase() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn negated(&self) -> Self {
        let mut s = self.clone();
        s.phase = (s.phase + 2) & 3;
        s
    }

    /// Same letters with the sign dropped.
    pub fn unsigned(&self) -> Self {
        let mut s = self.clone();
        s.phase = (self.y_count() % 4) as u8;
        s
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&q| self.x_bit(q) || self.z_bit(q))
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`. Sizes must match.
    pub(crate) fn mul_assign_right(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        // Z^{z1} X^{x2} = (-1)^{z1·x2} X^{x2} Z^{z1}
        let mut swaps = 0u32;
        for w in 0..self.x.len() {
            swaps += (self.z[w] & other.x[w]).count_ones();
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * (swaps & 1)) & 3) as u8;
    }

    /// Symplectic inner product is zero.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.same_size(other)?;
        Ok(!self.anticommutes_with(other))
    }

    pub(crate) fn anticommutes_with(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for w in 0..self.x.len() {
            acc ^= (self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w]);
        }
        acc.count_ones() & 1 == 1
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.display_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for p in self.letters() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-|−][i]LETTERS`, qubit 0 leftmost. A missing sign means `+`.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut k = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest
            .strip_prefix('-')
            .or_else(|| rest.strip_prefix('\u{2212}'))
        {
            rest = r;
            k = 2;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rest = r;
            k += 1;
        }
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = PauliString::from_letters(&letters, false);
        p.phase = (p.phase + k) & 3;
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Stabilizing operators `g_i = X_i ⊗_{j∈N(i)} Z_j` of the graph state of `g`.
pub fn graph_stabilizers(g: &ConnectivityGraph) -> Vec<PauliString> {
    let n = g.n_vertices();
    (0..n)
        .map(|i| {
            let mut s = PauliString::identity(n);
            s.x[i / 64] |= 1 << (i % 64);
            for j in g.neighbors(i) {
                s.z[j / 64] |= 1 << (j % 64);
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        assert_eq!(p("+X").multiply(&p("+Z")).unwrap().to_string(), "-iY");
        assert_eq!(p("+Z").multiply(&p("+X")).unwrap().to_string(), "+iY");
    }

    #[test]
    fn xz_times_zx_is_yy() {
        assert_eq!(p("+XZ").multiply(&p("+ZX")).unwrap(), p("+YY"));
    }

    #[test]
    fn squares_are_identity() {
        for s in ["+XYZ", "-YYIZ", "+ZZZZ", "-I"] {
            let q = p(s);
            let sq = q.multiply(&q).unwrap();
            assert!(sq.is_identity_letters());
            assert_eq!(sq.sign(), Some(1));
        }
    }

    #[test]
    fn commutation() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert_eq!(
            p("X").commutes(&p("XX")),
            Err(Error::SizeMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["+ZXZ", "-IYX", "+iZ", "-iXYZI", "+"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("\u{2212}X"), p("-X"));
        assert!("+XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn wide_strings_cross_word_boundary() {
        let n = 130;
        let mut a = PauliString::identity(n);
        a.set(63, Pauli::X).unwrap();
        a.set(64, Pauli::Y).unwrap();
        a.set(129, Pauli::Z).unwrap();
        let mut b = PauliString::identity(n);
        b.set(63, Pauli::Z).unwrap();
        b.set(129, Pauli::X).unwrap();
        // anticommute on 63 and on 129: overall commute
        assert!(a.commutes(&b).unwrap());
        assert_eq!(a.weight(), 3);
        assert_eq!(a.support().collect::<Vec<_>>(), vec![63, 64, 129]);
        let text = a.to_string();
        assert_eq!(text.parse::<PauliString>().unwrap(), a);
    }

    #[test]
    fn graph_stabilizer_examples() {
        let path = ConnectivityGraph::path(3);
        assert_eq!(graph_stabilizers(&path)[1], p("+ZXZ"));
        let star = ConnectivityGraph::star(3, 0).unwrap();
        assert_eq!(graph_stabilizers(&star)[0], p("+XZZ"));
        assert_eq!(graph_stabilizers(&ConnectivityGraph::empty(1))[0], p("+X"));
    }

    #[test]
    fn set_keeps_sign() {
        let mut s = p("-XZ");
        s.set(0, Pauli::Y).unwrap();
        assert_eq!(s.to_string(), "-YZ");
        s.set(0, Pauli::I).unwrap();
        assert_eq!(s.to_string(), "-IZ");
    }
}
