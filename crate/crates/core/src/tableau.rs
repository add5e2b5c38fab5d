//! Stabilizer tableau with destabilizers.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers. Every row is a
//! [`PauliString`] in the raw X-before-Z phase convention, so Clifford
//! conjugation only touches one word per row plus the phase.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Elementary Clifford gates understood by the simulators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Clifford {
    I(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    /// Quarter turn about X: Z ↦ -Y.
    SqrtX(usize),
    /// Inverse quarter turn about X: Z ↦ +Y.
    SqrtXdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CZ(usize, usize),
}

impl Clifford {
    pub fn pauli(q: usize, p: Pauli) -> Self {
        match p {
            Pauli::I => Clifford::I(q),
            Pauli::X => Clifford::X(q),
            Pauli::Y => Clifford::Y(q),
            Pauli::Z => Clifford::Z(q),
        }
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Clifford::CZ(a, b) => (a, Some(b)),
            Clifford::I(q)
            | Clifford::H(q)
            | Clifford::S(q)
            | Clifford::Sdg(q)
            | Clifford::SqrtX(q)
            | Clifford::SqrtXdg(q)
            | Clifford::X(q)
            | Clifford::Y(q)
            | Clifford::Z(q) => (q, None),
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::InvalidQubit { qubit: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::RepeatedQubit(a));
        }
        Ok(())
    }
}

/// Conjugates one row by `gate`. Indices must already be validated.
#[inline]
pub(crate) fn conjugate_row(row: &mut PauliString, gate: Clifford) {
    #[inline]
    fn loc(q: usize) -> (usize, u64) {
        (q / 64, 1u64 << (q % 64))
    }
    let bit = |v: &[u64], q: usize| -> u8 {
        let (w, m) = loc(q);
        (v[w] & m != 0) as u8
    };
    match gate {
        Clifford::I(_) => {}
        Clifford::H(q) => {
            let (w, m) = loc(q);
            let (x, z) = (row.x[w] & m, row.z[w] & m);
            if x != 0 && z != 0 {
                row.phase = (row.phase + 2) & 3;
            }
            row.x[w] = (row.x[w] & !m) | z;
            row.z[w] = (row.z[w] & !m) | x;
        }
        Clifford::S(q) | Clifford::Sdg(q) => {
            let (w, m) = loc(q);
            if row.x[w] & m != 0 {
                let k = if matches!(gate, Clifford::S(_)) { 1 } else { 3 };
                row.phase = (row.phase + k) & 3;
                row.z[w] ^= m;
            }
        }
        Clifford::SqrtX(q) | Clifford::SqrtXdg(q) => {
            let (w, m) = loc(q);
            if row.z[w] & m != 0 {
                let k = if matches!(gate, Clifford::SqrtXdg(_)) {
                    1
                } else {
                    3
                };
                row.phase = (row.phase + k) & 3;
                row.x[w] ^= m;
            }
        }
        Clifford::X(q) => row.phase = (row.phase + 2 * bit(&row.z, q)) & 3,
        Clifford::Z(q) => row.phase = (row.phase + 2 * bit(&row.x, q)) & 3,
        Clifford::Y(q) => row.phase = (row.phase + 2 * (bit(&row.x, q) ^ bit(&row.z, q))) & 3,
        Clifford::CZ(a, b) => {
            let (xa, xb) = (bit(&row.x, a), bit(&row.x, b));
            row.phase = (row.phase + 2 * (xa & xb)) & 3;
            if xb == 1 {
                let (w, m) = loc(a);
                row.z[w] ^= m;
            }
            if xa == 1 {
                let (w, m) = loc(b);
                row.z[w] ^= m;
            }
        }
    }
}

/// Result of a Pauli measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    /// `+1` or `-1`.
    pub outcome: i8,
    /// True when the outcome was fixed by the state.
    pub deterministic: bool,
}

/// Stochastic Pauli channels realized by trajectory sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PauliChannel {
    /// One of X, Y, Z uniformly, with total probability `p`.
    Depol1 { qubit: usize, p: f64 },
    /// One of the 15 non-identity two-qubit Paulis uniformly, total probability `p`.
    Depol2 { a: usize, b: usize, p: f64 },
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// A sampled error: up to two single-qubit letters.
pub type PauliError = [(usize, Pauli); 2];

impl PauliChannel {
    /// Draws an error from the channel. Consumes one uniform draw, plus one
    /// more when an error fires, so every backend sees the same stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Option<PauliError>> {
        match *self {
            PauliChannel::Depol1 { qubit, p } => {
                check_probability(p)?;
                if rng.random::<f64>() < p {
                    let k = rng.random_range(1..4);
                    Ok(Some([(qubit, LETTERS[k]), (qubit, Pauli::I)]))
                } else {
                    Ok(None)
                }
            }
            PauliChannel::Depol2 { a, b, p } => {
                check_probability(p)?;
                if rng.random::<f64>() < p {
                    let k = rng.random_range(1..16);
                    Ok(Some([(a, LETTERS[k / 4]), (b, LETTERS[k % 4])]))
                } else {
                    Ok(None)
                }
            }
        }
    }
}

/// Flips a classical readout bit with probability `pr`.
pub fn readout_flip<R: Rng + ?Sized>(bit: bool, pr: f64, rng: &mut R) -> Result<bool> {
    check_probability(pr)?;
    Ok(bit ^ (rng.random::<f64>() < pr))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl StabilizerTableau {
    /// The computational basis state |0…0⟩.
    pub fn zero_state(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliString::single(n, q, Pauli::X).expect("in range"));
        }
        for q in 0..n {
            rows.push(PauliString::single(n, q, Pauli::Z).expect("in range"));
        }
        Self { n, rows }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.rows[..self.n]
    }

    /// Conjugates every generator by `gate`.
    pub fn apply(&mut self, gate: Clifford) -> Result<()> {
        gate.validate(self.n)?;
        for row in &mut self.rows {
            conjugate_row(row, gate);
        }
        Ok(())
    }

    pub fn apply_all<I: IntoIterator<Item = Clifford>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Applies a Pauli operator to the state (sign flips only).
    pub fn apply_pauli_error(&mut self, err: &PauliError) -> Result<()> {
        for &(q, p) in err {
            if p != Pauli::I {
                self.apply(Clifford::pauli(q, p))?;
            }
        }
        Ok(())
    }

    /// Samples the channel and applies the drawn error, returning it.
    pub fn apply_channel<R: Rng + ?Sized>(
        &mut self,
        channel: &PauliChannel,
        rng: &mut R,
    ) -> Result<Option<PauliError>> {
        if let PauliChannel::Depol1 { qubit, .. } = *channel {
            Clifford::I(qubit).validate(self.n)?;
        }
        if let PauliChannel::Depol2 { a, b, .. } = *channel {
            Clifford::CZ(a, b).validate(self.n)?;
        }
        let err = channel.sample(rng)?;
        if let Some(e) = &err {
            self.apply_pauli_error(e)?;
        }
        Ok(err)
    }

    fn check_observable(&self, obs: &PauliString) -> Result<()> {
        if obs.n_qubits() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: obs.n_qubits(),
            });
        }
        if !obs.is_hermitian() {
            return Err(Error::NonHermitian(obs.display_phase()));
        }
        Ok(())
    }

    /// Expectation of `obs` if it is ±1, `None` if the outcome would be random.
    pub fn peek(&self, obs: &PauliString) -> Result<Option<i8>> {
        self.check_observable(obs)?;
        if self.stabilizers().iter().any(|s| s.anticommutes_with(obs)) {
            return Ok(None);
        }
        Ok(Some(self.deterministic_outcome(obs)))
    }

    /// True iff `obs` measures +1 with certainty.
    pub fn stabilizes(&self, obs: &PauliString) -> Result<bool> {
        Ok(self.peek(obs)? == Some(1))
    }

    fn deterministic_outcome(&self, obs: &PauliString) -> i8 {
        let mut acc = PauliString::identity(self.n);
        for k in 0..self.n {
            if self.rows[k].anticommutes_with(obs) {
                acc.mul_assign_right(&self.rows[self.n + k]);
            }
        }
        debug_assert_eq!(acc.unsigned(), obs.unsigned());
        if acc.phase == obs.phase {
            1
        } else {
            -1
        }
    }

    /// Measures the Hermitian observable `obs`, collapsing the state.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        obs: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement> {
        self.check_observable(obs)?;
        let n = self.n;
        let Some(p) = (n..2 * n).find(|&r| self.rows[r].anticommutes_with(obs)) else {
            return Ok(Measurement {
                outcome: self.deterministic_outcome(obs),
                deterministic: true,
            });
        };
        let pivot = self.rows[p].clone();
        for r in 0..2 * n {
            if r != p && self.rows[r].anticommutes_with(obs) {
                self.rows[r].mul_assign_right(&pivot);
            }
        }
        self.rows[p - n] = pivot;
        let negative = rng.random_bool(0.5);
        self.rows[p] = if negative { obs.negated() } else { obs.clone() };
        #[cfg(debug_assertions)]
        if n <= 12 {
            debug_assert!(self.check_invariants().is_ok());
        }
        Ok(Measurement {
            outcome: if negative { -1 } else { 1 },
            deterministic: false,
        })
    }

    /// Measures qubit `q` in the computational basis; returns the bit (outcome −1 ↦ 1).
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<bool> {
        let obs = PauliString::single(self.n, q, Pauli::Z)?;
        Ok(self.measure(&obs, rng)?.outcome < 0)
    }

    /// Checks commutation structure, stabilizer hermiticity, and pairing.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let anti = self.rows[i].anticommutes_with(&self.rows[j]);
                let paired = j == i + n;
                if anti != paired {
                    return Err(Error::Precondition(format!(
                        "rows {i} and {j} {} but should {}",
                        if anti { "anticommute" } else { "commute" },
                        if paired { "anticommute" } else { "commute" },
                    )));
                }
            }
        }
        if let Some(s) = self.stabilizers().iter().find(|s| !s.is_hermitian()) {
            return Err(Error::NonHermitian(s.display_phase()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ConnectivityGraph;
    use crate::pauli::graph_stabilizers;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn plus_state(n: usize) -> StabilizerTableau {
        let mut t = StabilizerTableau::zero_state(n);
        t.apply_all((0..n).map(Clifford::H)).unwrap();
        t
    }

    fn graph_state(g: &ConnectivityGraph) -> StabilizerTableau {
        let mut t = plus_state(g.n_vertices());
        t.apply_all(g.edges().map(|(a, b)| Clifford::CZ(a, b)))
            .unwrap();
        t
    }

    #[test]
    fn hadamards_give_plus_state() {
        let t = plus_state(3);
        for q in 0..3 {
            assert!(t
                .stabilizes(&PauliString::single(3, q, Pauli::X).unwrap())
                .unwrap());
        }
        t.check_invariants().unwrap();
    }

    #[test]
    fn cz_edges_prepare_graph_state() {
        let g = ConnectivityGraph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4), (0, 4)]).unwrap();
        let t = graph_state(&g);
        for s in graph_stabilizers(&g) {
            assert_eq!(t.peek(&s).unwrap(), Some(1));
            assert_eq!(t.peek(&s.negated()).unwrap(), Some(-1));
        }
        t.check_invariants().unwrap();
    }

    #[test]
    fn cz_twice_is_identity() {
        let mut t = plus_state(3);
        t.apply(Clifford::S(1)).unwrap();
        let before = t.clone();
        t.apply(Clifford::CZ(0, 2)).unwrap();
        t.apply(Clifford::CZ(0, 2)).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn gate_validation() {
        let mut t = StabilizerTableau::zero_state(2);
        assert_eq!(
            t.apply(Clifford::H(2)),
            Err(Error::InvalidQubit { qubit: 2, n: 2 })
        );
        assert_eq!(t.apply(Clifford::CZ(1, 1)), Err(Error::RepeatedQubit(1)));
    }

    #[test]
    fn measurement_rejects_non_hermitian() {
        let mut t = StabilizerTableau::zero_state(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            t.measure(&p("+iZ"), &mut rng),
            Err(Error::NonHermitian(1))
        ));
    }

    #[test]
    fn random_z_on_plus_is_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let shots = 10_000;
        let mut plus = 0;
        for _ in 0..shots {
            let mut t = plus_state(1);
            let m = t.measure(&p("Z"), &mut rng).unwrap();
            assert!(!m.deterministic);
            // repeat is deterministic and agrees
            let again = t.measure(&p("Z"), &mut rng).unwrap();
            assert!(again.deterministic);
            assert_eq!(again.outcome, m.outcome);
            plus += (m.outcome == 1) as u32;
        }
        let sd = (shots as f64 * 0.25).sqrt();
        assert!(
            (plus as f64 - shots as f64 / 2.0).abs() < 5.0 * sd,
            "{plus}"
        );
    }

    #[test]
    fn measuring_stabilizer_products_is_plus_one() {
        let g = ConnectivityGraph::path(6);
        let gens = graph_stabilizers(&g);
        let mut t = graph_state(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mask in 1u32..64 {
            let mut prod = PauliString::identity(6);
            for (i, s) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod = prod.multiply(s).unwrap();
                }
            }
            let m = t.measure(&prod, &mut rng).unwrap();
            assert_eq!(
                m,
                Measurement {
                    outcome: 1,
                    deterministic: true
                }
            );
        }
    }

    #[test]
    fn zero_probability_noise_is_inert() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut t = graph_state(&ConnectivityGraph::path(3));
        let before = t.clone();
        for _ in 0..100 {
            t.apply_channel(&PauliChannel::Depol1 { qubit: 1, p: 0.0 }, &mut rng)
                .unwrap();
            t.apply_channel(&PauliChannel::Depol2 { a: 0, b: 2, p: 0.0 }, &mut rng)
                .unwrap();
        }
        assert_eq!(t, before);
        assert_eq!(readout_flip(true, 0.0, &mut rng), Ok(true));
    }

    #[test]
    fn probabilities_validated() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut t = StabilizerTableau::zero_state(1);
        assert_eq!(
            t.apply_channel(&PauliChannel::Depol1 { qubit: 0, p: 1.5 }, &mut rng),
            Err(Error::InvalidProbability(1.5))
        );
        assert!(readout_flip(false, -0.1, &mut rng).is_err());
    }

    #[test]
    fn full_depol1_on_plus_gives_minus_third() {
        // (XρX + YρY + ZρZ)/3 on |+⟩: ⟨X⟩ = (1 - 1 - 1)/3.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 100_000;
        let mut sum = 0i64;
        for _ in 0..trials {
            let mut t = plus_state(1);
            t.apply_channel(&PauliChannel::Depol1 { qubit: 0, p: 1.0 }, &mut rng)
                .unwrap();
            sum += t.peek(&p("X")).unwrap().unwrap() as i64;
        }
        let mean = sum as f64 / trials as f64;
        let var = 1.0 - 1.0 / 9.0;
        let se = (var / trials as f64).sqrt();
        assert!((mean + 1.0 / 3.0).abs() < 5.0 * se, "{mean}");
    }

    #[test]
    fn full_depol2_washes_out_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trials = 50_000;
        let obs = [p("XZ"), p("ZX"), p("YY"), p("XI")];
        let mut sums = [0i64; 4];
        for _ in 0..trials {
            let mut t = graph_state(&ConnectivityGraph::path(2));
            t.apply_channel(
                &PauliChannel::Depol2 {
                    a: 0,
                    b: 1,
                    p: 15.0 / 16.0,
                },
                &mut rng,
            )
            .unwrap();
            for (s, o) in sums.iter_mut().zip(&obs) {
                *s += t.peek(o).unwrap().unwrap_or(0) as i64;
            }
        }
        // XI is not a stabilizer: always random, expectation 0 exactly.
        assert_eq!(sums[3], 0);
        let se = (1.0 / trials as f64).sqrt();
        for s in &sums[..3] {
            assert!((*s as f64 / trials as f64).abs() < 5.0 * se);
        }
    }
}
