mod common;

use bellmark_core::circuit::{cz_via_path, LocalComplementation};
use bellmark_core::{
    graph_stabilizers, BellOperator, Clifford, ConnectivityGraph, Family, Pauli, PauliString,
    StabilizerTableau,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn multiply_matches_dense_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let n = rng.random_range(1..=4);
        let mut a = random_pauli(n, &mut rng);
        if rng.random_bool(0.5) {
            a = format!("+i{}", a.unsigned().to_string().trim_start_matches('+'))
                .parse()
                .unwrap();
        }
        let b = random_pauli(n, &mut rng);
        let ab = a.multiply(&b).unwrap();
        let dense = matmul(&pauli_matrix(&a), &pauli_matrix(&b));
        assert!(
            max_diff(&pauli_matrix(&ab), &dense) < TOL,
            "{a} * {b} = {ab}"
        );
        let comm = matmul(&pauli_matrix(&b), &pauli_matrix(&a));
        let commutes = max_diff(&dense, &comm) < TOL;
        assert_eq!(a.commutes(&b).unwrap(), commutes);
    }
}

#[test]
fn multiply_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let n = rng.random_range(1..=70);
        let (a, b, c) = (
            random_pauli(n, &mut rng),
            random_pauli(n, &mut rng),
            random_pauli(n, &mut rng),
        );
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn two_qubit_product_example() {
    let a: PauliString = "+XZ".parse().unwrap();
    let b: PauliString = "+ZX".parse().unwrap();
    let yy: PauliString = "+YY".parse().unwrap();
    assert_eq!(a.multiply(&b).unwrap(), yy);
    assert!(
        max_diff(
            &matmul(&pauli_matrix(&a), &pauli_matrix(&b)),
            &pauli_matrix(&yy)
        ) < TOL
    );
}

#[test]
fn tableau_matches_state_vector_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let mut t = StabilizerTableau::zero_state(n);
        let mut psi = zero_state(n);
        for _ in 0..rng.random_range(0..40) {
            let g = random_clifford(n, &mut rng);
            t.apply(g).unwrap();
            apply_gate(&mut psi, n, g);
        }
        t.check_invariants().unwrap();
        // every single-qubit Pauli and a batch of random strings
        let mut observables: Vec<PauliString> = (0..n)
            .flat_map(|q| {
                [Pauli::X, Pauli::Y, Pauli::Z].map(|p| PauliString::single(n, q, p).unwrap())
            })
            .collect();
        observables.extend((0..20).map(|_| random_pauli(n, &mut rng)));
        for obs in &observables {
            let e = expectation(&psi, obs);
            assert!(e.im.abs() < TOL);
            match t.peek(obs).unwrap() {
                Some(s) => assert!((e.re - s as f64).abs() < TOL, "{obs}: {e} vs {s}"),
                None => assert!(e.re.abs() < TOL, "{obs}: {e} should vanish"),
            }
        }
    }
}

#[test]
fn random_measurement_collapses_like_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let mut t = StabilizerTableau::zero_state(n);
        let mut psi = zero_state(n);
        for _ in 0..25 {
            let g = random_clifford(n, &mut rng);
            t.apply(g).unwrap();
            apply_gate(&mut psi, n, g);
        }
        let obs = random_pauli(n, &mut rng);
        if obs.is_identity_letters() {
            continue;
        }
        let m = t.measure(&obs, &mut rng).unwrap();
        t.check_invariants().unwrap();
        // project |psi> onto the observed eigenspace
        let p_psi = apply_pauli(&psi, &obs);
        let s = m.outcome as f64;
        let mut proj: Vec<_> = psi
            .iter()
            .zip(&p_psi)
            .map(|(a, b)| (a + b * s) * 0.5)
            .collect();
        let norm = inner(&proj, &proj).re.sqrt();
        assert!(norm > 0.5, "outcome {} impossible", m.outcome);
        proj.iter_mut().for_each(|a| *a /= norm);
        for g in t.stabilizers() {
            assert!((expectation(&proj, g).re - 1.0).abs() < TOL);
        }
    }
}

#[test]
fn local_complementation_layer_realizes_graph_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let n = rng.random_range(2..=10);
        let g = random_graph(n, 0.4, &mut rng);
        let v = rng.random_range(0..n);
        let lc = LocalComplementation::on(&g, v);
        let target = g.local_complement(v).unwrap();
        // dense
        let mut psi = graph_state(&g);
        for c in lc.cliffords() {
            apply_gate(&mut psi, n, c);
        }
        assert!((overlap(&psi, &graph_state(&target)) - 1.0).abs() < TOL);
        // tableau
        let mut t = StabilizerTableau::zero_state(n);
        t.apply_all((0..n).map(Clifford::H)).unwrap();
        t.apply_all(g.edges().map(|(a, b)| Clifford::CZ(a, b)))
            .unwrap();
        t.apply_all(lc.cliffords()).unwrap();
        for s in graph_stabilizers(&target) {
            assert_eq!(t.peek(&s).unwrap(), Some(1));
        }
    }
}

#[test]
fn cz_via_path_equals_direct_endpoint_cz() {
    for m in 2..=6 {
        // an extra qubit m is entangled with the first path vertex
        let n = m + 1;
        let mut state = ConnectivityGraph::empty(n);
        state.add_edge(0, m).unwrap();
        let path: Vec<usize> = (0..m).collect();
        let (frag, after) = cz_via_path(&state, &path).unwrap();
        assert_eq!(frag.depth(), 3 * (m - 2) + 1);
        let mut psi = graph_state(&state);
        for c in frag.cliffords() {
            apply_gate(&mut psi, n, c);
        }
        let mut direct = graph_state(&state);
        apply_gate(&mut direct, n, Clifford::CZ(0, m - 1));
        assert!((overlap(&psi, &direct) - 1.0).abs() < TOL, "m = {m}");
        let mut expect = state.clone();
        expect.toggle_edge(0, m - 1).unwrap();
        assert_eq!(after, expect);
    }
}

fn product_form(op: &BellOperator) -> Mat {
    let n = op.n();
    let d = 1 << n;
    let g: Vec<Mat> = op
        .order()
        .iter()
        .map(|&v| pauli_matrix(&op.generators()[v]))
        .collect();
    let one_plus = |m: &Mat| add(&identity(d), m);
    match op.family() {
        Family::Ghz => g[1..]
            .iter()
            .fold(g[0].clone(), |acc, gi| matmul(&acc, &one_plus(gi))),
        Family::Lc => (0..n / 3).fold(identity(d), |acc, i| {
            let block = matmul(
                &matmul(&one_plus(&g[3 * i]), &g[3 * i + 1]),
                &one_plus(&g[3 * i + 2]),
            );
            matmul(&acc, &block)
        }),
    }
}

#[test]
fn term_sums_equal_product_forms() {
    let cases = [
        (Family::Ghz, 2),
        (Family::Ghz, 3),
        (Family::Ghz, 4),
        (Family::Ghz, 5),
        (Family::Ghz, 6),
        (Family::Lc, 3),
        (Family::Lc, 6),
    ];
    for (family, n) in cases {
        let op = BellOperator::canonical(family, n).unwrap();
        let d = 1 << n;
        let sum = (0..op.term_count()).fold(vec![vec![c(0.0, 0.0); d]; d], |acc, j| {
            add(&acc, &pauli_matrix(&op.term(j).unwrap()))
        });
        assert!(max_diff(&sum, &product_form(&op)) < TOL, "{family} n={n}");
    }
}

#[test]
fn terms_have_unit_expectation_on_graph_state() {
    let state = ConnectivityGraph::path_through(6, &[2, 0, 5, 1, 4, 3]).unwrap();
    let op = BellOperator::build(Family::Lc, &state).unwrap();
    let psi = graph_state(&state);
    for j in 0..op.term_count() {
        assert!((expectation(&psi, &op.term(j).unwrap()).re - 1.0).abs() < TOL);
    }
    let star = ConnectivityGraph::star(5, 3).unwrap();
    let op = BellOperator::build(Family::Ghz, &star).unwrap();
    let psi = graph_state(&star);
    for j in 0..op.term_count() {
        assert!((expectation(&psi, &op.term(j).unwrap()).re - 1.0).abs() < TOL);
    }
}

#[test]
fn white_noise_mixture_gives_alpha_q() {
    // Tr[(α|G><G| + (1-α)I/2^n) B_j] = α for every non-identity term.
    let alpha = 0.37;
    for (family, n) in [(Family::Ghz, 4), (Family::Lc, 6)] {
        let op = BellOperator::canonical(family, n).unwrap();
        let state = match family {
            Family::Ghz => ConnectivityGraph::star(n, 0).unwrap(),
            Family::Lc => ConnectivityGraph::path(n),
        };
        let psi = graph_state(&state);
        let d = (1 << n) as f64;
        let mut total = 0.0;
        for j in 0..op.term_count() {
            let term = op.term(j).unwrap();
            let pure = expectation(&psi, &term).re;
            let trace = pauli_matrix(&term)
                .iter()
                .enumerate()
                .map(|(i, r)| r[i])
                .sum::<num_complex::Complex64>();
            total += alpha * pure + (1.0 - alpha) * trace.re / d;
        }
        assert!((total - alpha * op.bounds().q).abs() < 1e-9);
    }
}

#[test]
fn full_single_qubit_depolarization_dense_channel() {
    // ρ = |+><+|, ρ' = (XρX + YρY + ZρZ)/3, then <X> = Tr(ρ'X)
    let plus = [c(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
    let x: PauliString = "+X".parse().unwrap();
    let mut ex = 0.0;
    for p in ["+X", "+Y", "+Z"] {
        let after = apply_pauli(&plus, &p.parse().unwrap());
        ex += expectation(&after, &x).re / 3.0;
    }
    assert!((ex + 1.0 / 3.0).abs() < TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 100_000;
    let mut sum = 0i64;
    for _ in 0..trials {
        let mut t = StabilizerTableau::zero_state(1);
        t.apply(Clifford::H(0)).unwrap();
        t.apply_channel(
            &bellmark_core::PauliChannel::Depol1 { qubit: 0, p: 1.0 },
            &mut rng,
        )
        .unwrap();
        sum += t.measure(&x, &mut rng).unwrap().outcome as i64;
    }
    let mean = sum as f64 / trials as f64;
    let sd = (1.0 - ex * ex).sqrt() / (trials as f64).sqrt();
    assert!((mean - ex).abs() < 5.0 * sd, "{mean}");
}

#[test]
fn preparation_circuits_produce_their_graph_states() {
    use bellmark_core::circuit::{
        prep_ghz_connectivity, prep_ghz_line, prep_lc_path, prep_lc_spanning_tree,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = vec![prep_lc_path(6).unwrap(), prep_ghz_line(5).unwrap()];
    while cases.len() < 40 {
        let n = rng.random_range(2..=7);
        let g = random_graph(n, 0.35, &mut rng);
        if !g.is_connected() {
            continue;
        }
        for p in [
            prep_ghz_connectivity(&g).unwrap(),
            prep_lc_spanning_tree(&g).unwrap(),
        ] {
            p.circuit.check_on(&g).unwrap();
            cases.push(p);
        }
    }
    for p in cases {
        let n = p.circuit.n_qubits;
        let mut psi = zero_state(n);
        for c in p.circuit.cliffords() {
            apply_gate(&mut psi, n, c);
        }
        assert!(
            (overlap(&psi, &graph_state(&p.state)) - 1.0).abs() < TOL,
            "{:?}",
            p.family
        );
        if p.family.check_size(n).is_err() {
            continue;
        }
        let op = p.bell_operator().unwrap();
        for s in op.generators() {
            assert!((expectation(&psi, s).re - 1.0).abs() < TOL);
        }
    }
}
