//! Cross-module invariants that don't belong to any single unit test:
//! representation properties at larger sizes, density of the auxiliary
//! generators, and the compiler's error-accumulation bookkeeping.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use braidloom::braid::{plat_close, plat_writhe, trace_components, BraidWord};
use braidloom::compiler::{compile_circuit, parse_circuit, CircuitIR, Gate};
use braidloom::density::{aux_su2_block, build_net, su2_generate, GeneratorSet};
use braidloom::encoding::EncodedBasis;
use braidloom::numerics::matrix::{haar_special_unitary, haar_unitary, unitary_eigen, ComplexMatrix};
use braidloom::pathmodel::{enumerate_basis, phi_matrix, rho_generator, ModelParams, RhoCache};

#[test]
fn unitarity_at_ten_strands() {
    for k in [5usize, 7, 8, 10, 12] {
        let basis = enumerate_basis(10, k, None).unwrap();
        let id = ComplexMatrix::identity(basis.len());
        for i in 1..10 {
            let rho = rho_generator(i, &basis, 1).unwrap();
            assert!(
                rho.mul(&rho.adjoint()).sub(&id).frobenius_norm() < 1e-10,
                "k = {k}, i = {i}"
            );
        }
    }
}

#[test]
fn sectors_are_preserved_exactly() {
    for (n, k) in [(4usize, 5usize), (6, 7), (8, 8)] {
        let basis = enumerate_basis(n, k, None).unwrap();
        for i in 1..n {
            let phi = phi_matrix(i, &basis).unwrap();
            for (p, pp) in basis.paths().iter().enumerate() {
                for (q, qq) in basis.paths().iter().enumerate() {
                    if pp.endpoint() != qq.endpoint() {
                        assert_eq!(
                            phi[(p, q)],
                            Complex64::new(0.0, 0.0),
                            "cross-sector entry at n={n}, k={k}, i={i}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn all_mixing_blocks_share_one_eigenvalue_pair() {
    let k = 7;
    let params = ModelParams::new(k).unwrap();
    let basis = enumerate_basis(8, k, Some(1)).unwrap();
    let a_inv = Complex64::new(1.0, 0.0) / params.a;
    let nontrivial = -a_inv * Complex64::from_polar(1.0, -2.0 * params.theta);
    for i in 1..8 {
        let rho = rho_generator(i, &basis, 1).unwrap();
        let (vals, _) = unitary_eigen(&rho).unwrap();
        for v in vals {
            assert!(
                (v - a_inv).norm() < 1e-10 || (v - nontrivial).norm() < 1e-10,
                "generator {i}: eigenvalue {v}"
            );
        }
    }
}

#[test]
fn identity_plats_have_trivial_components() {
    for n in [2usize, 4, 6, 8] {
        let d = plat_close(&BraidWord::identity(n)).unwrap();
        let link = trace_components(&d);
        assert_eq!(link.components(), n / 2);
        assert_eq!(plat_writhe(&BraidWord::identity(n)).unwrap(), 0);
    }
}

#[test]
fn auxiliary_block_generators_are_dense() {
    // a 0.3-net over the 2x2 auxiliary blocks reaches full sampled coverage
    let gens = aux_su2_block(7).unwrap();
    let net = build_net(&gens, 0.3, 12);
    assert!(
        net.coverage.unwrap().fraction >= 0.99,
        "coverage {:?}",
        net.coverage
    );
}

#[test]
fn full_dimension_net_transfer() {
    // the fourteen-dimensional auxiliary generators transfer to the true
    // generators at large k exactly like their block restrictions do
    use braidloom::density::{aux_generators, build_commutator_net, transfer_net};
    let hat_gens = aux_generators(7).unwrap();
    let hat_net = build_commutator_net(&hat_gens, 0.5, 1);
    assert!(hat_net.entries.len() > 10);
    let k = 140;
    let k_gens = GeneratorSet::path_model(k).unwrap();
    let t = transfer_net(&hat_net, &k_gens, k, 7).unwrap();
    assert!(
        t.max_deviation < 0.1,
        "deviation {} at dim 14",
        t.max_deviation
    );
}

#[test]
fn su2_synthesis_at_k8() {
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    let gens = GeneratorSet::su2_block(8).unwrap();
    for _ in 0..5 {
        let target = haar_special_unitary(2, &mut rng);
        let s = su2_generate(&gens.elements()[0], &gens.elements()[1], &target, 0.05).unwrap();
        assert!(s.distance < 0.05, "measured {}", s.distance);
    }
}

#[test]
fn alpha_is_the_encoded_zero_string() {
    // <0...0 encoded| rho(b) |0...0 encoded> IS <alpha| rho(b) |alpha>:
    // the zig-zag walk and the encoded all-zeros string are the same basis
    // vector, so the amplitudes agree identically.
    let code = EncodedBasis::new(2, 7).unwrap();
    let alpha_steps: Vec<i8> = (0..8).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    assert_eq!(
        code.basis().position(&alpha_steps).unwrap(),
        code.path_of(0)
    );
    // and the expectation computed either way is the same number
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let b = {
        let letters: Vec<i32> = (0..6)
            .map(|_| {
                let i = rng.random_range(1..8i32);
                if rng.random_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        BraidWord::new(8, letters).unwrap()
    };
    let cache = RhoCache::new(code.basis()).unwrap();
    let mut v = vec![Complex64::new(0.0, 0.0); code.dim()];
    v[code.path_of(0)] = Complex64::new(1.0, 0.0);
    let w = cache.apply_word(&b, &v);
    let via_code = w[code.path_of(0)];
    let via_alpha = braidloom::pathmodel::alpha_expectation(&b, 7).unwrap();
    assert!((via_code - via_alpha).norm() < 1e-12);
}

#[test]
fn compiled_amplitude_error_stays_within_the_certified_bound() {
    // ten random two-gate circuits through a coarse net: the end-to-end
    // phase-aligned amplitude error never exceeds the summed per-gate
    // encoded-subspace distances
    let gens = GeneratorSet::path_model(7).unwrap();
    let net = build_net(&gens, 0.5, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2003);
    for _ in 0..10 {
        let gates = (0..2)
            .map(|_| Gate {
                name: "U".into(),
                position: 1,
                matrix: haar_unitary(4, &mut rng),
            })
            .collect();
        let c = CircuitIR { qubits: 2, gates };
        let r = compile_circuit(&c, 7, 0.5, &net, &gens).unwrap();
        assert!(
            r.amplitude_error <= r.certified_bound + 1e-9,
            "error {} vs bound {}",
            r.amplitude_error,
            r.certified_bound
        );
    }
}

#[test]
fn exact_gate_baseline_via_parse_path() {
    // the same certification as AC-9 but through the text format
    let text = "qubits 2\nHI 1\nCNOT 1\nIT 1\n";
    let c = parse_circuit(text).unwrap();
    let exact = braidloom::compiler::exact_encoded_amplitude(&c, 7).unwrap();
    let direct = braidloom::compiler::circuit_amplitude(&c);
    assert!((exact - direct).norm() < 1e-9);
}

#[test]
fn code_preserving_generators_compile_to_one_letter() {
    // six of the seven generators at k = 7 map the encoded subspace to
    // itself exactly (the fourth leaks); for a preserving one, its decoded
    // four-by-four action compiles to the single-letter word
    let k = 7;
    let gens = GeneratorSet::path_model(k).unwrap();
    let code = EncodedBasis::new(2, k).unwrap();
    let rho3 = &gens.elements()[2];
    // leakage check: columns over code paths stay in the code span
    let mut leak: f64 = 0.0;
    for &cj in code.code_indices() {
        for p in 0..code.dim() {
            if !code.code_indices().contains(&p) {
                leak = leak.max(rho3[(p, cj)].norm());
            }
        }
    }
    assert!(leak < 1e-14, "third generator leaks {leak}");
    let decoded = ComplexMatrix::from_fn(4, |i, j| {
        rho3[(code.path_of(i), code.path_of(j))]
    });
    let net = build_net(&gens, 0.8, 1);
    let s = braidloom::compiler::compile_gate(&decoded, k, 1e-6, &net, &gens).unwrap();
    // rho_1 and rho_3 share this decoded action (both are diagonal in the
    // first encoded bit), so either single letter is an exact hit
    assert_eq!(s.word.len(), 1);
    assert!(s.word.letters() == [1] || s.word.letters() == [3]);
    assert!(s.s_distance < 1e-9);
}

#[test]
fn three_qubit_two_gate_compilation_bookkeeping() {
    // gates at both positions of a three-qubit circuit: the embedded words
    // act on disjoint strand blocks of the twelve-strand group and the
    // certified bound still dominates the measured amplitude error
    let gens = GeneratorSet::path_model(7).unwrap();
    let net = build_net(&gens, 0.5, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2004);
    for _ in 0..3 {
        let gates = vec![
            Gate {
                name: "U".into(),
                position: 1,
                matrix: haar_unitary(4, &mut rng),
            },
            Gate {
                name: "U".into(),
                position: 2,
                matrix: haar_unitary(4, &mut rng),
            },
        ];
        let c = CircuitIR { qubits: 3, gates };
        let r = compile_circuit(&c, 7, 0.5, &net, &gens).unwrap();
        assert_eq!(r.braid.strands(), 12);
        assert!(
            r.amplitude_error <= r.certified_bound + 1e-9,
            "error {} vs bound {}",
            r.amplitude_error,
            r.certified_bound
        );
        // the second gate's letters are shifted by four strands
        if r.gates[1].word_len > 0 && r.braid.crossings() > 0 {
            assert!(r.braid.letters().iter().any(|&l| l.unsigned_abs() > 4));
        }
    }
}
