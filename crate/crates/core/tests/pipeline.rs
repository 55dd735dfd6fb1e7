mod common;

use std::collections::BTreeMap;

use commham::decompose::VertexDecomposition;
use commham::lattice::{Color, VertexId};
use commham::linalg::{herm_eig, identity, union_labels, Matrix, QubitOperator};
use commham::model::{gen_random, gen_toric, RandomMethod};
use commham::prover::{exhaustive_search, greedy_search, DEFAULT_LABEL_CAP};
use commham::verifier::{build_overlap_graph, contract_in_order, Certificate, ComponentShape, Verifier};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{ferromagnet, open, periodic, small_suite};

fn random_certificate(v: &Verifier, rng: &mut ChaCha8Rng) -> Certificate {
    let mut cert = Certificate::zeros(v.certificate_space());
    for l in cert.alpha.values_mut().chain(cert.beta.values_mut()) {
        *l = rng.random_range(0..2);
    }
    cert
}

fn on(op: &QubitOperator, labels: &[usize]) -> Matrix {
    op.embed(labels).unwrap().into_matrix()
}

/// Slicing the whole black layer equals the product of the per-plaquette
/// sandwiches.
#[test]
fn sliced_layer_factorizes() {
    for seed in 0..3 {
        for method in [RandomMethod::RotatedClassical, RandomMethod::SignedToric] {
            let model = gen_random(open(3, 3), seed, method);
            let v = Verifier::new(&model).unwrap();
            for color in [Color::Black, Color::White] {
                // everything lives on the qubits this layer touches
                let ops = v.projectors().layer(color);
                let labels = union_labels(&ops);
                let dim = 1 << labels.len();
                let layer: Matrix = ops.iter().fold(identity(dim), |acc, op| acc * on(op, &labels));
                let space = v.certificate_space();
                for i in 0..space.count().unwrap() {
                    let cert = Certificate::from_index(space, i);
                    let mut slicer = identity(dim);
                    let split = v.decomposition().layer(color);
                    for (vertex, label) in cert.labels(color) {
                        let pi = split.get(*vertex).slice_projector(*label).unwrap();
                        let q = v.lattice().vertex_index(*vertex);
                        slicer *= on(&QubitOperator::new(vec![q], pi).unwrap(), &labels);
                    }
                    let sliced = v.apply_certificate(&cert).unwrap();
                    let product = sliced
                        .layer(color)
                        .values()
                        .fold(identity(dim), |acc, op| acc * on(op, &labels));
                    let projected = &slicer * &layer * &slicer;
                    assert!((projected - product).norm() <= 1e-8, "seed {seed} {method:?} {color:?}");
                }
            }
        }
    }
}

#[test]
fn effective_states_are_psd_and_obey_dot_cross() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut models: Vec<_> = small_suite().into_iter().map(|i| i.model).collect();
    for seed in 0..3 {
        models.push(gen_random(open(5, 5), seed, RandomMethod::RotatedClassical));
        models.push(gen_random(periodic(6, 4), seed, RandomMethod::SignedToric));
    }
    for model in &models {
        let v = Verifier::new(model).unwrap();
        for _ in 0..8 {
            let cert = random_certificate(&v, &mut rng);
            let sliced = v.apply_certificate(&cert).unwrap();
            let states = v.effective_states(&sliced, &cert).unwrap();
            let mut holders: BTreeMap<(usize, Color), usize> = BTreeMap::new();
            for s in states.black.iter().chain(&states.white) {
                let (eigs, _) = herm_eig(s.op.matrix()).unwrap();
                assert!(eigs.iter().all(|&e| e >= -1e-9), "{}: {eigs:?}", s.plaquette);
                for &q in s.support() {
                    *holders.entry((q, s.color())).or_default() += 1;
                    let vtx = v.lattice().vertex_at(q);
                    assert!(!v.decomposition().black.is_split(vtx) && !v.decomposition().white.is_split(vtx));
                    // pruned: the state acts non-trivially on every support qubit
                    assert!(!s.op.acts_trivially_on(q, 1e-9).unwrap());
                }
            }
            assert!(holders.values().all(|&c| c == 1));
        }
    }
}

#[test]
fn contraction_order_does_not_matter_on_real_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for seed in 0..4 {
        let model = gen_random(open(5, 4), seed, RandomMethod::RotatedClassical);
        let v = Verifier::new(&model).unwrap();
        for _ in 0..6 {
            let cert = random_certificate(&v, &mut rng);
            let sliced = v.apply_certificate(&cert).unwrap();
            let states = v.effective_states(&sliced, &cert).unwrap();
            let graph = build_overlap_graph(&states.black, &states.white, v.lattice()).unwrap();
            for comp in graph.components() {
                let reference = contract_in_order(&graph, &comp.nodes).unwrap();
                let starts: Vec<usize> = match comp.shape {
                    ComponentShape::Isolated => continue,
                    ComponentShape::Path => comp.nodes.iter().copied().filter(|&n| graph.degree(n) == 1).collect(),
                    ComponentShape::Cycle => comp.nodes.clone(),
                };
                for start in starts {
                    for &first in graph.neighbours(start) {
                        let order = graph.walk(start, Some(first));
                        assert_eq!(order.len(), comp.nodes.len());
                        let value = contract_in_order(&graph, &order).unwrap();
                        assert!((value - reference).norm() <= 1e-12, "{value} vs {reference}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn degree_bound_holds_across_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 0..4 {
        let models = [
            gen_random(open(6, 5), seed, RandomMethod::RotatedClassical),
            gen_random(periodic(6, 6), seed, RandomMethod::RotatedClassical),
            gen_random(periodic(6, 6), seed, RandomMethod::SignedToric),
            gen_random(open(7, 6), seed, RandomMethod::DiagonalField),
        ];
        for model in &models {
            let v = Verifier::new(model).unwrap();
            for _ in 0..4 {
                let cert = random_certificate(&v, &mut rng);
                let sliced = v.apply_certificate(&cert).unwrap();
                let states = v.effective_states(&sliced, &cert).unwrap();
                let graph = build_overlap_graph(&states.black, &states.white, v.lattice()).unwrap();
                assert!(graph.max_degree() <= 2);
            }
        }
    }
}

#[test]
fn rotated_vertices_split_in_both_layers() {
    let model = gen_random(open(4, 4), 3, RandomMethod::RotatedClassical);
    let v = Verifier::new(&model).unwrap();
    for color in [Color::Black, Color::White] {
        for x in 1..3 {
            for y in 1..3 {
                let d = v.decomposition().layer(color).get(VertexId::new(x, y));
                assert!(matches!(d, VertexDecomposition::Split { .. }), "{color:?} ({x},{y})");
            }
        }
    }
}

#[test]
fn ferromagnet_all_up_certificate_accepts() {
    let model = ferromagnet(open(3, 3), 0.0);
    let v = Verifier::new(&model).unwrap();
    let cert = Certificate::zeros(v.certificate_space());
    let verdict = v.verify(&cert, None).unwrap();
    assert!(verdict.accept);
    assert!(verdict.omega.log2_magnitude >= -18.0);
}

#[test]
fn huge_lattice_stays_in_log_domain() {
    let model = gen_toric(open(40, 40));
    let v = Verifier::new(&model).unwrap();
    let verdict = v.verify(&Certificate::zeros(v.certificate_space()), None).unwrap();
    assert!(verdict.accept);
    assert!(verdict.omega.log2_magnitude.is_finite());
    assert!(verdict.omega.log2_magnitude < -1075.0);
    // 2^log2 is below the smallest subnormal double
    assert_eq!(verdict.omega.value(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn returned_certificates_always_verify(seed in any::<u64>(), method in 0usize..3) {
        let method = [RandomMethod::RotatedClassical, RandomMethod::SignedToric, RandomMethod::DiagonalField][method];
        let model = gen_random(open(3, 3), seed, method);
        let v = Verifier::new(&model).unwrap();
        for found in [
            exhaustive_search(&v, None, DEFAULT_LABEL_CAP).unwrap(),
            greedy_search(&v, None, seed, 4).unwrap(),
        ]
        .into_iter()
        .flatten()
        {
            let again = v.verify(&found.certificate, None).unwrap();
            prop_assert_eq!(again, found.verdict);
        }
    }

    #[test]
    fn greedy_never_returns_a_rejected_certificate(seed in any::<u64>()) {
        let model = gen_random(open(4, 3), seed, RandomMethod::DiagonalField);
        let v = Verifier::new(&model).unwrap();
        if let Some(found) = greedy_search(&v, None, seed, 3).unwrap() {
            prop_assert!(found.verdict.accept);
        }
    }
}
