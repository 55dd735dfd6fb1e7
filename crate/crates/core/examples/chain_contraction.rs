//! What the verifier actually contracts: after slicing, most plaquettes
//! collapse to scalars and the rest overlap along short chains. Each chain
//! is contracted with a small frontier and compared with a dense trace.

use commham::lattice::{Color, LatticeSpec};
use commham::linalg::{trace_product_embedded, DEFAULT_QUBIT_CAP};
use commham::model::{gen_random, RandomMethod};
use commham::prover::exhaustive_search;
use commham::verifier::{build_overlap_graph, contract_component, Verifier};

fn main() -> commham::Result<()> {
    let lattice = LatticeSpec::open(5, 4)?;
    // first seed with a joint ground state; its best certificate has
    // non-zero chains
    let (verifier, cert) = (0..)
        .find_map(|seed| {
            let model = gen_random(lattice, seed, RandomMethod::RotatedClassical);
            let verifier = Verifier::new(&model).ok()?;
            let found = exhaustive_search(&verifier, None, 26).ok()??;
            println!("seed {seed}");
            Some((verifier, found.certificate))
        })
        .expect("some seed is satisfiable");

    let sliced = verifier.apply_certificate(&cert)?;
    let states = verifier.effective_states(&sliced, &cert)?;
    let scalars = states.black.iter().chain(&states.white).filter(|s| s.is_scalar()).count();
    println!("{} vertex overlaps, {scalars} scalar plaquettes", states.vertex_overlaps.len());

    let graph = build_overlap_graph(&states.black, &states.white, verifier.lattice())?;
    println!("overlap graph: {} nodes, max degree {}", graph.nodes.len(), graph.max_degree());
    for comp in graph.components() {
        let names: Vec<String> = comp.nodes.iter().map(|&n| graph.nodes[n].plaquette.to_string()).collect();
        let chain = contract_component(&graph, &comp)?;
        let ops: Vec<_> = comp.nodes.iter().map(|&n| graph.nodes[n].op.clone()).collect();
        let (black, white): (Vec<_>, Vec<_>) = ops
            .into_iter()
            .zip(&comp.nodes)
            .partition(|(_, &n)| graph.nodes[n].color() == Color::Black);
        let ordered: Vec<_> = black.into_iter().chain(white).map(|(op, _)| op).collect();
        let dense = trace_product_embedded(&ordered, DEFAULT_QUBIT_CAP)?.re;
        println!("{:?} {}: chain {chain:.12} dense {dense:.12}", comp.shape, names.join(" - "));
    }

    let omega = verifier.compute_omega(&cert)?;
    println!("log2 omega = {}", omega.log2_magnitude);
    Ok(())
}
