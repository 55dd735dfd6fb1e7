//! Exhaustive and greedy certificate search, on a satisfiable Ising model
//! with a field and on a frustrated signed toric code.

use std::collections::BTreeSet;

use commham::lattice::{LatticeSpec, PlaquetteId};
use commham::model::{gen_ising, gen_signed_toric, IsingParams};
use commham::oracle::total_overlap;
use commham::prover::{exhaustive_search, greedy_search};
use commham::verifier::{Certificate, Verifier};

fn labels(cert: &Certificate) -> String {
    let fmt = |m: &std::collections::BTreeMap<_, u8>| {
        m.iter().map(|(v, l)| format!("{v}={l}")).collect::<Vec<_>>().join(" ")
    };
    format!("alpha [{}] beta [{}]", fmt(&cert.alpha), fmt(&cert.beta))
}

fn main() -> commham::Result<()> {
    let lattice = LatticeSpec::open(4, 3)?;
    let model = gen_ising(lattice, &IsingParams::uniform(&lattice, 1.0, -0.3));
    let verifier = Verifier::new(&model)?;
    println!("ising with field: tr[Pi_B Pi_W] = {:.6}", total_overlap(&model)?);
    if let Some(found) = exhaustive_search(&verifier, None, 26)? {
        println!("  exhaustive: log2 omega {:.4}, {}", found.verdict.omega.log2_magnitude, labels(&found.certificate));
    }
    if let Some(found) = greedy_search(&verifier, None, 1, 4)? {
        println!("  greedy:     log2 omega {:.4}, {}", found.verdict.omega.log2_magnitude, labels(&found.certificate));
    }

    // flipping one black sign on the torus leaves no joint ground state
    let torus = LatticeSpec::periodic(4, 4)?;
    let flipped: BTreeSet<PlaquetteId> = [PlaquetteId::new(0, 0)].into();
    let frustrated = gen_signed_toric(torus, &flipped);
    let verifier = Verifier::new(&frustrated)?;
    println!("frustrated torus: tr[Pi_B Pi_W] = {:.6}", total_overlap(&frustrated)?);
    println!("  exhaustive: {:?}", exhaustive_search(&verifier, None, 32)?.map(|f| f.verdict.accept));
    println!("  greedy:     {:?}", greedy_search(&verifier, None, 1, 4)?.map(|f| f.verdict.accept));
    Ok(())
}
