//! The toric code on a 4x4 torus: the all-zero certificate picks |0⟩ on
//! every vertex for the black layer and |+⟩ for the white layer, so Ω is
//! `|⟨0|+⟩|^(2N) = 2^-N`.

use commham::lattice::LatticeSpec;
use commham::model::gen_toric;
use commham::verifier::{Certificate, Verifier};

fn main() -> commham::Result<()> {
    let lattice = LatticeSpec::periodic(4, 4)?;
    let verifier = Verifier::new(&gen_toric(lattice))?;
    let space = verifier.certificate_space();
    println!(
        "{} qubits, {} black and {} white split vertices",
        lattice.n_vertices(),
        space.black.len(),
        space.white.len()
    );

    let cert = Certificate::zeros(space);
    let verdict = verifier.verify(&cert, None)?;
    println!("accept: {}", verdict.accept);
    println!("log2 omega: {:.12}", verdict.omega.log2_magnitude);
    println!("log2 threshold: {}", verdict.threshold_log2);
    for f in verdict.omega.factors.iter().take(4) {
        println!("  {} {}: {}", f.kind, f.id, f.value);
    }
    println!("  ... {} factors in total", verdict.omega.factors.len());
    Ok(())
}
