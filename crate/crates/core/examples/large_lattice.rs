//! Verification cost grows with the lattice, not with 2^N. Ω quickly drops
//! below the smallest double, so it is tracked as log2.

use std::time::Instant;

use commham::lattice::LatticeSpec;
use commham::model::gen_toric;
use commham::prover::greedy_search;
use commham::verifier::Verifier;

fn main() -> commham::Result<()> {
    for side in [10, 20, 40] {
        let model = gen_toric(LatticeSpec::open(side, side)?);
        let start = Instant::now();
        let verifier = Verifier::new(&model)?;
        let setup = start.elapsed();
        let found = greedy_search(&verifier, None, 0, 1)?.expect("toric code is satisfiable");
        let start = Instant::now();
        let verdict = verifier.verify(&found.certificate, None)?;
        println!(
            "{side}x{side}: {} qubits, log2 omega {:.3}, linear {:e}, setup {setup:.1?}, verify {:.1?}",
            side * side,
            verdict.omega.log2_magnitude,
            verdict.omega.value(),
            start.elapsed()
        );
    }
    Ok(())
}
