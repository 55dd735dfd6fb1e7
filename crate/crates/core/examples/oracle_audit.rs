//! Brute-force audit of a small model: tr[Π_B Π_W] is an integer, and it
//! equals the sum of Ω over every certificate.

use commham::lattice::LatticeSpec;
use commham::model::{gen_random, RandomMethod};
use commham::oracle::{as_integer, certificate_sum, ground_dim, SumMethod};

fn main() -> commham::Result<()> {
    for seed in 0..4 {
        let model = gen_random(LatticeSpec::open(3, 3)?, seed, RandomMethod::RotatedClassical);
        let dense = certificate_sum(&model, SumMethod::Dense)?;
        let chain = certificate_sum(&model, SumMethod::Chain)?;
        println!(
            "seed {seed}: tr[Pi_B Pi_W] = {} (ground dim {}), {} certificates, sum dense {:.3e} chain {:.3e}",
            as_integer(dense.total_overlap)?,
            ground_dim(&model)?,
            dense.table.len(),
            dense.sum,
            chain.sum,
        );
        for ((cert, a), (_, b)) in dense.table.iter().zip(&chain.table) {
            if *a > 1e-12 {
                println!("    alpha {:?} beta {:?}: {a:.6} / {b:.6}", cert.alpha.values().collect::<Vec<_>>(), cert.beta.values().collect::<Vec<_>>());
            }
        }
    }
    Ok(())
}
