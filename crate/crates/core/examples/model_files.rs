//! Model and certificate files, as read and written by the command-line
//! tool.

use commham::io::{certificate_to_json, load_model, save_certificate, save_model, load_certificate};
use commham::lattice::LatticeSpec;
use commham::model::{gen_random, RandomMethod};
use commham::prover::exhaustive_search;
use commham::verifier::Verifier;

fn main() -> commham::Result<()> {
    let dir = std::env::temp_dir().join("commham-example");
    std::fs::create_dir_all(&dir)?;
    let model_path = dir.join("model.json");
    let cert_path = dir.join("cert.json");

    let model = gen_random(LatticeSpec::open(3, 3)?, 4, RandomMethod::SignedToric);
    save_model(&model, &model_path)?;
    let loaded = load_model(&model_path)?;
    let exact = model.terms().zip(loaded.terms()).all(|((_, a), (_, b))| a == b);
    println!("wrote {} ({} bytes), reload exact: {exact}", model_path.display(), std::fs::metadata(&model_path)?.len());

    let verifier = Verifier::new(&loaded)?;
    if let Some(found) = exhaustive_search(&verifier, None, 26)? {
        save_certificate(&found.certificate, &cert_path)?;
        println!("{}", certificate_to_json(&found.certificate)?);
        let verdict = verifier.verify(&load_certificate(&cert_path)?, None)?;
        println!("reloaded certificate accepted: {}", verdict.accept);
    }
    println!("try: commham verify {} {}", model_path.display(), cert_path.display());
    Ok(())
}
