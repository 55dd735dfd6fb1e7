#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use commham::lattice::{Boundary, LatticeSpec, PlaquetteId};
use commham::linalg::{pauli_word, Matrix};
use commham::model::{gen_ising, gen_random, gen_signed_toric, gen_toric, CommutingModel, IsingParams, RandomMethod};

pub struct Instance {
    pub name: String,
    pub model: CommutingModel,
}

fn inst(name: impl Into<String>, model: CommutingModel) -> Instance {
    Instance {
        name: name.into(),
        model,
    }
}

pub fn open(lx: usize, ly: usize) -> LatticeSpec {
    LatticeSpec::new(lx, ly, Boundary::Open).unwrap()
}

pub fn periodic(lx: usize, ly: usize) -> LatticeSpec {
    LatticeSpec::new(lx, ly, Boundary::Periodic).unwrap()
}

pub fn identity_model(lattice: LatticeSpec) -> CommutingModel {
    let terms = lattice.plaquettes().into_iter().map(|p| (p, Matrix::zeros(16, 16))).collect();
    CommutingModel::new(lattice, terms).unwrap()
}

pub fn ferromagnet(lattice: LatticeSpec, field: f64) -> CommutingModel {
    gen_ising(lattice, &IsingParams::uniform(&lattice, 1.0, field))
}

/// The 4x4 torus with one black sign flipped: commuting, no joint ground state.
pub fn frustrated_torus() -> CommutingModel {
    let flipped: BTreeSet<PlaquetteId> = [PlaquetteId::new(0, 0)].into();
    gen_signed_toric(periodic(4, 4), &flipped)
}

/// Toric code on a 3x3 patch with one black sign flipped and one white
/// term removed.
fn doctored_toric() -> CommutingModel {
    let lattice = open(3, 3);
    let mut terms: BTreeMap<PlaquetteId, Matrix> = gen_toric(lattice).terms().map(|(p, m)| (*p, m.clone())).collect();
    terms.insert(PlaquetteId::new(0, 0), pauli_word("ZZZZ"));
    terms.insert(PlaquetteId::new(1, 0), Matrix::zeros(16, 16));
    CommutingModel::new(lattice, terms).unwrap()
}

/// Disjoint Bell-pair terms: each plaquette binds two of its corners into
/// a Bell state, along a diagonal for black and an edge for white.
fn bell_pairs() -> CommutingModel {
    let lattice = open(3, 3);
    let bell = |a: &str, b: &str| -(pauli_word(a) + pauli_word(b));
    let terms = [
        ((0, 0), bell("XIXI", "ZIZI")),
        ((1, 1), bell("IXIX", "IZIZ")),
        ((1, 0), bell("XXII", "ZZII")),
        ((0, 1), bell("XIIX", "ZIIZ")),
    ]
    .into_iter()
    .map(|((x, y), h)| (PlaquetteId::new(x, y), h))
    .collect();
    CommutingModel::new(lattice, terms).unwrap()
}

/// Commuting models on at most 12 qubits, small enough for every oracle.
pub fn small_suite() -> Vec<Instance> {
    let mut out = vec![
        inst("toric 3x3", gen_toric(open(3, 3))),
        inst("toric 4x3", gen_toric(open(4, 3))),
        inst("toric 3x4", gen_toric(open(3, 4))),
        inst("ferromagnet 3x3", ferromagnet(open(3, 3), 0.0)),
        inst("ferromagnet+field 3x3", ferromagnet(open(3, 3), 0.25)),
        inst("ferromagnet 4x3", ferromagnet(open(4, 3), 0.0)),
        inst("identity 3x3", identity_model(open(3, 3))),
        inst("doctored toric 3x3", doctored_toric()),
        inst("bell pairs 3x3", bell_pairs()),
    ];
    for seed in 0..5 {
        out.push(inst(format!("diagonal-field 3x3 #{seed}"), gen_random(open(3, 3), seed, RandomMethod::DiagonalField)));
    }
    for seed in 0..3 {
        out.push(inst(format!("diagonal-field 4x3 #{seed}"), gen_random(open(4, 3), seed, RandomMethod::DiagonalField)));
    }
    for seed in 0..4 {
        out.push(inst(format!("signed-toric 3x3 #{seed}"), gen_random(open(3, 3), seed, RandomMethod::SignedToric)));
    }
    for seed in 0..2 {
        out.push(inst(format!("signed-toric 3x4 #{seed}"), gen_random(open(3, 4), seed, RandomMethod::SignedToric)));
    }
    for seed in 0..8 {
        out.push(inst(format!("rotated 3x3 #{seed}"), gen_random(open(3, 3), seed, RandomMethod::RotatedClassical)));
    }
    for seed in 0..2 {
        out.push(inst(format!("rotated 4x3 #{seed}"), gen_random(open(4, 3), seed, RandomMethod::RotatedClassical)));
    }
    out
}

/// Commuting models on up to 16 qubits from sparse-friendly families.
pub fn medium_suite() -> Vec<Instance> {
    let mut out = vec![
        inst("toric 4x4 torus", gen_toric(periodic(4, 4))),
        inst("toric 4x4", gen_toric(open(4, 4))),
        inst("frustrated torus", frustrated_torus()),
        inst("ferromagnet 4x4 torus", ferromagnet(periodic(4, 4), 0.0)),
    ];
    for seed in 0..6 {
        out.push(inst(format!("signed-toric torus #{seed}"), gen_random(periodic(4, 4), seed, RandomMethod::SignedToric)));
    }
    for seed in 0..6 {
        out.push(inst(format!("diagonal-field 4x4 #{seed}"), gen_random(open(4, 4), seed, RandomMethod::DiagonalField)));
    }
    for seed in 0..3 {
        out.push(inst(format!("diagonal-field torus #{seed}"), gen_random(periodic(4, 4), seed, RandomMethod::DiagonalField)));
    }
    out
}
