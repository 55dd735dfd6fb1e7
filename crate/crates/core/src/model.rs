//! Plaquette Hamiltonians with pairwise commuting terms: representation,
//! commutation checks, ground-space projectors, and generators for the
//! model families used in tests and examples.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Color, Edge, LatticeSpec, PlaquetteId};
use crate::linalg::{
    c64, commutator_norm, ground_space_projector, hermitian_defect, identity, pauli_word, Matrix,
    QubitOperator, GAP_TOL, HERMITIAN_TOL,
};

/// Absolute Frobenius tolerance on commutators of embedded terms.
pub const COMMUTE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CommutingModel {
    lattice: LatticeSpec,
    terms: BTreeMap<PlaquetteId, Matrix>,
}

impl CommutingModel {
    /// Requires exactly one Hermitian 16x16 term per plaquette. Commutation
    /// is not checked here; see [`check_commuting`].
    pub fn new(lattice: LatticeSpec, terms: BTreeMap<PlaquetteId, Matrix>) -> Result<Self> {
        for p in terms.keys() {
            if !lattice.contains_plaquette(*p) {
                return Err(Error::OutOfRange(p.to_string()));
            }
        }
        for p in lattice.plaquettes() {
            let m = terms
                .get(&p)
                .ok_or_else(|| Error::Format(format!("no term for {p}")))?;
            check_term(m)?;
        }
        Ok(CommutingModel { lattice, terms })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn n_qubits(&self) -> usize {
        self.lattice.n_vertices()
    }

    pub fn term(&self, p: PlaquetteId) -> Option<&Matrix> {
        self.terms.get(&p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlaquetteId, &Matrix)> {
        self.terms.iter()
    }

    pub fn term_operator(&self, p: PlaquetteId) -> Result<QubitOperator> {
        let m = self
            .terms
            .get(&p)
            .ok_or_else(|| Error::OutOfRange(p.to_string()))?;
        QubitOperator::new(self.lattice.corner_labels(p)?.to_vec(), m.clone())
    }

    /// Replaces one term. Used to build deliberately broken instances.
    pub fn with_term(mut self, p: PlaquetteId, m: Matrix) -> Result<Self> {
        if !self.lattice.contains_plaquette(p) {
            return Err(Error::OutOfRange(p.to_string()));
        }
        check_term(&m)?;
        self.terms.insert(p, m);
        Ok(self)
    }
}

fn check_term(m: &Matrix) -> Result<()> {
    if m.nrows() != 16 || m.ncols() != 16 {
        return Err(Error::Dimension(format!(
            "plaquette term must be 16x16, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL * m.norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Pairs of plaquettes sharing at least one corner, `p < q`.
pub fn touching_pairs(lattice: &LatticeSpec) -> Vec<(PlaquetteId, PlaquetteId)> {
    let mut out = BTreeSet::new();
    for p in lattice.plaquettes() {
        for v in lattice.corners(p).expect("own plaquette") {
            for q in lattice.plaquettes_containing(v) {
                if p < q {
                    out.insert((p, q));
                }
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub p: PlaquetteId,
    pub q: PlaquetteId,
    pub norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommutationReport {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl CommutationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::NonCommuting {
                p: v.p,
                q: v.q,
                norm: v.norm,
            }),
        }
    }
}

/// Checks every pair of terms that share a vertex; disjoint pairs commute
/// trivially and are skipped.
pub fn check_commuting(model: &CommutingModel) -> CommutationReport {
    let pairs = touching_pairs(&model.lattice);
    let mut report = CommutationReport {
        pairs_checked: pairs.len(),
        violations: Vec::new(),
    };
    for (p, q) in pairs {
        let a = model.term_operator(p).expect("valid plaquette");
        let b = model.term_operator(q).expect("valid plaquette");
        let norm = commutator_norm(&a, &b).expect("labels from lattice");
        if norm > COMMUTE_TOL {
            report.violations.push(Violation { p, q, norm });
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundProjectors {
    lattice: LatticeSpec,
    projectors: BTreeMap<PlaquetteId, Matrix>,
}

impl GroundProjectors {
    /// Builds from explicit projectors, checking pairwise commutation.
    pub fn new(lattice: LatticeSpec, projectors: BTreeMap<PlaquetteId, Matrix>) -> Result<Self> {
        let gp = GroundProjectors { lattice, projectors };
        for p in gp.lattice.plaquettes() {
            if !gp.projectors.contains_key(&p) {
                return Err(Error::Format(format!("no projector for {p}")));
            }
        }
        for (p, q) in touching_pairs(&gp.lattice) {
            let norm = commutator_norm(&gp.operator(p)?, &gp.operator(q)?)?;
            if norm > COMMUTE_TOL {
                return Err(Error::ProjectorsNotCommuting { p, q, norm });
            }
        }
        Ok(gp)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn get(&self, p: PlaquetteId) -> Option<&Matrix> {
        self.projectors.get(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PlaquetteId, &Matrix)> {
        self.projectors.iter()
    }

    pub fn operator(&self, p: PlaquetteId) -> Result<QubitOperator> {
        let m = self
            .projectors
            .get(&p)
            .ok_or_else(|| Error::OutOfRange(p.to_string()))?;
        QubitOperator::new(self.lattice.corner_labels(p)?.to_vec(), m.clone())
    }

    /// Projectors of one colour as labelled operators, row-major.
    pub fn layer(&self, color: Color) -> Vec<QubitOperator> {
        self.lattice
            .plaquettes_of(color)
            .into_iter()
            .map(|p| self.operator(p).expect("complete"))
            .collect()
    }

    /// Rank of each projector.
    pub fn ranks(&self) -> BTreeMap<PlaquetteId, usize> {
        self.projectors
            .iter()
            .map(|(p, m)| (*p, m.trace().re.round() as usize))
            .collect()
    }
}

pub fn ground_projectors(model: &CommutingModel) -> Result<GroundProjectors> {
    let projectors = model
        .terms
        .iter()
        .map(|(p, h)| Ok((*p, ground_space_projector(h, GAP_TOL)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    GroundProjectors::new(model.lattice, projectors)
}

fn from_fn(lattice: LatticeSpec, f: impl Fn(PlaquetteId) -> Matrix) -> CommutingModel {
    let terms = lattice.plaquettes().into_iter().map(|p| (p, f(p))).collect();
    CommutingModel::new(lattice, terms).expect("generated terms are Hermitian 16x16")
}

/// Toric code: `-Z⊗4` on black plaquettes, `-X⊗4` on white ones.
pub fn gen_toric(lattice: LatticeSpec) -> CommutingModel {
    gen_signed_toric(lattice, &BTreeSet::new())
}

/// Toric code with the sign of the listed plaquette terms flipped.
pub fn gen_signed_toric(lattice: LatticeSpec, flipped: &BTreeSet<PlaquetteId>) -> CommutingModel {
    from_fn(lattice, |p| {
        let word = match p.color() {
            Color::Black => "ZZZZ",
            Color::White => "XXXX",
        };
        let sign = if flipped.contains(&p) { 1.0 } else { -1.0 };
        pauli_word(word) * c64(sign, 0.0)
    })
}

/// Classical Ising couplings `J_e` per edge and fields `f_v` per vertex
/// (indexed by qubit label).
#[derive(Clone, Debug, PartialEq)]
pub struct IsingParams {
    pub couplings: BTreeMap<Edge, f64>,
    pub fields: Vec<f64>,
}

impl IsingParams {
    pub fn uniform(lattice: &LatticeSpec, coupling: f64, field: f64) -> Self {
        IsingParams {
            couplings: lattice.edges().into_iter().map(|e| (e, coupling)).collect(),
            fields: vec![field; lattice.n_vertices()],
        }
    }

    /// Classical energy `-Σ J_e s_a s_b - Σ f_v s_v` with `s = +1` for bit 0.
    pub fn energy(&self, lattice: &LatticeSpec, config: u64) -> f64 {
        let spin = |i: usize| if (config >> i) & 1 == 0 { 1.0 } else { -1.0 };
        let bonds: f64 = self
            .couplings
            .iter()
            .map(|(e, j)| j * spin(lattice.vertex_index(e.a)) * spin(lattice.vertex_index(e.b)))
            .sum();
        let fields: f64 = self.fields.iter().enumerate().map(|(i, f)| f * spin(i)).sum();
        -bonds - fields
    }
}

/// Diagonal Ising terms. Each edge goes to exactly one plaquette (the black
/// one when both colours contain it) and each field is split evenly over the
/// plaquettes containing its vertex, so the terms sum to the classical
/// Hamiltonian exactly once.
pub fn gen_ising(lattice: LatticeSpec, params: &IsingParams) -> CommutingModel {
    let mut diag: BTreeMap<PlaquetteId, [f64; 16]> =
        lattice.plaquettes().into_iter().map(|p| (p, [0.0; 16])).collect();
    let z = |bits: usize, corner: usize| if (bits >> (3 - corner)) & 1 == 0 { 1.0 } else { -1.0 };
    for (edge, j) in &params.couplings {
        let owners = lattice.plaquettes_on_edge(*edge);
        let Some(&owner) = owners
            .iter()
            .find(|p| p.color() == Color::Black)
            .or(owners.first())
        else {
            continue;
        };
        let corners = lattice.corners(owner).expect("valid");
        let ca = corners.iter().position(|&c| c == edge.a).expect("edge corner");
        let cb = corners.iter().position(|&c| c == edge.b).expect("edge corner");
        let d = diag.get_mut(&owner).expect("present");
        for (s, e) in d.iter_mut().enumerate() {
            *e -= j * z(s, ca) * z(s, cb);
        }
    }
    for v in lattice.vertices() {
        let f = params.fields[lattice.vertex_index(v)];
        if f == 0.0 {
            continue;
        }
        let owners = lattice.plaquettes_containing(v);
        let share = f / owners.len() as f64;
        for p in owners {
            let corner = lattice.corners(p).expect("valid").iter().position(|&c| c == v).expect("corner");
            let d = diag.get_mut(&p).expect("present");
            for (s, e) in d.iter_mut().enumerate() {
                *e -= share * z(s, corner);
            }
        }
    }
    from_fn(lattice, |p| {
        let d = diag[&p];
        Matrix::from_fn(16, 16, |r, c| if r == c { c64(d[r], 0.0) } else { c64(0.0, 0.0) })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomMethod {
    /// Random diagonal terms conjugated by one random unitary per vertex.
    RotatedClassical,
    /// Toric code with independent random signs per plaquette.
    SignedToric,
    /// Ising model with random `±1` couplings and fields in `{-½, 0, ½}`.
    DiagonalField,
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix {
    let mut g = || c64(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (g(), g());
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    Matrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// Rotated classical model plus the per-vertex unitaries (indexed by qubit
/// label). Diagonal energies are small integers so that local ground spaces
/// are often degenerate.
pub fn gen_rotated_classical(lattice: LatticeSpec, seed: u64) -> (CommutingModel, Vec<Matrix>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unitaries: Vec<Matrix> = (0..lattice.n_vertices()).map(|_| random_unitary(&mut rng)).collect();
    let mut energies = BTreeMap::new();
    for p in lattice.plaquettes() {
        let d: Vec<f64> = (0..16).map(|_| rng.random_range(0..3) as f64).collect();
        energies.insert(p, d);
    }
    let model = from_fn(lattice, |p| {
        let u = lattice
            .corner_labels(p)
            .expect("valid")
            .iter()
            .fold(identity(1), |acc, &l| acc.kronecker(&unitaries[l]));
        let d = &energies[&p];
        let diag = Matrix::from_fn(16, 16, |r, c| if r == c { c64(d[r], 0.0) } else { c64(0.0, 0.0) });
        let h = &u * diag * u.adjoint();
        (&h + h.adjoint()) * c64(0.5, 0.0)
    });
    (model, unitaries)
}

pub fn gen_random(lattice: LatticeSpec, seed: u64, method: RandomMethod) -> CommutingModel {
    match method {
        RandomMethod::RotatedClassical => gen_rotated_classical(lattice, seed).0,
        RandomMethod::SignedToric => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let flipped = lattice
                .plaquettes()
                .into_iter()
                .filter(|_| rng.random_bool(0.5))
                .collect();
            gen_signed_toric(lattice, &flipped)
        }
        RandomMethod::DiagonalField => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let couplings = lattice
                .edges()
                .into_iter()
                .map(|e| (e, if rng.random_bool(0.5) { 1.0 } else { -1.0 }))
                .collect();
            let fields = (0..lattice.n_vertices())
                .map(|_| [-0.5, 0.0, 0.5][rng.random_range(0..3)])
                .collect();
            gen_ising(lattice, &IsingParams { couplings, fields })
        }
    }
}
