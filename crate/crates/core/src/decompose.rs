//! Slicing of each layer at every vertex.
//!
//! At a vertex the (at most two) same-colour ground projectors either leave
//! the qubit alone except for one of them, or both act through a common
//! two-dimensional abelian algebra. In the second case the qubit splits into
//! two rank-1 slices, and fixing a slice at every such vertex factorizes the
//! layer projector into a tensor product over its plaquettes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{Color, LatticeSpec, PlaquetteId, VertexId};
use crate::linalg::{
    algebra_classify, commutator, common_eigenbasis, ket_projector, operator_schmidt, AlgebraClass,
    Ket, Matrix, QubitOperator, ALGEBRA_TOL,
};
use crate::model::GroundProjectors;

pub const SLICE_COMMUTE_TOL: f64 = 1e-8;
/// Seed for the generic combination used to find common eigenbases. The
/// resulting bases are canonicalized, so the seed does not leak into output.
pub const DEFAULT_SEED: u64 = 0x0c0d_e5ee_d000_0001;

#[derive(Clone, Debug, PartialEq)]
pub enum VertexDecomposition {
    /// No slicing. `owner` is the one incident plaquette acting
    /// non-trivially on the qubit, if any.
    Trivial { owner: Option<PlaquetteId> },
    /// Two rank-1 slices, label 0 and label 1 in canonical order.
    Split { basis: [Ket; 2] },
}

impl VertexDecomposition {
    pub fn is_split(&self) -> bool {
        matches!(self, VertexDecomposition::Split { .. })
    }

    pub fn slice_state(&self, label: u8) -> Option<Ket> {
        match self {
            VertexDecomposition::Split { basis } => basis.get(label as usize).copied(),
            VertexDecomposition::Trivial { .. } => None,
        }
    }

    pub fn slice_projector(&self, label: u8) -> Option<Matrix> {
        self.slice_state(label).map(|k| ket_projector(&k))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerDecomposition {
    color: Color,
    lattice: LatticeSpec,
    vertices: Vec<VertexDecomposition>,
}

impl LayerDecomposition {
    pub fn color(&self) -> Color {
        self.color
    }

    pub fn get(&self, v: VertexId) -> &VertexDecomposition {
        &self.vertices[self.lattice.vertex_index(v)]
    }

    pub fn by_label(&self, label: usize) -> &VertexDecomposition {
        &self.vertices[label]
    }

    pub fn is_split(&self, v: VertexId) -> bool {
        self.get(v).is_split()
    }

    /// The vertices with a non-trivial split, row-major.
    pub fn split_vertices(&self) -> Vec<VertexId> {
        self.lattice.vertices().filter(|&v| self.is_split(v)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &VertexDecomposition)> {
        self.lattice.vertices().zip(self.vertices.iter())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub black: LayerDecomposition,
    pub white: LayerDecomposition,
}

impl Decomposition {
    pub fn layer(&self, color: Color) -> &LayerDecomposition {
        match color {
            Color::Black => &self.black,
            Color::White => &self.white,
        }
    }
}

/// Decomposes one vertex of one layer given the same-colour projectors that
/// contain it. `label` is the qubit label of `vertex`.
pub fn vertex_decomposition(
    incident: &[(PlaquetteId, &QubitOperator)],
    vertex: VertexId,
    label: usize,
    color: Color,
    seed: u64,
) -> Result<VertexDecomposition> {
    let mut sides = Vec::with_capacity(incident.len());
    for (p, op) in incident {
        let factors = operator_schmidt(op, label)?.vertex_factors();
        let class = algebra_classify(&factors, ALGEBRA_TOL, seed);
        sides.push((*p, factors, class));
    }
    let nontrivial = |(p, _, class): &(PlaquetteId, Vec<Matrix>, AlgebraClass)| {
        (*class != AlgebraClass::Trivial).then_some(*p)
    };
    match sides.as_slice() {
        [] => Ok(VertexDecomposition::Trivial { owner: None }),
        [one] => Ok(VertexDecomposition::Trivial {
            owner: nontrivial(one),
        }),
        [a, b] => match (&a.2, &b.2) {
            (AlgebraClass::Trivial, _) => Ok(VertexDecomposition::Trivial { owner: nontrivial(b) }),
            (_, AlgebraClass::Trivial) => Ok(VertexDecomposition::Trivial { owner: nontrivial(a) }),
            (AlgebraClass::Abelian(_), AlgebraClass::Abelian(_)) => {
                let generators: Vec<Matrix> = a.1.iter().chain(b.1.iter()).cloned().collect();
                let basis = common_eigenbasis(&generators, seed)
                    .ok_or(Error::BasisMismatch { vertex, color })?;
                for k in &basis {
                    let pi = ket_projector(k);
                    for g in &generators {
                        if commutator(&pi, g).norm() > SLICE_COMMUTE_TOL * g.norm().max(1.0) {
                            return Err(Error::BasisMismatch { vertex, color });
                        }
                    }
                }
                Ok(VertexDecomposition::Split { basis })
            }
            _ => Err(Error::ImpossibleAlgebraPair { vertex, color }),
        },
        _ => Err(Error::MalformedComponent(format!(
            "{} same-colour plaquettes at {vertex}",
            sides.len()
        ))),
    }
}

pub fn decompose_layer(proj: &GroundProjectors, color: Color, seed: u64) -> Result<LayerDecomposition> {
    let lattice = *proj.lattice();
    let operators: BTreeMap<PlaquetteId, QubitOperator> = lattice
        .plaquettes_of(color)
        .into_iter()
        .map(|p| Ok((p, proj.operator(p)?)))
        .collect::<Result<_>>()?;
    let vertices = lattice
        .vertices()
        .map(|v| {
            let incident: Vec<(PlaquetteId, &QubitOperator)> = lattice
                .incident_plaquettes(v, color)
                .into_iter()
                .map(|p| (p, &operators[&p]))
                .collect();
            vertex_decomposition(&incident, v, lattice.vertex_index(v), color, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LayerDecomposition {
        color,
        lattice,
        vertices,
    })
}

pub fn decompose_layers(proj: &GroundProjectors) -> Result<Decomposition> {
    decompose_layers_with_seed(proj, DEFAULT_SEED)
}

pub fn decompose_layers_with_seed(proj: &GroundProjectors, seed: u64) -> Result<Decomposition> {
    Ok(Decomposition {
        black: decompose_layer(proj, Color::Black, seed)?,
        white: decompose_layer(proj, Color::White, seed)?,
    })
}

/// The free labels of a certificate: one binary label per split vertex in
/// each layer. Every other vertex has a single (implicit) label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateSpace {
    pub black: Vec<VertexId>,
    pub white: Vec<VertexId>,
}

impl CertificateSpace {
    pub fn alphabet_size(&self, color: Color, v: VertexId) -> usize {
        let f = match color {
            Color::Black => &self.black,
            Color::White => &self.white,
        };
        if f.contains(&v) {
            2
        } else {
            1
        }
    }

    pub fn n_labels(&self) -> usize {
        self.black.len() + self.white.len()
    }

    /// Number of certificates, if it fits in a `u64`.
    pub fn count(&self) -> Option<u64> {
        1u64.checked_shl(self.n_labels() as u32)
    }
}

pub fn certificate_space(decomp: &Decomposition) -> CertificateSpace {
    CertificateSpace {
        black: decomp.black.split_vertices(),
        white: decomp.white.split_vertices(),
    }
}
