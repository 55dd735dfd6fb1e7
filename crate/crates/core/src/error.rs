use crate::lattice::{Color, PlaquetteId, VertexId};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("{0} is out of range for this lattice")]
    OutOfRange(String),

    #[error("matrix is not Hermitian (anti-Hermitian part has norm {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("qubit label {0} is not present on the operator")]
    UnknownLabel(usize),

    #[error("{qubits} qubits exceeds the cap of {cap}")]
    QubitCap { qubits: usize, cap: usize },

    #[error("terms on {p} and {q} do not commute (commutator norm {norm:.3e})")]
    NonCommuting {
        p: PlaquetteId,
        q: PlaquetteId,
        norm: f64,
    },

    #[error("ground projectors on {p} and {q} do not commute (commutator norm {norm:.3e})")]
    ProjectorsNotCommuting {
        p: PlaquetteId,
        q: PlaquetteId,
        norm: f64,
    },

    #[error("{color:?} layer at {vertex}: incident algebras cannot belong to commuting projectors")]
    ImpossibleAlgebraPair { vertex: VertexId, color: Color },

    #[error("{color:?} layer at {vertex}: abelian algebras do not share an eigenbasis")]
    BasisMismatch { vertex: VertexId, color: Color },

    #[error("certificate does not match the decomposition: {0}")]
    CertificateDomain(String),

    #[error("{color:?} effective states both act on {vertex}")]
    SupportConflict { vertex: VertexId, color: Color },

    #[error("effective state on {plaquette} overlaps {degree} neighbours (at most 2 allowed)")]
    DegreeViolation { plaquette: PlaquetteId, degree: usize },

    #[error("malformed component: {0}")]
    MalformedComponent(String),

    #[error("certificate space has {labels} free labels, above the cap of {cap}")]
    SearchSpaceTooLarge { labels: usize, cap: usize },

    #[error("trace {value} is not within tolerance of an integer")]
    NotIntegral { value: f64 },

    #[error("certificate sum {sum} disagrees with total overlap {trace}")]
    SumMismatch { sum: f64, trace: f64 },

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
