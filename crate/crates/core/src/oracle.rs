//! Brute-force reference values on the full register.
//!
//! Nothing here uses the layer decomposition beyond slicing; traces are
//! computed by pushing computational basis vectors through every projector.

use crate::error::{Error, Result};
use crate::lattice::Color;
use crate::linalg::{trace_product_embedded, QubitOperator, DEFAULT_QUBIT_CAP};
use crate::model::{ground_projectors, CommutingModel, GroundProjectors};
use crate::verifier::{Certificate, Verifier};

/// Largest register for [`dense_omega`].
pub const DENSE_OMEGA_CAP: usize = 12;
/// Largest certificate space (in labels) for [`certificate_sum`].
pub const SUM_LABEL_CAP: usize = 24;
pub const INTEGRALITY_TOL: f64 = 1e-6;
pub const SUM_TOL: f64 = 1e-8;

/// Ordered list of plaquette operators applied to full-register vectors.
/// Operators are applied first to last.
#[derive(Clone, Debug)]
pub struct SparseOperatorProgram {
    ops: Vec<QubitOperator>,
    n_qubits: usize,
    cap: usize,
}

impl SparseOperatorProgram {
    pub fn new(ops: Vec<QubitOperator>, n_qubits: usize, cap: usize) -> Result<Self> {
        if n_qubits > cap {
            return Err(Error::QubitCap { qubits: n_qubits, cap });
        }
        Ok(SparseOperatorProgram { ops, n_qubits, cap })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Trace of the composed program on the full register. Qubits no
    /// operator touches contribute a factor 2 each.
    pub fn trace(&self) -> Result<f64> {
        let mut reversed = self.ops.clone();
        reversed.reverse();
        let touched = crate::linalg::union_labels(&reversed).len();
        let t = trace_product_embedded(&reversed, self.cap)?;
        Ok(t.re * ((self.n_qubits - touched) as f64).exp2())
    }
}

fn layer_ops(proj: &GroundProjectors, color: Color) -> Result<Vec<QubitOperator>> {
    proj.lattice()
        .plaquettes_of(color)
        .into_iter()
        .map(|p| proj.operator(p))
        .collect()
}

/// `tr[Π_B Π_W]`, black projectors applied first.
pub fn total_overlap_with_cap(model: &CommutingModel, cap: usize) -> Result<f64> {
    let proj = ground_projectors(model)?;
    let mut ops = layer_ops(&proj, Color::Black)?;
    ops.extend(layer_ops(&proj, Color::White)?);
    SparseOperatorProgram::new(ops, model.n_qubits(), cap)?.trace()
}

pub fn total_overlap(model: &CommutingModel) -> Result<f64> {
    total_overlap_with_cap(model, DEFAULT_QUBIT_CAP)
}

/// Rounds `value` to a non-negative integer, failing if it is not one
/// within [`INTEGRALITY_TOL`].
pub fn as_integer(value: f64) -> Result<u64> {
    let r = value.round();
    if (value - r).abs() > INTEGRALITY_TOL || r < 0.0 {
        return Err(Error::NotIntegral { value });
    }
    Ok(r as u64)
}

/// Dimension of the joint ground space, `tr[∏_p Π_p]`.
pub fn ground_dim(model: &CommutingModel) -> Result<u64> {
    let proj = ground_projectors(model)?;
    let ops = proj.iter().map(|(&p, _)| proj.operator(p)).collect::<Result<Vec<_>>>()?;
    let value = SparseOperatorProgram::new(ops, model.n_qubits(), DEFAULT_QUBIT_CAP)?.trace()?;
    as_integer(value)
}

/// Ω from the sliced projectors alone, as one dense trace.
pub fn dense_omega_with(verifier: &Verifier, cert: &Certificate) -> Result<f64> {
    let n = verifier.lattice().n_vertices();
    if n > DENSE_OMEGA_CAP {
        return Err(Error::QubitCap { qubits: n, cap: DENSE_OMEGA_CAP });
    }
    let sliced = verifier.apply_certificate(cert)?;
    SparseOperatorProgram::new(sliced.ordered(), n, DENSE_OMEGA_CAP)?.trace()
}

pub fn dense_omega(model: &CommutingModel, cert: &Certificate) -> Result<f64> {
    dense_omega_with(&Verifier::new(model)?, cert)
}

/// How each term of the certificate sum is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMethod {
    Dense,
    Chain,
}

#[derive(Clone, Debug)]
pub struct CertificateSum {
    /// Every certificate with its Ω, lexicographic order.
    pub table: Vec<(Certificate, f64)>,
    pub sum: f64,
    pub total_overlap: f64,
}

/// `Σ_{α,β} Ω(α,β)`, checked against `tr[Π_B Π_W]`.
pub fn certificate_sum(model: &CommutingModel, method: SumMethod) -> Result<CertificateSum> {
    let verifier = Verifier::new(model)?;
    let space = verifier.certificate_space();
    if space.n_labels() > SUM_LABEL_CAP {
        return Err(Error::SearchSpaceTooLarge {
            labels: space.n_labels(),
            cap: SUM_LABEL_CAP,
        });
    }
    let total_overlap = total_overlap(model)?;
    let count = space.count().expect("within cap");
    let mut table = Vec::with_capacity(count as usize);
    for i in 0..count {
        let cert = Certificate::from_index(space, i);
        let omega = match method {
            SumMethod::Dense => dense_omega_with(&verifier, &cert)?,
            SumMethod::Chain => verifier.compute_omega(&cert)?.value(),
        };
        table.push((cert, omega));
    }
    let sum: f64 = table.iter().map(|(_, o)| o).sum();
    if (sum - total_overlap).abs() > SUM_TOL * total_overlap.max(1.0) {
        return Err(Error::SumMismatch { sum, trace: total_overlap });
    }
    Ok(CertificateSum {
        table,
        sum,
        total_overlap,
    })
}
