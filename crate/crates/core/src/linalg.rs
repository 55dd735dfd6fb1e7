//! Dense complex linear algebra on small multi-qubit operators, plus the
//! operator Schmidt decomposition and the classification of single-qubit
//! operator algebras.
//!
//! Every operator carries an ordered list of qubit labels. The first label
//! is the most significant bit of the matrix index.

use nalgebra::{DMatrix, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::statevec::{LocalGate, StateVec};

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type Ket = Vector2<C64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative width of the ground-energy band.
pub const GAP_TOL: f64 = 1e-9;
/// Singular values below this fraction of the largest are dropped.
pub const SCHMIDT_RANK_TOL: f64 = 1e-10;
/// Relative threshold for linear independence in algebra spans and for
/// "acts trivially" tests.
pub const ALGEBRA_TOL: f64 = 1e-9;
pub const DEFAULT_QUBIT_CAP: usize = 22;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

pub fn pauli(p: char) -> Matrix {
    let (o, l, i) = (c64(0., 0.), c64(1., 0.), c64(0., 1.));
    match p {
        'I' => identity(2),
        'X' => Matrix::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => Matrix::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => Matrix::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => panic!("unknown Pauli {p}"),
    }
}

/// Tensor product of Paulis, leftmost character on the most significant bit.
pub fn pauli_word(word: &str) -> Matrix {
    word.chars()
        .fold(identity(1), |acc, p| acc.kronecker(&pauli(p)))
}

pub fn ket_projector(k: &Ket) -> Matrix {
    let mut m = Matrix::zeros(2, 2);
    for r in 0..2 {
        for c in 0..2 {
            m[(r, c)] = k[r] * k[c].conj();
        }
    }
    m
}

pub fn hermitian_defect(m: &Matrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// Shift for label position `i` among `k` labels.
fn shift(k: usize, i: usize) -> usize {
    k - 1 - i
}

/// Index offsets of the local basis states of `positions` inside a
/// `k`-qubit index.
pub(crate) fn offsets(k: usize, positions: &[usize]) -> Vec<usize> {
    let m = positions.len();
    (0..1usize << m)
        .map(|l| {
            (0..m)
                .filter(|&i| (l >> shift(m, i)) & 1 == 1)
                .map(|i| 1usize << shift(k, positions[i]))
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QubitOperator {
    labels: Vec<usize>,
    matrix: Matrix,
}

impl QubitOperator {
    pub fn new(labels: Vec<usize>, matrix: Matrix) -> Result<Self> {
        let dim = 1usize << labels.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension(format!(
                "{} labels need a {dim}x{dim} matrix, got {}x{}",
                labels.len(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Dimension(format!("label {l} repeated")));
            }
        }
        Ok(QubitOperator { labels, matrix })
    }

    pub fn scalar(z: C64) -> Self {
        QubitOperator {
            labels: Vec::new(),
            matrix: Matrix::from_element(1, 1, z),
        }
    }

    pub fn identity(labels: Vec<usize>) -> Self {
        let dim = 1 << labels.len();
        QubitOperator {
            labels,
            matrix: identity(dim),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn scaled(&self, s: C64) -> Self {
        QubitOperator {
            labels: self.labels.clone(),
            matrix: &self.matrix * s,
        }
    }

    pub fn adjoint(&self) -> Self {
        QubitOperator {
            labels: self.labels.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        QubitOperator {
            labels: self.labels.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    /// Pads with identities onto `target`, which must contain every label.
    pub fn embed(&self, target: &[usize]) -> Result<QubitOperator> {
        let k = target.len();
        let positions = self
            .labels
            .iter()
            .map(|&l| {
                target
                    .iter()
                    .position(|&t| t == l)
                    .ok_or(Error::UnknownLabel(l))
            })
            .collect::<Result<Vec<_>>>()?;
        let off = offsets(k, &positions);
        let mask: usize = positions.iter().map(|&p| 1usize << shift(k, p)).sum();
        let dim = 1usize << k;
        let d = self.matrix.nrows();
        let mut out = Matrix::zeros(dim, dim);
        for base in (0..dim).filter(|b| b & mask == 0) {
            for a in 0..d {
                for b in 0..d {
                    out[(base + off[a], base + off[b])] = self.matrix[(a, b)];
                }
            }
        }
        QubitOperator::new(target.to_vec(), out)
    }

    /// Traces out every label not in `keep`; kept labels retain their
    /// relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<QubitOperator> {
        if let Some(&bad) = keep.iter().find(|l| !self.labels.contains(l)) {
            return Err(Error::UnknownLabel(bad));
        }
        let k = self.labels.len();
        let (kept, traced): (Vec<usize>, Vec<usize>) =
            (0..k).partition(|&i| keep.contains(&self.labels[i]));
        let off_k = offsets(k, &kept);
        let off_t = offsets(k, &traced);
        let dk = off_k.len();
        let mut out = Matrix::zeros(dk, dk);
        for a in 0..dk {
            for b in 0..dk {
                out[(a, b)] = off_t
                    .iter()
                    .map(|&t| self.matrix[(off_k[a] + t, off_k[b] + t)])
                    .sum();
            }
        }
        QubitOperator::new(kept.iter().map(|&i| self.labels[i]).collect(), out)
    }

    pub fn trace_out(&self, label: usize) -> Result<QubitOperator> {
        if self.position(label).is_none() {
            return Err(Error::UnknownLabel(label));
        }
        let keep: Vec<usize> = self.labels.iter().copied().filter(|&l| l != label).collect();
        self.partial_trace(&keep)
    }

    /// Applies a single-qubit operator on `label` from both sides: `P X P`.
    pub fn sandwich(&self, label: usize, p: &Matrix) -> Result<QubitOperator> {
        let full = QubitOperator::new(vec![label], p.clone())?.embed(&self.labels)?;
        QubitOperator::new(
            self.labels.clone(),
            &full.matrix * &self.matrix * &full.matrix,
        )
    }

    /// Whether the operator equals `tr_label(X)/2 ⊗ 1` within `rel_tol`.
    pub fn acts_trivially_on(&self, label: usize, rel_tol: f64) -> Result<bool> {
        let reduced = self.trace_out(label)?.scaled(c64(0.5, 0.0));
        let mut labels = reduced.labels.clone();
        labels.push(label);
        let completed = reduced
            .embed(&labels)?
            .embed(&self.labels)?;
        Ok((&completed.matrix - &self.matrix).norm() <= rel_tol * self.norm())
    }

    /// Product `self · other`, both embedded on the union of their labels.
    pub fn product(&self, other: &QubitOperator) -> Result<QubitOperator> {
        let union = union_labels([self, other]);
        let a = self.embed(&union)?;
        let b = other.embed(&union)?;
        QubitOperator::new(union, a.matrix * b.matrix)
    }

    /// Reorders the tensor factors to `order`, a permutation of the labels.
    pub fn permuted(&self, order: &[usize]) -> Result<QubitOperator> {
        if order.len() != self.labels.len() {
            return Err(Error::Dimension("permutation length".into()));
        }
        self.embed(order)
    }
}

/// Labels in order of first appearance.
pub fn union_labels<'a>(ops: impl IntoIterator<Item = &'a QubitOperator>) -> Vec<usize> {
    let mut out = Vec::new();
    for op in ops {
        for &l in &op.labels {
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    out
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (as columns).
pub fn herm_eig(m: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL * m.norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let sym = (m + m.adjoint()) * c64(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Projector onto the eigenvectors whose eigenvalue lies within
/// `gap_tol·(λmax − λmin + 1)` of the minimum.
pub fn ground_space_projector(h: &Matrix, gap_tol: f64) -> Result<Matrix> {
    let (values, vectors) = herm_eig(h)?;
    let lo = values[0];
    let hi = values[values.len() - 1];
    let band = gap_tol * (hi - lo + 1.0);
    let dim = h.nrows();
    let mut p = Matrix::zeros(dim, dim);
    for (i, _) in values.iter().enumerate().filter(|(_, &v)| v - lo <= band) {
        let col = vectors.column(i);
        p += col * col.adjoint();
    }
    Ok(p)
}

/// Operator Schmidt decomposition `M = Σ A_i ⊗ B_i` across one qubit.
#[derive(Clone, Debug)]
pub struct OperatorSchmidt {
    pub rest_labels: Vec<usize>,
    pub split_label: usize,
    /// `(A_i, B_i)`: `A_i` on `rest_labels`, `B_i` 2x2 on the split qubit.
    /// The `B_i` are orthonormal in the trace inner product.
    pub terms: Vec<(Matrix, Matrix)>,
}

impl OperatorSchmidt {
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn vertex_factors(&self) -> Vec<Matrix> {
        self.terms.iter().map(|(_, b)| b.clone()).collect()
    }

    /// `Σ A_i ⊗ B_i` with the split qubit last.
    pub fn reconstruct(&self) -> QubitOperator {
        let dim = 1 << (self.rest_labels.len() + 1);
        let m = self
            .terms
            .iter()
            .fold(Matrix::zeros(dim, dim), |acc, (a, b)| acc + a.kronecker(b));
        let mut labels = self.rest_labels.clone();
        labels.push(self.split_label);
        QubitOperator { labels, matrix: m }
    }
}

pub fn operator_schmidt(op: &QubitOperator, split_label: usize) -> Result<OperatorSchmidt> {
    let mut order: Vec<usize> = op.labels.iter().copied().filter(|&l| l != split_label).collect();
    if order.len() == op.labels.len() {
        return Err(Error::UnknownLabel(split_label));
    }
    let rest_labels = order.clone();
    order.push(split_label);
    let m = op.permuted(&order)?.matrix;
    let dr = m.nrows() / 2;
    // realign M[(r b),(r' b')] -> R[(r r'),(b b')]
    let realigned = Matrix::from_fn(dr * dr, 4, |row, col| {
        let (r, rp) = (row / dr, row % dr);
        let (b, bp) = (col / 2, col % 2);
        m[(2 * r + b, 2 * rp + bp)]
    });
    let svd = realigned.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..s.len()).filter(|&i| smax > 0.0 && s[i] > SCHMIDT_RANK_TOL * smax).collect();
    idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let terms = idx
        .into_iter()
        .map(|i| {
            let a = Matrix::from_fn(dr, dr, |r, c| u[(r * dr + c, i)] * s[i]);
            let b = Matrix::from_fn(2, 2, |r, c| v_t[(i, 2 * r + c)]);
            (a, b)
        })
        .collect();
    Ok(OperatorSchmidt {
        rest_labels,
        split_label,
        terms,
    })
}

/// The unital *-algebra generated by a set of single-qubit operators.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraClass {
    Trivial,
    /// Diagonal in this orthonormal basis (canonical phase and order).
    Abelian([Ket; 2]),
    Full,
}

impl AlgebraClass {
    pub fn dimension(&self) -> usize {
        match self {
            AlgebraClass::Trivial => 1,
            AlgebraClass::Abelian(_) => 2,
            AlgebraClass::Full => 4,
        }
    }
}

fn frob_inner(a: &Matrix, b: &Matrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal (trace inner product) basis of a matrix span.
struct Span {
    basis: Vec<Matrix>,
    tol: f64,
}

impl Span {
    fn add(&mut self, m: &Matrix) -> bool {
        let n = m.norm();
        if n == 0.0 {
            return false;
        }
        let mut r = m.clone();
        for b in &self.basis {
            r -= b * frob_inner(b, m);
        }
        let rn = r.norm();
        if rn > self.tol * n {
            self.basis.push(r / c64(rn, 0.0));
            true
        } else {
            false
        }
    }
}

/// Dimension of the generated algebra, found by closing the span of
/// `{1} ∪ ops ∪ ops†` under products.
pub fn algebra_dimension(ops: &[Matrix], tol: f64) -> usize {
    let mut span = Span { basis: Vec::new(), tol };
    span.add(&identity(2));
    for op in ops {
        span.add(op);
        span.add(&op.adjoint());
    }
    loop {
        let snapshot = span.basis.clone();
        let mut changed = false;
        'outer: for a in &snapshot {
            for b in &snapshot {
                let p = a * b;
                changed |= span.add(&p);
                changed |= span.add(&p.adjoint());
                if span.basis.len() >= 4 {
                    break 'outer;
                }
            }
        }
        if !changed || span.basis.len() >= 4 {
            return span.basis.len();
        }
    }
}

/// Global phase fixed so the first non-negligible amplitude is real positive.
pub fn canonical_phase(k: &Ket) -> Ket {
    let n = k.norm();
    let lead = if k[0].norm() > 1e-12 * n { k[0] } else { k[1] };
    if lead.norm() == 0.0 {
        return *k;
    }
    let phase = lead.conj() / lead.norm();
    k.map(|a| a * phase) / c64(n, 0.0)
}

/// Canonical order of an orthonormal qubit basis: larger `|⟨0|e⟩|` first,
/// ties broken by larger `Re⟨1|e⟩`, then larger `Im⟨1|e⟩`.
pub fn canonical_basis(a: Ket, b: Ket) -> [Ket; 2] {
    const TIE: f64 = 1e-9;
    let (a, b) = (canonical_phase(&a), canonical_phase(&b));
    let a_first = if (a[0].norm() - b[0].norm()).abs() > TIE {
        a[0].norm() > b[0].norm()
    } else if (a[1].re - b[1].re).abs() > TIE {
        a[1].re > b[1].re
    } else {
        a[1].im >= b[1].im
    };
    if a_first {
        [a, b]
    } else {
        [b, a]
    }
}

/// Common eigenbasis of a commuting set of qubit operators, read off a
/// generic Hermitian combination of them. The draw is redone while the two
/// eigenvalues are closer than `1e-8` (relative).
pub fn common_eigenbasis(ops: &[Matrix], seed: u64) -> Option<[Ket; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut h = Matrix::zeros(2, 2);
        for op in ops {
            let herm = op + op.adjoint();
            let anti = (op - op.adjoint()) * c64(0.0, 1.0);
            h += herm * c64(rng.random_range(-1.0..1.0), 0.0);
            h += anti * c64(rng.random_range(-1.0..1.0), 0.0);
        }
        let Ok((values, vectors)) = herm_eig(&h) else {
            continue;
        };
        if values[1] - values[0] > 1e-8 * h.norm().max(f64::MIN_POSITIVE) {
            let e0 = Ket::new(vectors[(0, 0)], vectors[(1, 0)]);
            let e1 = Ket::new(vectors[(0, 1)], vectors[(1, 1)]);
            return Some(canonical_basis(e0, e1));
        }
    }
    None
}

pub fn algebra_classify(ops: &[Matrix], tol: f64, seed: u64) -> AlgebraClass {
    match algebra_dimension(ops, tol) {
        1 => AlgebraClass::Trivial,
        2 => match common_eigenbasis(ops, seed) {
            Some(basis) => AlgebraClass::Abelian(basis),
            None => AlgebraClass::Full,
        },
        _ => AlgebraClass::Full,
    }
}

/// `tr[op_0 · op_1 ⋯ op_k]` with every operator padded by identities onto
/// the union of all labels. Evaluated by streaming over computational basis
/// vectors, never forming the full matrix.
pub fn trace_product_embedded(ops: &[QubitOperator], qubit_cap: usize) -> Result<C64> {
    let labels = union_labels(ops);
    let n = labels.len();
    if n > qubit_cap {
        return Err(Error::QubitCap { qubits: n, cap: qubit_cap });
    }
    let gates: Vec<LocalGate> = ops
        .iter()
        .map(|op| {
            let bits: Vec<u32> = op
                .labels()
                .iter()
                .map(|l| {
                    let pos = labels.iter().position(|x| x == l).expect("label in union");
                    (n - 1 - pos) as u32
                })
                .collect();
            LocalGate::new(op.matrix(), &bits)
        })
        .collect();
    let mut total = c64(0.0, 0.0);
    for i in 0..(1u64 << n) {
        let mut state = StateVec::basis(n, i);
        for gate in gates.iter().rev() {
            state.apply(gate);
            if state.is_zero() {
                break;
            }
        }
        total += state.amplitude(i);
    }
    Ok(total)
}

/// Frobenius norm of `[a, b]` on the union of their labels.
///
/// Both products are contracted over the shared qubits only, so the cost
/// stays far below a dense product on the union.
pub fn commutator_norm(a: &QubitOperator, b: &QubitOperator) -> Result<f64> {
    let shared: Vec<usize> = a.labels().iter().copied().filter(|l| b.labels().contains(l)).collect();
    if shared.is_empty() {
        return Ok(0.0);
    }
    let a_only: Vec<usize> = a.labels().iter().copied().filter(|l| !shared.contains(l)).collect();
    let b_only: Vec<usize> = b.labels().iter().copied().filter(|l| !shared.contains(l)).collect();
    // A on (a_only, shared), B on (shared, b_only)
    let am = a.permuted(&[a_only.as_slice(), &shared].concat())?.into_matrix();
    let bm = b.permuted(&[shared.as_slice(), &b_only].concat())?.into_matrix();
    let (na, ns, nb) = (a_only.len(), shared.len(), b_only.len());
    let (da, ds, db) = (1usize << na, 1usize << ns, 1usize << nb);
    // entries at roundoff level are skipped; their effect on the norm is
    // far below any commutation tolerance
    let cut = |m: &Matrix| 1e-14 * m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (a_cut, b_cut) = (cut(&am), cut(&bm));
    // both products indexed [(xa, xs, ya), (xb, ys, yb)]
    let cols = db * ds * db;
    let mut ab = vec![c64(0.0, 0.0); da * ds * da * cols];
    let mut ba = ab.clone();
    let row = |xa: usize, xs: usize, ya: usize| ((xa * ds + xs) * da + ya) * cols;
    let col = |xb: usize, ys: usize, yb: usize| (xb * ds + ys) * db + yb;
    // AB = Σ_z A[(xa,xs),(ya,z)] B[(z,xb),(ys,yb)]
    for xa in 0..da {
        for xs in 0..ds {
            for ya in 0..da {
                for z in 0..ds {
                    let a = am[((xa << ns) | xs, (ya << ns) | z)];
                    if a.norm() <= a_cut {
                        continue;
                    }
                    let r = row(xa, xs, ya);
                    for xb in 0..db {
                        for ys in 0..ds {
                            for yb in 0..db {
                                ab[r + col(xb, ys, yb)] += a * bm[((z << nb) | xb, (ys << nb) | yb)];
                            }
                        }
                    }
                }
            }
        }
    }
    // BA = Σ_z B[(xs,xb),(z,yb)] A[(xa,z),(ya,ys)]
    for xs in 0..ds {
        for xb in 0..db {
            for yb in 0..db {
                for z in 0..ds {
                    let b = bm[((xs << nb) | xb, (z << nb) | yb)];
                    if b.norm() <= b_cut {
                        continue;
                    }
                    for xa in 0..da {
                        for ya in 0..da {
                            let r = row(xa, xs, ya);
                            for ys in 0..ds {
                                ba[r + col(xb, ys, yb)] += b * am[((xa << ns) | z, (ya << ns) | ys)];
                            }
                        }
                    }
                }
            }
        }
    }
    let sq: f64 = ab.iter().zip(&ba).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok(sq.sqrt())
}
