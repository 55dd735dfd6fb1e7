//! Certificate verification.
//!
//! A certificate fixes one slice per split vertex in each layer. The value
//! checked is
//!
//! ```text
//! Ω(α, β) = tr[ (⊗_black Π_p^α) (⊗_white Π_p^β) ]
//! ```
//!
//! evaluated without ever touching the full register: split vertices are
//! traced out (vertices split in both layers contribute `|⟨e_α|f_β⟩|²`),
//! leaving effective plaquette states that overlap only along
//! one-dimensional chains. Each chain is contracted with a frontier of at
//! most a few qubits. Everything is accumulated in the log2 domain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::decompose::{certificate_space, decompose_layers, CertificateSpace, Decomposition};
use crate::error::{Error, Result};
use crate::lattice::{Color, LatticeSpec, PlaquetteId, VertexId};
use crate::linalg::{c64, offsets, Matrix, QubitOperator, C64};
use crate::model::{check_commuting, ground_projectors, CommutingModel, GroundProjectors};

/// Factors at or below this are exact zeros up to roundoff.
pub const ZERO_FLOOR: f64 = 1e-12;
/// Relative tolerance of the "acts trivially on a qubit" test.
pub const PRUNE_TOL: f64 = 1e-9;
/// Widest frontier allowed while contracting a chain, in qubits.
pub const MAX_WORKING_QUBITS: usize = 6;

/// Slice labels for the split vertices of each layer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    pub alpha: BTreeMap<VertexId, u8>,
    pub beta: BTreeMap<VertexId, u8>,
}

impl Certificate {
    /// All labels 0.
    pub fn zeros(space: &CertificateSpace) -> Self {
        Certificate {
            alpha: space.black.iter().map(|&v| (v, 0)).collect(),
            beta: space.white.iter().map(|&v| (v, 0)).collect(),
        }
    }

    /// The `index`-th certificate in lexicographic order over `(α, β)`,
    /// black labels outermost, first vertex most significant.
    pub fn from_index(space: &CertificateSpace, index: u64) -> Self {
        let n = space.n_labels();
        let bit = |i: usize| ((index >> (n - 1 - i)) & 1) as u8;
        Certificate {
            alpha: space.black.iter().enumerate().map(|(i, &v)| (v, bit(i))).collect(),
            beta: space
                .white
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, bit(space.black.len() + i)))
                .collect(),
        }
    }

    pub fn labels(&self, color: Color) -> &BTreeMap<VertexId, u8> {
        match color {
            Color::Black => &self.alpha,
            Color::White => &self.beta,
        }
    }

    pub fn labels_mut(&mut self, color: Color) -> &mut BTreeMap<VertexId, u8> {
        match color {
            Color::Black => &mut self.alpha,
            Color::White => &mut self.beta,
        }
    }
}

/// Plaquette ground projectors sandwiched by the chosen slices at their
/// own-colour split corners.
#[derive(Clone, Debug)]
pub struct SlicedProjectors {
    pub black: BTreeMap<PlaquetteId, QubitOperator>,
    pub white: BTreeMap<PlaquetteId, QubitOperator>,
}

impl SlicedProjectors {
    pub fn layer(&self, color: Color) -> &BTreeMap<PlaquetteId, QubitOperator> {
        match color {
            Color::Black => &self.black,
            Color::White => &self.white,
        }
    }

    /// Black operators then white operators, the order in which they
    /// multiply inside Ω.
    pub fn ordered(&self) -> Vec<QubitOperator> {
        self.black.values().chain(self.white.values()).cloned().collect()
    }

    /// Plaquettes whose sandwich vanished.
    pub fn zero_plaquettes(&self) -> Vec<PlaquetteId> {
        self.black
            .iter()
            .chain(self.white.iter())
            .filter(|(_, op)| op.norm() <= ZERO_FLOOR)
            .map(|(p, _)| *p)
            .collect()
    }
}

/// A plaquette operator after slicing and tracing out every split vertex.
/// Its labels are the untraced corners on which it acts non-trivially; with
/// no labels it is a plain scalar.
#[derive(Clone, Debug)]
pub struct EffectiveState {
    pub plaquette: PlaquetteId,
    pub op: QubitOperator,
}

impl EffectiveState {
    pub fn color(&self) -> Color {
        self.plaquette.color()
    }

    pub fn support(&self) -> &[usize] {
        self.op.labels()
    }

    pub fn is_scalar(&self) -> bool {
        self.op.labels().is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct EffectiveStates {
    pub black: Vec<EffectiveState>,
    pub white: Vec<EffectiveState>,
    /// `tr[π_α π̄_β]` for each vertex split in both layers.
    pub vertex_overlaps: Vec<(VertexId, f64)>,
}

impl EffectiveStates {
    /// Product of the vertex overlaps in log2, or `None` if one vanishes.
    pub fn log2_scalar_product(&self) -> Option<f64> {
        self.vertex_overlaps
            .iter()
            .try_fold(0.0, |acc, &(_, o)| (o > ZERO_FLOOR).then(|| acc + o.log2()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub shared: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentShape {
    Isolated,
    Path,
    Cycle,
}

/// A connected component, nodes listed in contraction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub shape: ComponentShape,
    pub nodes: Vec<usize>,
}

/// Effective states with non-empty support, joined when they act on a
/// common qubit.
#[derive(Clone, Debug)]
pub struct OverlapGraph {
    pub nodes: Vec<EffectiveState>,
    pub edges: Vec<GraphEdge>,
    adjacency: Vec<Vec<usize>>,
}

impl OverlapGraph {
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.nodes.len()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    /// Components with their nodes in chain order: paths start at their
    /// lowest-index endpoint, cycles at their lowest-index node.
    pub fn components(&self) -> Vec<Component> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for root in 0..self.nodes.len() {
            if seen[root] {
                continue;
            }
            let mut members = vec![root];
            seen[root] = true;
            let mut i = 0;
            while i < members.len() {
                for &n in &self.adjacency[members[i]] {
                    if !seen[n] {
                        seen[n] = true;
                        members.push(n);
                    }
                }
                i += 1;
            }
            let n_edges: usize = members.iter().map(|&m| self.degree(m)).sum::<usize>() / 2;
            let shape = match (members.len(), n_edges) {
                (1, _) => ComponentShape::Isolated,
                (n, e) if e + 1 == n => ComponentShape::Path,
                _ => ComponentShape::Cycle,
            };
            let start = match shape {
                ComponentShape::Path => *members
                    .iter()
                    .filter(|&&m| self.degree(m) == 1)
                    .min()
                    .expect("a path has endpoints"),
                _ => *members.iter().min().expect("non-empty"),
            };
            let nodes = self.walk(start, None);
            out.push(Component { shape, nodes });
        }
        out
    }

    /// Walks a path or cycle from `start`, optionally choosing the first step.
    pub fn walk(&self, start: usize, first: Option<usize>) -> Vec<usize> {
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = match (prev, first) {
                (None, Some(f)) => Some(f),
                _ => self.adjacency[cur]
                    .iter()
                    .copied()
                    .filter(|&n| Some(n) != prev && !order.contains(&n))
                    .min(),
            };
            match next {
                Some(n) => {
                    order.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => return order,
            }
        }
    }
}

/// Builds the overlap graph. Same-colour states sharing a qubit, or any
/// state touching more than two others, mean the input was not a valid
/// commuting instance.
pub fn build_overlap_graph(
    black: &[EffectiveState],
    white: &[EffectiveState],
    lattice: &LatticeSpec,
) -> Result<OverlapGraph> {
    let nodes: Vec<EffectiveState> = black
        .iter()
        .chain(white.iter())
        .filter(|s| !s.is_scalar())
        .cloned()
        .collect();
    let mut holders: BTreeMap<(usize, Color), usize> = BTreeMap::new();
    for (i, s) in nodes.iter().enumerate() {
        for &q in s.support() {
            if holders.insert((q, s.color()), i).is_some() {
                return Err(Error::SupportConflict {
                    vertex: lattice.vertex_at(q),
                    color: s.color(),
                });
            }
        }
    }
    let mut shared: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (&(q, color), &i) in &holders {
        if color == Color::Black {
            if let Some(&j) = holders.get(&(q, Color::White)) {
                shared.entry((i.min(j), i.max(j))).or_default().push(q);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    let edges: Vec<GraphEdge> = shared
        .into_iter()
        .map(|((a, b), shared)| {
            adjacency[a].push(b);
            adjacency[b].push(a);
            GraphEdge { a, b, shared }
        })
        .collect();
    for (i, adj) in adjacency.iter_mut().enumerate() {
        adj.sort_unstable();
        if adj.len() > 2 {
            return Err(Error::DegreeViolation {
                plaquette: nodes[i].plaquette,
                degree: adj.len(),
            });
        }
    }
    Ok(OverlapGraph {
        nodes,
        edges,
        adjacency,
    })
}

/// Sums out the qubits two chain tensors share. Both tensors are indexed by
/// per-qubit `(x, y)` pairs: black states as `ρ[x, y]`, white states
/// transposed, so that the full contraction is `Σ_{x,y} Πb[x,y] Πw[y,x]`.
fn contract_pair(a: &QubitOperator, b: &QubitOperator) -> Result<QubitOperator> {
    let (la, lb) = (a.labels(), b.labels());
    let shared: Vec<usize> = la.iter().copied().filter(|l| lb.contains(l)).collect();
    let a_only: Vec<usize> = (0..la.len()).filter(|&i| !lb.contains(&la[i])).collect();
    let b_only: Vec<usize> = (0..lb.len()).filter(|&i| !la.contains(&lb[i])).collect();
    let a_sh: Vec<usize> = shared.iter().map(|l| la.iter().position(|x| x == l).unwrap()).collect();
    let b_sh: Vec<usize> = shared.iter().map(|l| lb.iter().position(|x| x == l).unwrap()).collect();

    let (off_aa, off_as) = (offsets(la.len(), &a_only), offsets(la.len(), &a_sh));
    let (off_bb, off_bs) = (offsets(lb.len(), &b_only), offsets(lb.len(), &b_sh));
    let nb = b_only.len();
    let dim = off_aa.len() * off_bb.len();
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut out = Matrix::zeros(dim, dim);
    for (ra, &ora) in off_aa.iter().enumerate() {
        for (rb, &orb) in off_bb.iter().enumerate() {
            for (ca, &oca) in off_aa.iter().enumerate() {
                for (cb, &ocb) in off_bb.iter().enumerate() {
                    let mut acc = c64(0.0, 0.0);
                    for (&axs, &bxs) in off_as.iter().zip(&off_bs) {
                        for (&ays, &bys) in off_as.iter().zip(&off_bs) {
                            acc += ma[(ora + axs, oca + ays)] * mb[(orb + bxs, ocb + bys)];
                        }
                    }
                    out[((ra << nb) | rb, (ca << nb) | cb)] = acc;
                }
            }
        }
    }
    let labels = a_only
        .iter()
        .map(|&i| la[i])
        .chain(b_only.iter().map(|&i| lb[i]))
        .collect();
    QubitOperator::new(labels, out)
}

/// Contracts the listed graph nodes in the given order. Qubits that belong
/// to a single listed node are traced out first; the frontier may never
/// exceed [`MAX_WORKING_QUBITS`].
pub fn contract_in_order(graph: &OverlapGraph, order: &[usize]) -> Result<C64> {
    let Some(&first) = order.first() else {
        return Err(Error::MalformedComponent("empty component".into()));
    };
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &n in order {
        let node = graph
            .nodes
            .get(n)
            .ok_or_else(|| Error::MalformedComponent(format!("no node {n}")))?;
        for &q in node.support() {
            *count.entry(q).or_default() += 1;
        }
    }
    if count.values().any(|&c| c > 2) {
        return Err(Error::MalformedComponent("qubit held by more than two states".into()));
    }
    let tensor = |n: usize| -> Result<QubitOperator> {
        let node = &graph.nodes[n];
        let keep: Vec<usize> = node.support().iter().copied().filter(|q| count[q] == 2).collect();
        let t = node.op.partial_trace(&keep)?;
        Ok(match node.color() {
            Color::Black => t,
            Color::White => t.transpose(),
        })
    };
    let mut frontier = tensor(first)?;
    for &n in &order[1..] {
        let next = tensor(n)?;
        let working: BTreeSet<usize> = frontier.labels().iter().chain(next.labels()).copied().collect();
        if working.len() > MAX_WORKING_QUBITS {
            return Err(Error::MalformedComponent(format!(
                "frontier of {} qubits while absorbing {}",
                working.len(),
                graph.nodes[n].plaquette
            )));
        }
        frontier = contract_pair(&frontier, &next)?;
    }
    if !frontier.labels().is_empty() {
        return Err(Error::MalformedComponent("open legs left after contraction".into()));
    }
    Ok(frontier.matrix()[(0, 0)])
}

/// Value of one chain: the trace of (its black states)·(its white states).
pub fn contract_component(graph: &OverlapGraph, component: &Component) -> Result<f64> {
    Ok(contract_in_order(graph, &component.nodes)?.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// A plaquette projector annihilated by its slice choice.
    Sandwich,
    VertexOverlap,
    Component,
    FreeQubits,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorKind::Sandwich => "sandwich",
            FactorKind::VertexOverlap => "vertex-overlap",
            FactorKind::Component => "component",
            FactorKind::FreeQubits => "free-qubits",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub id: String,
    /// Linear value; for free qubits this is the qubit count's `2^n` and may
    /// be infinite for huge lattices, so prefer `log2`.
    pub value: f64,
    pub log2: f64,
}

impl Factor {
    pub fn new(kind: FactorKind, id: String, value: f64) -> Self {
        let log2 = if value > 0.0 { value.log2() } else { f64::NEG_INFINITY };
        Factor { kind, id, value, log2 }
    }

    pub fn is_zero(&self) -> bool {
        self.kind != FactorKind::FreeQubits && self.value <= ZERO_FLOOR
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaResult {
    pub zero: bool,
    /// `log2 Ω`; `-inf` when zero.
    pub log2_magnitude: f64,
    pub factors: Vec<Factor>,
}

impl OmegaResult {
    pub fn from_factors(factors: Vec<Factor>) -> Self {
        let zero = factors.iter().any(Factor::is_zero);
        let log2_magnitude = if zero {
            f64::NEG_INFINITY
        } else {
            factors.iter().map(|f| f.log2).sum()
        };
        OmegaResult {
            zero,
            log2_magnitude,
            factors,
        }
    }

    /// Linear value (underflows to 0 for very small Ω).
    pub fn value(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.log2_magnitude.exp2()
        }
    }

    pub fn zero_factor_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub accept: bool,
    pub threshold_log2: f64,
    pub omega: OmegaResult,
}

/// `log2` of the default acceptance threshold `2^-(2N+1)`.
pub fn default_threshold_log2(n_qubits: usize) -> f64 {
    -(2.0 * n_qubits as f64 + 1.0)
}

/// A commuting model prepared for verification: ground projectors and both
/// layer decompositions, computed once.
#[derive(Clone, Debug)]
pub struct Verifier {
    projectors: GroundProjectors,
    decomposition: Decomposition,
    space: CertificateSpace,
}

impl Verifier {
    /// Fails with [`Error::NonCommuting`] unless every pair of terms commutes.
    pub fn new(model: &CommutingModel) -> Result<Self> {
        check_commuting(model).into_result()?;
        let projectors = ground_projectors(model)?;
        let decomposition = decompose_layers(&projectors)?;
        Ok(Self::from_parts(projectors, decomposition))
    }

    pub fn from_parts(projectors: GroundProjectors, decomposition: Decomposition) -> Self {
        let space = certificate_space(&decomposition);
        Verifier {
            projectors,
            decomposition,
            space,
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        self.projectors.lattice()
    }

    pub fn projectors(&self) -> &GroundProjectors {
        &self.projectors
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn certificate_space(&self) -> &CertificateSpace {
        &self.space
    }

    /// Label domains must be exactly the split vertices, labels 0 or 1.
    pub fn check_certificate(&self, cert: &Certificate) -> Result<()> {
        for (color, split) in [(Color::Black, &self.space.black), (Color::White, &self.space.white)] {
            let labels = cert.labels(color);
            if let Some(v) = labels.keys().find(|v| !split.contains(v)) {
                return Err(Error::CertificateDomain(format!(
                    "{color:?} label at {v}, which is not a split vertex"
                )));
            }
            if let Some(v) = split.iter().find(|v| !labels.contains_key(v)) {
                return Err(Error::CertificateDomain(format!("missing {color:?} label at {v}")));
            }
            if let Some((v, l)) = labels.iter().find(|(_, &l)| l > 1) {
                return Err(Error::CertificateDomain(format!("{color:?} label {l} at {v}")));
            }
        }
        Ok(())
    }

    fn slice_projector(&self, color: Color, v: VertexId, cert: &Certificate) -> Option<Matrix> {
        let label = *cert.labels(color).get(&v)?;
        self.decomposition.layer(color).get(v).slice_projector(label)
    }

    /// `Π_p` sandwiched by its own layer's chosen slices.
    pub fn sliced_projector(&self, p: PlaquetteId, cert: &Certificate) -> Result<QubitOperator> {
        let lattice = self.lattice();
        let mut op = self.projectors.operator(p)?;
        for v in lattice.corners(p)? {
            if let Some(pi) = self.slice_projector(p.color(), v, cert) {
                op = op.sandwich(lattice.vertex_index(v), &pi)?;
            }
        }
        Ok(op)
    }

    pub fn apply_certificate(&self, cert: &Certificate) -> Result<SlicedProjectors> {
        self.check_certificate(cert)?;
        let layer = |color| {
            self.lattice()
                .plaquettes_of(color)
                .into_iter()
                .map(|p| Ok((p, self.sliced_projector(p, cert)?)))
                .collect::<Result<BTreeMap<_, _>>>()
        };
        Ok(SlicedProjectors {
            black: layer(Color::Black)?,
            white: layer(Color::White)?,
        })
    }

    /// One effective state: sandwich by the other layer's slices where only
    /// the other layer is split, trace out all split corners, then drop
    /// corners the result acts on trivially.
    pub fn effective_state(&self, p: PlaquetteId, sliced: &QubitOperator, cert: &Certificate) -> Result<EffectiveState> {
        let lattice = self.lattice();
        let own = self.decomposition.layer(p.color());
        let other = self.decomposition.layer(p.color().other());
        let mut op = sliced.clone();
        let mut keep = Vec::new();
        for v in lattice.corners(p)? {
            let label = lattice.vertex_index(v);
            match (own.is_split(v), other.is_split(v)) {
                (false, true) => {
                    let pi = self
                        .slice_projector(p.color().other(), v, cert)
                        .ok_or_else(|| Error::CertificateDomain(format!("missing label at {v}")))?;
                    op = op.sandwich(label, &pi)?;
                }
                (false, false) => keep.push(label),
                _ => {}
            }
        }
        let mut op = op.partial_trace(&keep)?;
        for label in keep {
            if op.acts_trivially_on(label, PRUNE_TOL)? {
                op = op.trace_out(label)?.scaled(c64(0.5, 0.0));
            }
        }
        Ok(EffectiveState { plaquette: p, op })
    }

    pub fn effective_states(&self, sliced: &SlicedProjectors, cert: &Certificate) -> Result<EffectiveStates> {
        let states = |color| {
            sliced
                .layer(color)
                .iter()
                .map(|(&p, op)| self.effective_state(p, op, cert))
                .collect::<Result<Vec<_>>>()
        };
        Ok(EffectiveStates {
            black: states(Color::Black)?,
            white: states(Color::White)?,
            vertex_overlaps: self.vertex_overlaps(cert),
        })
    }

    /// `|⟨e_α|f_β⟩|²` at every vertex split in both layers.
    pub fn vertex_overlaps(&self, cert: &Certificate) -> Vec<(VertexId, f64)> {
        let mut out = Vec::new();
        for &v in &self.space.black {
            if !self.decomposition.white.is_split(v) {
                continue;
            }
            let e = self.decomposition.black.get(v).slice_state(cert.alpha[&v]).expect("split");
            let f = self.decomposition.white.get(v).slice_state(cert.beta[&v]).expect("split");
            out.push((v, e.dotc(&f).norm_sqr()));
        }
        out
    }

    /// Vertices outside every split set and every effective support; each
    /// contributes a factor 2.
    fn free_qubits(&self, states: &EffectiveStates) -> usize {
        let covered: BTreeSet<usize> = states
            .black
            .iter()
            .chain(states.white.iter())
            .flat_map(|s| s.support().iter().copied())
            .collect();
        self.lattice()
            .vertices()
            .filter(|&v| {
                !self.decomposition.black.is_split(v)
                    && !self.decomposition.white.is_split(v)
                    && !covered.contains(&self.lattice().vertex_index(v))
            })
            .count()
    }

    fn factors_from(&self, sliced: &SlicedProjectors, cert: &Certificate) -> Result<Vec<Factor>> {
        self.factors(&self.effective_states(sliced, cert)?)
    }

    /// Every factor of Ω given the effective states.
    pub fn factors(&self, states: &EffectiveStates) -> Result<Vec<Factor>> {
        let mut factors: Vec<Factor> = states
            .vertex_overlaps
            .iter()
            .map(|(v, o)| Factor::new(FactorKind::VertexOverlap, v.to_string(), *o))
            .collect();
        for s in states.black.iter().chain(states.white.iter()).filter(|s| s.is_scalar()) {
            factors.push(Factor::new(
                FactorKind::Component,
                s.plaquette.to_string(),
                s.op.matrix()[(0, 0)].re,
            ));
        }
        let graph = build_overlap_graph(&states.black, &states.white, self.lattice())?;
        for comp in graph.components() {
            let id = comp
                .nodes
                .iter()
                .map(|&n| graph.nodes[n].plaquette.to_string())
                .collect::<Vec<_>>()
                .join("-");
            factors.push(Factor::new(FactorKind::Component, id, contract_component(&graph, &comp)?));
        }
        let free = self.free_qubits(states);
        if free > 0 {
            factors.push(Factor {
                kind: FactorKind::FreeQubits,
                id: format!("{free} qubits"),
                value: (free as f64).exp2(),
                log2: free as f64,
            });
        }
        Ok(factors)
    }

    /// Ω for a certificate, short-circuiting on the first vanishing slice
    /// sandwich.
    pub fn compute_omega(&self, cert: &Certificate) -> Result<OmegaResult> {
        let sliced = self.apply_certificate(cert)?;
        let zeros = sliced.zero_plaquettes();
        if let Some(p) = zeros.first() {
            return Ok(OmegaResult::from_factors(vec![Factor::new(
                FactorKind::Sandwich,
                p.to_string(),
                0.0,
            )]));
        }
        Ok(OmegaResult::from_factors(self.factors_from(&sliced, cert)?))
    }

    /// Like [`compute_omega`](Self::compute_omega) but reports every zero
    /// factor instead of stopping at the first.
    pub fn omega_all_factors(&self, cert: &Certificate) -> Result<OmegaResult> {
        let sliced = self.apply_certificate(cert)?;
        let zeros = sliced.zero_plaquettes();
        if !zeros.is_empty() {
            let mut factors: Vec<Factor> = zeros
                .iter()
                .map(|p| Factor::new(FactorKind::Sandwich, p.to_string(), 0.0))
                .collect();
            factors.extend(self.factors_from(&sliced, cert)?);
            return Ok(OmegaResult::from_factors(factors));
        }
        Ok(OmegaResult::from_factors(self.factors_from(&sliced, cert)?))
    }

    /// Accepts iff Ω is non-zero and `log2 Ω ≥ threshold_log2` (default
    /// `-(2N+1)`).
    pub fn verify(&self, cert: &Certificate, threshold_log2: Option<f64>) -> Result<Verdict> {
        let threshold_log2 =
            threshold_log2.unwrap_or_else(|| default_threshold_log2(self.lattice().n_vertices()));
        let omega = self.compute_omega(cert)?;
        Ok(Verdict {
            accept: !omega.zero && omega.log2_magnitude >= threshold_log2,
            threshold_log2,
            omega,
        })
    }
}

pub fn compute_omega(model: &CommutingModel, cert: &Certificate) -> Result<OmegaResult> {
    Verifier::new(model)?.compute_omega(cert)
}

pub fn verify(model: &CommutingModel, cert: &Certificate, threshold_log2: Option<f64>) -> Result<Verdict> {
    Verifier::new(model)?.verify(cert, threshold_log2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, pauli_word, trace_product_embedded, DEFAULT_QUBIT_CAP};
    use crate::model::{gen_ising, gen_toric, IsingParams};

    fn bell(labels: [usize; 2]) -> QubitOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = Matrix::from_column_slice(4, 1, &[c64(s, 0.), c64(0., 0.), c64(0., 0.), c64(s, 0.)]);
        QubitOperator::new(labels.to_vec(), &v * v.adjoint()).unwrap()
    }

    fn state(x: usize, y: usize, op: QubitOperator) -> EffectiveState {
        EffectiveState {
            plaquette: PlaquetteId::new(x, y),
            op,
        }
    }

    #[test]
    fn toric_zero_certificate_has_log2_minus_n() {
        let lattice = LatticeSpec::periodic(4, 4).unwrap();
        let v = Verifier::new(&gen_toric(lattice)).unwrap();
        let cert = Certificate::zeros(v.certificate_space());
        let sliced = v.apply_certificate(&cert).unwrap();
        let mut zero4 = Matrix::zeros(16, 16);
        zero4[(0, 0)] = c64(1., 0.);
        for op in sliced.black.values() {
            assert!((op.matrix() - &zero4).norm() < 1e-10);
        }
        let plus4 = Matrix::from_element(16, 16, c64(1.0 / 16.0, 0.));
        for op in sliced.white.values() {
            assert!((op.matrix() - &plus4).norm() < 1e-10);
        }
        let states = v.effective_states(&sliced, &cert).unwrap();
        assert_eq!(states.vertex_overlaps.len(), 16);
        assert!((states.log2_scalar_product().unwrap() + 16.0).abs() < 1e-10);
        assert!(states.black.iter().chain(&states.white).all(|s| s.is_scalar()));
        let graph = build_overlap_graph(&states.black, &states.white, &lattice).unwrap();
        assert!(graph.nodes.is_empty());
        let verdict = v.verify(&cert, None).unwrap();
        assert!(verdict.accept);
        assert!((verdict.omega.log2_magnitude + 16.0).abs() < 1e-10);
        assert_eq!(verdict.threshold_log2, -33.0);
    }

    #[test]
    fn identity_model_gives_two_to_the_n() {
        let lattice = LatticeSpec::open(3, 3).unwrap();
        let terms = lattice.plaquettes().into_iter().map(|p| (p, Matrix::zeros(16, 16))).collect();
        let model = CommutingModel::new(lattice, terms).unwrap();
        let v = Verifier::new(&model).unwrap();
        let cert = Certificate::default();
        let omega = v.compute_omega(&cert).unwrap();
        assert!((omega.log2_magnitude - 9.0).abs() < 1e-12);
        let free = omega.factors.iter().find(|f| f.kind == FactorKind::FreeQubits).unwrap();
        assert_eq!(free.log2, 9.0);
    }

    #[test]
    fn ising_certificates_match_dense_products() {
        let lattice = LatticeSpec::open(3, 3).unwrap();
        let mut params = IsingParams::uniform(&lattice, 1.0, 0.0);
        params.fields[4] = 0.5;
        let v = Verifier::new(&gen_ising(lattice, &params)).unwrap();
        let space = v.certificate_space().clone();
        assert!(space.n_labels() > 0);
        for i in 0..space.count().unwrap() {
            let cert = Certificate::from_index(&space, i);
            let omega = v.compute_omega(&cert).unwrap();
            let sliced = v.apply_certificate(&cert).unwrap();
            let dense = trace_product_embedded(&sliced.ordered(), DEFAULT_QUBIT_CAP).unwrap().re;
            assert!((omega.value() - dense).abs() < 1e-9 * dense.max(1.0), "{cert:?}");
        }
    }

    #[test]
    fn disagreeing_slices_across_a_ferromagnetic_edge_vanish() {
        // black p(1,1) owns the edge (1,1)-(2,1), both ends split in black
        let lattice = LatticeSpec::open(4, 3).unwrap();
        let v = Verifier::new(&gen_ising(lattice, &IsingParams::uniform(&lattice, 1.0, 0.0))).unwrap();
        assert_eq!(v.certificate_space().black, vec![VertexId::new(1, 1), VertexId::new(2, 1)]);
        let mut cert = Certificate::zeros(v.certificate_space());
        assert!(!v.compute_omega(&cert).unwrap().zero);
        cert.alpha.insert(VertexId::new(2, 1), 1);
        let omega = v.compute_omega(&cert).unwrap();
        assert!(omega.zero);
        assert_eq!(omega.factors.len(), 1);
        assert_eq!(omega.factors[0].kind, FactorKind::Sandwich);
        assert_eq!(omega.factors[0].id, "p(1,1)");
    }

    #[test]
    fn certificate_domain_is_checked() {
        let v = Verifier::new(&gen_toric(LatticeSpec::open(3, 3).unwrap())).unwrap();
        let mut cert = Certificate::zeros(v.certificate_space());
        v.check_certificate(&cert).unwrap();
        cert.alpha.insert(VertexId::new(0, 0), 0);
        assert!(matches!(v.compute_omega(&cert), Err(Error::CertificateDomain(_))));
        let mut cert = Certificate::zeros(v.certificate_space());
        cert.beta.clear();
        assert!(matches!(v.compute_omega(&cert), Err(Error::CertificateDomain(_))));
        let mut cert = Certificate::zeros(v.certificate_space());
        cert.beta.insert(VertexId::new(1, 1), 2);
        assert!(matches!(v.compute_omega(&cert), Err(Error::CertificateDomain(_))));
    }

    #[test]
    fn bell_path_contracts_to_half() {
        let lattice = LatticeSpec::open(4, 4).unwrap();
        let b = state(0, 0, bell([1, 2]));
        let w = state(1, 0, bell([2, 3]));
        let graph = build_overlap_graph(std::slice::from_ref(&b), std::slice::from_ref(&w), &lattice).unwrap();
        let comps = graph.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].shape, ComponentShape::Path);
        let value = contract_component(&graph, &comps[0]).unwrap();
        assert!((value - 0.5).abs() < 1e-12);
        let dense = trace_product_embedded(&[b.op, w.op], DEFAULT_QUBIT_CAP).unwrap();
        assert!((dense.re - value).abs() < 1e-12);
    }

    #[test]
    fn isolated_state_is_its_trace() {
        let lattice = LatticeSpec::open(4, 4).unwrap();
        let m = Matrix::from_row_slice(2, 2, &[c64(0.7, 0.), c64(0.1, 0.2), c64(0.1, -0.2), c64(0.3, 0.)]);
        let s = state(0, 0, QubitOperator::new(vec![5], m).unwrap());
        let graph = build_overlap_graph(&[s], &[], &lattice).unwrap();
        let comps = graph.components();
        assert_eq!(comps[0].shape, ComponentShape::Isolated);
        assert!((contract_component(&graph, &comps[0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_cycle_matches_dense_in_every_order() {
        // four qubits around a square, alternating black and white Bell pairs
        let lattice = LatticeSpec::open(4, 4).unwrap();
        let black = [state(0, 0, bell([0, 1])), state(1, 1, bell([5, 4]))];
        let white = [state(1, 0, bell([1, 5])), state(0, 1, bell([4, 0]))];
        let graph = build_overlap_graph(&black, &white, &lattice).unwrap();
        let comps = graph.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].shape, ComponentShape::Cycle);
        let dense = trace_product_embedded(
            &[black[0].op.clone(), black[1].op.clone(), white[0].op.clone(), white[1].op.clone()],
            DEFAULT_QUBIT_CAP,
        )
        .unwrap();
        for start in 0..4 {
            for &first in graph.neighbours(start) {
                let order = graph.walk(start, Some(first));
                assert_eq!(order.len(), 4);
                let v = contract_in_order(&graph, &order).unwrap();
                assert!((v - dense).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn branching_is_a_degree_violation() {
        // a black state on all four corners of p(1,1) on a 4x4 open lattice,
        // touched by three white neighbours on distinct corners
        let lattice = LatticeSpec::open(4, 4).unwrap();
        let idx = |x, y| lattice.vertex_index(VertexId::new(x, y));
        let full = QubitOperator::new(
            vec![idx(1, 1), idx(2, 1), idx(2, 2), idx(1, 2)],
            (identity(16) + pauli_word("XXXX")) * c64(0.5, 0.),
        )
        .unwrap();
        let z = |q| QubitOperator::new(vec![q], (identity(2) + pauli_word("Z")) * c64(0.5, 0.)).unwrap();
        let black = [state(1, 1, full)];
        let white = [
            state(0, 1, z(idx(1, 2))),
            state(1, 0, z(idx(2, 1))),
            state(2, 1, z(idx(2, 2))),
        ];
        let err = build_overlap_graph(&black, &white, &lattice).unwrap_err();
        assert!(matches!(err, Error::DegreeViolation { degree: 3, .. }));
    }

    #[test]
    fn same_colour_overlap_is_rejected() {
        let lattice = LatticeSpec::open(4, 4).unwrap();
        let black = [state(0, 0, bell([0, 5])), state(1, 1, bell([5, 6]))];
        assert!(matches!(
            build_overlap_graph(&black, &[], &lattice),
            Err(Error::SupportConflict { .. })
        ));
    }

    #[test]
    fn open_toric_has_boundary_chains() {
        let lattice = LatticeSpec::open(3, 3).unwrap();
        let v = Verifier::new(&gen_toric(lattice)).unwrap();
        let cert = Certificate::zeros(v.certificate_space());
        let sliced = v.apply_certificate(&cert).unwrap();
        let states = v.effective_states(&sliced, &cert).unwrap();
        let graph = build_overlap_graph(&states.black, &states.white, &lattice).unwrap();
        assert_eq!(graph.nodes.len(), 4);
        let comps = graph.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].shape, ComponentShape::Cycle);
        let value = contract_component(&graph, &comps[0]).unwrap();
        let ops: Vec<QubitOperator> = states.black.iter().chain(&states.white).map(|s| s.op.clone()).collect();
        let dense = trace_product_embedded(&ops, DEFAULT_QUBIT_CAP).unwrap();
        assert!((value - dense.re).abs() < 1e-12);
    }
}
