//! Certificate search at desk scale.
//!
//! Both searches hand their result back through [`Verifier::verify`], so a
//! returned certificate is always one the verifier accepts.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{Color, PlaquetteId, VertexId};
use crate::linalg::QubitOperator;
use crate::verifier::{
    Certificate, EffectiveState, EffectiveStates, Factor, FactorKind, OmegaResult, Verdict, Verifier, ZERO_FLOOR,
};

pub const DEFAULT_LABEL_CAP: usize = 26;
pub const DEFAULT_RESTARTS: usize = 8;
/// Full passes over all labels per restart before giving up on it.
pub const MAX_PASSES: usize = 16;

#[derive(Clone, Debug)]
pub struct Found {
    pub certificate: Certificate,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    color: Color,
    vertex: VertexId,
}

fn slots(verifier: &Verifier) -> Vec<Slot> {
    let space = verifier.certificate_space();
    let black = space.black.iter().map(|&vertex| Slot { color: Color::Black, vertex });
    let white = space.white.iter().map(|&vertex| Slot { color: Color::White, vertex });
    black.chain(white).collect()
}

/// Scans the whole certificate space in lexicographic order (black labels
/// outermost) and returns the first certificate of maximal Ω, or `None`
/// when every Ω vanishes. Branches are cut as soon as some plaquette's
/// own-layer slices are all fixed and its sandwich is zero; such
/// certificates have Ω = 0 and cannot be the maximum.
pub fn exhaustive_search(verifier: &Verifier, threshold_log2: Option<f64>, label_cap: usize) -> Result<Option<Found>> {
    let slots = slots(verifier);
    if slots.len() > label_cap {
        return Err(Error::SearchSpaceTooLarge {
            labels: slots.len(),
            cap: label_cap,
        });
    }
    let lattice = verifier.lattice();
    // plaquettes to check once slot `d` is assigned
    let mut ready: Vec<Vec<PlaquetteId>> = vec![Vec::new(); slots.len()];
    for p in lattice.plaquettes() {
        let last = lattice
            .corners(p)?
            .iter()
            .filter_map(|&v| slots.iter().position(|s| s.color == p.color() && s.vertex == v))
            .max();
        if let Some(d) = last {
            ready[d].push(p);
        }
    }
    let mut search = Exhaustive {
        verifier,
        slots: &slots,
        ready: &ready,
        cert: Certificate::default(),
        best: None,
    };
    search.descend(0)?;
    match search.best {
        None => Ok(None),
        Some((certificate, _)) => {
            let verdict = verifier.verify(&certificate, threshold_log2)?;
            Ok(Some(Found { certificate, verdict }))
        }
    }
}

struct Exhaustive<'a> {
    verifier: &'a Verifier,
    slots: &'a [Slot],
    ready: &'a [Vec<PlaquetteId>],
    cert: Certificate,
    best: Option<(Certificate, OmegaResult)>,
}

impl Exhaustive<'_> {
    fn descend(&mut self, depth: usize) -> Result<()> {
        if depth == self.slots.len() {
            let omega = self.verifier.compute_omega(&self.cert)?;
            let better = match &self.best {
                _ if omega.zero => false,
                None => true,
                Some((_, best)) => omega.log2_magnitude > best.log2_magnitude,
            };
            if better {
                self.best = Some((self.cert.clone(), omega));
            }
            return Ok(());
        }
        let slot = self.slots[depth];
        for label in 0..2u8 {
            self.cert.labels_mut(slot.color).insert(slot.vertex, label);
            let mut alive = true;
            for &p in &self.ready[depth] {
                if self.verifier.sliced_projector(p, &self.cert)?.norm() <= ZERO_FLOOR {
                    alive = false;
                    break;
                }
            }
            if alive {
                self.descend(depth + 1)?;
            }
        }
        self.cert.labels_mut(slot.color).remove(&slot.vertex);
        Ok(())
    }
}

/// Hill-climbing objective: fewer vanishing factors first, then larger
/// log2 of the remaining ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Score {
    pub zero_factors: usize,
    pub log2_nonzero: f64,
}

impl Score {
    pub fn of(factors: &[Factor]) -> Self {
        Score {
            zero_factors: factors.iter().filter(|f| f.is_zero()).count(),
            log2_nonzero: factors.iter().filter(|f| !f.is_zero()).map(|f| f.log2).sum(),
        }
    }

    pub fn is_nonzero(&self) -> bool {
        self.zero_factors == 0
    }

    fn cmp(&self, other: &Score) -> Ordering {
        other
            .zero_factors
            .cmp(&self.zero_factors)
            .then(self.log2_nonzero.total_cmp(&other.log2_nonzero))
    }
}

/// Ω bookkeeping that is updated plaquette by plaquette when one label
/// changes. A flip at `v` in layer `c` alters the sliced projectors of the
/// `c` plaquettes at `v` and the effective states of every plaquette at `v`.
pub struct IncrementalOmega<'a> {
    verifier: &'a Verifier,
    cert: Certificate,
    sliced: BTreeMap<PlaquetteId, QubitOperator>,
    states: BTreeMap<PlaquetteId, EffectiveState>,
}

impl<'a> IncrementalOmega<'a> {
    pub fn new(verifier: &'a Verifier, cert: Certificate) -> Result<Self> {
        let sliced = verifier.apply_certificate(&cert)?;
        let mut out = IncrementalOmega {
            verifier,
            cert,
            sliced: sliced.black.into_iter().chain(sliced.white).collect(),
            states: BTreeMap::new(),
        };
        for p in verifier.lattice().plaquettes() {
            out.refresh_state(p)?;
        }
        Ok(out)
    }

    pub fn certificate(&self) -> &Certificate {
        &self.cert
    }

    fn refresh_state(&mut self, p: PlaquetteId) -> Result<()> {
        let state = self.verifier.effective_state(p, &self.sliced[&p], &self.cert)?;
        self.states.insert(p, state);
        Ok(())
    }

    pub fn flip(&mut self, color: Color, v: VertexId) -> Result<()> {
        let label = self
            .cert
            .labels_mut(color)
            .get_mut(&v)
            .ok_or_else(|| Error::CertificateDomain(format!("no {color:?} label at {v}")))?;
        *label ^= 1;
        let touched = self.verifier.lattice().plaquettes_containing(v);
        for &p in touched.iter().filter(|p| p.color() == color) {
            let op = self.verifier.sliced_projector(p, &self.cert)?;
            self.sliced.insert(p, op);
        }
        for p in touched {
            self.refresh_state(p)?;
        }
        Ok(())
    }

    pub fn factors(&self) -> Result<Vec<Factor>> {
        let mut factors: Vec<Factor> = self
            .sliced
            .iter()
            .filter(|(_, op)| op.norm() <= ZERO_FLOOR)
            .map(|(p, _)| Factor::new(FactorKind::Sandwich, p.to_string(), 0.0))
            .collect();
        let split = |c: Color| {
            self.states
                .values()
                .filter(|s| s.color() == c)
                .cloned()
                .collect::<Vec<_>>()
        };
        let states = EffectiveStates {
            black: split(Color::Black),
            white: split(Color::White),
            vertex_overlaps: self.verifier.vertex_overlaps(&self.cert),
        };
        factors.extend(self.verifier.factors(&states)?);
        Ok(factors)
    }

    pub fn score(&self) -> Result<Score> {
        Ok(Score::of(&self.factors()?))
    }
}

/// Hill-climbs single-label flips from `restarts` starting points: all
/// zeros first, then seeded random labelings. Stops at the first
/// certificate the verifier accepts.
pub fn greedy_search(
    verifier: &Verifier,
    threshold_log2: Option<f64>,
    seed: u64,
    restarts: usize,
) -> Result<Option<Found>> {
    let slots = slots(verifier);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zeros = Certificate::zeros(verifier.certificate_space());
    for restart in 0..restarts.max(1) {
        let mut start = zeros.clone();
        if restart > 0 {
            for s in &slots {
                start.labels_mut(s.color).insert(s.vertex, rng.random_range(0..2));
            }
        }
        let mut state = IncrementalOmega::new(verifier, start)?;
        let mut score = state.score()?;
        let mut order: Vec<usize> = (0..slots.len()).collect();
        for _ in 0..MAX_PASSES {
            if let Some(found) = accepted(verifier, &state, score, threshold_log2)? {
                return Ok(Some(found));
            }
            order.shuffle(&mut rng);
            let mut improved = false;
            for &i in &order {
                let s = slots[i];
                state.flip(s.color, s.vertex)?;
                let candidate = state.score()?;
                if candidate.cmp(&score) == Ordering::Greater {
                    score = candidate;
                    improved = true;
                } else {
                    state.flip(s.color, s.vertex)?;
                }
            }
            if !improved {
                break;
            }
        }
        if let Some(found) = accepted(verifier, &state, score, threshold_log2)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn accepted(verifier: &Verifier, state: &IncrementalOmega, score: Score, threshold_log2: Option<f64>) -> Result<Option<Found>> {
    if !score.is_nonzero() {
        return Ok(None);
    }
    let certificate = state.certificate().clone();
    let verdict = verifier.verify(&certificate, threshold_log2)?;
    Ok(verdict.accept.then_some(Found { certificate, verdict }))
}
