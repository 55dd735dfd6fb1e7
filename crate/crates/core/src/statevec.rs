//! Full-register state vectors for streaming traces over computational
//! basis vectors. Vectors start sparse and switch to dense storage once
//! they fill up.

use crate::linalg::{Matrix, C64};

/// Amplitudes at or below this magnitude are dropped from sparse vectors.
const DROP: f64 = 1e-14;

/// A local operator bound to bit positions of the register.
pub(crate) struct LocalGate {
    dim: usize,
    mask: u64,
    bits: Vec<u32>,
    offsets: Vec<u64>,
    entries: Vec<C64>,
}

impl LocalGate {
    /// `bits[i]` is the register bit carrying local qubit `i` (local qubit 0
    /// is the most significant bit of the matrix index).
    pub(crate) fn new(matrix: &Matrix, bits: &[u32]) -> Self {
        let k = bits.len();
        let dim = 1usize << k;
        assert_eq!(matrix.nrows(), dim);
        let offsets = (0..dim)
            .map(|l| {
                (0..k)
                    .filter(|&i| (l >> (k - 1 - i)) & 1 == 1)
                    .map(|i| 1u64 << bits[i])
                    .sum()
            })
            .collect();
        let mask = bits.iter().map(|&b| 1u64 << b).sum();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(matrix[(r, c)]);
            }
        }
        LocalGate {
            dim,
            mask,
            bits: bits.to_vec(),
            offsets,
            entries,
        }
    }

    fn local_index(&self, g: u64) -> usize {
        let k = self.bits.len();
        self.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| (((g >> b) & 1) as usize) << (k - 1 - i))
            .sum()
    }

    fn apply_local(&self, amps: &[C64], out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.entries[r * self.dim..(r + 1) * self.dim];
            *o = amps
                .iter()
                .zip(row)
                .filter(|(a, _)| a.re != 0.0 || a.im != 0.0)
                .map(|(a, m)| a * m)
                .sum();
        }
    }
}

pub(crate) enum StateVec {
    Sparse { n: usize, entries: Vec<(u64, C64)> },
    Dense { amps: Vec<C64> },
}

impl StateVec {
    pub(crate) fn basis(n: usize, index: u64) -> Self {
        StateVec::Sparse {
            n,
            entries: vec![(index, C64::new(1.0, 0.0))],
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            StateVec::Sparse { entries, .. } => entries.is_empty(),
            StateVec::Dense { .. } => false,
        }
    }

    pub(crate) fn amplitude(&self, index: u64) -> C64 {
        match self {
            StateVec::Sparse { entries, .. } => entries
                .iter()
                .filter(|(g, _)| *g == index)
                .map(|(_, a)| *a)
                .sum(),
            StateVec::Dense { amps } => amps[index as usize],
        }
    }

    pub(crate) fn apply(&mut self, gate: &LocalGate) {
        match self {
            StateVec::Sparse { n, entries } => {
                let n = *n;
                let mut keyed: Vec<(u64, usize, C64)> = entries
                    .iter()
                    .map(|&(g, a)| (g & !gate.mask, gate.local_index(g), a))
                    .collect();
                keyed.sort_unstable_by_key(|e| e.0);
                let mut out = Vec::with_capacity(keyed.len());
                let mut amps = vec![C64::new(0.0, 0.0); gate.dim];
                let mut res = vec![C64::new(0.0, 0.0); gate.dim];
                let mut i = 0;
                while i < keyed.len() {
                    let base = keyed[i].0;
                    amps.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
                    while i < keyed.len() && keyed[i].0 == base {
                        amps[keyed[i].1] += keyed[i].2;
                        i += 1;
                    }
                    gate.apply_local(&amps, &mut res);
                    for (l, &v) in res.iter().enumerate() {
                        if v.norm() > DROP {
                            out.push((base | gate.offsets[l], v));
                        }
                    }
                }
                let dim = 1usize << n;
                if n <= 26 && out.len() > dim / 8 {
                    let mut dense = vec![C64::new(0.0, 0.0); dim];
                    for (g, a) in out {
                        dense[g as usize] += a;
                    }
                    *self = StateVec::Dense { amps: dense };
                } else {
                    *entries = out;
                }
            }
            StateVec::Dense { amps } => {
                let dim = amps.len() as u64;
                let mut local = vec![C64::new(0.0, 0.0); gate.dim];
                let mut res = vec![C64::new(0.0, 0.0); gate.dim];
                let mut base = 0u64;
                while base < dim {
                    let mut any = false;
                    for (l, slot) in local.iter_mut().enumerate() {
                        *slot = amps[(base | gate.offsets[l]) as usize];
                        any |= slot.re != 0.0 || slot.im != 0.0;
                    }
                    if any {
                        gate.apply_local(&local, &mut res);
                        for (l, &v) in res.iter().enumerate() {
                            amps[(base | gate.offsets[l]) as usize] = v;
                        }
                    }
                    base = ((base | gate.mask) + 1) & !gate.mask;
                }
            }
        }
    }
}
