//! Square-lattice geometry.
//!
//! Qubits live on vertices, interactions on plaquettes. A plaquette is named
//! by its top-left vertex and its corners are always listed clockwise
//! `[TL, TR, BR, BL]`. Wherever a plaquette operator is written as a 16x16
//! matrix, corner 0 is the most significant bit of the row/column index.
//!
//! Plaquettes are coloured in a checkerboard: `(x + y)` even is black.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Lattice vertex. Ordered row-major (`y` first, then `x`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexId {
    pub x: usize,
    pub y: usize,
}

impl VertexId {
    pub fn new(x: usize, y: usize) -> Self {
        VertexId { x, y }
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Plaquette named by its top-left corner. Ordered row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlaquetteId {
    pub x: usize,
    pub y: usize,
}

impl PlaquetteId {
    pub fn new(x: usize, y: usize) -> Self {
        PlaquetteId { x, y }
    }

    pub fn color(&self) -> Color {
        if (self.x + self.y).is_multiple_of(2) {
            Color::Black
        } else {
            Color::White
        }
    }
}

impl Ord for PlaquetteId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for PlaquetteId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlaquetteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({},{})", self.x, self.y)
    }
}

/// Nearest-neighbour edge, endpoints stored in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    lx: usize,
    ly: usize,
    boundary: Boundary,
}

impl LatticeSpec {
    /// Periodic lattices must have even side lengths of at least 4; smaller
    /// tori make plaquettes wrap onto each other.
    pub fn new(lx: usize, ly: usize, boundary: Boundary) -> Result<Self> {
        if lx < 2 || ly < 2 {
            return Err(Error::InvalidLattice(format!(
                "{lx}x{ly}: need at least 2 vertices per side"
            )));
        }
        if boundary == Boundary::Periodic {
            if !lx.is_multiple_of(2) || !ly.is_multiple_of(2) {
                return Err(Error::InvalidLattice(format!(
                    "{lx}x{ly} periodic: checkerboard colouring needs even side lengths"
                )));
            }
            if lx < 4 || ly < 4 {
                return Err(Error::InvalidLattice(format!(
                    "{lx}x{ly} periodic: side length 2 makes plaquettes coincide"
                )));
            }
        }
        Ok(LatticeSpec { lx, ly, boundary })
    }

    pub fn open(lx: usize, ly: usize) -> Result<Self> {
        Self::new(lx, ly, Boundary::Open)
    }

    pub fn periodic(lx: usize, ly: usize) -> Result<Self> {
        Self::new(lx, ly, Boundary::Periodic)
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of qubits.
    pub fn n_vertices(&self) -> usize {
        self.lx * self.ly
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.x < self.lx && v.y < self.ly
    }

    /// Row-major qubit index; this is the qubit label used by every operator.
    pub fn vertex_index(&self, v: VertexId) -> usize {
        v.y * self.lx + v.x
    }

    pub fn vertex_at(&self, index: usize) -> VertexId {
        VertexId::new(index % self.lx, index / self.lx)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n_vertices()).map(move |i| self.vertex_at(i))
    }

    fn plaquette_extent(&self) -> (usize, usize) {
        match self.boundary {
            Boundary::Open => (self.lx - 1, self.ly - 1),
            Boundary::Periodic => (self.lx, self.ly),
        }
    }

    pub fn contains_plaquette(&self, p: PlaquetteId) -> bool {
        let (px, py) = self.plaquette_extent();
        p.x < px && p.y < py
    }

    /// All plaquettes in row-major order.
    pub fn plaquettes(&self) -> Vec<PlaquetteId> {
        let (px, py) = self.plaquette_extent();
        (0..py)
            .flat_map(|y| (0..px).map(move |x| PlaquetteId::new(x, y)))
            .collect()
    }

    pub fn plaquettes_of(&self, color: Color) -> Vec<PlaquetteId> {
        self.plaquettes()
            .into_iter()
            .filter(|p| p.color() == color)
            .collect()
    }

    /// Corners `[TL, TR, BR, BL]`, wrapped on a torus.
    pub fn corners(&self, p: PlaquetteId) -> Result<[VertexId; 4]> {
        if !self.contains_plaquette(p) {
            return Err(Error::OutOfRange(p.to_string()));
        }
        let x1 = (p.x + 1) % self.lx;
        let y1 = (p.y + 1) % self.ly;
        Ok([
            VertexId::new(p.x, p.y),
            VertexId::new(x1, p.y),
            VertexId::new(x1, y1),
            VertexId::new(p.x, y1),
        ])
    }

    /// Qubit labels of the corners, in corner order.
    pub fn corner_labels(&self, p: PlaquetteId) -> Result<[usize; 4]> {
        Ok(self.corners(p)?.map(|v| self.vertex_index(v)))
    }

    /// Plaquettes having `v` as a corner, in row-major order.
    pub fn plaquettes_containing(&self, v: VertexId) -> Vec<PlaquetteId> {
        if !self.contains_vertex(v) {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(4);
        for (dx, dy) in [(1, 1), (0, 1), (1, 0), (0, 0)] {
            let (x, y) = match self.boundary {
                Boundary::Open => {
                    if v.x < dx || v.y < dy {
                        continue;
                    }
                    (v.x - dx, v.y - dy)
                }
                Boundary::Periodic => ((v.x + self.lx - dx) % self.lx, (v.y + self.ly - dy) % self.ly),
            };
            let p = PlaquetteId::new(x, y);
            if self.contains_plaquette(p) {
                out.push(p);
            }
        }
        out.sort();
        out
    }

    /// Same-colour plaquettes at a vertex: two diagonal neighbours in the
    /// bulk or on a torus, fewer on an open boundary.
    pub fn incident_plaquettes(&self, v: VertexId, color: Color) -> Vec<PlaquetteId> {
        self.plaquettes_containing(v)
            .into_iter()
            .filter(|p| p.color() == color)
            .collect()
    }

    /// Every nearest-neighbour edge once.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        let periodic = self.boundary == Boundary::Periodic;
        for v in self.vertices() {
            if v.x + 1 < self.lx || periodic {
                out.push(Edge::new(v, VertexId::new((v.x + 1) % self.lx, v.y)));
            }
            if v.y + 1 < self.ly || periodic {
                out.push(Edge::new(v, VertexId::new(v.x, (v.y + 1) % self.ly)));
            }
        }
        out.sort();
        out
    }

    /// Plaquettes having both endpoints of `e` as corners.
    pub fn plaquettes_on_edge(&self, e: Edge) -> Vec<PlaquetteId> {
        let pa = self.plaquettes_containing(e.a);
        self.plaquettes_containing(e.b)
            .into_iter()
            .filter(|p| pa.contains(p))
            .collect()
    }
}
