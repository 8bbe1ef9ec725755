//! Square partition of the vertex lattice and the coarse torus of squares.
//!
//! Coarse edge `2 * s + 0` joins square `s` to its right neighbour and
//! `2 * s + 1` joins it to the square below, with squares indexed row-major.

use super::DecoderError;
use crate::lattice::{TorusLattice, Vertex};
use crate::seeding;
use rand::Rng;

/// Partition of an `L x L` lattice into `(L/λ) x (L/λ)` squares of side `λ`.
#[derive(Debug, Clone)]
pub struct SquarePartition {
    size: usize,
    side: usize,
}

impl SquarePartition {
    pub fn new(lattice: &TorusLattice, side: usize) -> Result<Self, DecoderError> {
        let size = lattice.size();
        if side == 0 || size % side != 0 {
            return Err(DecoderError::SideDoesNotDivide { size, side });
        }
        Ok(Self { size, side })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn coarse_size(&self) -> usize {
        self.size / self.side
    }

    pub fn square_of(&self, v: Vertex) -> usize {
        let (x, y) = (v % self.size, v / self.size);
        x / self.side + self.coarse_size() * (y / self.side)
    }

    pub fn coarse_torus(&self) -> Result<CoarseTorus, DecoderError> {
        CoarseTorus::new(self.coarse_size())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoarseTorus {
    m: usize,
}

impl CoarseTorus {
    pub fn new(m: usize) -> Result<Self, DecoderError> {
        if m < 2 {
            return Err(DecoderError::CoarseTooSmall(m));
        }
        Ok(Self { m })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn num_squares(&self) -> usize {
        self.m * self.m
    }

    pub fn num_edges(&self) -> usize {
        2 * self.m * self.m
    }

    pub fn square(&self, x: usize, y: usize) -> usize {
        x % self.m + self.m * (y % self.m)
    }

    pub fn coords(&self, s: usize) -> (usize, usize) {
        (s % self.m, s / self.m)
    }

    pub fn right_edge(&self, s: usize) -> usize {
        2 * s
    }

    pub fn down_edge(&self, s: usize) -> usize {
        2 * s + 1
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let s = e / 2;
        let (x, y) = self.coords(s);
        if e % 2 == 0 {
            (s, self.square(x + 1, y))
        } else {
            (s, self.square(x, y + 1))
        }
    }

    /// Shortest-path length between two squares on the coarse torus.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let (ax, ay) = self.coords(a);
        let (bx, by) = self.coords(b);
        let dx = ax.abs_diff(bx);
        let dy = ay.abs_diff(by);
        dx.min(self.m - dx) + dy.min(self.m - dy)
    }

    /// Edges of the canonical shortest path from `a` to `b`: horizontal steps
    /// first, then vertical, each going the short way round (forward on ties).
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let m = self.m;
        let (mut x, mut y) = self.coords(a);
        let (bx, by) = self.coords(b);
        let mut edges = Vec::with_capacity(self.distance(a, b));
        let forward = (bx + m - x) % m;
        if forward <= m - forward {
            for _ in 0..forward {
                edges.push(self.right_edge(self.square(x, y)));
                x = (x + 1) % m;
            }
        } else {
            for _ in 0..m - forward {
                x = (x + m - 1) % m;
                edges.push(self.right_edge(self.square(x, y)));
            }
        }
        let forward = (by + m - y) % m;
        if forward <= m - forward {
            for _ in 0..forward {
                edges.push(self.down_edge(self.square(x, y)));
                y = (y + 1) % m;
            }
        } else {
            for _ in 0..m - forward {
                y = (y + m - 1) % m;
                edges.push(self.down_edge(self.square(x, y)));
            }
        }
        edges
    }
}

/// A set of coarse edges, each present or absent (flipped an odd number of
/// times).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    torus: CoarseTorus,
    bits: Vec<bool>,
}

impl EdgeSet {
    pub fn empty(torus: CoarseTorus) -> Self {
        Self { torus, bits: vec![false; torus.num_edges()] }
    }

    pub fn from_edges(torus: CoarseTorus, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(torus);
        for e in edges {
            set.toggle(e);
        }
        set
    }

    pub fn torus(&self) -> CoarseTorus {
        self.torus
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits[e]
    }

    pub fn toggle(&mut self, e: usize) {
        self.bits[e] = !self.bits[e];
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(e, _)| e)
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> Result<EdgeSet, DecoderError> {
        if self.torus != other.torus {
            return Err(DecoderError::TorusMismatch);
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        Ok(EdgeSet { torus: self.torus, bits })
    }

    /// Parity of each square: odd when an odd number of incident edges are set.
    pub fn boundary(&self) -> Vec<bool> {
        let mut parity = vec![false; self.torus.num_squares()];
        for e in self.edges() {
            let (a, b) = self.torus.endpoints(e);
            parity[a] = !parity[a];
            parity[b] = !parity[b];
        }
        parity
    }

    /// Winding parities `(horizontal, vertical)`: set right edges crossing the
    /// cut after `column`, and set down edges crossing the cut after `row`.
    pub fn winding(&self, column: usize, row: usize) -> (bool, bool) {
        let m = self.torus.size();
        let horizontal = (0..m)
            .filter(|&y| self.contains(self.torus.right_edge(self.torus.square(column, y))))
            .count();
        let vertical = (0..m)
            .filter(|&x| self.contains(self.torus.down_edge(self.torus.square(x, row))))
            .count();
        (horizontal % 2 == 1, vertical % 2 == 1)
    }
}

/// Flip each of the `2m²` coarse edges independently with probability `p`.
pub fn sample_edge_flips(m: usize, p: f64, seed: u64) -> Result<EdgeSet, DecoderError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DecoderError::InvalidProbability(p));
    }
    let torus = CoarseTorus::new(m)?;
    let mut rng = seeding::rng(seed);
    let bits = (0..torus.num_edges()).map(|_| rng.random::<f64>() < p).collect();
    Ok(EdgeSet { torus, bits })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseSyndrome {
    pub flips: EdgeSet,
    pub parity: Vec<bool>,
}

impl CoarseSyndrome {
    pub fn defects(&self) -> Vec<usize> {
        self.parity.iter().enumerate().filter(|(_, &odd)| odd).map(|(s, _)| s).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.parity.iter().all(|&odd| !odd)
    }
}

pub fn syndrome_from_flips(flips: &EdgeSet) -> CoarseSyndrome {
    CoarseSyndrome { flips: flips.clone(), parity: flips.boundary() }
}

/// Whether `flips ⊕ correction` winds around either handle of the torus.
pub fn logical_failure(flips: &EdgeSet, correction: &EdgeSet) -> Result<bool, DecoderError> {
    let combined = flips.symmetric_difference(correction)?;
    if combined.boundary().iter().any(|&odd| odd) {
        return Err(DecoderError::ResidualSyndrome);
    }
    let (h, v) = combined.winding(0, 0);
    Ok(h || v)
}
