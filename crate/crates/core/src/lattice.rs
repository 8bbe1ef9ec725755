//! Periodic square lattice geometry and the walker bases built on it.
//!
//! Vertices are indexed row-major, `v = x + L * y`. Each vertex owns the link
//! to its right and the link below it, so an `L x L` torus has `2L²` links.
//! Distances are Euclidean under the minimal image convention.
//!
//! The two-walker basis enumerates unordered pairs `{v, v'}` with `v < v'`
//! lexicographically. Doubly occupied states are never enumerated, which is
//! how the hardcore constraint enters the model.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("lattice size must be at least {min}, got {size}")]
    TooSmall { size: usize, min: usize },
    #[error("coordinates ({x}, {y}) out of range for L = {size}")]
    CoordinatesOutOfRange { x: usize, y: usize, size: usize },
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: Vertex, count: usize },
    #[error("a pair needs two distinct vertices, got {0} twice")]
    CoincidentPair(Vertex),
    #[error("basis index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
}

/// `L x L` square lattice wrapped around a torus.
#[derive(Debug, Clone)]
pub struct TorusLattice {
    size: usize,
    // squared minimal-image displacement per axis offset, indexed by |dx| mod L
    wrap: Vec<usize>,
}

impl TorusLattice {
    pub fn new(size: usize) -> Result<Self, LatticeError> {
        if size < 2 {
            return Err(LatticeError::TooSmall { size, min: 2 });
        }
        let wrap = (0..size).map(|d| d.min(size - d)).collect();
        Ok(Self { size, wrap })
    }

    /// Linear size `L`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_vertices(&self) -> usize {
        self.size * self.size
    }

    pub fn num_links(&self) -> usize {
        2 * self.num_vertices()
    }

    pub fn vertex_index(&self, x: usize, y: usize) -> Result<Vertex, LatticeError> {
        if x >= self.size || y >= self.size {
            return Err(LatticeError::CoordinatesOutOfRange { x, y, size: self.size });
        }
        Ok(x + self.size * y)
    }

    pub fn coords(&self, v: Vertex) -> (usize, usize) {
        debug_assert!(v < self.num_vertices());
        (v % self.size, v / self.size)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<Vertex, LatticeError> {
        if v < self.num_vertices() {
            Ok(v)
        } else {
            Err(LatticeError::VertexOutOfRange { vertex: v, count: self.num_vertices() })
        }
    }

    /// The four periodic nearest neighbours in the order `+x, -x, +y, -y`.
    ///
    /// At `L = 2` the `+x` and `-x` neighbours coincide (double links).
    pub fn neighbors(&self, v: Vertex) -> [Vertex; 4] {
        let l = self.size;
        let (x, y) = self.coords(v);
        [
            (x + 1) % l + l * y,
            (x + l - 1) % l + l * y,
            x + l * ((y + 1) % l),
            x + l * ((y + l - 1) % l),
        ]
    }

    /// All links as `(vertex, neighbour)`: the right link then the down link
    /// of each vertex in index order.
    pub fn links(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.num_vertices()).flat_map(move |v| {
            let [right, _, down, _] = self.neighbors(v);
            [(v, right), (v, down)]
        })
    }

    pub fn are_neighbors(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.neighbors(u).contains(&v)
    }

    /// Squared minimal-image distance, an integer.
    pub fn squared_distance(&self, u: Vertex, v: Vertex) -> usize {
        let (ux, uy) = self.coords(u);
        let (vx, vy) = self.coords(v);
        let dx = self.wrap[ux.abs_diff(vx)];
        let dy = self.wrap[uy.abs_diff(vy)];
        dx * dx + dy * dy
    }

    pub fn torus_distance(&self, u: Vertex, v: Vertex) -> f64 {
        (self.squared_distance(u, v) as f64).sqrt()
    }

    /// Matching distance between two unordered pairs: the cheaper of the two
    /// ways of assigning walkers of `a` to walkers of `b`.
    pub fn pair_distance(&self, a: Pair, b: Pair) -> f64 {
        let straight = self.torus_distance(a.first(), b.first())
            + self.torus_distance(a.second(), b.second());
        let crossed = self.torus_distance(a.first(), b.second())
            + self.torus_distance(a.second(), b.first());
        straight.min(crossed)
    }

    /// Largest minimal-image distance between any two vertices.
    pub fn max_distance(&self) -> f64 {
        let half = self.size / 2;
        ((2 * half * half) as f64).sqrt()
    }
}

/// Unordered pair of distinct vertices, stored with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    first: Vertex,
    second: Vertex,
}

impl Pair {
    pub fn new(u: Vertex, v: Vertex) -> Result<Self, LatticeError> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Self { first: u, second: v }),
            std::cmp::Ordering::Greater => Ok(Self { first: v, second: u }),
            std::cmp::Ordering::Equal => Err(LatticeError::CoincidentPair(u)),
        }
    }

    pub fn first(self) -> Vertex {
        self.first
    }

    pub fn second(self) -> Vertex {
        self.second
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.first == v || self.second == v
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

/// A finite basis of walker position states with a distance between states.
///
/// Localization fits and displacement profiles only need these two pieces of
/// geometry, so they work for either the one- or the two-walker sector.
pub trait WalkerBasis: Sync {
    fn dimension(&self) -> usize;

    /// Distance between basis states `i` and `j`, in lattice spacings.
    fn distance(&self, i: usize, j: usize) -> f64;

    /// Largest distance between any two basis states.
    fn max_distance(&self) -> f64;
}

/// One walker: basis state `i` is the walker on vertex `i`.
#[derive(Debug, Clone)]
pub struct VertexBasis {
    lattice: TorusLattice,
}

impl VertexBasis {
    pub fn new(lattice: TorusLattice) -> Self {
        Self { lattice }
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }
}

impl WalkerBasis for VertexBasis {
    fn dimension(&self) -> usize {
        self.lattice.num_vertices()
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        self.lattice.torus_distance(i, j)
    }

    fn max_distance(&self) -> f64 {
        self.lattice.max_distance()
    }
}

/// Two hardcore walkers: every unordered pair of distinct vertices, in
/// lexicographic order. Dimension `L²(L²-1)/2`.
#[derive(Debug, Clone)]
pub struct PairBasis {
    lattice: TorusLattice,
    pairs: Vec<Pair>,
    max_distance: f64,
}

impl PairBasis {
    pub fn new(lattice: TorusLattice) -> Self {
        let n = lattice.num_vertices();
        let pairs: Vec<Pair> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Pair { first: u, second: v }))
            .collect();
        // Pair distance is invariant under translating both pairs together, so
        // one walker of the reference pair can be pinned to vertex 0.
        let mut max_distance = 0.0f64;
        for v in 1..n {
            let reference = Pair { first: 0, second: v };
            for &b in &pairs {
                max_distance = max_distance.max(lattice.pair_distance(reference, b));
            }
        }
        Self { lattice, pairs, max_distance }
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    /// `L²(L²-1)/2` for an `L x L` lattice.
    pub fn dimension_for(size: usize) -> usize {
        let n = size * size;
        n * n.saturating_sub(1) / 2
    }

    pub fn pair(&self, index: usize) -> Result<Pair, LatticeError> {
        self.pairs
            .get(index)
            .copied()
            .ok_or(LatticeError::IndexOutOfRange { index, dimension: self.pairs.len() })
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn index(&self, pair: Pair) -> Result<usize, LatticeError> {
        let n = self.lattice.num_vertices();
        self.lattice.check_vertex(pair.second)?;
        let (a, b) = (pair.first, pair.second);
        Ok(a * n - a * (a + 1) / 2 + (b - a - 1))
    }
}

impl WalkerBasis for PairBasis {
    fn dimension(&self) -> usize {
        self.pairs.len()
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        self.lattice.pair_distance(self.pairs[i], self.pairs[j])
    }

    fn max_distance(&self) -> f64 {
        self.max_distance
    }
}
