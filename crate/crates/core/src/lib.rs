//! Anderson localization of anyon pairs in a disordered toric code.
//!
//! The library builds the one- and two-walker hopping Hamiltonians that an
//! `e`-anyon pair sees under a weak field, diagonalizes them, fits
//! localization lengths to the eigenstates, evolves pairs in time, and turns a
//! localization length into a critical square size and anyon density through
//! a coarse-grained parity decoder.

pub mod decoder;
pub mod dynamics;
pub mod hamiltonian;
pub mod lattice;
pub mod seeding;
pub mod spectra;

pub use hamiltonian::{build_single, build_two_walker, sample_disorder, DisorderRealization, WalkerHamiltonian};
pub use lattice::{Pair, PairBasis, TorusLattice, VertexBasis, WalkerBasis};
pub use spectra::{diagonalize, EigenSystem, LocalizationReport};
