//! Exact chart-level engine for local models of moduli of stable maps.
//!
//! The engine builds the structural matrix of a nodal-curve local model
//! from a weighted dual graph, performs smooth chart blowups and monomial
//! principalization, decides local diagonalizability of two-term complexes
//! constructively, and verifies smoothness and normal-crossing claims of
//! the resolved local equations. All arithmetic is exact (arbitrary
//! precision rationals); all randomized checks are seeded and reproducible.

pub mod error;
pub mod monomial;
pub mod parse;
pub mod poly;

pub mod ideal;
pub mod sample;

pub mod chart;
pub mod matrix;

pub mod complex;
pub mod diagonalize;
pub mod resolution;

pub mod graph;
pub mod structural;

pub mod classify;
pub mod pipeline;
pub mod verify;

pub mod report;
pub mod suite;

pub use error::{ChartError, ComplexError, GraphError, ModelError, PolyError, VerifyError};
pub use ideal::{MonIdeal, PolyIdeal, Principality};
pub use monomial::Monomial;
pub use poly::{local_divides, poly_divides, LocalDivision, Point, Poly, Rat};
pub use sample::Sampler;
