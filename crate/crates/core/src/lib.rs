//! Bidirectional ballot sequences and the bidirectional ballot polytope.
//!
//! - [`seq`]: ballot sequences, exact counting, sumset fullness.
//! - [`geom`]: the ballot cone and polytope, necklace cuts, the cube partition.
//! - [`vertex`]: polytope vertices and their bijections with ballot sequences.
//! - [`linalg`]: the constraint system, flat elimination, basic feasible solutions.
//! - [`verify`]: the invariant suites behind `ballotope verify`.

pub mod error;
pub mod geom;
pub mod linalg;
pub mod plot;
pub mod rational;
pub mod sampling;
pub mod seq;
pub mod verify;
pub mod vertex;

pub use error::{BallotError, Result};
pub use geom::{
    ballot_vectors, classify_partition, cut_necklace, gaps_from_intervals, intervals_from_gaps,
    is_gerrymander_measure, mc_volume, membership, rotate, BallotVector, GapVector,
    IntervalFamily, MembershipReport, ShiftIndex,
};
pub use linalg::{
    basic_feasible_solutions, constraint_system, flat_elimination, verify_unimodularity,
    ConstraintSystem, EliminationTrace,
};
pub use rational::Rational;
pub use seq::{
    bbs_to_path, count_bbs, count_bbs_brute, enumerate_bbs, is_bbs, ratio, sumset_fullness,
    BitSequence, HeightPath,
};
pub use vertex::{
    bbs_to_interior_vertex, bbs_to_vertex, enumerate_vertices, interior_vertex_to_bbs,
    pad_alpha, slope_vector, verify_bounds, vertex_to_bbs, CubeVertex, SlopePath, VertexSet,
};
