//! Color codes as pairs of surface codes.
//!
//! This crate builds 2-colex lattices on the torus, contracts them into
//! surface-code graphs, realizes the bijective local Pauli map between the
//! color code and the two surface-code copies, projects syndromes across
//! the map, decodes bit-flip and erasure noise through the copies, derives
//! the induced error model, emits the local Clifford transformation
//! circuits, and runs seeded Monte Carlo threshold scans.

pub mod circuits;
pub mod codemap;
pub mod colex;
pub mod contraction;
pub mod decode;
pub mod fileio;
pub mod noise;
pub mod pauli;
pub mod sim;
pub mod syndrome;

pub use colex::{build_hexagonal, build_square_octagon, Colex, Color, FaceLabeling};
pub use codemap::CodeMap;
pub use contraction::{contract, SurfaceGraph};
pub use decode::DecoderContext;
pub use pauli::{PauliOp, StabilizerGroup};
