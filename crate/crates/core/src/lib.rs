//! Spectral radius and fractional matchings of graphs.
//!
//! * [`graph`]: simple graphs, edge-list I/O, derived graphs, random generation
//! * [`spectral`]: certified spectral radii, quotient matrices, equitable partitions
//! * [`matching`]: exact fractional matching numbers and the deficiency oracle
//! * [`families`]: generators and the membership decider for ℋ(d,k)
//! * [`verify`]: bound, lemma, equality and proof-chain checkers, fuzz campaigns
//! * [`corpus`]: exhaustive small graphs up to isomorphism

pub mod corpus;
pub mod families;
pub mod graph;
pub mod matching;
pub mod spectral;
pub mod verify;

pub use graph::{parse_edge_list, serialize_edge_list, Bipartition, Graph, VertexSet};
pub use matching::HalfInt;
pub use spectral::SpectralEstimate;
