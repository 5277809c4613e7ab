//! Rank-modulation codes over `ℓ`-gram profile vectors.
//!
//! A DNA string is read through its cyclic `ℓ`-gram counts (its profile
//! vector), and information is stored in the relative order of those counts.
//! Counts are realizable exactly when the weighted De Bruijn graph
//! `G_{q,ℓ-1}` is balanced, so the encoders here build balanced positive
//! weightings whose ranking carries the user's permutation.

pub mod codebook;
pub mod codec;
pub mod error;
pub mod feasibility;
pub mod frame;
pub mod graph;
pub mod json;
pub mod nonsystematic;
pub mod params;
pub mod ranking;
pub mod sequence;
pub mod simplex;
pub mod systematic;
pub mod weights;

pub use error::{Error, Result};
pub use frame::{EncodingFrame, TieBreakMode};
pub use graph::{Cut, DeBruijnGraph, Edge, Vertex};
pub use params::{Alphabet, CodeParams};
pub use ranking::{rank_of_weights, Ranking, TieMode};
pub use weights::{WeightMap, WeightRepr};
