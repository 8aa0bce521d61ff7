//! Edge coloring of multigraphs.
//!
//! The crate covers four layers:
//!
//! * [`multigraph`] and [`coloring`]: the data model, partial colorings and
//!   Kempe chains.
//! * [`fans`], [`density`]: multi-fans, linear sequences, the density
//!   `Γ(G)` and k-dense subgraphs.
//! * [`base_color`]: an exact chromatic-index solver, a constructive
//!   (Δ+μ)-coloring and the saturated-matching construction.
//! * [`extend`] and [`oracle`]: extension of a precolored distance-3 matching
//!   to a full (Δ+μ)-coloring, certified by a brute-force oracle.

pub mod base_color;
pub mod coloring;
pub mod density;
pub mod error;
pub mod extend;
pub mod fans;
pub mod multigraph;
pub mod oracle;
pub mod trace;

pub use coloring::{Color, PartialEdgeColoring};
pub use error::{Error, Result};
pub use multigraph::{EdgeId, EdgeSet, Multigraph, Vertex, VertexSet};
