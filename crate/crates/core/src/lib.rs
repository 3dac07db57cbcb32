//! Construction, verification, exact search and algebraic refutation of open and
//! closed XOR-magic labelings, i.e. bijections from the vertices of a graph of order
//! 2ⁿ onto (Z₂)ⁿ whose neighbourhood sums all vanish.

pub mod algebra;
pub mod bitset;
pub mod catalog;
pub mod cert;
pub mod degrees;
pub mod error;
pub mod families;
pub mod graph;
pub mod labeling;
pub mod milp;
pub mod search;

pub use error::{Error, Result};
pub use graph::{Graph, VertexMap};
pub use labeling::{BitLabel, Labeling, Mode, Parity, Verdict};
