//! Knowledge-graph encoding pipeline: corpus co-occurrence embedding,
//! knowledge graph, mixed sibling/binary hierarchy, DBN-shaped dense
//! autoencoder and the Shapiro-Wilk W statistic used to judge its output.

pub mod corpus;
pub mod dbn;
pub mod error;
pub mod kgraph;
pub mod matrix;
pub mod stats;

pub use error::{Error, Result};
pub use matrix::{Dataset, Matrix};
