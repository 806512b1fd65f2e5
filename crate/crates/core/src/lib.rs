pub mod constructions;
pub mod error;
pub mod grid;
pub mod report;
pub mod search;
pub mod signed;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{PathPower, Vertex, VertexSet};
