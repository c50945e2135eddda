pub mod error;
pub mod minors;
pub mod multigraph;
pub mod params;
pub mod certify;
pub mod cli;
pub mod construct;
pub mod symmat;
pub mod tensegrity;

pub use error::{Error, Result};
pub use multigraph::{EdgeId, Multigraph, VertexId};
