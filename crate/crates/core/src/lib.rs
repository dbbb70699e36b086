pub mod canon;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod format;
pub mod linalg;
pub mod mutclass;
pub mod patterns;
pub mod quiver;
pub mod report;
pub mod vector;

pub use error::{Error, Result};
pub use quiver::{Quiver, Subquiver, VertexSet};
pub use vector::{Gf2Vector, IntVector};
