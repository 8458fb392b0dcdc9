pub mod error;
pub mod cech;
pub mod dg;
pub mod linalg;
pub mod operads;
pub mod quant;
pub mod lifting;
pub mod hochschild;
pub mod io;
pub mod signs;
pub mod trees;

pub use error::{Error, Result};
