pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod network;
pub mod studies;

pub use error::{Error, Result};
