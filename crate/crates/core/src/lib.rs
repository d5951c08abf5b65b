pub mod alexander;
pub mod cli;
pub mod cube;
pub mod detector;
pub mod error;
pub mod homalg;
pub mod khovanov;
pub mod koszul;
pub mod library;
pub mod linkdiag;

pub use error::{Error, Result};
