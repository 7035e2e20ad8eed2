pub mod degeneration;
pub mod error;
pub mod ffalg;
pub mod groebner;
pub mod lab;
pub mod modrep;
pub mod pluecker;
pub mod pointcount;
pub mod poly;
pub mod quiver;

pub use error::{Error, Result};
