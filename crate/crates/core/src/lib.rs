//! Restricted and correlated minimum-weight perfect matching decoders for
//! the 4.8.8 color code, and the surface code under depolarizing noise seen
//! through the color/surface mapping.

pub mod analysis;
pub mod decoders;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod matching;
pub mod noise;
pub mod weight;

pub use error::{Error, Result};
pub use weight::Weight;
