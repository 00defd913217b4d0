pub mod error;
pub mod exactlin;

pub use error::{Error, Result};
pub mod arrangement;
pub mod layers;
pub mod normalform;
pub mod coverings;
pub mod discriminantal;
pub mod degreeone;
pub mod gos;
pub mod samples;
