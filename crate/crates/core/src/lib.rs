pub mod error;
pub mod exec;
pub mod io;
mod linalg;
pub mod net;
pub mod projective;
pub mod circular;
pub mod conical;
pub mod congruences;
pub mod qnets;
pub mod samples;
pub mod quadric_nets;
pub mod subdivision;

pub use error::{Error, Result};
pub use exec::Exec;
