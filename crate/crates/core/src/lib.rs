pub mod bench;
pub mod classic;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod io;
pub mod linalg;
pub mod objectives;
pub mod optimizer;
pub mod set_function;
pub mod verify;

pub use error::{Error, Result};
pub use set_function::{ModularObjective, SetObjective};
