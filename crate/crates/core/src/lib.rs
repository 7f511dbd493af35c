pub mod asymptotics;
pub mod budget;
pub mod cli;
pub mod domination;
pub mod error;
pub mod norms;
pub mod operator;
pub mod rational;
pub mod schreier;
pub mod specialvec;
pub mod suite;
pub mod vector;
pub mod xd;

pub use error::{Error, Result};
pub use rational::Q;
pub use vector::C00Vector;

