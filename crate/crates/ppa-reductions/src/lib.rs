//! Executable reductions around the PPA-complete problems consensus halving,
//! necklace splitting and discrete ham sandwich, with verifiers and brute-force oracles.

pub mod ce;
pub mod circuit;
pub mod error;
pub mod gadgets;
pub mod instances;
pub mod measure;
pub mod mobius;
pub mod oracles;
pub mod params;
pub mod rational;
pub mod sandwich;
pub mod snake;

pub use error::{Error, Result};
pub use rational::Rational;
