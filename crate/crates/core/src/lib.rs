//! Exact folding, orbit mutation, relative Ginzburg dg quivers and cluster
//! characters for ice quivers with finite group actions.

pub mod character;
pub mod characters;
pub mod cli;
pub mod cluster;
pub mod cyclotomic;
pub mod error;
pub mod folding;
pub mod format;
pub mod ginzburg;
pub mod grassmannian;
pub mod group;
pub mod harness;
pub mod laurent;
pub mod linalg;
pub mod mutation;
pub mod quiver;
pub mod representation;
pub mod server;
pub mod session;

pub use error::{Error, Result};
