//! Time-sub-interval minimum spanning trees of spatio-temporal networks.

pub mod eio;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod model;
pub mod rational;
pub mod result;
pub mod static_mst;
pub mod tso;

pub use error::{Error, Result};
pub use rational::Rational;
