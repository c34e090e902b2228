//! Exact wall-and-chamber computations for instanton characters on Fano
//! threefolds of Picard rank one, together with tooling for line-bundle
//! monads on projective space, ADHM data and the associated quiver.

pub mod adhm;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fano;
pub mod monad;
pub mod presentation;
pub mod quiver;
pub mod selftest;
pub mod slice;
pub mod svg;
pub mod walls;

pub use error::{Error, Result};
