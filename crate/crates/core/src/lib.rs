//! Exact computations on configuration spaces of surfaces.

pub mod error;
pub mod groupring;
pub mod linalg;
pub mod moriyama;
pub mod pairing;
pub mod rational;
pub mod surface;
pub mod verifier;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Rational;
