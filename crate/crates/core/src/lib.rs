//! Exact arithmetic on the Conway-Smith 2^n-on tower through the 16-ons,
//! finite-set sum-product machinery, and a computable lower-bound functional
//! for the 16-dimensional kissing number.

pub mod algebra;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod rational;
pub mod search;
pub mod sample;
pub mod set;
pub mod setops;
pub mod verify;
mod small;

pub use algebra::{CdNumber, SignClass};
pub use error::{Error, Result};
pub use rational::Rational;
pub use set::{ElementSet, SetFlags};
pub use setops::{RatioProfile, Side};
pub use pipeline::{evaluate_bound, BoundReport, CountBasis, EvalOptions, Mode};
