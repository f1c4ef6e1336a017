//! Exact invariant theory for finite complex reflection groups, their normal
//! reflection subgroups and the reflection action of the quotient.

pub mod battery;
pub mod catalog;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod hompoly;
pub mod invariants;
pub mod matrix;
pub mod poly;
pub mod quotient;
pub mod ringseries;
pub mod theorems;
pub mod rational;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{GroupSpec, ReflectionGroup};
pub use rational::Rational;
