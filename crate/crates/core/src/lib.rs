//! Values of Bell functionals and nonlocal games over fully local, bilocal,
//! non-signalling and quantum behaviour classes.

pub mod error;
pub mod games;
pub mod io;
pub mod linprog;
pub mod model;
pub mod quantum;
pub mod sampling;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use model::{BellFunctional, Behaviour, Correlation, FunctionalKind, Scenario};
