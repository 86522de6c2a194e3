//! Exact characteristics of cyclic and modular operads.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactsym`]: symmetric functions in the power-sum basis, plethysm and friends.
//! * [`hlaurent`]: Laurent series in `ħ^{1/2}` over symmetric functions, plethystic
//!   `Exp`/`Log`, the Laplacian and the free modular / Feynman transform formulas,
//!   Gaussian functional integrals.
//! * [`cyclic`]: characteristics of `Com`, `Ass`, `Lie`; Legendre transform; cobar.
//! * [`graphzoo`]: stable graphs, canonical forms, enumeration and graph-sum oracles.
//! * [`moduli`]: Euler characteristics of moduli spaces of curves and one-variable
//!   formal integrals.
//! * [`json`]: the interchange format shared with the command line tool.

pub mod error;
pub mod exactsym;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
pub mod hlaurent;
pub mod cyclic;
pub mod graphzoo;
pub mod moduli;
pub mod json;
