//! Truncated symmetric functions in the power-sum basis: ring operations,
//! plethysm, derivatives, the Hall inner product and its adjoints, the
//! involutions ω and ω̃, the rank homomorphism, and Frobenius characteristics.

mod character;
mod partition;
mod series1;
mod symfunc;

pub use character::VirtualCharacter;
pub use partition::{partitions_of, partitions_upto, Partition};
pub use series1::{PolySeries1, Var};
pub use symfunc::{e, h, newton_convert, Basis, Involution, SymFunc};
