//! Cyclic operads at the level of characteristics: the named operads, the
//! plethystic Legendre transform and the cobar characteristic.

mod legendre;
mod named;

pub use legendre::{cobar_char, legendre, plethystic_inverse, StarSymFunc};
pub use named::{named_char, NamedOperad};
