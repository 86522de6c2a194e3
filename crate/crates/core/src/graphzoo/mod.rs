//! Stable graphs: validation, contraction, canonical forms, enumeration and the
//! graph sums used as independent oracles for the symmetric-function formulas.

mod canon;
mod enumerate;
mod graph;
mod sums;

pub use canon::{brute_force_aut_count, canonicalize, CanonicalForm};
pub use enumerate::{enumerate, enumerate_filtered, GraphClass};
pub use graph::{RawGraph, StableGraph};
pub use sums::{burnside_char, tree_sum, wick_rank_sum, Twist};
