//! Laurent series in `ħ^{1/2}` over symmetric functions: the extended
//! plethysm, plethystic `Exp`/`Log`, the Laplacian `Δ`, `CCh` of stable
//! 𝕊-modules, the free modular and Feynman characteristic formulas, and
//! formal Gaussian integrals over the power sums.

mod gauss;
mod laplacian;
mod pleth;
mod series;
mod table;

pub use gauss::{coupled_integral, functional_integral, gaussian_moment, moment_coeff, Measure};
pub use laplacian::Sign;
pub use pleth::sym_exp;
pub use series::{HLaurent, HMono, TruncationSpec};
pub use table::{cch, feynman_char, free_modular_char, graph_sum, is_stable, StableCharTable};
