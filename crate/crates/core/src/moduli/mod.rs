//! Euler characteristics of moduli spaces of curves and one-variable formal integrals.

mod fdet;
mod hz;
mod integral;
mod psi;
mod qseries;
mod zeta;

pub use psi::{
    all_integral, alpha_n, beta_n, euler_chi_extract, hbar_order, parity_c, psi, psi_n, psi_with_cuts, EulerSource,
};
pub use fdet::{f_det_ass_closed, f_det_ass_from_in, f_det_ass_functional, f_det_ass_integral, i_n_series, ClosedForm, InRoute};
pub use hz::{alpha_nl, harer_zagier_b, harer_zagier_b_with_cuts, psi_nl, HarerZagierReport};
pub use integral::{formal_integral_1v, potential_from_coefficients, stirling_check, Route};
pub use qseries::{Aux, QSeries, EXACT};
pub use zeta::{zeta_neg, zeta_neg_with, BernoulliCache};
