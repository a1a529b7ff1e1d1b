//! Multi-indices, points of `H*`, the `V_q`-Fueter variables `mu_u` and
//! monomials `mu^alpha`, the classical variables `zeta` for comparison, the
//! expansion coefficients `c_{alpha,n}` and the domain predicates.

mod multi_index;
mod point;
mod variables;

pub use multi_index::MultiIndex;
pub(crate) use multi_index::factorial;
pub use point::PointH;
pub use variables::{
    arveson_diag, c_alpha_n, expand_qn, fueter_factor, in_omega_1, in_omega_r_big_r_rho, mu_alpha,
    mu_alpha_product, mu_norm_sqr, mu_row, mu_u, omega_growth_bound, zeta_alpha, zeta_u, ArvesonDiagonal,
    MuTable,
};
