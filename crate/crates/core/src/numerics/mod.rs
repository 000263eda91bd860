//! Numerical kernels shared by the physics modules.

mod diff;
mod logexp;
mod ode;
mod root;

pub use diff::{central_diff, second_central_diff};
pub use logexp::{exp_m1, log1m_exp, log1p_exp, log_add_exp};
pub use ode::{
    integrate_ode, integrate_ode_through, integrate_ode_with, OdeOptions, OdeResult, OdeStatus,
};
pub use root::{expand_bracket, find_root, find_root_with, Bracket, RootOptions};
