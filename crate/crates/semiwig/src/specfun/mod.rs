//! Special functions and quadrature rules.

mod elliptic;
mod hermite;
mod laguerre;
mod quadrature;

pub use elliptic::{
    ellipk, jacobi_am, jacobi_am_inverse, jacobi_sd, jacobi_sd_inverse, jacobi_sncndn,
    EllipticParams,
};
pub use hermite::{hermite_fn, hermite_fns, HERMITE_N_MAX};
pub use laguerre::laguerre_fn;
pub use quadrature::{make_rule, QuadratureRule, RuleKind};
