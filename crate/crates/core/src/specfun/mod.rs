//! Scalar special functions used by the density formulas.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`ln_gamma`] | `ln Γ(a)`, `a > 0` |
//! | [`pochhammer`] | rising factorial `(a)_k` |
//! | [`lower_incomplete_gamma`] | `γ(a, z)`, negative `z` for integer `a` |
//! | [`gamma_p`], [`gamma_q`] | regularized incomplete gamma |
//! | [`hyp1f1`] | confluent hypergeometric `1F1(a; b; z)` |
//! | [`hyp2f1`] | Gauss hypergeometric `2F1(a, b; c; z)`, `z < 1` |
//! | [`hyp1f1_deriv`], [`hyp2f1_deriv`] | k-th derivatives in `z` |
//! | [`hyp1f1_elementary`] | elementary form of `1F1(α; α+n_A; z)` |
//!
//! All functions are pure.

pub mod dd;
mod gamma;
mod hyper_dd;
mod hypergeometric;
mod logvalue;

pub use gamma::{
    binomial, gamma, gamma_p, gamma_q, ln_beta, ln_gamma, lower_incomplete_gamma, pochhammer,
};
pub use hypergeometric::{
    hyp1f1, hyp1f1_deriv, hyp1f1_deriv_log, hyp1f1_elementary, hyp1f1_log, hyp2f1, hyp2f1_deriv,
    hyp2f1_deriv_log, hyp2f1_log,
};
pub use hyper_dd::{hyp1f1_deriv_dd, hyp1f1_dd, hyp2f1_deriv_dd, hyp2f1_dd};
pub use logvalue::LogValue;
