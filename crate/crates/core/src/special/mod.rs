//! Analytic layer: growth rates, the sharp-threshold integral and its
//! high-dimensional limit, adaptive quadrature, and the increasing-path
//! cost functional.

pub mod growth;
pub mod lambda;
pub mod quad;
pub mod wpath;

pub use growth::{beta, g, q_of_p, u_param, u_scaled};
pub use lambda::{highdim_series, lambda, lambda_highdim, lambda_table};
pub use quad::{integrate, QuadResult};
pub use wpath::{w_min, w_min_refined, w_path, PathPoly};
