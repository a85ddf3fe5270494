//! Self-similar asymptotics of the one-phase Stefan problem
//!
//! ```text
//! u_t = u_xx,  0 < x < s(t)
//! −u_x(0, t) = h/√(t+1),  u(s(t), t) = 0,  ṡ = −u_x(s(t), t)
//! ```
//!
//! In the similarity variables `η = x/√(t+1)`, `τ = ln(t+1)` the
//! self-similar solution becomes a steady state `(U, ω)`. This crate
//! computes that steady state in closed form, builds the time-independent
//! lower and upper solutions that bracket admissible initial data,
//! integrates the transformed free-boundary system with a front-fixed
//! finite-difference scheme, and measures how computed trajectories
//! approach `(U, ω)`.
//!
//! The accompanying book (`book/`) walks through each piece; its code
//! snippets are compiled as doctests of this crate.

pub mod bounds;
pub mod cli;
pub mod diagnostics;
pub mod error;
mod roots;
pub mod similarity;
pub mod solver;
pub mod special;
pub mod transforms;
pub mod tridiag;

pub use bounds::{build_upper, choose_lambda, solve_b_lambda, InitialData, StationaryPerturbed, UpperLinear};
pub use error::{Error, Result};
pub use similarity::{solve_omega, SelfSimilarProfile};
pub use solver::{run, step, SimilarityState, SolverConfig, Trajectory};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/similarity.md")]
    mod similarity {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
