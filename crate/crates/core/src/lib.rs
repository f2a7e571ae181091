//! Discontinuous Galerkin solver for the one-dimensional compressible Euler
//! equations with an explicit invariant-region-preserving (IRP) limiter.
//!
//! The limiter keeps density and pressure above a small floor and the
//! specific entropy above its initial minimum, at the Gauss–Lobatto test
//! points of every cell, while preserving cell averages. The crate is
//! organised bottom-up:
//!
//! - [`euler`]: ideal-gas thermodynamics and the invariant region
//! - [`dg`]: mesh, modal Legendre space, quadrature and the DG residual
//! - [`limiter`]: the IRP and positivity-only limiters
//! - [`time`]: SSP Runge–Kutta and multistep time stepping
//! - [`riemann`]: exact Riemann solver for reference solutions
//! - [`harness`]: presets, error norms, convergence tables and CSV output
//!
//! ```
//! use irp_dg::harness::{run, Problem, RunConfig};
//!
//! let mut cfg = RunConfig::preset(Problem::Lax);
//! cfg.n_cells = 40;
//! cfg.t_final = Some(0.1);
//! let out = run(&cfg).unwrap();
//! assert!(out.evolution.min_average_entropy() >= out.s0 - 1e-10);
//! ```

pub mod dg;
pub mod error;
pub mod euler;
pub mod harness;
pub mod limiter;
pub mod riemann;
pub mod time;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/invariant-region.md")]
    mod invariant_region {}
    #[doc = include_str!("../../../book/src/dg-space.md")]
    mod dg_space {}
    #[doc = include_str!("../../../book/src/limiter.md")]
    mod limiter {}
    #[doc = include_str!("../../../book/src/time-integration.md")]
    mod time_integration {}
    #[doc = include_str!("../../../book/src/riemann.md")]
    mod riemann {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
