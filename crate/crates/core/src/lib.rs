//! Forward and inverse solvers for a time-fractional diffusion equation
//! driven by a random source `f(x) [g1(t) + g2(t) dW/dt]` on the unit square.
//!
//! The crate provides:
//!
//! * structured fine/coarse meshes and P1 finite element operators
//!   ([`mesh`], [`fem`]);
//! * L1 time stepping for the Caputo derivative, fractional integration, and
//!   deterministic/stochastic marches ([`fractime`]);
//! * a generalized multiscale (GMsFEM) reduction for highly heterogeneous
//!   media ([`gmsfem`]);
//! * Monte Carlo ensembles of single-point observations ([`stochastic`]);
//! * moment statistics `E(t) = E[I^{1-a} u(x0,t,.)]`, `V(t) = Var[...]`
//!   ([`moments`]);
//! * reconstruction of `g1` and `g2^2` from the moments by a regularized
//!   Levenberg-Marquardt iteration on lower-triangular Volterra systems
//!   ([`inverse`]);
//! * numerical verification of the stability estimates tying the unknowns
//!   to the observed moments ([`verify`]).
//!
//! All numerics are generic over [`scalar::Scalar`] (`f32` or `f64`);
//! `f64` aliases for the main types are re-exported at the crate root.

pub mod error;
pub mod fem;
// pub mod fractime;
// pub mod gmsfem;
// pub mod inverse;
// pub mod io;
pub mod mesh;
// pub mod moments;
pub mod scalar;
// pub mod stochastic;
// pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` instantiations of the core types.
pub type FineMesh = mesh::FineMesh<f64>;
pub type CoarseGrid = mesh::CoarseGrid<f64>;
pub type MediumField = fem::MediumField<f64>;
pub type SpatialSource = fem::SpatialSource<f64>;
pub type OperatorPair = fem::OperatorPair<f64>;
// pub type TimeGrid = fractime::TimeGrid<f64>;
// pub type L1Coefficients = fractime::L1Coefficients<f64>;
// pub type MultiscaleBasis = gmsfem::MultiscaleBasis<f64>;
// pub type ReducedOperators = gmsfem::ReducedOperators<f64>;
// pub type Ensemble = stochastic::Ensemble<f64>;
// pub type MomentSeries = moments::MomentSeries<f64>;
// pub type VolterraSystem = inverse::VolterraSystem<f64>;
// pub type ReconstructionResult = inverse::ReconstructionResult<f64>;
// pub type BoundsReport = verify::BoundsReport<f64>;
