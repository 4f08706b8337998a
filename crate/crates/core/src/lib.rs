//! Poisson's equation `Δf = g` on the unit ball `B^n`, `n ≥ 3`.
//!
//! The crate evaluates the integral representation `f = P_ψ − G_g` of the
//! Dirichlet problem (Poisson extension of the boundary data minus the Green
//! potential of the source), computes the bound functions and sharp constants
//! of the Schwarz-type lemmas for such mappings, and checks those inequalities
//! numerically on a catalog of test fields.
//!
//! Modules, bottom-up:
//!
//! - [`ballgeom`]: closed-form kernels of the ball (bracket `[x,y]`, Möbius
//!   automorphisms, Green function, Poisson kernel and their gradients).
//! - [`specfun`]: Gamma, Beta, Gauss `₂F₁`, sphere area, ball volume and the
//!   sine-power integral identity used to reduce sphere integrals.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature, sphere rules (axisymmetric,
//!   axis-adapted product, Monte Carlo) and ball integration with Möbius
//!   recentring of a point singularity.
//! - [`fields`]: polynomial and closed-form test mappings with exact Laplacians.
//! - [`potential`]: the solution operator and its derivative.
//! - [`bounds`]: `U(rN)`, `φ(r)`, `A_n`, `Ψ_r`, `C(γ,r)` and right-hand sides.
//! - [`harness`]: verification suites, CSV/JSON reports and plot data.
//!
//! Runnable walkthroughs live in `examples/`; the `ballschwarz` binary is a
//! thin CLI over [`harness`].

pub mod ballgeom;
pub mod bounds;
mod error;
pub mod fields;
pub mod harness;
pub mod potential;
pub mod quad;
pub mod specfun;

pub use ballgeom::{Dimension, Point};
pub use error::{Error, Result};
pub use quad::{Estimate, QuadratureSpec, VecEstimate};
