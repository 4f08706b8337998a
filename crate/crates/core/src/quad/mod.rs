//! Integration engines: adaptive Gauss–Kronrod on intervals, rules on the
//! sphere `S^{n−1}`, and polar integration over the ball `B^n`.
//!
//! Every engine reports an error estimate next to its value; composed
//! integrals add the inner errors to the outer one.

mod adaptive;
mod ball;
mod rules;
mod sphere;

pub use adaptive::{integrate_1d, integrate_1d_breaks, integrate_1d_vec, try_integrate_1d_vec};
pub(crate) use adaptive::adaptive;
pub use ball::{integrate_ball, integrate_ball_vec};
pub use rules::{gauss_jacobi_symmetric, sub_sphere_rule};
pub use sphere::{
    integrate_sphere, integrate_sphere_axisym, integrate_sphere_mc, AxisFrame, SphereRule,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy and budget parameters shared by all engines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Panel budget of each adaptive 1-D integration.
    pub max_subdivisions: usize,
    pub mc_samples: usize,
    pub rng_seed: u64,
    /// Order `m` of the fixed rule on the sub-sphere `S^{n−2}` orthogonal to
    /// the axis; exact for polynomials of degree `2m − 1` there.
    pub sphere_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 2000,
            mc_samples: 100_000,
            rng_seed: 0x5eed,
            sphere_nodes: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Config(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be >= 1".into()));
        }
        if self.mc_samples < 1000 {
            return Err(Error::Config(format!(
                "mc_samples must be >= 1000, got {}",
                self.mc_samples
            )));
        }
        if self.sphere_nodes == 0 {
            return Err(Error::Config("sphere_nodes must be >= 1".into()));
        }
        Ok(())
    }

    /// Same spec with relative and absolute tolerance replaced by `tol`.
    pub fn with_tol(&self, tol: f64) -> Self {
        QuadratureSpec {
            rel_tol: tol,
            abs_tol: (tol * 1e-3).min(self.abs_tol),
            ..self.clone()
        }
    }

    /// Twice the budget: doubled panels, nodes and samples, tolerances / 10.
    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            rel_tol: self.rel_tol / 10.0,
            abs_tol: self.abs_tol / 10.0,
            max_subdivisions: self.max_subdivisions * 2,
            mc_samples: self.mc_samples * 2,
            rng_seed: self.rng_seed,
            sphere_nodes: self.sphere_nodes * 2,
        }
    }

    pub(crate) fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// A scalar integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Estimate { value, error }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate::new(self.value + o.value, self.error + o.error)
    }
}

impl std::ops::Sub for Estimate {
    type Output = Estimate;
    fn sub(self, o: Estimate) -> Estimate {
        Estimate::new(self.value - o.value, self.error + o.error)
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, s: f64) -> Estimate {
        Estimate::new(self.value * s, self.error * s.abs())
    }
}

/// A vector-valued integral; `error` bounds every component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VecEstimate {
    pub values: Vec<f64>,
    pub error: f64,
}

impl VecEstimate {
    pub fn component(&self, i: usize) -> Estimate {
        Estimate::new(self.values[i], self.error)
    }
}
