//! The solution operator `f = P_ψ − G_g` of `Δf = g`, `f|_{S^{n−1}} = ψ`,
//! and its derivative by differentiation under the integral sign.

use nalgebra::DMatrix;

use crate::ballgeom::{
    grad_green_into, grad_poisson_kernel_into, green_constant, green_raw, poisson_kernel_raw, Dimension, Point,
};
use crate::error::{Error, Result};
use crate::fields::{FieldPair, VectorField};
use crate::quad::{integrate_ball_vec, AxisFrame, Estimate, QuadratureSpec, VecEstimate};

/// Green potentials are refused beyond this radius unless explicitly allowed.
pub const NEAR_BOUNDARY: f64 = 0.99;

/// A matrix with an error bound on every entry.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixEstimate {
    pub value: DMatrix<f64>,
    pub error: f64,
}

/// Boundary data `ψ`, source `g` and quadrature settings of one Dirichlet
/// problem on `B^n`. Immutable; evaluations at different points are
/// independent.
#[derive(Clone, Debug)]
pub struct SolutionHandle {
    n: Dimension,
    psi: VectorField,
    g: VectorField,
    q: QuadratureSpec,
    allow_near_boundary: bool,
}

fn polar_axis(x: &Point) -> Vec<f64> {
    x.direction().map(Point::into_inner).unwrap_or_else(|| {
        let mut e = vec![0.0; x.dim()];
        e[x.dim() - 1] = 1.0;
        e
    })
}

impl SolutionHandle {
    pub fn new(psi: VectorField, g: VectorField, q: QuadratureSpec) -> Result<Self> {
        let n = Dimension::solver(psi.dim())?;
        if g.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: psi.dim(),
                got: g.dim(),
            });
        }
        if g.ncomponents() != psi.ncomponents() {
            return Err(Error::DimensionMismatch {
                expected: psi.ncomponents(),
                got: g.ncomponents(),
            });
        }
        q.validate()?;
        Ok(SolutionHandle {
            n,
            psi,
            g,
            q,
            allow_near_boundary: false,
        })
    }

    /// Boundary data from the trace of `pair.f`, source `pair.g`.
    pub fn from_pair(pair: &FieldPair, q: QuadratureSpec) -> Result<Self> {
        Self::new(pair.f.clone(), pair.g.clone(), q)
    }

    /// `g = 0`: the harmonic extension of `psi`.
    pub fn harmonic(psi: VectorField, q: QuadratureSpec) -> Result<Self> {
        let g = VectorField::zero(psi.dim(), psi.ncomponents());
        Self::new(psi, g, q)
    }

    /// Permits Green potentials at `|x| > 0.99` (costly, accuracy then rests
    /// on the quadrature budget alone).
    pub fn allow_near_boundary(mut self, yes: bool) -> Self {
        self.allow_near_boundary = yes;
        self
    }

    pub fn dim(&self) -> Dimension {
        self.n
    }

    pub fn ncomponents(&self) -> usize {
        self.psi.ncomponents()
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.q
    }

    pub fn boundary_data(&self) -> &VectorField {
        &self.psi
    }

    pub fn source(&self) -> &VectorField {
        &self.g
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        self.n.check(x)?;
        let r = x.norm();
        if r >= 1.0 {
            return Err(Error::OutsideBall { norm: r });
        }
        Ok(())
    }

    /// Frame for sphere integrals against `P(x,·)`: about the symmetry axis
    /// of `ψ` if declared, else about `x`; the sub-sphere order is just large
    /// enough for polynomial data of the known degree (`extra` = 1 for the
    /// kernel gradient).
    fn poisson_frame(&self, x: &Point, extra: usize) -> Result<(AxisFrame, Vec<f64>)> {
        if let Some(sym) = self.psi.symmetry() {
            let e = &sym.axis;
            let along: f64 = x.iter().zip(e).map(|(a, b)| a * b).sum();
            let off = (x.norm_sq() - along * along).max(0.0).sqrt();
            let order = if off <= 1e-14 { 1 } else { self.q.sphere_nodes };
            return Ok((AxisFrame::new(e, order)?, sym.breaks.clone()));
        }
        let order = match self.psi.degree() {
            Some(d) => (d + extra) / 2 + 1,
            None => self.q.sphere_nodes,
        };
        Ok((AxisFrame::new(&polar_axis(x), order)?, vec![]))
    }

    fn green_spec(&self, extra: usize) -> QuadratureSpec {
        let order = match self.g.degree() {
            Some(d) => (d + extra) / 2 + 1,
            None => self.q.sphere_nodes,
        };
        QuadratureSpec {
            sphere_nodes: order,
            ..self.q.clone()
        }
    }

    fn check_green_point(&self, x: &Point) -> Result<()> {
        self.check_point(x)?;
        if x.norm() > NEAR_BOUNDARY && !self.allow_near_boundary {
            return Err(Error::Domain(format!(
                "Green potential at |x| = {} > {NEAR_BOUNDARY} needs allow_near_boundary",
                x.norm()
            )));
        }
        Ok(())
    }

    /// `P_ψ(x) = ∫_{S^{n−1}} P(x,ζ)ψ(ζ) dσ(ζ)`.
    pub fn poisson_extension(&self, x: &Point) -> Result<VecEstimate> {
        self.check_point(x)?;
        let m = self.ncomponents();
        let (frame, breaks) = self.poisson_frame(x, 0)?;
        let mut buf = vec![0.0; m];
        frame.integrate(
            |zeta, out| {
                self.psi.trace_into(zeta, &mut buf);
                let p = poisson_kernel_raw(x, zeta);
                for (o, v) in out.iter_mut().zip(&buf) {
                    *o = p * v;
                }
                Ok(())
            },
            m,
            &breaks,
            &self.q,
        )
    }

    /// `G_g(x) = ∫_{B^n} G(x,y)g(y) dV(y)`.
    pub fn green_potential(&self, x: &Point) -> Result<VecEstimate> {
        self.check_green_point(x)?;
        let m = self.ncomponents();
        if self.g.is_zero() {
            return Ok(VecEstimate {
                values: vec![0.0; m],
                error: 0.0,
            });
        }
        let cn = green_constant(self.n.get());
        let mut buf = vec![0.0; m];
        integrate_ball_vec(
            |y, out| {
                self.g.eval_into(y, &mut buf);
                let k = green_raw(cn, x, y);
                for (o, v) in out.iter_mut().zip(&buf) {
                    *o = k * v;
                }
                Ok(())
            },
            m,
            self.n,
            Some(x),
            &self.green_spec(0),
        )
    }

    /// `f(x) = P_ψ(x) − G_g(x)`.
    pub fn solve(&self, x: &Point) -> Result<VecEstimate> {
        let p = self.poisson_extension(x)?;
        let g = self.green_potential(x)?;
        Ok(VecEstimate {
            values: p.values.iter().zip(&g.values).map(|(a, b)| a - b).collect(),
            error: p.error + g.error,
        })
    }

    /// `D(P_ψ)(x)` from `∇_x P(x,ζ)`.
    pub fn poisson_gradient(&self, x: &Point) -> Result<MatrixEstimate> {
        self.check_point(x)?;
        let (n, m) = (self.n.get(), self.ncomponents());
        let (frame, breaks) = self.poisson_frame(x, 1)?;
        let mut buf = vec![0.0; m];
        let mut grad = vec![0.0; n];
        let v = frame.integrate(
            |zeta, out| {
                self.psi.trace_into(zeta, &mut buf);
                grad_poisson_kernel_into(x, zeta, &mut grad);
                for k in 0..m {
                    for j in 0..n {
                        out[k * n + j] = buf[k] * grad[j];
                    }
                }
                Ok(())
            },
            m * n,
            &breaks,
            &self.q,
        )?;
        Ok(MatrixEstimate {
            value: DMatrix::from_row_slice(m, n, &v.values),
            error: v.error,
        })
    }

    /// `D(G_g)(x)` from `∇_x G(x,y)`; the `|y−x|^{1−n}` singularity is
    /// integrable after the same Möbius recentring as the potential.
    pub fn green_gradient(&self, x: &Point) -> Result<MatrixEstimate> {
        self.check_green_point(x)?;
        let (n, m) = (self.n.get(), self.ncomponents());
        if self.g.is_zero() {
            return Ok(MatrixEstimate {
                value: DMatrix::zeros(m, n),
                error: 0.0,
            });
        }
        let cn = green_constant(n);
        let mut buf = vec![0.0; m];
        let mut grad = vec![0.0; n];
        let v = integrate_ball_vec(
            |y, out| {
                self.g.eval_into(y, &mut buf);
                grad_green_into(cn, x, y, &mut grad);
                for k in 0..m {
                    for j in 0..n {
                        out[k * n + j] = buf[k] * grad[j];
                    }
                }
                Ok(())
            },
            m * n,
            self.n,
            Some(x),
            &self.green_spec(1),
        )?;
        Ok(MatrixEstimate {
            value: DMatrix::from_row_slice(m, n, &v.values),
            error: v.error,
        })
    }

    /// `D_f(x) = D(P_ψ)(x) − D(G_g)(x)`, an `m × n` matrix.
    pub fn derivative_matrix(&self, x: &Point) -> Result<MatrixEstimate> {
        let p = self.poisson_gradient(x)?;
        let g = self.green_gradient(x)?;
        Ok(MatrixEstimate {
            value: p.value - g.value,
            error: p.error + g.error,
        })
    }

    /// `J_f(x) = det D_f(x)`, for `m = n`.
    pub fn jacobian_det(&self, x: &Point) -> Result<Estimate> {
        let n = self.n.get();
        if self.ncomponents() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.ncomponents(),
            });
        }
        let d = self.derivative_matrix(x)?;
        Ok(det_with_error(&d))
    }
}

/// `|A| = max_{|θ|=1} |Aθ|`, the largest singular value.
pub fn operator_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

/// Operator norm with the entrywise error propagated through
/// `‖E‖₂ ≤ ‖E‖_F ≤ ε√(mn)`.
pub fn operator_norm_estimate(a: &MatrixEstimate) -> Estimate {
    let (m, n) = a.value.shape();
    Estimate::new(operator_norm(&a.value), a.error * ((m * n) as f64).sqrt())
}

/// Determinant with a perturbation bound for entrywise errors `|E_ij| ≤ ε`.
///
/// First order, `|δ det| ≤ ε Σ|adj(A)_ij|`; the remainder of the binomial
/// bound `(|A|+nε)^n − |A|^n − n|A|^{n−1}nε` covers higher orders. Singular
/// matrices fall back to the plain binomial bound.
pub fn det_with_error(a: &MatrixEstimate) -> Estimate {
    let n = a.value.nrows();
    let det = a.value.determinant();
    let s = operator_norm(&a.value);
    let e = a.error * n as f64;
    let binom = (s + e).powi(n as i32) - s.powi(n as i32);
    let first = a
        .value
        .clone()
        .try_inverse()
        .map(|inv| a.error * inv.iter().map(|v| (v * det).abs()).sum::<f64>());
    let err = match first {
        Some(f) if f.is_finite() => {
            let linear = n as f64 * s.powi(n as i32 - 1) * e;
            f + (binom - linear).max(0.0)
        }
        _ => binom,
    };
    Estimate::new(det, err)
}
