//! Integration over the unit ball in polar form.

use super::adaptive::adaptive;
use super::sphere::AxisFrame;
use super::{Estimate, QuadratureSpec, VecEstimate};
use crate::ballgeom::{mobius_into, mobius_jacobian_abs_raw, Dimension, Point};
use crate::error::{Error, Result};
use crate::specfun::sphere_area;

/// `∫_{B^n} F dV = ω_{n−1} ∫₀^1 ρ^{n−1} ∫_{S^{n−1}} F(ρζ) dσ(ζ) dρ` for a
/// vector integrand `F(y, out)`.
///
/// With `singular_at = Some(x)` the integral is taken after the substitution
/// `y = φ_x(z)`, `dV(y) = |J_{φ_x}(z)| dV(z)`, which moves a point singularity
/// at `x` to the origin where the polar factor `ρ^{n−1}` absorbs kernels of
/// order `|y−x|^{2−n}`. The sphere is parametrised about the axis through
/// `x`, so kernels in `(x, y)` are resolved by the adaptive polar angle and
/// the sub-sphere rule (order `q.sphere_nodes`) only sees the data.
///
/// The returned error adds the outer radial error to the integrated errors of
/// the inner sphere integrals.
pub fn integrate_ball_vec<F>(
    mut f: F,
    dim_out: usize,
    n: Dimension,
    singular_at: Option<&Point>,
    q: &QuadratureSpec,
) -> Result<VecEstimate>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    q.validate()?;
    let nn = n.get();
    let mut axis = vec![0.0; nn];
    axis[nn - 1] = 1.0;
    if let Some(x) = singular_at {
        n.check(x)?;
        let r = x.norm();
        if r >= 1.0 {
            return Err(Error::OutsideBall { norm: r });
        }
        if r > 0.0 {
            axis = x.iter().map(|v| v / r).collect();
        }
    }
    let frame = AxisFrame::new(&axis, q.sphere_nodes)?;
    let omega = sphere_area(nn);
    let x: Option<&[f64]> = singular_at.map(|p| p.coords());

    let mut z = vec![0.0; nn];
    let mut y = vec![0.0; nn];
    let v = adaptive(
        |rho, out| {
            let inner = frame.integrate(
                |zeta, o| {
                    for (zi, s) in z.iter_mut().zip(zeta) {
                        *zi = rho * s;
                    }
                    match x {
                        Some(x) => {
                            mobius_into(x, &z, &mut y);
                            f(&y, o)?;
                            let jac = mobius_jacobian_abs_raw(x, &z);
                            o.iter_mut().for_each(|v| *v *= jac);
                        }
                        None => f(&z, o)?,
                    }
                    Ok(())
                },
                dim_out,
                &[],
                q,
            )?;
            let radial = omega * rho.powi(nn as i32 - 1);
            for (o, v) in out.iter_mut().zip(&inner.values) {
                *o = radial * v;
            }
            out[dim_out] = radial * inner.error;
            Ok(())
        },
        dim_out + 1,
        dim_out,
        0.0,
        1.0,
        &[],
        q,
    )?;
    let inner_err = v.values[dim_out];
    let mut values = v.values;
    values.truncate(dim_out);
    Ok(VecEstimate {
        values,
        error: v.error + inner_err,
    })
}

/// Scalar version of [`integrate_ball_vec`].
pub fn integrate_ball<F>(mut f: F, n: Dimension, singular_at: Option<&Point>, q: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(&[f64]) -> f64,
{
    let v = integrate_ball_vec(
        |y, o| {
            o[0] = f(y);
            Ok(())
        },
        1,
        n,
        singular_at,
        q,
    )?;
    Ok(v.component(0))
}
