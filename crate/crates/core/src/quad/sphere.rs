//! Integration over `S^{n−1}` with respect to the normalised surface measure.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::adaptive::try_integrate_1d_vec;
use super::rules::sub_sphere_rule;
use super::{Estimate, QuadratureSpec, VecEstimate};
use crate::ballgeom::{norm, Dimension};
use crate::error::{Error, Result};
use crate::specfun::sine_power_integral;

/// How to integrate a function over the sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum SphereRule {
    /// The integrand depends only on `⟨ζ, axis⟩`; one adaptive 1-D integral.
    Axisymmetric { axis: Vec<f64> },
    /// Adaptive in the angle to `axis`, fixed rule of the given order on the
    /// orthogonal sub-sphere.
    Product { axis: Vec<f64>, order: usize },
    /// Uniform random directions; `samples` overrides `mc_samples` if set.
    MonteCarlo { samples: Option<usize> },
}

/// Spherical coordinates about a fixed axis `e`: `ζ = cos θ e + sin θ w`,
/// with `w` running over a fixed rule on the unit sphere of `e^⊥`.
#[derive(Clone, Debug)]
pub struct AxisFrame {
    axis: Vec<f64>,
    ring: Vec<Vec<f64>>,
    weights: Vec<f64>,
    norm_const: f64,
}

impl AxisFrame {
    /// Frame about `axis` (normalised here) with sub-sphere rule order `order`.
    pub fn new(axis: &[f64], order: usize) -> Result<Self> {
        let n = axis.len();
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        if order == 0 {
            return Err(Error::Config("sub-sphere order must be >= 1".into()));
        }
        let len = norm(axis);
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::Domain("axis must be a non-zero finite vector".into()));
        }
        let e: Vec<f64> = axis.iter().map(|v| v / len).collect();

        // Householder reflection exchanging e and the last basis vector; its
        // first n−1 columns span e^⊥.
        let mut v = e.clone();
        v[n - 1] -= 1.0;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        let reflect = |u: &[f64]| -> Vec<f64> {
            if vv < 1e-28 {
                return u.to_vec();
            }
            let s = 2.0 * u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / vv;
            u.iter().zip(&v).map(|(a, b)| a - s * b).collect()
        };

        let (sub, weights) = sub_sphere_rule(n - 1, order);
        let ring = sub
            .into_iter()
            .map(|mut eta| {
                eta.push(0.0);
                reflect(&eta)
            })
            .collect();
        Ok(AxisFrame {
            axis: e,
            ring,
            weights,
            norm_const: sine_power_integral(n as f64 - 2.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.axis.len()
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// Number of sub-sphere nodes per polar angle.
    pub fn ring_len(&self) -> usize {
        self.ring.len()
    }

    /// Writes `cos θ e + sin θ w_j` into `out`.
    pub fn point(&self, cos: f64, sin: f64, j: usize, out: &mut [f64]) {
        for ((o, e), w) in out.iter_mut().zip(&self.axis).zip(&self.ring[j]) {
            *o = cos * e + sin * w;
        }
    }

    /// `∫_{S^{n−1}} F dσ` for a vector integrand `F(ζ, out)` with `dim_out`
    /// components; adaptive in θ with the given extra breakpoints.
    pub fn integrate<F>(&self, mut f: F, dim_out: usize, breaks: &[f64], q: &QuadratureSpec) -> Result<VecEstimate>
    where
        F: FnMut(&[f64], &mut [f64]) -> Result<()>,
    {
        let n = self.dim();
        let p = n as i32 - 2;
        let mut zeta = vec![0.0; n];
        let mut tmp = vec![0.0; dim_out];
        let z = self.norm_const;
        try_integrate_1d_vec(
            |t, out| {
                let (s, c) = t.sin_cos();
                out.iter_mut().for_each(|o| *o = 0.0);
                for j in 0..self.ring.len() {
                    self.point(c, s, j, &mut zeta);
                    f(&zeta, &mut tmp)?;
                    let w = self.weights[j];
                    for (o, v) in out.iter_mut().zip(&tmp) {
                        *o += w * v;
                    }
                }
                let jac = s.powi(p) / z;
                out.iter_mut().for_each(|o| *o *= jac);
                Ok(())
            },
            dim_out,
            0.0,
            std::f64::consts::PI,
            breaks,
            q,
        )
    }
}

/// `∫_{S^{n−1}} h(⟨ζ,e⟩) dσ(ζ) = ∫₀^π h(cos t) sin^{n−2}t dt / ∫₀^π sin^{n−2}t dt`.
pub fn integrate_sphere_axisym<H>(mut h: H, n: Dimension, q: &QuadratureSpec) -> Result<Estimate>
where
    H: FnMut(f64) -> f64,
{
    let p = n.get() as i32 - 2;
    let z = sine_power_integral(p as f64);
    let v = try_integrate_1d_vec(
        |t, out| {
            out[0] = h(t.cos()) * t.sin().powi(p) / z;
            Ok(())
        },
        1,
        0.0,
        std::f64::consts::PI,
        &[FRAC_PI_2],
        q,
    )?;
    Ok(v.component(0))
}

const MC_CHUNK: usize = 4096;

#[derive(Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        if self.count == 0.0 {
            return o;
        }
        let count = self.count + o.count;
        let delta = o.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * (o.count / count),
            m2: self.m2 + o.m2 + delta * delta * self.count * o.count / count,
        }
    }
}

/// Monte Carlo mean of `F` over uniform directions, with its standard error.
///
/// Samples are drawn in fixed chunks, each from its own ChaCha stream keyed
/// by `(rng_seed, chunk index)`, and merged in chunk order, so the result is
/// bit-identical for any number of worker threads.
pub fn integrate_sphere_mc<F>(f: F, n: Dimension, q: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    q.validate()?;
    mc_with_samples(&f, n, q.mc_samples, q.rng_seed)
}

fn mc_with_samples<F>(f: &F, n: Dimension, samples: usize, seed: u64) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::Config("Monte Carlo needs at least 2 samples".into()));
    }
    let dim = n.get();
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut z = vec![0.0; dim];
            let mut m = Moments {
                count: 0.0,
                mean: 0.0,
                m2: 0.0,
            };
            let mut k = 0;
            while k < count {
                for v in z.iter_mut() {
                    *v = StandardNormal.sample(&mut rng);
                }
                let r = norm(&z);
                if r == 0.0 {
                    continue;
                }
                z.iter_mut().for_each(|v| *v /= r);
                let x = f(&z);
                m.count += 1.0;
                let d = x - m.mean;
                m.mean += d / m.count;
                m.m2 += d * (x - m.mean);
                k += 1;
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(
        Moments {
            count: 0.0,
            mean: 0.0,
            m2: 0.0,
        },
        Moments::merge,
    );
    if !(total.mean.is_finite() && total.m2.is_finite()) {
        return Err(Error::Domain("non-finite Monte Carlo integrand".into()));
    }
    let var = total.m2 / (total.count - 1.0);
    Ok((total.mean, (var / total.count).sqrt()))
}

/// Sphere integral of a scalar function with the chosen rule. Monte Carlo
/// reports three standard errors as its error.
pub fn integrate_sphere<F>(f: F, n: Dimension, rule: &SphereRule, q: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let check_axis = |axis: &[f64]| n.check(axis);
    match rule {
        SphereRule::Axisymmetric { axis } => {
            check_axis(axis)?;
            let frame = AxisFrame::new(axis, 1)?;
            let mut zeta = vec![0.0; n.get()];
            integrate_sphere_axisym(
                |u| {
                    let s = (1.0 - u * u).max(0.0).sqrt();
                    frame.point(u, s, 0, &mut zeta);
                    f(&zeta)
                },
                n,
                q,
            )
        }
        SphereRule::Product { axis, order } => {
            check_axis(axis)?;
            let frame = AxisFrame::new(axis, *order)?;
            let v = frame.integrate(
                |z, out| {
                    out[0] = f(z);
                    Ok(())
                },
                1,
                &[],
                q,
            )?;
            Ok(v.component(0))
        }
        SphereRule::MonteCarlo { samples } => {
            q.validate()?;
            let (m, se) = mc_with_samples(&f, n, samples.unwrap_or(q.mc_samples), q.rng_seed)?;
            Ok(Estimate::new(m, 3.0 * se))
        }
    }
}
