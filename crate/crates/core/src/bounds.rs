//! Bound functions and sharp constants of the Schwarz-type lemmas, their
//! right-hand sides, and the report rows that compare them with numerically
//! evaluated left-hand sides.
//!
//! Notation: `N = e_n` is the north pole, `U(x)` the Poisson extension of
//! `X_{S⁺} − X_{S⁻}` (upper minus lower hemisphere indicator), `φ(r)` its
//! radial derivative along `N`, `A_n = φ(1)` the boundary constant, and
//! `C(γ,r)`, `Ψ_r` the gradient-bound kernels with radial parameters
//! `τ(r) = (1−r)/(1+r)`, `α(r) = r(n−2)/n`, `β(r) = (n−(n−2)r)/2`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ballgeom::Dimension;
use crate::error::{Error, Result};
use crate::fields::VectorField;
use crate::quad::{self, Estimate, QuadratureSpec};
use crate::specfun::{beta_fn, gamma_fn, hyp2f1, sine_power_integral, sphere_area, HypergeometricParams};

/// Outcome of one numerical check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// `|LHS − RHS|` is within the error budget (equality cases), or the
    /// LHS only exceeds an RHS built from sampled sup norms.
    Inconclusive,
    /// The hypothesis of the inequality does not hold.
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::NotApplicable => "NOT-APPLICABLE",
        })
    }
}

impl Verdict {
    /// Classify `LHS ≤ RHS` under an error budget.
    ///
    /// `rhs_sound` is a guaranteed upper value of the right side (for RHS
    /// values built from sampled sup norms); an LHS between the sampled and
    /// the sound RHS is inconclusive rather than a failure.
    pub fn classify(lhs: f64, rhs: f64, budget: f64, rhs_sound: f64) -> Verdict {
        if !(lhs.is_finite() && rhs.is_finite()) {
            return Verdict::Fail;
        }
        if (lhs - rhs).abs() <= budget {
            Verdict::Inconclusive
        } else if lhs < rhs {
            Verdict::Pass
        } else if lhs <= rhs_sound.max(rhs) + budget {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        }
    }
}

/// One row of a verification report: `LHS ≤ RHS` (or `LHS ≈ RHS`) at a
/// location, with the combined numerical error budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: String,
    pub n: usize,
    pub location: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `RHS − LHS`.
    pub slack: f64,
    pub budget: f64,
    pub verdict: Verdict,
    /// Free-form flags, e.g. a sup scan that hit its range boundary.
    pub note: String,
}

/// Relative floating-point floor added to every budget so that exact
/// equalities evaluated along two different arithmetic paths are not
/// mistaken for strict inequalities.
pub const ROUNDING_FLOOR: f64 = 1e-12;

impl BoundReport {
    pub fn new(id: impl Into<String>, n: usize, location: impl Into<String>, lhs: f64, rhs: f64, budget: f64) -> Self {
        Self::with_sound_rhs(id, n, location, lhs, rhs, rhs, budget)
    }

    /// Report whose RHS uses sampled sup norms; `rhs_sound` uses guaranteed
    /// upper bounds and only separates FAIL from INCONCLUSIVE.
    pub fn with_sound_rhs(
        id: impl Into<String>,
        n: usize,
        location: impl Into<String>,
        lhs: f64,
        rhs: f64,
        rhs_sound: f64,
        budget: f64,
    ) -> Self {
        let budget = budget + ROUNDING_FLOOR * lhs.abs().max(rhs.abs()).max(1.0);
        BoundReport {
            id: id.into(),
            n,
            location: location.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            budget,
            verdict: Verdict::classify(lhs, rhs, budget, rhs_sound),
            note: String::new(),
        }
    }

    pub fn not_applicable(id: impl Into<String>, n: usize, location: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        BoundReport {
            id: id.into(),
            n,
            location: location.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            budget: 0.0,
            verdict: Verdict::NotApplicable,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Radial parameters of the gradient bound at `(r, γ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParams {
    pub r: f64,
    pub gamma: f64,
    pub n: Dimension,
}

impl ThetaParams {
    pub fn new(n: Dimension, r: f64, gamma: f64) -> Result<Self> {
        n.require_solver()?;
        check_radius(r)?;
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        Ok(ThetaParams { r, gamma, n })
    }

    pub fn tau(&self) -> f64 {
        (1.0 - self.r) / (1.0 + self.r)
    }

    pub fn alpha(&self) -> f64 {
        self.r * (self.n.as_f64() - 2.0) / self.n.as_f64()
    }

    pub fn beta(&self) -> f64 {
        (self.n.as_f64() - (self.n.as_f64() - 2.0) * self.r) / 2.0
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("radius must lie in [0, 1), got {r}")));
    }
    Ok(())
}

/// `∂/∂r` of the Poisson kernel restricted to the axis, as a function of
/// the polar angle `t`: `K = (1−r²)D^{−n/2}`, `D = 1 + r² − 2r cos t`.
fn axis_kernel(n: f64, r: f64, t: f64) -> (f64, f64) {
    let c = t.cos();
    let d = 1.0 + r * r - 2.0 * r * c;
    let dp = d.powf(-n / 2.0);
    let k = (1.0 - r * r) * dp;
    let dk = -2.0 * r * dp - n * (1.0 - r * r) * (r - c) * dp / d;
    (k, dk)
}

/// `U(rN)`, the harmonic extension of the hemisphere difference on the axis.
///
/// The kernel has unit mass, so `[∫₀^{π/2} − ∫_{π/2}^π] K sin^{n−2} / Z`
/// equals `1 − (2/Z)∫_{π/2}^π K sin^{n−2}`, `Z = ∫₀^π sin^{n−2}`. The second
/// form keeps away from the kernel peak at `t = 0` and stays accurate as
/// `r → 1`.
pub fn u_axis(n: Dimension, r: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let nf = n.require_solver()?.as_f64();
    check_radius(r)?;
    let p = n.get() as i32 - 2;
    let z = sine_power_integral(p as f64);
    let e = quad::integrate_1d(|t| axis_kernel(nf, r, t).0 * t.sin().powi(p), FRAC_PI_2, PI, q)?;
    Ok(Estimate::new(1.0 - 2.0 * e.value / z, 2.0 * e.error / z))
}

/// `φ(r) = ∂U(rN)/∂r` by differentiating under the integral sign; at
/// `r = 1` the limit `A_n` is returned.
pub fn u_derivative(n: Dimension, r: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let nf = n.require_solver()?.as_f64();
    if r == 1.0 {
        return Ok(Estimate::exact(a_constant(n)?));
    }
    check_radius(r)?;
    let p = n.get() as i32 - 2;
    let z = sine_power_integral(p as f64);
    let e = quad::integrate_1d(|t| axis_kernel(nf, r, t).1 * t.sin().powi(p), FRAC_PI_2, PI, q)?;
    Ok(Estimate::new(-2.0 * e.value / z, 2.0 * e.error / z))
}

/// The boundary constant
/// `A_n = n![1 + n − (n−2)F(1/2, 1; (n+3)/2; −1)] / (2^{3n/2} Γ((n+1)/2) Γ((n+3)/2))`.
pub fn a_constant(n: Dimension) -> Result<f64> {
    let nf = n.require_solver()?.as_f64();
    let f = hyp2f1(HypergeometricParams::new(0.5, 1.0, (nf + 3.0) / 2.0, -1.0)?)?;
    let fact = gamma_fn(nf + 1.0)?;
    Ok(fact * (1.0 + nf - (nf - 2.0) * f)
        / (2f64.powf(1.5 * nf) * gamma_fn((nf + 1.0) / 2.0)? * gamma_fn((nf + 3.0) / 2.0)?))
}

/// Upper limit `(γ + √(γ² + 1 − α²))/(1 − α)` of the `Ψ_r` integral.
pub fn psi_upper_limit(p: &ThetaParams, gamma_arg: f64) -> Result<f64> {
    let a = p.alpha();
    let u = (gamma_arg + (gamma_arg * gamma_arg + 1.0 - a * a).sqrt()) / (1.0 - a);
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("psi upper limit {u} at gamma = {gamma_arg}")));
    }
    Ok(u)
}

/// Integrand of `Ψ_r(γ)` at `ρ`, taken with its sign.
pub fn psi_integrand(p: &ThetaParams, gamma_arg: f64, rho: f64) -> f64 {
    let nf = p.n.as_f64();
    let (b, t) = (p.beta(), p.tau());
    let num = (nf - b + nf * gamma_arg * rho - b * rho * rho) * rho.powi(p.n.get() as i32 - 2);
    num / ((1.0 + rho * rho).powf(nf / 2.0 + 1.0) * (1.0 + t * t * rho * rho).powf(nf / 2.0 - 1.0))
}

/// `Ψ_r(γ) = ∫₀^{upper(γ)} (n − β + nγρ − βρ²)ρ^{n−2} / [(1+ρ²)^{n/2+1}(1+τ²ρ²)^{n/2−1}] dρ`.
///
/// Only `r` and `n` are taken from `p`; the argument `γ` is `gamma_arg`,
/// which may be negative.
pub fn psi_r(p: &ThetaParams, gamma_arg: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let u = psi_upper_limit(p, gamma_arg)?;
    if u == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    quad::integrate_1d(|rho| psi_integrand(p, gamma_arg, rho), 0.0, u, q)
}

/// `4ω_{n−3}/ω_{n−1} · 2^{n−1}/(1+r)^{n−1}`, with `ω_{k−1}` the area of the
/// unit sphere of `R^k` (so `ω₀ = 2`).
fn c_prefactor(n: Dimension, r: f64) -> f64 {
    let nn = n.get();
    4.0 * sphere_area(nn - 2) / sphere_area(nn) * 2f64.powi(nn as i32 - 1) / (1.0 + r).powi(nn as i32 - 1)
}

/// `C(γ,r) = (4ω_{n−3}/ω_{n−1}) · 2^{n−1}/(1+r)^{n−1} · (1+γ²)^{−1/2}
/// ∫₀¹ [Ψ_r(γt) + Ψ_r(−γt)] (1−t²)^{(n−4)/2} dt`.
///
/// The substitution `t = sin u` removes the endpoint singularity of
/// `(1−t²)^{(n−4)/2}` (present for `n = 3`). Errors of the inner `Ψ`
/// integrals are integrated along with the values.
pub fn c_bound(p: &ThetaParams, q: &QuadratureSpec) -> Result<Estimate> {
    let n = p.n.get();
    let g = p.gamma;
    let e = quad::adaptive(
        |u, out| {
            let (s, c) = u.sin_cos();
            let a = psi_r(p, g * s, q)?;
            let b = psi_r(p, -g * s, q)?;
            let w = c.powi(n as i32 - 3);
            out[0] = (a.value + b.value) * w;
            out[1] = (a.error + b.error) * w;
            Ok(())
        },
        2,
        1,
        0.0,
        FRAC_PI_2,
        &[],
        q,
    )?;
    let s = c_prefactor(p.n, p.r) / (1.0 + g * g).sqrt();
    Ok(Estimate::new(s * e.values[0], s * (e.error + e.values[1])))
}

/// `lim_{γ→0⁺} C(γ,r) = pre · 2Ψ_r(0) · ∫₀¹(1−t²)^{(n−4)/2}dt`, with
/// `∫₀¹(1−t²)^{(n−4)/2}dt = B(1/2, (n−2)/2)/2`.
pub fn c_zero_limit(n: Dimension, r: f64, q: &QuadratureSpec) -> Result<Estimate> {
    n.require_solver()?;
    check_radius(r)?;
    let p = ThetaParams { r, gamma: 1.0, n };
    let psi0 = psi_r(&p, 0.0, q)?;
    let t = beta_fn(0.5, (n.as_f64() - 2.0) / 2.0)? / 2.0;
    let s = c_prefactor(n, r) * 2.0 * t;
    Ok(Estimate::new(s * psi0.value, s * psi0.error))
}

/// Result of the supremum over `γ > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupC {
    /// `max(scan maximum, γ → 0⁺ limit)`.
    pub value: f64,
    pub error: f64,
    /// Maximiser; `0` when the `γ → 0⁺` limit dominates.
    pub gamma_star: f64,
    /// Best value found by the scan and refinement on the finite range.
    pub scan_value: f64,
    pub zero_limit: f64,
    /// The scan maximum sat on the first or last grid point.
    pub boundary_hit: bool,
}

/// Log-grid scan range for `sup_C`.
pub const GAMMA_RANGE: (f64, f64) = (1e-3, 1e3);
/// Default grid density.
pub const GAMMA_POINTS_PER_DECADE: usize = 8;

/// `sup_{γ>0} C(γ,r)`; see [`sup_c_with`].
pub fn sup_c(r: f64, n: Dimension, q: &QuadratureSpec) -> Result<SupC> {
    sup_c_with(r, n, q, GAMMA_POINTS_PER_DECADE)
}

/// `sup_{γ>0} C(γ,r)` by a log-grid scan over [`GAMMA_RANGE`] with
/// `per_decade` points per decade, golden-section refinement around the best
/// grid cell, and comparison with the `γ → 0⁺` limit.
pub fn sup_c_with(r: f64, n: Dimension, q: &QuadratureSpec, per_decade: usize) -> Result<SupC> {
    n.require_solver()?;
    check_radius(r)?;
    if per_decade == 0 {
        return Err(Error::Config("sup_c needs at least one point per decade".into()));
    }
    let (lo, hi) = (GAMMA_RANGE.0.log10(), GAMMA_RANGE.1.log10());
    let count = ((hi - lo) * per_decade as f64).round() as usize + 1;
    let eval = |lg: f64| -> Result<Estimate> { c_bound(&ThetaParams::new(n, r, 10f64.powf(lg))?, q) };

    let grid: Vec<f64> = (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect();
    let mut vals = Vec::with_capacity(count);
    for &lg in &grid {
        vals.push(eval(lg)?);
    }
    let best = (0..count)
        .max_by(|&a, &b| vals[a].value.total_cmp(&vals[b].value))
        .expect("non-empty grid");
    let boundary_hit = best == 0 || best == count - 1;

    let (mut arg, mut top) = (grid[best], vals[best]);
    if !boundary_hit {
        // Golden section on [grid[best−1], grid[best+1]] in log γ.
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (eval(c)?, eval(d)?);
        for _ in 0..40 {
            if fc.value > fd.value {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = eval(d)?;
            }
            if (b - a) < 1e-8 {
                break;
            }
        }
        for (x, f) in [(c, fc), (d, fd)] {
            if f.value > top.value {
                arg = x;
                top = f;
            }
        }
    }

    let zero = c_zero_limit(n, r, q)?;
    let (value, error, gamma_star) = if zero.value >= top.value {
        (zero.value, zero.error, 0.0)
    } else {
        (top.value, top.error, 10f64.powf(arg))
    };
    Ok(SupC {
        value,
        error,
        gamma_star,
        scan_value: top.value,
        zero_limit: zero.value,
        boundary_hit,
    })
}

/// Closed form of `sup_γ C(γ,r)` for `n = 4`,
/// `[r√(4−r²)(2+r²) + 4(1−r²) arctan(r√(4−r²)/(r²−2))] / (π(1+r)r³)`.
///
/// For `r ∈ (0,1)` the arctan argument is negative. The principal branch
/// (values in `(−π/2, 0)`) is the one continuous from the finite `r → 0⁺`
/// limit; the other branch adds `4π(1−r²)/(π(1+r)r³)` and diverges.
pub fn closed_form_n4(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("closed form needs r in (0, 1), got {r}")));
    }
    let s = (4.0 - r * r).sqrt();
    let num = r * s * (2.0 + r * r) + 4.0 * (1.0 - r * r) * (r * s / (r * r - 2.0)).atan();
    Ok(num / (PI * (1.0 + r) * r.powi(3)))
}

/// Interior estimate: `‖P_f‖_∞ U(rN) + ‖g‖_∞(1−r²)/(2n)`.
pub fn rhs_thm1(n: Dimension, r: f64, sup_pf: f64, sup_g: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let u = u_axis(n, r, q)?;
    Ok(Estimate::new(
        sup_pf * u.value + rhs_green(n, r, sup_g),
        sup_pf * u.error,
    ))
}

/// Centring coefficient `(1−r²)/(1+r²)^{n/2}` of the interior estimate.
pub fn thm1_centring(n: Dimension, r: f64) -> f64 {
    (1.0 - r * r) / (1.0 + r * r).powf(n.as_f64() / 2.0)
}

fn centred_distance(fx: &[f64], c: f64, pf0: &[f64]) -> f64 {
    fx.iter().zip(pf0).map(|(a, b)| (a - c * b).powi(2)).sum::<f64>().sqrt()
}

/// `|f(x) − (1−r²)/(1+r²)^{n/2} P_f(0)|` with `r = |x|`.
pub fn lhs_thm1(n: Dimension, r: f64, fx: &[f64], pf0: &[f64]) -> f64 {
    centred_distance(fx, thm1_centring(n, r), pf0)
}

/// Centring coefficient `(1−r)/(1+r)^{n−1}` of the corollary.
pub fn cor1_centring(n: Dimension, r: f64) -> f64 {
    (1.0 - r) / (1.0 + r).powi(n.get() as i32 - 1)
}

/// `‖P_f‖_∞[1 − (1−r)/(1+r)^{n−1}] + ‖g‖_∞(1−r²)/(2n)`.
pub fn rhs_cor1(n: Dimension, r: f64, sup_pf: f64, sup_g: f64) -> f64 {
    sup_pf * (1.0 - cor1_centring(n, r)) + rhs_green(n, r, sup_g)
}

/// `|f(x) − (1−r)/(1+r)^{n−1} P_f(0)|`.
pub fn lhs_cor1(n: Dimension, r: f64, fx: &[f64], pf0: &[f64]) -> f64 {
    centred_distance(fx, cor1_centring(n, r), pf0)
}

/// Largest admissible `‖g‖_∞` of the boundary estimate, `nA_n/(1 + 2^{−n/2})`
/// (exclusive).
pub fn thm2_threshold(n: Dimension) -> Result<f64> {
    Ok(n.as_f64() * a_constant(n)? / (1.0 + 2f64.powf(-n.as_f64() / 2.0)))
}

/// `A_n − (‖g‖_∞/n)(1 + 2^{−n/2})`, or `None` when `‖g‖_∞` is at or above
/// [`thm2_threshold`].
pub fn rhs_thm2(n: Dimension, sup_g: f64) -> Result<Option<f64>> {
    if !(sup_g >= 0.0) {
        return Err(Error::Domain(format!("sup norm must be >= 0, got {sup_g}")));
    }
    if sup_g >= thm2_threshold(n)? {
        return Ok(None);
    }
    let nf = n.as_f64();
    Ok(Some(a_constant(n)? - sup_g / nf * (1.0 + 2f64.powf(-nf / 2.0))))
}

/// Difference quotient `|f(ζ) − f(rζ)|/(1−r)`, with `f(ζ)` from the
/// boundary trace.
pub fn thm2_quotient(f: &VectorField, zeta: &[f64], r: f64) -> Result<f64> {
    check_radius(r)?;
    if zeta.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: zeta.len(),
        });
    }
    let m = f.ncomponents();
    let (mut a, mut b) = (vec![0.0; m], vec![0.0; m]);
    f.trace_into(zeta, &mut a);
    let x: Vec<f64> = zeta.iter().map(|z| r * z).collect();
    f.eval_into(&x, &mut b);
    Ok(a.iter().zip(&b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt() / (1.0 - r))
}

/// Gradient estimate `‖P_f‖_∞/(1−r) · sup_γ C(γ,r) + n/(n+1)·‖g‖_∞`, given
/// a precomputed supremum.
pub fn rhs_thm3_with(n: Dimension, r: f64, sup_pf: f64, sup_g: f64, sup: &SupC) -> Estimate {
    Estimate::new(
        sup_pf / (1.0 - r) * sup.value + rhs_grad_green(n, sup_g),
        sup_pf / (1.0 - r) * sup.error,
    )
}

/// [`rhs_thm3_with`] computing the supremum.
pub fn rhs_thm3(n: Dimension, r: f64, sup_pf: f64, sup_g: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let s = sup_c(r, n, q)?;
    Ok(rhs_thm3_with(n, r, sup_pf, sup_g, &s))
}

/// The simple gradient estimate `2n‖P_f‖_∞/(1−r) + n/(n+1)·‖g‖_∞`.
pub fn rhs_simple(n: Dimension, r: f64, sup_pf: f64, sup_g: f64) -> f64 {
    2.0 * n.as_f64() * sup_pf / (1.0 - r) + rhs_grad_green(n, sup_g)
}

/// Green potential estimate `‖g‖_∞(1−r²)/(2n)`.
pub fn rhs_green(n: Dimension, r: f64, sup_g: f64) -> f64 {
    sup_g * (1.0 - r * r) / (2.0 * n.as_f64())
}

/// Gradient of the Green potential: `n/(n+1)·‖g‖_∞`.
pub fn rhs_grad_green(n: Dimension, sup_g: f64) -> f64 {
    n.as_f64() / (n.as_f64() + 1.0) * sup_g
}

/// Harmonic self-map estimate `|f(x) − (1−r²)/(1+r²)^{n/2} f(0)| ≤ U(rN)`.
///
/// `fx` and `f0` are values of a harmonic map of `B^n` into the closed unit
/// ball, with their error budget.
pub fn kalaj_check(
    n: Dimension,
    location: &str,
    r: f64,
    fx: &[f64],
    f0: &[f64],
    budget: f64,
    q: &QuadratureSpec,
) -> Result<BoundReport> {
    let u = u_axis(n, r, q)?;
    let lhs = lhs_thm1(n, r, fx, f0);
    Ok(BoundReport::new("kalaj", n.get(), location, lhs, u.value, budget + u.error))
}

/// `|G_g(x)| ≤ ‖g‖_∞(1−r²)/(2n)` from a computed potential value.
pub fn green_bound_check(
    n: Dimension,
    location: &str,
    r: f64,
    green_value: &Estimate,
    sup_g: f64,
    sup_g_sound: f64,
) -> BoundReport {
    BoundReport::with_sound_rhs(
        "green-bound",
        n.get(),
        location,
        green_value.value.abs(),
        rhs_green(n, r, sup_g),
        rhs_green(n, r, sup_g_sound),
        green_value.error,
    )
}

/// `|D G_g(x)| ≤ n/(n+1)·‖g‖_∞` from a computed operator norm.
pub fn green_gradient_check(
    n: Dimension,
    location: &str,
    grad_norm: &Estimate,
    sup_g: f64,
    sup_g_sound: f64,
) -> BoundReport {
    BoundReport::with_sound_rhs(
        "green-gradient",
        n.get(),
        location,
        grad_norm.value,
        rhs_grad_green(n, sup_g),
        rhs_grad_green(n, sup_g_sound),
        grad_norm.error,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{hemisphere_data, identity_map};
    use crate::potential::SolutionHandle;
    use crate::specfun::{ball_volume, hyp2f1_direct, NeumaierSum};
    use crate::Point;
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn theta_params() {
        let p = ThetaParams::new(dim(5), 0.5, 1.0).unwrap();
        assert_relative_eq!(p.tau(), 1.0 / 3.0);
        assert_relative_eq!(p.alpha(), 0.3);
        assert_relative_eq!(p.beta(), 1.75);
        assert!(ThetaParams::new(dim(3), 1.0, 1.0).is_err());
        assert!(ThetaParams::new(dim(3), 0.5, 0.0).is_err());
        assert!(ThetaParams::new(dim(2), 0.5, 1.0).is_err());
    }

    #[test]
    fn u_axis_n3_closed_form() {
        // For n = 3: U(rN) = (1 − (1−r²)/√(1+r²))/r.
        for r in [0.1, 0.3, 0.6, 0.9, 0.999] {
            let u = u_axis(dim(3), r, &q()).unwrap();
            let exact = (1.0 - (1.0 - r * r) / (1.0 + r * r).sqrt()) / r;
            assert_relative_eq!(u.value, exact, max_relative = 1e-12);
        }
        assert!(u_axis(dim(4), 0.0, &q()).unwrap().value.abs() < 1e-13);
    }

    #[test]
    fn u_axis_matches_poisson_extension() {
        for n in 3..=5 {
            let h = SolutionHandle::harmonic(VectorField::new(vec![hemisphere_data(dim(n))]).unwrap(), q()).unwrap();
            for r in [0.2, 0.7] {
                let p = h.poisson_extension(&Point::on_axis(n, r)).unwrap();
                let u = u_axis(dim(n), r, &q()).unwrap();
                assert_relative_eq!(p.values[0], u.value, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn u_boundary_limit_and_monotone() {
        for n in 3..=5 {
            for k in 2..=6 {
                let u = u_axis(dim(n), 1.0 - 10f64.powi(-k), &q()).unwrap();
                assert!((1.0 - u.value) < 10f64.powi(-k + 1) * n as f64, "n={n} k={k} {}", u.value);
            }
            let vals: Vec<f64> = (0..50).map(|i| u_axis(dim(n), i as f64 / 50.0, &q()).unwrap().value).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for n in 3..=6 {
            for r in [0.1, 0.5, 0.8] {
                let d = u_derivative(dim(n), r, &q()).unwrap().value;
                let fd = (u_axis(dim(n), r + h, &q()).unwrap().value - u_axis(dim(n), r - h, &q()).unwrap().value)
                    / (2.0 * h);
                assert_relative_eq!(d, fd, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn derivative_at_zero_is_volume_ratio() {
        // φ(0) = 2 V(B^{n−1}) / V(B^n).
        for n in 3..=6 {
            let d = u_derivative(dim(n), 0.0, &q()).unwrap().value;
            assert_relative_eq!(d, 2.0 * ball_volume(n - 1) / ball_volume(n), max_relative = 1e-12);
        }
    }

    #[test]
    fn derivative_decreases_to_a_n() {
        for n in 3..=6 {
            let vals: Vec<f64> = (0..50)
                .map(|i| u_derivative(dim(n), i as f64 / 49.0 * 0.9999, &q()).unwrap().value)
                .collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]));
            let a = a_constant(dim(n)).unwrap();
            assert_relative_eq!(*vals.last().unwrap(), a, max_relative = 1e-3);
            assert_eq!(u_derivative(dim(n), 1.0, &q()).unwrap().value, a);
        }
    }

    #[test]
    fn a_constant_values() {
        // Brute-force F(1/2, 1; 3; −1) by the alternating series, averaged
        // over two consecutive partial sums.
        let mut s = NeumaierSum::new();
        let mut t = 1.0;
        let mut prev = 0.0;
        for k in 0..200_000 {
            prev = s.value();
            s.add(t);
            let k = k as f64;
            t *= (0.5 + k) * (1.0 + k) / ((3.0 + k) * (1.0 + k)) * -1.0;
        }
        let f = 0.5 * (prev + s.value());
        let direct = hyp2f1_direct(HypergeometricParams::new(0.5, 1.0, 3.0, -1.0).unwrap(), 1e-15, 1_000_000)
            .unwrap()
            .value;
        assert_relative_eq!(f, direct, max_relative = 1e-9);
        let a3 = 6.0 * (4.0 - f) / (2f64.powf(4.5) * 1.0 * gamma_fn(3.0).unwrap());
        assert_relative_eq!(a_constant(dim(3)).unwrap(), a3, max_relative = 1e-9);
        assert_relative_eq!(a_constant(dim(3)).unwrap(), 2f64.sqrt() - 1.0, max_relative = 1e-12);
        for n in 3..=8 {
            let a = a_constant(dim(n)).unwrap();
            assert!(a > 0.0 && a <= 1.0);
        }
    }

    #[test]
    fn psi_at_origin_and_trapezoid_oracle() {
        for n in 3..=5 {
            let p = ThetaParams::new(dim(n), 0.0, 1.0).unwrap();
            assert_relative_eq!(p.beta(), n as f64 / 2.0);
            let e = psi_r(&p, 0.0, &q()).unwrap();
            assert!(e.value > 0.0);
            let nf = n as f64;
            let direct = quad::integrate_1d(
                |rho| nf / 2.0 * (1.0 - rho * rho) * rho.powi(n as i32 - 2) / (1.0 + rho * rho).powf(nf),
                0.0,
                1.0,
                &q(),
            )
            .unwrap();
            assert_relative_eq!(e.value, direct.value, max_relative = 1e-12);
        }
        for (n, r, g) in [(3, 0.5, 0.7), (4, 0.2, -1.5), (5, 0.9, 3.0), (4, 0.7, -0.2)] {
            let p = ThetaParams::new(dim(n), r, 1.0).unwrap();
            let e = psi_r(&p, g, &q()).unwrap().value;
            let u = psi_upper_limit(&p, g).unwrap();
            let m = 100_000;
            let h = u / m as f64;
            let mut s = NeumaierSum::new();
            for i in 0..=m {
                let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                s.add(w * psi_integrand(&p, g, i as f64 * h));
            }
            assert_relative_eq!(e, s.value() * h, max_relative = 1e-6);
        }
    }

    #[test]
    fn c_bound_finite_and_continuous_at_zero() {
        for n in 3..=5 {
            for r in [0.0, 0.4, 0.9] {
                for g in [1e-2, 1.0, 1e2] {
                    let c = c_bound(&ThetaParams::new(dim(n), r, g).unwrap(), &q()).unwrap();
                    assert!(c.value.is_finite() && c.value > 0.0);
                }
                let a = c_bound(&ThetaParams::new(dim(n), r, 1e-6).unwrap(), &q()).unwrap();
                let b = c_bound(&ThetaParams::new(dim(n), r, 1e-4).unwrap(), &q()).unwrap();
                assert_relative_eq!(a.value, b.value, max_relative = 1e-6);
                let z = c_zero_limit(dim(n), r, &q()).unwrap();
                assert_relative_eq!(a.value, z.value, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_matches_supremum() {
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let s = sup_c(r, dim(4), &q()).unwrap();
            let c = closed_form_n4(r).unwrap();
            assert_relative_eq!(s.value, c, max_relative = 1e-6);
        }
        // The limit is approached at rate O(r); it equals 16/(3π).
        let a = closed_form_n4(1e-4).unwrap();
        let b = closed_form_n4(1e-5).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-4);
        assert_relative_eq!(b, 16.0 / (3.0 * PI), max_relative = 1e-4);
        assert!((1..50).all(|i| closed_form_n4(i as f64 / 50.0).unwrap() > 0.0));
        assert!(closed_form_n4(0.0).is_err() && closed_form_n4(1.0).is_err());
    }

    #[test]
    fn sup_stable_under_denser_scan() {
        let a = sup_c_with(0.5, dim(3), &q(), 8).unwrap();
        let b = sup_c_with(0.5, dim(3), &q(), 16).unwrap();
        assert_relative_eq!(a.value, b.value, max_relative = 1e-3);
        assert!(a.value > 0.0);
    }

    #[test]
    fn interior_estimate_sharp_cases() {
        let n = dim(4);
        // Sharp example at the origin: ‖P_f‖ = 0, ‖g‖ = 2nM.
        let m = 1.5;
        let rhs = rhs_thm1(n, 0.0, 0.0, 8.0 * m, &q()).unwrap();
        assert_relative_eq!(rhs.value, m);
        assert_relative_eq!(rhs_cor1(n, 0.0, 0.0, 8.0 * m), m);
        assert_eq!(cor1_centring(n, 0.0), 1.0);
        assert_relative_eq!(rhs_cor1(n, 0.0, 3.0, 8.0), 1.0);
        let r = BoundReport::new("thm1", 4, "x=0", m, rhs.value, rhs.error);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn boundary_estimate_gate() {
        for n in 3..=6 {
            let t = thm2_threshold(dim(n)).unwrap();
            assert_eq!(rhs_thm2(dim(n), t).unwrap(), None);
            assert_eq!(rhs_thm2(dim(n), 0.0).unwrap(), Some(a_constant(dim(n)).unwrap()));
            let below = rhs_thm2(dim(n), 0.5 * t).unwrap().unwrap();
            assert!(below > 0.0 && below < a_constant(dim(n)).unwrap());
        }
        let f = identity_map(dim(3));
        let zeta = [0.0, 0.6, 0.8];
        for k in 1..=4 {
            let qv = thm2_quotient(&f, &zeta, 1.0 - 10f64.powi(-k)).unwrap();
            assert_relative_eq!(qv, 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn gradient_bounds_on_identity() {
        for n in 3..=5 {
            for r in [0.0, 0.5, 0.95] {
                let t = rhs_thm3(dim(n), r, 1.0, 0.0, &q()).unwrap();
                assert!(t.value >= 1.0);
                assert!(rhs_simple(dim(n), r, 1.0, 0.0) >= 1.0);
            }
        }
    }

    #[test]
    fn kalaj_on_identity() {
        let n = dim(3);
        for r in [0.0, 0.3, 0.8] {
            let x = [0.0, 0.0, r];
            let rep = kalaj_check(n, "axis", r, &x, &[0.0; 3], 0.0, &q()).unwrap();
            if r == 0.0 {
                assert_eq!(rep.verdict, Verdict::Inconclusive);
            } else {
                assert_eq!(rep.verdict, Verdict::Pass);
            }
        }
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(Verdict::classify(1.0, 2.0, 0.1, 2.0), Verdict::Pass);
        assert_eq!(Verdict::classify(2.05, 2.0, 0.1, 2.0), Verdict::Inconclusive);
        assert_eq!(Verdict::classify(3.0, 2.0, 0.1, 2.0), Verdict::Fail);
        assert_eq!(Verdict::classify(3.0, 2.0, 0.1, 3.5), Verdict::Inconclusive);
        assert_eq!(Verdict::classify(f64::NAN, 2.0, 0.1, 3.5), Verdict::Fail);
        assert_eq!(Verdict::NotApplicable.to_string(), "NOT-APPLICABLE");
    }
}
