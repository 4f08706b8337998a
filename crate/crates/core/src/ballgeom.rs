//! Closed-form kernels of the unit ball.
//!
//! Everything here is a pure function of its arguments. The public API works
//! on [`Point`] and checks dimensions and domains; the `*_raw` slice versions
//! skip validation and are what the quadrature hot loops call.

use crate::error::{Error, Result};
use crate::specfun;

/// Relative tolerance for `|ζ| = 1` in kernels that take a boundary point.
pub const SPHERE_TOL: f64 = 1e-12;

/// A point of `R^n`, `n ≥ 2`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension {
                n: coords.len(),
                min: 2,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point(coords))
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0.0; n.max(2)])
    }

    /// `r` times the last basis vector, i.e. `rN` with `N = (0, …, 0, 1)`.
    pub fn on_axis(n: usize, r: f64) -> Self {
        let mut p = Point::origin(n);
        let last = p.0.len() - 1;
        p.0[last] = r;
        p
    }

    /// The `i`-th standard basis vector.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut p = Point::origin(n);
        p.0[i] = 1.0;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    pub fn dot(&self, other: &Point) -> Result<f64> {
        same_dim(self, other)?;
        Ok(dot(&self.0, &other.0))
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        same_dim(self, other)?;
        Ok(Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        same_dim(self, other)?;
        Ok(Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// `x/|x|`, or `None` at the origin.
    pub fn direction(&self) -> Option<Point> {
        let r = self.norm();
        (r > 0.0).then(|| self.scaled(1.0 / r))
    }
}

impl std::ops::Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

/// Ambient dimension of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(usize);

impl Dimension {
    /// Any `n ≥ 2`; the geometric primitives accept this range.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        Ok(Dimension(n))
    }

    /// `n ≥ 3`, required by the Green function and every solver/bound routine.
    pub fn solver(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidDimension { n, min: 3 });
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn require_solver(self) -> Result<Self> {
        Dimension::solver(self.0)
    }

    pub(crate) fn check(self, p: &[f64]) -> Result<()> {
        if p.len() != self.0 {
            return Err(Error::DimensionMismatch {
                expected: self.0,
                got: p.len(),
            });
        }
        Ok(())
    }
}

fn same_dim(a: &Point, b: &Point) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

fn inside_ball(x: &[f64]) -> Result<f64> {
    let r2 = dot(x, x);
    if r2 >= 1.0 {
        return Err(Error::OutsideBall { norm: r2.sqrt() });
    }
    Ok(r2)
}

fn on_sphere(z: &[f64]) -> Result<()> {
    let r = norm(z);
    if (r - 1.0).abs() > SPHERE_TOL {
        return Err(Error::NotOnSphere { norm: r });
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `[x,y]² = |x|²|y|² − 2⟨x,y⟩ + 1`.
#[inline]
pub fn bracket_sq_raw(x: &[f64], y: &[f64]) -> f64 {
    let v = dot(x, x) * dot(y, y) - 2.0 * dot(x, y) + 1.0;
    v.max(0.0)
}

/// The symmetric bracket `[x,y] = |y|x| − x/|x||`, computed through the
/// algebraic form so it is total (also at `x = 0` or `y = 0`).
pub fn bracket(x: &Point, y: &Point) -> Result<f64> {
    same_dim(x, y)?;
    Ok(bracket_sq_raw(x, y).sqrt())
}

/// Writes `φ_x(y)` into `out`.
pub fn mobius_into(x: &[f64], y: &[f64], out: &mut [f64]) {
    let x2 = dot(x, x);
    let d2 = dist_sq(x, y);
    let b2 = bracket_sq_raw(x, y);
    let s = 1.0 - x2;
    for ((o, &xi), &yi) in out.iter_mut().zip(x).zip(y) {
        *o = (d2 * xi - s * (yi - xi)) / b2;
    }
}

/// Möbius automorphism `φ_x(y) = (|x−y|² x − (1−|x|²)(y−x)) / [x,y]²`.
///
/// `φ_x(0) = x`, `φ_x(x) = 0` and `φ_x ∘ φ_x = id`.
pub fn mobius(x: &Point, y: &Point) -> Result<Point> {
    same_dim(x, y)?;
    inside_ball(x)?;
    let ny = y.norm();
    if ny > 1.0 + SPHERE_TOL {
        return Err(Error::OutsideBall { norm: ny });
    }
    let mut out = vec![0.0; x.dim()];
    mobius_into(x, y, &mut out);
    Ok(Point(out))
}

#[inline]
pub fn mobius_jacobian_abs_raw(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as i32;
    let s = 1.0 - dot(x, x);
    (s / bracket_sq_raw(x, y)).powi(n)
}

/// `|J_{φ_x}(y)| = (1−|x|²)^n / [x,y]^{2n}`.
pub fn mobius_jacobian_abs(x: &Point, y: &Point) -> Result<f64> {
    same_dim(x, y)?;
    inside_ball(x)?;
    Ok(mobius_jacobian_abs_raw(x, y))
}

/// `c_n = 1/((n−2) ω_{n−1})`.
pub fn green_constant(n: usize) -> f64 {
    1.0 / ((n as f64 - 2.0) * specfun::sphere_area(n))
}

/// Green function without validation; returns `+∞` at `x = y`.
#[inline]
pub fn green_raw(cn: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let d2 = dist_sq(x, y);
    if d2 == 0.0 {
        return f64::INFINITY;
    }
    let b2 = bracket_sq_raw(x, y);
    let e = (2.0 - n) / 2.0;
    cn * (d2.powf(e) - b2.powf(e))
}

/// Green function of `B^n`: `G(x,y) = c_n (|x−y|^{2−n} − [x,y]^{2−n})`.
pub fn green(n: Dimension, x: &Point, y: &Point) -> Result<f64> {
    let n = n.require_solver()?;
    n.check(x)?;
    n.check(y)?;
    for p in [x, y] {
        let r = p.norm();
        if r > 1.0 + SPHERE_TOL {
            return Err(Error::OutsideBall { norm: r });
        }
    }
    if dist_sq(x, y) == 0.0 {
        return Err(Error::Singular);
    }
    Ok(green_raw(green_constant(n.get()), x, y))
}

/// Writes `∇_x G(x,y)` into `out`; no validation.
#[inline]
pub fn grad_green_into(cn: f64, x: &[f64], y: &[f64], out: &mut [f64]) {
    let n = x.len() as f64;
    let d2 = dist_sq(x, y);
    let b2 = bracket_sq_raw(x, y);
    let dn = d2.powf(-n / 2.0);
    let bn = b2.powf(-n / 2.0);
    let y2 = dot(y, y);
    let k = cn * (2.0 - n);
    for ((o, &xi), &yi) in out.iter_mut().zip(x).zip(y) {
        *o = k * ((xi - yi) * dn - (y2 * xi - yi) * bn);
    }
}

/// `∇_x G(x,y) = c_n (2−n) [ (x−y)/|x−y|^n − (|y|²x − y)/[x,y]^n ]`.
pub fn grad_green(n: Dimension, x: &Point, y: &Point) -> Result<Point> {
    let n = n.require_solver()?;
    n.check(x)?;
    n.check(y)?;
    if dist_sq(x, y) == 0.0 {
        return Err(Error::Singular);
    }
    let mut out = vec![0.0; n.get()];
    grad_green_into(green_constant(n.get()), x, y, &mut out);
    Ok(Point(out))
}

#[inline]
pub fn poisson_kernel_raw(x: &[f64], zeta: &[f64]) -> f64 {
    let n = x.len() as i32;
    let d2 = dist_sq(x, zeta);
    (1.0 - dot(x, x)) / (d2.sqrt().powi(n))
}

/// Poisson kernel `P(x,ζ) = (1−|x|²)/|x−ζ|^n`, unit mass against `dσ`.
pub fn poisson_kernel(n: Dimension, x: &Point, zeta: &Point) -> Result<f64> {
    n.check(x)?;
    n.check(zeta)?;
    inside_ball(x)?;
    on_sphere(zeta)?;
    Ok(poisson_kernel_raw(x, zeta))
}

#[inline]
pub fn grad_poisson_kernel_into(x: &[f64], zeta: &[f64], out: &mut [f64]) {
    let n = x.len() as i32;
    let d = dist_sq(x, zeta).sqrt();
    let dn = d.powi(-n);
    let dn2 = dn / (d * d);
    let s = 1.0 - dot(x, x);
    let nf = n as f64;
    for ((o, &xi), &zi) in out.iter_mut().zip(x).zip(zeta) {
        *o = -2.0 * xi * dn - nf * s * (xi - zi) * dn2;
    }
}

/// `∇_x P(x,ζ) = −2x/|x−ζ|^n − n(1−|x|²)(x−ζ)/|x−ζ|^{n+2}`.
pub fn grad_poisson_kernel(n: Dimension, x: &Point, zeta: &Point) -> Result<Point> {
    n.check(x)?;
    n.check(zeta)?;
    inside_ball(x)?;
    on_sphere(zeta)?;
    let mut out = vec![0.0; n.get()];
    grad_poisson_kernel_into(x, zeta, &mut out);
    Ok(Point(out))
}
