//! Test mappings `f: B^n → R^m` with known Laplacian `g = Δf` and known
//! boundary trace.

mod catalog;
mod poly;

pub use catalog::{
    catalog, hemisphere_data, identity_map, identity_pair, landau_counterexample, mobius_field,
    parse_selector, random_harmonic, random_polyharmonic, sharp_example, FieldPair,
};
pub use poly::Polynomial;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::ballgeom::norm;
use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Declared rotational symmetry of boundary data: the value depends only on
/// `⟨ζ, axis⟩`, possibly with jumps at the listed polar angles.
#[derive(Clone, Debug, PartialEq)]
pub struct AxialSymmetry {
    pub axis: Vec<f64>,
    pub breaks: Vec<f64>,
}

#[derive(Clone)]
enum Body {
    Poly {
        p: Polynomial,
        grad: Vec<Polynomial>,
        lap: Polynomial,
    },
    Custom {
        eval: ScalarFn,
        lap: Option<ScalarFn>,
    },
}

/// A real function on the closed ball.
#[derive(Clone)]
pub struct ScalarField {
    n: usize,
    body: Body,
    trace: Option<ScalarFn>,
    sup_hint: Option<f64>,
    symmetry: Option<AxialSymmetry>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Poly { p, .. } => write!(f, "ScalarField::Poly({} terms, deg {})", p.terms().len(), p.degree()),
            Body::Custom { .. } => write!(f, "ScalarField::Custom(n = {})", self.n),
        }
    }
}

impl ScalarField {
    pub fn polynomial(p: Polynomial) -> Self {
        let n = p.nvars();
        let grad = (0..n).map(|i| p.partial(i)).collect();
        let lap = p.laplacian();
        ScalarField {
            n,
            body: Body::Poly { p, grad, lap },
            trace: None,
            sup_hint: None,
            symmetry: None,
        }
    }

    pub fn custom(n: usize, eval: ScalarFn) -> Self {
        ScalarField {
            n,
            body: Body::Custom { eval, lap: None },
            trace: None,
            sup_hint: None,
            symmetry: None,
        }
    }

    pub fn with_laplacian(mut self, lap: ScalarFn) -> Self {
        if let Body::Custom { lap: l, .. } = &mut self.body {
            *l = Some(lap);
        }
        self
    }

    /// Boundary values, if different from `eval` restricted to the sphere.
    pub fn with_trace(mut self, trace: ScalarFn) -> Self {
        self.trace = Some(trace);
        self
    }

    /// Exact `sup |f|` over the closed ball.
    pub fn with_sup_hint(mut self, s: f64) -> Self {
        self.sup_hint = Some(s);
        self
    }

    pub fn with_symmetry(mut self, s: AxialSymmetry) -> Self {
        self.symmetry = Some(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.body {
            Body::Poly { p, .. } => p.eval(x),
            Body::Custom { eval, .. } => eval(x),
        }
    }

    pub fn trace(&self, zeta: &[f64]) -> f64 {
        match &self.trace {
            Some(t) => t(zeta),
            None => self.eval(zeta),
        }
    }

    /// Exact Laplacian, when known.
    pub fn laplacian(&self, x: &[f64]) -> Option<f64> {
        match &self.body {
            Body::Poly { lap, .. } => Some(lap.eval(x)),
            Body::Custom { lap, .. } => lap.as_ref().map(|l| l(x)),
        }
    }

    /// Exact gradient, available for polynomial fields.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        match &self.body {
            Body::Poly { grad, .. } => Some(grad.iter().map(|g| g.eval(x)).collect()),
            Body::Custom { .. } => None,
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.body {
            Body::Poly { p, .. } => Some(p),
            Body::Custom { .. } => None,
        }
    }

    /// Polynomial degree, `None` for non-polynomial fields.
    pub fn degree(&self) -> Option<usize> {
        self.as_polynomial().map(Polynomial::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.as_polynomial().is_some_and(Polynomial::is_zero)
    }

    pub fn sup_hint(&self) -> Option<f64> {
        self.sup_hint
    }

    /// A guaranteed upper bound of `sup |f|` on the closed ball: the hint if
    /// present, else the coefficient sum of a polynomial field.
    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_hint
            .or_else(|| self.as_polynomial().map(Polynomial::coef_abs_sum))
    }

    pub fn symmetry(&self) -> Option<&AxialSymmetry> {
        self.symmetry.as_ref()
    }

    /// The Laplacian as a field: exact for polynomials, else the attached
    /// closure.
    pub fn laplacian_field(&self) -> Option<ScalarField> {
        match &self.body {
            Body::Poly { lap, .. } => Some(ScalarField::polynomial(lap.clone())),
            Body::Custom { lap, .. } => lap.clone().map(|l| ScalarField::custom(self.n, l)),
        }
    }
}

/// A mapping `B^n → R^m`, one [`ScalarField`] per component.
#[derive(Clone, Debug)]
pub struct VectorField {
    n: usize,
    components: Vec<ScalarField>,
    sup_hint: Option<f64>,
    trace_sup_hint: Option<f64>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let n = components
            .first()
            .map(ScalarField::dim)
            .ok_or_else(|| Error::Config("a vector field needs at least one component".into()))?;
        if let Some(c) = components.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.dim(),
            });
        }
        Ok(VectorField {
            n,
            components,
            sup_hint: None,
            trace_sup_hint: None,
        })
    }

    pub fn from_polynomials(ps: Vec<Polynomial>) -> Result<Self> {
        Self::new(ps.into_iter().map(ScalarField::polynomial).collect())
    }

    /// The zero map `B^n → R^m`.
    pub fn zero(n: usize, m: usize) -> Self {
        VectorField {
            n,
            components: vec![ScalarField::polynomial(Polynomial::zero(n)); m],
            sup_hint: Some(0.0),
            trace_sup_hint: Some(0.0),
        }
    }

    /// Exact `sup |f|` (Euclidean norm of the vector) over the closed ball.
    pub fn with_sup_hint(mut self, s: f64) -> Self {
        self.sup_hint = Some(s);
        self
    }

    /// Exact `sup |f|` over the sphere.
    pub fn with_trace_sup_hint(mut self, s: f64) -> Self {
        self.trace_sup_hint = Some(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ncomponents(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(x);
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn trace_into(&self, zeta: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.trace(zeta);
        }
    }

    /// `Df(x)` from exact component gradients, when all are polynomial.
    pub fn jacobian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        let rows: Option<Vec<Vec<f64>>> = self.components.iter().map(|c| c.gradient(x)).collect();
        let rows = rows?;
        Some(DMatrix::from_fn(rows.len(), self.n, |i, j| rows[i][j]))
    }

    /// `Δf` componentwise, when every component knows its Laplacian.
    pub fn laplacian_field(&self) -> Option<VectorField> {
        let comps: Option<Vec<ScalarField>> = self.components.iter().map(|c| c.laplacian_field()).collect();
        VectorField::new(comps?).ok()
    }

    /// Largest polynomial degree, `None` if any component is not polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.components
            .iter()
            .map(ScalarField::degree)
            .try_fold(0, |m, d| d.map(|d| m.max(d)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarField::is_zero)
    }

    pub fn sup_hint(&self) -> Option<f64> {
        self.sup_hint
    }

    /// Guaranteed upper bound of `sup |f|`: the hint, else `(Σ_k b_k²)^{1/2}`
    /// over component bounds `b_k`.
    pub fn sup_bound(&self) -> Option<f64> {
        if self.sup_hint.is_some() {
            return self.sup_hint;
        }
        let bs: Option<Vec<f64>> = self.components.iter().map(ScalarField::sup_bound).collect();
        bs.map(|b| b.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// Common axial symmetry of all components, if declared.
    pub fn symmetry(&self) -> Option<&AxialSymmetry> {
        let first = self.components[0].symmetry()?;
        self.components
            .iter()
            .all(|c| c.symmetry() == Some(first))
            .then_some(first)
    }

    pub fn sup_norms(&self, samples: usize) -> SupNorms {
        SupNorms {
            sampled: sampled_sup(|x, out| self.eval_into(x, out), self.n, self.ncomponents(), samples, Domain::ClosedBall),
            bound: self.sup_bound(),
            hint: self.sup_hint,
        }
    }

    /// `sup_{S^{n−1}} |trace|`, which bounds `sup |P_f|` by the maximum
    /// principle.
    pub fn trace_sup_norms(&self, samples: usize) -> SupNorms {
        let sampled = sampled_sup(|x, out| self.trace_into(x, out), self.n, self.ncomponents(), samples, Domain::Sphere);
        SupNorms {
            sampled,
            bound: self.sup_bound(),
            hint: self.trace_sup_hint,
        }
    }
}

/// Estimates of a sup norm: quasi-random sampling (a lower estimate), a
/// guaranteed upper bound when one is known, and an exact hint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNorms {
    pub sampled: f64,
    pub bound: Option<f64>,
    pub hint: Option<f64>,
}

impl SupNorms {
    /// Best point estimate: the exact hint, else the sampled value.
    pub fn value(&self) -> f64 {
        self.hint.unwrap_or(self.sampled)
    }

    /// Guaranteed upper value: the hint, else the bound, else the sample.
    pub fn upper(&self) -> f64 {
        self.hint.or(self.bound).unwrap_or(self.sampled)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    ClosedBall,
    Sphere,
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// The `count` first Halton points (index from 1) of the unit cube `[0,1)^n`.
pub fn halton(n: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(n <= PRIMES.len(), "halton supports up to {} dimensions", PRIMES.len());
    (1..=count as u64)
        .map(|i| PRIMES[..n].iter().map(|&p| radical_inverse(i, p)).collect())
        .collect()
}

/// Deterministic quasi-random points of the closed ball or the sphere.
///
/// Ball points are Halton points of `[−1,1]^n` inside the ball, followed by
/// the same number of sphere points; sphere points push a Halton sequence
/// through the inverse normal CDF and normalise.
pub fn quasi_random_points(n: usize, count: usize, domain: Domain) -> Vec<Vec<f64>> {
    let sphere = || {
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        halton(n, count)
            .into_iter()
            .filter_map(|u| {
                let z: Vec<f64> = u.iter().map(|v| normal.inverse_cdf(*v)).collect();
                let r = norm(&z);
                (r > 0.0 && r.is_finite()).then(|| z.iter().map(|v| v / r).collect())
            })
            .collect::<Vec<Vec<f64>>>()
    };
    match domain {
        Domain::Sphere => sphere(),
        Domain::ClosedBall => {
            let mut pts = Vec::with_capacity(2 * count);
            let mut i = 0;
            let mut batch = count;
            while pts.len() < count {
                for u in halton(n, i + batch).into_iter().skip(i) {
                    let p: Vec<f64> = u.iter().map(|v| 2.0 * v - 1.0).collect();
                    if norm(&p) <= 1.0 && pts.len() < count {
                        pts.push(p);
                    }
                }
                i += batch;
                batch *= 2;
            }
            pts.extend(sphere());
            pts
        }
    }
}

/// `max |F(x)|` (Euclidean) over quasi-random points of the domain.
pub fn sampled_sup<F>(f: F, n: usize, m: usize, samples: usize, domain: Domain) -> f64
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut out = vec![0.0; m];
    quasi_random_points(n, samples, domain)
        .iter()
        .map(|p| {
            f(p, &mut out);
            norm(&out)
        })
        .fold(0.0, f64::max)
}
