//! Globally adaptive Gauss–Kronrod (7/15) integration, vector valued.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::rules::{WG, WGK, XGK};
use super::{Estimate, QuadratureSpec, VecEstimate};
use crate::error::{Error, Result};

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    error: f64,
    /// `max_i ∫|f_i|` over the panel, for the roundoff floor.
    mass: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

struct Kronrod {
    dim: usize,
    tracked: usize,
    fc: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
}

impl Kronrod {
    fn new(dim: usize, tracked: usize) -> Self {
        Kronrod {
            dim,
            tracked,
            fc: vec![0.0; dim],
            f1: vec![0.0; 7 * dim],
            f2: vec![0.0; 7 * dim],
        }
    }

    fn panel<F>(&mut self, f: &mut F, a: f64, b: f64) -> Result<Panel>
    where
        F: FnMut(f64, &mut [f64]) -> Result<()>,
    {
        let d = self.dim;
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        f(c, &mut self.fc)?;
        for j in 0..7 {
            let x = h * XGK[j];
            f(c - x, &mut self.f1[j * d..(j + 1) * d])?;
            f(c + x, &mut self.f2[j * d..(j + 1) * d])?;
        }
        let mut values = vec![0.0; d];
        let mut error: f64 = 0.0;
        let mut mass: f64 = 0.0;
        for i in 0..d {
            let fc = self.fc[i];
            let mut resk = fc * WGK[7];
            let mut resg = fc * WG[3];
            let mut resabs = fc.abs() * WGK[7];
            for j in 0..7 {
                let (u, v) = (self.f1[j * d + i], self.f2[j * d + i]);
                resk += WGK[j] * (u + v);
                resabs += WGK[j] * (u.abs() + v.abs());
                if j % 2 == 1 {
                    resg += WG[j / 2] * (u + v);
                }
            }
            let mean = 0.5 * resk;
            let mut resasc = WGK[7] * (fc - mean).abs();
            for j in 0..7 {
                resasc += WGK[j]
                    * ((self.f1[j * d + i] - mean).abs() + (self.f2[j * d + i] - mean).abs());
            }
            let value = resk * h;
            if !value.is_finite() {
                return Err(Error::Domain(format!(
                    "non-finite integrand on [{a}, {b}]"
                )));
            }
            let resabs = resabs * h.abs();
            let resasc = resasc * h.abs();
            let mut err = ((resk - resg) * h).abs();
            if resasc != 0.0 && err != 0.0 {
                err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
            }
            if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
                err = err.max(50.0 * f64::EPSILON * resabs);
            }
            values[i] = value;
            if i < self.tracked {
                error = error.max(err);
                mass = mass.max(resabs);
            }
        }
        Ok(Panel {
            a,
            b,
            values,
            error,
            mass,
        })
    }
}

const ROUNDOFF_FLOOR: f64 = 1000.0 * f64::EPSILON;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Adaptive integration of a fallible vector integrand over `[a, b]`.
///
/// `f(t, out)` writes `dim` components. `breaks` are extra initial panel
/// boundaries (points outside `(a, b)` are ignored). The returned error
/// bounds each component; convergence is declared once it is below
/// `max(abs_tol, rel_tol·max_i |value_i|)`, or below the roundoff floor
/// `1000 ε max_i ∫|f_i|` for integrals that cancel to nearly zero.
pub fn try_integrate_1d_vec<F>(
    f: F,
    dim: usize,
    a: f64,
    b: f64,
    breaks: &[f64],
    q: &QuadratureSpec,
) -> Result<VecEstimate>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    adaptive(f, dim, dim, a, b, breaks, q)
}

/// Like [`try_integrate_1d_vec`], but only the first `tracked` components
/// drive refinement and enter the error; the rest (typically integrated
/// inner error estimates) are carried along.
pub(crate) fn adaptive<F>(
    mut f: F,
    dim: usize,
    tracked: usize,
    a: f64,
    b: f64,
    breaks: &[f64],
    q: &QuadratureSpec,
) -> Result<VecEstimate>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!("integration interval [{a}, {b}] is empty or infinite")));
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|t| *t > a && *t < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut rule = Kronrod::new(dim, tracked);
    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut total_err = 0.0;
    let mut total_mass = 0.0;
    for w in cuts.windows(2) {
        let p = rule.panel(&mut f, w[0], w[1])?;
        for (t, v) in total.iter_mut().zip(&p.values) {
            *t += v;
        }
        total_err += p.error;
        total_mass += p.mass;
        heap.push(p);
    }

    loop {
        // Cancelling integrals cannot beat roundoff relative to ∫|f|.
        let floor = ROUNDOFF_FLOOR * total_mass;
        if total_err <= q.target(max_abs(&total[..tracked])).max(floor) {
            break;
        }
        if heap.len() >= q.max_subdivisions {
            return Err(budget_error(&heap, q.max_subdivisions));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            return Err(budget_error(&heap, heap.len()));
        }
        let left = rule.panel(&mut f, worst.a, mid)?;
        let right = rule.panel(&mut f, mid, worst.b)?;
        for i in 0..dim {
            total[i] += left.values[i] + right.values[i] - worst.values[i];
        }
        total_err += left.error + right.error - worst.error;
        total_mass += left.mass + right.mass - worst.mass;
        heap.push(left);
        heap.push(right);
    }
    Ok(summarise(&heap, dim))
}

fn summarise(heap: &BinaryHeap<Panel>, dim: usize) -> VecEstimate {
    // Sum panels left to right so the result does not depend on heap layout.
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut values = vec![0.0; dim];
    let mut error = 0.0;
    for p in panels {
        for (v, x) in values.iter_mut().zip(&p.values) {
            *v += x;
        }
        error += p.error;
    }
    VecEstimate { values, error }
}

fn budget_error(heap: &BinaryHeap<Panel>, subdivisions: usize) -> Error {
    let dim = heap.peek().map_or(0, |p| p.values.len());
    let s = summarise(heap, dim);
    Error::QuadratureBudget {
        subdivisions,
        estimate: s.values.first().copied().unwrap_or(f64::NAN),
        error: s.error,
    }
}

/// Vector integrand version of [`integrate_1d`].
pub fn integrate_1d_vec<F>(mut f: F, dim: usize, a: f64, b: f64, q: &QuadratureSpec) -> Result<VecEstimate>
where
    F: FnMut(f64, &mut [f64]),
{
    try_integrate_1d_vec(
        |t, out| {
            f(t, out);
            Ok(())
        },
        dim,
        a,
        b,
        &[],
        q,
    )
}

/// `∫_a^b f(t) dt` with an error estimate.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, q: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate_1d_breaks(f, a, b, &[], q)
}

/// [`integrate_1d`] with caller-supplied initial panel boundaries, e.g. at
/// kinks or interior peaks.
pub fn integrate_1d_breaks<F>(mut f: F, a: f64, b: f64, breaks: &[f64], q: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    let v = try_integrate_1d_vec(
        |t, out| {
            out[0] = f(t);
            Ok(())
        },
        1,
        a,
        b,
        breaks,
        q,
    )?;
    Ok(Estimate::new(v.values[0], v.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::beta_fn;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn trivial_integrals() {
        let q = QuadratureSpec::default();
        let e = integrate_1d(f64::sin, 0.0, PI, &q).unwrap();
        assert_relative_eq!(e.value, 2.0, epsilon = 1e-13);
        assert!(e.error <= 1e-9);
        let e = integrate_1d(|r| r * (1.0 - r.powi(3)), 0.0, 1.0, &q).unwrap();
        assert_relative_eq!(e.value, 0.3, epsilon = 1e-14);
    }

    #[test]
    fn sine_powers_match_beta() {
        let q = QuadratureSpec::default();
        for n in 3..=8 {
            let p = (n - 2) as f64;
            let e = integrate_1d(|t| t.sin().powf(p), 0.0, PI, &q).unwrap();
            let b = beta_fn((n as f64 - 1.0) / 2.0, 0.5).unwrap();
            assert_relative_eq!(e.value, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn endpoint_singularity() {
        let q = QuadratureSpec::default();
        let e = integrate_1d(|t| 1.0 / t.sqrt(), 0.0, 1.0, &q).unwrap();
        assert!((e.value - 2.0).abs() <= e.error.max(1e-9));
    }

    #[test]
    fn breakpoints_at_kinks() {
        let q = QuadratureSpec::default();
        let e = integrate_1d_breaks(|t| (t - 0.3).abs(), 0.0, 1.0, &[0.3], &q).unwrap();
        assert_relative_eq!(e.value, 0.045 + 0.245, epsilon = 1e-14);
    }

    #[test]
    fn vector_components() {
        let q = QuadratureSpec::default();
        let v = integrate_1d_vec(
            |t, out| {
                out[0] = t;
                out[1] = t.exp();
            },
            2,
            0.0,
            1.0,
            &q,
        )
        .unwrap();
        assert_relative_eq!(v.values[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(v.values[1], 1f64.exp() - 1.0, epsilon = 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::default()
        };
        let r = integrate_1d(|t| (1.0 / t).sin(), 1e-4, 1.0, &q);
        assert!(matches!(r, Err(Error::QuadratureBudget { subdivisions: 3, .. })));
        assert!(r.unwrap_err().is_budget());
    }

    #[test]
    fn bad_interval() {
        let q = QuadratureSpec::default();
        assert!(integrate_1d(|t| t, 1.0, 0.0, &q).is_err());
        assert!(integrate_1d(|t| t, 0.0, f64::INFINITY, &q).is_err());
    }
}
