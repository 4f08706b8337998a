//! Special functions behind the sharp constants: Gamma, Beta, Pochhammer,
//! Gauss `₂F₁` on `[−1, 1]`, sphere areas and ball volumes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, QuadratureSpec};

/// Term budget for every `₂F₁` summation.
pub const SERIES_BUDGET: usize = 1_000_000;
/// Relative target of the default `₂F₁` evaluation.
pub const SERIES_TOL: f64 = 1e-15;

/// Compensated (Neumaier) running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn is_nonpositive_integer(t: f64) -> bool {
    t <= 0.0 && t.fract() == 0.0
}

/// `Γ(t)`; errors at the poles `0, −1, −2, …`.
pub fn gamma_fn(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {t}")));
    }
    if is_nonpositive_integer(t) {
        return Err(Error::Pole(t));
    }
    Ok(statrs::function::gamma::gamma(t))
}

/// `ln Γ(t)` for `t > 0`.
pub fn ln_gamma(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("ln_gamma needs t > 0, got {t}")));
    }
    Ok(statrs::function::gamma::ln_gamma(t))
}

/// `B(p,q) = Γ(p)Γ(q)/Γ(p+q)` for `p, q > 0`.
pub fn beta_fn(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Domain(format!("beta needs p, q > 0, got ({p}, {q})")));
    }
    if p + q < 170.0 {
        Ok(gamma_fn(p)? * gamma_fn(q)? / gamma_fn(p + q)?)
    } else {
        Ok((ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?).exp())
    }
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k−1)`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Hausdorff measure of the unit sphere in `R^k`, `ω_{k−1} = 2π^{k/2}/Γ(k/2)`.
///
/// `k = 1` gives `2` (the two points of `S⁰`).
pub fn sphere_area(k: usize) -> f64 {
    assert!(k >= 1, "sphere_area needs k >= 1");
    let h = k as f64 / 2.0;
    2.0 * PI.powf(h) / statrs::function::gamma::gamma(h)
}

/// Volume of the unit ball of `R^n`, `ω_{n−1}/n`.
pub fn ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

/// `∫₀^π sin^p t dt = B((p+1)/2, 1/2)`, `p > −1`.
pub fn sine_power_integral(p: f64) -> f64 {
    beta_fn((p + 1.0) / 2.0, 0.5).expect("p > -1")
}

/// Parameters of `F(a,b;c;x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeometricParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x: f64,
}

impl HypergeometricParams {
    pub fn new(a: f64, b: f64, c: f64, x: f64) -> Result<Self> {
        let p = HypergeometricParams { a, b, c, x };
        p.validate()?;
        Ok(p)
    }

    fn terminates(&self) -> bool {
        is_nonpositive_integer(self.a) || is_nonpositive_integer(self.b)
    }

    pub fn validate(&self) -> Result<()> {
        let HypergeometricParams { a, b, c, x } = *self;
        if ![a, b, c, x].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("non-finite 2F1 parameter".into()));
        }
        if is_nonpositive_integer(c) {
            return Err(Error::Domain(format!("2F1 undefined for c = {c}")));
        }
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("2F1 argument {x} outside [-1, 1]")));
        }
        if self.terminates() {
            return Ok(());
        }
        let excess = c - a - b;
        if x == 1.0 && excess <= 0.0 {
            return Err(Error::Domain(format!(
                "2F1 diverges at x = 1 when c - a - b = {excess} <= 0"
            )));
        }
        if x == -1.0 && excess <= -1.0 {
            return Err(Error::Domain(format!(
                "2F1 diverges at x = -1 when c - a - b = {excess} <= -1"
            )));
        }
        Ok(())
    }
}

/// A summed series with its error bound and the number of terms used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub error: f64,
    pub terms: usize,
}

/// Gauss hypergeometric function `F(a,b;c;x)` for `x ∈ [−1, 1]`.
pub fn hyp2f1(p: HypergeometricParams) -> Result<f64> {
    hyp2f1_eval(p).map(|s| s.value)
}

/// `F(a,b;c;x)` with an error estimate.
///
/// `x ∈ (0,1)` sums the series directly, `x ∈ [−1,0)` first applies
/// `F(a,b;c;x) = (1−x)^{−a} F(a, c−b; c; x/(x−1))`, and `x = 1` extrapolates
/// the partial sums (Richardson with the known exponents `c−a−b+j`), so the
/// Gauss summation formula is not used on any path.
pub fn hyp2f1_eval(p: HypergeometricParams) -> Result<SeriesValue> {
    p.validate()?;
    let HypergeometricParams { a, b, c, x } = p;
    if x == 0.0 {
        return Ok(SeriesValue {
            value: 1.0,
            error: 0.0,
            terms: 1,
        });
    }
    if p.terminates() {
        return sum_series(a, b, c, x, SERIES_TOL, SERIES_BUDGET);
    }
    if x == 1.0 {
        return sum_at_one(a, b, c);
    }
    if x < 0.0 {
        let z = x / (x - 1.0);
        let pre = (1.0 - x).powf(-a);
        let s = sum_series(a, c - b, c, z, SERIES_TOL, SERIES_BUDGET)?;
        return Ok(SeriesValue {
            value: pre * s.value,
            error: pre * s.error,
            terms: s.terms,
        });
    }
    sum_series(a, b, c, x, SERIES_TOL, SERIES_BUDGET)
}

/// Raw summation of the defining series on `[−1, 1)`, no transformations.
///
/// Stops once the tail bound drops below `tol·|partial sum|`. For alternating
/// tails the midpoint of two consecutive partial sums is returned.
pub fn hyp2f1_direct(p: HypergeometricParams, tol: f64, budget: usize) -> Result<SeriesValue> {
    p.validate()?;
    if p.x == 1.0 && !p.terminates() {
        return Err(Error::Domain("hyp2f1_direct does not sum at x = 1".into()));
    }
    sum_series(p.a, p.b, p.c, p.x, tol, budget)
}

/// Gauss's closed form `Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b))`, for `c − a − b > 0`.
pub fn gauss_sum(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(c - a - b > 0.0) {
        return Err(Error::Domain("gauss_sum needs c - a - b > 0".into()));
    }
    Ok(gamma_fn(c)? * gamma_fn(c - a - b)? / (gamma_fn(c - a)? * gamma_fn(c - b)?))
}

fn term_ratio(a: f64, b: f64, c: f64, k: f64) -> f64 {
    (a + k) * (b + k) / ((c + k) * (k + 1.0))
}

fn sum_series(a: f64, b: f64, c: f64, x: f64, tol: f64, budget: usize) -> Result<SeriesValue> {
    // Past this index the term ratio is monotone, so tail bounds are valid.
    let settle = (4.0 * (a.abs() + b.abs() + c.abs() + 1.0)).ceil() as usize;
    let mut acc = NeumaierSum::new();
    let mut t = 1.0;
    for k in 0..budget {
        acc.add(t);
        let ratio = term_ratio(a, b, c, k as f64) * x;
        let next = t * ratio;
        if next == 0.0 {
            let v = acc.value();
            return Ok(SeriesValue {
                value: v,
                error: f64::EPSILON * v.abs(),
                terms: k + 1,
            });
        }
        if k >= settle {
            let s = acc.value();
            if x < 0.0 && ratio.abs() < 1.0 {
                let half = 0.5 * next.abs();
                if half <= tol * s.abs() {
                    return Ok(SeriesValue {
                        value: s + 0.5 * next,
                        error: half,
                        terms: k + 2,
                    });
                }
            } else {
                let rho = ratio.abs().max(x.abs());
                if rho < 1.0 {
                    let tail = next.abs() / (1.0 - rho);
                    if tail <= tol * s.abs() {
                        return Ok(SeriesValue {
                            value: s,
                            error: tail,
                            terms: k + 1,
                        });
                    }
                }
            }
        }
        t = next;
    }
    let tail = t.abs();
    Err(Error::SeriesBudget {
        terms: budget,
        partial: acc.value(),
        tail,
    })
}

fn sum_at_one(a: f64, b: f64, c: f64) -> Result<SeriesValue> {
    const LEVELS: usize = 7;
    let excess = c - a - b;
    let k0 = (8.0 * (a.abs() + b.abs() + c.abs())).max(256.0).ceil() as usize;
    let marks: Vec<usize> = (0..LEVELS).map(|j| k0 << j).collect();
    let kmax = *marks.last().unwrap();

    let mut partials = Vec::with_capacity(LEVELS);
    let mut acc = NeumaierSum::new();
    let mut t = 1.0;
    let mut next_mark = 0;
    for k in 0..kmax {
        acc.add(t);
        if k + 1 == marks[next_mark] {
            partials.push(acc.value());
            next_mark += 1;
        }
        t *= term_ratio(a, b, c, k as f64);
    }

    // S_K = S − K^{−(c−a−b)} Σ_j α_j K^{−j}; eliminate one exponent per sweep.
    let mut row = partials;
    let mut prev_best = row[row.len() - 1];
    for j in 0..LEVELS - 1 {
        let f = 2f64.powf(excess + j as f64);
        prev_best = row[row.len() - 1];
        row = row.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    let value = row[0];
    let error = (value - prev_best).abs() + 4.0 * f64::EPSILON * value.abs();
    Ok(SeriesValue {
        value,
        error,
        terms: kmax,
    })
}

/// Left side of the sine-power identity,
/// `∫₀^π sin^{λ₁−1}t / (1 + r² − 2r cos t)^{λ₂} dt`, by adaptive quadrature.
pub fn prop21_lhs(lambda1: f64, lambda2: f64, r: f64, q: &QuadratureSpec) -> Result<Estimate> {
    check_prop21(lambda1, lambda2, r)?;
    let e = lambda1 - 1.0;
    let rr = 1.0 + r * r;
    quad::integrate_1d(
        |t| t.sin().powf(e) * (rr - 2.0 * r * t.cos()).powf(-lambda2),
        0.0,
        PI,
        q,
    )
}

/// Right side, `B(λ₁/2, 1/2) F(λ₂, λ₂ + (1−λ₁)/2; (1+λ₁)/2; r²)`.
pub fn prop21_rhs(lambda1: f64, lambda2: f64, r: f64) -> Result<f64> {
    check_prop21(lambda1, lambda2, r)?;
    let p = HypergeometricParams::new(
        lambda2,
        lambda2 + (1.0 - lambda1) / 2.0,
        (1.0 + lambda1) / 2.0,
        r * r,
    )?;
    Ok(beta_fn(lambda1 / 2.0, 0.5)? * hyp2f1(p)?)
}

fn check_prop21(lambda1: f64, lambda2: f64, r: f64) -> Result<()> {
    if !(lambda1 > 1.0 && lambda2 > 0.0 && (0.0..1.0).contains(&r)) {
        return Err(Error::Domain(format!(
            "sine-power identity needs λ₁ > 1, λ₂ > 0, r ∈ [0,1); got ({lambda1}, {lambda2}, {r})"
        )));
    }
    Ok(())
}
