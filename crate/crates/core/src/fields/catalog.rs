//! Named test pairs `(f, g = Δf)` and the selector syntax used by the CLI.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AxialSymmetry, Polynomial, ScalarField, VectorField};
use crate::ballgeom::{mobius_into, Dimension, Point};
use crate::error::{Error, Result};

/// A mapping together with its Laplacian.
#[derive(Clone, Debug)]
pub struct FieldPair {
    pub name: String,
    pub f: VectorField,
    pub g: VectorField,
}

impl FieldPair {
    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn is_harmonic(&self) -> bool {
        self.g.is_zero()
    }

    /// `(s f, s g)`; polynomial pairs only.
    pub fn scaled(&self, s: f64) -> Result<FieldPair> {
        let scale = |v: &VectorField| -> Result<VectorField> {
            let ps: Option<Vec<Polynomial>> = v
                .components()
                .iter()
                .map(|c| c.as_polynomial().map(|p| p.scale(s)))
                .collect();
            let mut out = VectorField::from_polynomials(
                ps.ok_or_else(|| Error::Config("only polynomial pairs can be scaled".into()))?,
            )?;
            if let Some(h) = v.sup_hint() {
                out = out.with_sup_hint(h * s.abs());
            }
            Ok(out)
        };
        Ok(FieldPair {
            name: format!("{}*{s}", self.name),
            f: scale(&self.f)?,
            g: scale(&self.g)?,
        })
    }
}

fn poly_pair(name: String, f: Vec<Polynomial>) -> Result<FieldPair> {
    let f = VectorField::from_polynomials(f)?;
    let g = f.laplacian_field().expect("polynomial Laplacian");
    Ok(FieldPair { name, f, g })
}

/// `f = (M(1−|x|²), 0, …, 0)`, `g = (−2nM, 0, …, 0)`: equality case of the
/// interior estimate at the origin and on the sphere.
pub fn sharp_example(n: Dimension, m: f64) -> Result<FieldPair> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("sharp example needs M > 0, got {m}")));
    }
    let nn = n.get();
    let mut comps = vec![Polynomial::constant(nn, m).sub(&Polynomial::norm_sq(nn).scale(m))];
    comps.extend((1..nn).map(|_| Polynomial::zero(nn)));
    let mut p = poly_pair(format!("sharp:M={m}"), comps)?;
    p.f = p.f.with_sup_hint(m).with_trace_sup_hint(0.0);
    let gs = 2.0 * nn as f64 * m;
    p.g = p.g.with_sup_hint(gs).with_trace_sup_hint(gs);
    Ok(p)
}

/// `f(x) = x`.
pub fn identity_map(n: Dimension) -> VectorField {
    let nn = n.get();
    VectorField::from_polynomials((0..nn).map(|i| Polynomial::variable(nn, i)).collect())
        .expect("non-empty")
        .with_sup_hint(1.0)
        .with_trace_sup_hint(1.0)
}

/// The identity map with `g = 0`.
pub fn identity_pair(n: Dimension) -> FieldPair {
    FieldPair {
        name: "identity".into(),
        f: identity_map(n),
        g: VectorField::zero(n.get(), n.get()),
    }
}

/// `f_k(x) = (k x₁, x₂/k, x₃, …, x_{n−1}, |x|²/3 + x_n)`, `g = (0, …, 0, 2n/3)`.
pub fn landau_counterexample(n: Dimension, k: u32) -> Result<FieldPair> {
    if k == 0 {
        return Err(Error::Domain("landau counterexample needs k >= 1".into()));
    }
    let nn = n.require_solver()?.get();
    let kf = k as f64;
    let mut comps: Vec<Polynomial> = (0..nn).map(|i| Polynomial::variable(nn, i)).collect();
    comps[0] = comps[0].scale(kf);
    comps[1] = comps[1].scale(1.0 / kf);
    comps[nn - 1] = comps[nn - 1].add(&Polynomial::norm_sq(nn).scale(1.0 / 3.0));
    let mut p = poly_pair(format!("landau:k={k}"), comps)?;
    let gs = 2.0 * nn as f64 / 3.0;
    p.g = p.g.with_sup_hint(gs).with_trace_sup_hint(gs);
    Ok(p)
}

/// Boundary data `ζ ↦ sign(ζ_n)` (`+1` on the upper hemisphere, `−1` on the
/// lower one, `0` on the equator).
pub fn hemisphere_data(n: Dimension) -> ScalarField {
    let nn = n.get();
    let mut axis = vec![0.0; nn];
    axis[nn - 1] = 1.0;
    let sign = |t: f64| if t > 0.0 { 1.0 } else if t < 0.0 { -1.0 } else { 0.0 };
    ScalarField::custom(nn, Arc::new(move |z: &[f64]| sign(z[nn - 1])))
        .with_sup_hint(1.0)
        .with_symmetry(AxialSymmetry {
            axis,
            breaks: vec![FRAC_PI_2],
        })
}

/// Random polynomial mapping `B^n → R^m`: every monomial of degree
/// `≤ degree` with a coefficient uniform in `[−1, 1]`.
pub fn random_polyharmonic(n: Dimension, m: usize, degree: usize, seed: u64) -> Result<FieldPair> {
    if degree > 4 {
        return Err(Error::Config(format!("random fields support degree <= 4, got {degree}")));
    }
    if m == 0 {
        return Err(Error::Config("need at least one component".into()));
    }
    let nn = n.get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = Polynomial::monomials_up_to(nn, degree);
    let comps = (0..m)
        .map(|_| {
            Polynomial::from_terms(
                nn,
                monos.iter().map(|e| (e.clone(), rng.random_range(-1.0..=1.0))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    poly_pair(format!("rand:deg={degree},seed={seed},m={m}"), comps)
}

fn harmonic_basis(n: usize, degree: usize) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::constant(n, 1.0)];
    if degree >= 1 {
        out.extend((0..n).map(|i| Polynomial::variable(n, i)));
    }
    for a in 0..n {
        for b in a + 1..n {
            // Real and imaginary parts of (x_a + i x_b)^k.
            let (xa, xb) = (Polynomial::variable(n, a), Polynomial::variable(n, b));
            let (mut re, mut im) = (xa.clone(), xb.clone());
            for k in 2..=degree {
                let nre = re.mul(&xa).sub(&im.mul(&xb));
                let nim = re.mul(&xb).add(&im.mul(&xa));
                re = nre;
                im = nim;
                out.push(re.clone());
                out.push(im.clone());
                if k < degree {
                    for c in (0..n).filter(|c| *c != a && *c != b) {
                        let xc = Polynomial::variable(n, c);
                        out.push(re.mul(&xc));
                        out.push(im.mul(&xc));
                    }
                }
            }
        }
    }
    out
}

/// Random harmonic polynomial mapping: a random combination (coefficients
/// in `[−1, 1]`) of harmonic basis polynomials of degree `≤ degree`.
pub fn random_harmonic(n: Dimension, m: usize, degree: usize, seed: u64) -> Result<FieldPair> {
    if degree > 4 {
        return Err(Error::Config(format!("random fields support degree <= 4, got {degree}")));
    }
    if m == 0 {
        return Err(Error::Config("need at least one component".into()));
    }
    let nn = n.get();
    let basis = harmonic_basis(nn, degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4841_524d);
    let comps = (0..m)
        .map(|_| {
            basis.iter().fold(Polynomial::zero(nn), |acc, b| {
                acc.add(&b.scale(rng.random_range(-1.0..=1.0)))
            })
        })
        .collect();
    let mut p = poly_pair(format!("harm:deg={degree},seed={seed},m={m}"), comps)?;
    p.g = VectorField::zero(nn, m);
    Ok(p)
}

/// The Möbius automorphism `φ_a` as a field; its Laplacian is evaluated by
/// fourth-order central differences.
pub fn mobius_field(a: &Point) -> Result<FieldPair> {
    let nn = a.dim();
    let r = a.norm();
    if r >= 1.0 {
        return Err(Error::OutsideBall { norm: r });
    }
    let av: Arc<Vec<f64>> = Arc::new(a.coords().to_vec());
    let comp = |i: usize| -> Arc<dyn Fn(&[f64]) -> f64 + Send + Sync> {
        let av = av.clone();
        Arc::new(move |y: &[f64]| {
            let mut out = vec![0.0; y.len()];
            mobius_into(&av, y, &mut out);
            out[i]
        })
    };
    let g = VectorField::new(
        (0..nn)
            .map(|i| {
                let c = comp(i);
                ScalarField::custom(nn, Arc::new(move |y: &[f64]| fd_laplacian(&*c, y)))
            })
            .collect(),
    )?;
    let f = VectorField::new(
        g.components()
            .iter()
            .enumerate()
            .map(|(i, gc)| {
                let l = gc.clone();
                ScalarField::custom(nn, comp(i)).with_laplacian(Arc::new(move |y: &[f64]| l.eval(y)))
            })
            .collect(),
    )?
    .with_sup_hint(1.0)
    .with_trace_sup_hint(1.0);
    let name = format!(
        "mobius:a={}",
        a.coords().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
    );
    Ok(FieldPair { name, f, g })
}

/// Fourth-order five-point Laplacian.
fn fd_laplacian(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> f64 {
    const H: f64 = 2e-3;
    let f0 = f(x);
    let mut y = x.to_vec();
    let mut acc = 0.0;
    for j in 0..x.len() {
        let mut s = -30.0 * f0;
        for (k, w) in [(-2.0, -1.0), (-1.0, 16.0), (1.0, 16.0), (2.0, -1.0)] {
            y[j] = x[j] + k * H;
            s += w * f(&y);
        }
        y[j] = x[j];
        acc += s / (12.0 * H * H);
    }
    acc
}

fn parse_kv(rest: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for part in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {part:?}")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn take<T: std::str::FromStr>(map: &mut BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match map.remove(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse {key}={v}"))),
    }
}

/// Builds a catalog pair from a selector such as `sharp:M=1`, `identity`,
/// `landau:k=5`, `rand:deg=3,seed=7[,m=2]`, `harm:deg=2,seed=1[,m=2]` or
/// `mobius:a=0.4` (the point `0.4 N`, `N` the last basis vector).
pub fn parse_selector(sel: &str, n: Dimension) -> Result<FieldPair> {
    let (kind, rest) = sel.split_once(':').unwrap_or((sel, ""));
    let mut kv = parse_kv(rest)?;
    let pair = match kind.trim() {
        "sharp" => sharp_example(n.require_solver()?, take(&mut kv, "M", 1.0)?)?,
        "identity" => identity_pair(n),
        "landau" => landau_counterexample(n, take(&mut kv, "k", 1u32)?)?,
        "rand" => {
            let deg = take(&mut kv, "deg", 2usize)?;
            let seed = take(&mut kv, "seed", 0u64)?;
            let m = take(&mut kv, "m", 2usize)?;
            random_polyharmonic(n, m, deg, seed)?
        }
        "harm" => {
            let deg = take(&mut kv, "deg", 2usize)?;
            let seed = take(&mut kv, "seed", 0u64)?;
            let m = take(&mut kv, "m", 2usize)?;
            random_harmonic(n, m, deg, seed)?
        }
        "mobius" => mobius_field(&Point::on_axis(n.get(), take(&mut kv, "a", 0.3)?))?,
        other => return Err(Error::Config(format!("unknown field selector {other:?}"))),
    };
    if let Some(k) = kv.keys().next() {
        return Err(Error::Config(format!("unknown parameter {k:?} in selector {sel:?}")));
    }
    Ok(pair)
}

/// The standard sweep catalog for dimension `n`: the sharp example, the
/// identity, a Landau map, then random polynomial and random harmonic pairs
/// of degrees 1–4 (seeded from `seed`) up to `count` entries.
pub fn catalog(n: Dimension, count: usize, seed: u64) -> Result<Vec<FieldPair>> {
    let n = n.require_solver()?;
    let mut out = vec![sharp_example(n, 1.0)?, identity_pair(n), landau_counterexample(n, 2)?];
    let mut i = 0u64;
    while out.len() < count {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
        let deg = 1 + (i as usize / 2) % 4;
        out.push(if i.is_multiple_of(2) {
            random_polyharmonic(n, 2, deg, s)?
        } else {
            random_harmonic(n, 2, deg.min(3), s)?
        });
        i += 1;
    }
    out.truncate(count);
    Ok(out)
}
