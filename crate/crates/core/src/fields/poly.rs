//! Sparse real polynomials in `n` variables.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// `Σ c_α x^α` with exponent vectors `α` of length `n`, stored in canonical
/// (sorted, merged, zero-free) form.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            *map.entry(e).or_insert(0.0) += c;
        }
        Ok(Polynomial {
            n,
            terms: map.into_iter().filter(|(_, c)| *c != 0.0).collect(),
        })
    }

    fn from_map(n: usize, map: BTreeMap<Vec<u32>, f64>) -> Self {
        Polynomial {
            n,
            terms: map.into_iter().filter(|(_, c)| *c != 0.0).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: vec![] }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::from_map(n, BTreeMap::from([(vec![0; n], c)]))
    }

    /// The coordinate function `x_i`.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::from_map(n, BTreeMap::from([(e, 1.0)]))
    }

    /// `|x|²`.
    pub fn norm_sq(n: usize) -> Self {
        let terms = (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (e, 1.0)
        });
        Self::from_map(n, terms.collect())
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `Σ|c_α|`, an upper bound for `|p|` on the closed unit ball.
    pub fn coef_abs_sum(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| if k == 0 { acc } else { acc * xi.powi(k as i32) })
            })
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_map(self.n, self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect())
    }

    pub fn add(&self, o: &Polynomial) -> Self {
        assert_eq!(self.n, o.n);
        let mut map: BTreeMap<Vec<u32>, f64> = self.terms.iter().cloned().collect();
        for (e, c) in &o.terms {
            *map.entry(e.clone()).or_insert(0.0) += c;
        }
        Self::from_map(self.n, map)
    }

    pub fn sub(&self, o: &Polynomial) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn mul(&self, o: &Polynomial) -> Self {
        assert_eq!(self.n, o.n);
        let mut map = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *map.entry(e).or_insert(0.0) += c1 * c2;
            }
        }
        Self::from_map(self.n, map)
    }

    /// `∂p/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let map = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut d = e.clone();
                d[i] -= 1;
                (d, c * e[i] as f64)
            })
            .fold(BTreeMap::new(), |mut m, (e, c)| {
                *m.entry(e).or_insert(0.0) += c;
                m
            });
        Self::from_map(self.n, map)
    }

    /// `Δp = Σ_i ∂²p/∂x_i²`, term by term.
    pub fn laplacian(&self) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            for i in 0..self.n {
                if e[i] >= 2 {
                    let mut d = e.clone();
                    d[i] -= 2;
                    *map.entry(d).or_insert(0.0) += c * (e[i] * (e[i] - 1)) as f64;
                }
            }
        }
        Self::from_map(self.n, map)
    }

    /// All exponent vectors of total degree `≤ d` in `n` variables, in
    /// graded lexicographic order.
    pub fn monomials_up_to(n: usize, d: usize) -> Vec<Vec<u32>> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for k in (0..=left).rev() {
                cur.push(k);
                rec(n, left - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for deg in 0..=d as u32 {
            rec(n, deg, &mut Vec::new(), &mut out);
        }
        out
    }
}
