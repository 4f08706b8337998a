//! Fixed rules: Gauss–Kronrod 7/15, symmetric Gauss–Jacobi, sub-sphere rules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

/// Kronrod abscissae on `[0, 1]`; odd indices are the 7-point Gauss nodes.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Nodes and weights of the `m`-point Gauss rule for `(1−u²)^α` on `[−1,1]`,
/// weights normalised to sum to one (Golub–Welsch).
pub fn gauss_jacobi_symmetric(m: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1 && alpha > -1.0);
    let mut t = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let s = 2.0 * kf + 2.0 * alpha;
        let b2 = if k == 1 {
            1.0 / (2.0 * alpha + 3.0)
        } else {
            4.0 * kf * (kf + alpha).powi(2) * (kf + 2.0 * alpha) / (s * s * (s + 1.0) * (s - 1.0))
        };
        let b = b2.sqrt();
        t[(k, k - 1)] = b;
        t[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(x, w)| (x, w / total)).unzip()
}

/// A rule on `S^{k−1} ⊂ R^k` of order `m` (exact for polynomials of degree
/// `≤ 2m − 1`), as `(nodes, weights)` with weights summing to one.
pub fn sub_sphere_rule(k: usize, m: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    assert!(k >= 1 && m >= 1);
    match k {
        1 => (vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5]),
        2 => {
            let count = 2 * m;
            let nodes = (0..count)
                .map(|j| {
                    let a = 2.0 * PI * (j as f64 + 0.5) / count as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect();
            (nodes, vec![1.0 / count as f64; count])
        }
        _ => {
            let (us, ws) = gauss_jacobi_symmetric(m, (k as f64 - 3.0) / 2.0);
            let (sub, sw) = sub_sphere_rule(k - 1, m);
            let mut nodes = Vec::with_capacity(us.len() * sub.len());
            let mut weights = Vec::with_capacity(nodes.capacity());
            for (u, w) in us.iter().zip(&ws) {
                let s = (1.0 - u * u).max(0.0).sqrt();
                for (eta, v) in sub.iter().zip(&sw) {
                    let mut p: Vec<f64> = eta.iter().map(|e| s * e).collect();
                    p.push(*u);
                    nodes.push(p);
                    weights.push(w * v);
                }
            }
            (nodes, weights)
        }
    }
}
