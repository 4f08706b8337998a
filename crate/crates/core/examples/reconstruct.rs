//! Rebuilds catalog mappings from their boundary trace and Laplacian and
//! reports the worst pointwise deviation `|P_f − G_g − f|`.
//!
//! ```text
//! cargo run --release --example reconstruct -- [n] [fields] [points]
//! ```

use std::time::Instant;

use ballschwarz::fields::catalog;
use ballschwarz::potential::SolutionHandle;
use ballschwarz::{Dimension, Point, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ballschwarz::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = Dimension::solver(*args.first().unwrap_or(&3))?;
    let fields = *args.get(1).unwrap_or(&8);
    let points = *args.get(2).unwrap_or(&10);
    let q = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("{:<28} {:>12} {:>12} {:>10}", "field", "max dev", "max err", "ms/solve");
    for pair in catalog(n, fields, 7)? {
        let h = SolutionHandle::from_pair(&pair, q.clone())?;
        let (mut dev, mut err): (f64, f64) = (0.0, 0.0);
        let t = Instant::now();
        for _ in 0..points {
            let x = loop {
                let p: Vec<f64> = (0..n.get()).map(|_| rng.random_range(-0.9..0.9)).collect();
                if p.iter().map(|v| v * v).sum::<f64>() <= 0.81 {
                    break Point::new(p)?;
                }
            };
            let s = h.solve(&x)?;
            let f = pair.f.eval(&x);
            let d = s.values.iter().zip(&f).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            dev = dev.max(d);
            err = err.max(s.error);
        }
        let ms = t.elapsed().as_secs_f64() * 1e3 / points as f64;
        println!("{:<28} {:>12.3e} {:>12.3e} {:>10.2}", pair.name, dev, err, ms);
    }
    Ok(())
}
