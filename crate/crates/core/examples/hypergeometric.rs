//! Gauss hypergeometric function: the summation formula at x = 1, the
//! sine-power integral identity and the boundary constants A_n.
//!
//! ```text
//! cargo run --release --example hypergeometric
//! ```

use ballschwarz::bounds::a_constant;
use ballschwarz::specfun::{gauss_sum, hyp2f1, prop21_lhs, prop21_rhs, HypergeometricParams};
use ballschwarz::{Dimension, QuadratureSpec};

fn main() -> ballschwarz::Result<()> {
    println!("F(a,b;c;1) against Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b))");
    for (a, b, c) in [(0.5, 0.5, 2.0), (1.0, 1.5, 4.5), (1.5, 1.5, 3.5)] {
        let s = hyp2f1(HypergeometricParams::new(a, b, c, 1.0)?)?;
        let g = gauss_sum(a, b, c)?;
        println!("  a={a} b={b} c={c}: {s:.15} {g:.15} rel {:.1e}", (s - g).abs() / g);
    }

    println!("\nsine-power integral: quadrature vs Beta x 2F1");
    let q = QuadratureSpec::default();
    for (l1, l2, r) in [(2.0, 1.0, 0.3), (4.5, 0.5, 0.8), (1.5, 3.0, 0.95)] {
        let lhs = prop21_lhs(l1, l2, r, &q)?;
        let rhs = prop21_rhs(l1, l2, r)?;
        println!("  l1={l1} l2={l2} r={r}: {:.12} {rhs:.12} (quad err {:.1e})", lhs.value, lhs.error);
    }

    println!("\nboundary constants");
    for n in 3..=8 {
        println!("  A_{n} = {:.12}", a_constant(Dimension::new(n)?)?);
    }
    Ok(())
}
