//! Möbius transformations of the unit ball: identities checked on random pairs.
//!
//! ```text
//! cargo run --release --example mobius -- [n] [pairs]
//! ```

use ballschwarz::ballgeom::{bracket, mobius, mobius_jacobian_abs, Dimension};
use ballschwarz::harness::interior_points;

fn main() -> ballschwarz::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = Dimension::new(*args.first().unwrap_or(&3))?;
    let pairs = *args.get(1).unwrap_or(&1000);
    let xs = interior_points(n, pairs, 11);
    let ys = interior_points(n, pairs, 12);
    let (mut norm, mut inv, mut jac): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let p = mobius(x, y)?;
        norm = norm.max((p.norm() - x.sub(y)?.norm() / bracket(x, y)?).abs());
        inv = inv.max(mobius(x, &p)?.sub(y)?.norm());
        // T_x is an involution, so the Jacobians at y and T_x y are reciprocal.
        jac = jac.max((mobius_jacobian_abs(x, y)? * mobius_jacobian_abs(x, &p)? - 1.0).abs());
    }
    println!("n = {}, {pairs} pairs", n.get());
    println!("  | |T_x y| - |x-y|/[x,y] |  max {norm:.3e}");
    println!("  | T_x T_x y - y |          max {inv:.3e}");
    println!("  | J(y) J(T_x y) - 1 |      max {jac:.3e}");
    Ok(())
}
