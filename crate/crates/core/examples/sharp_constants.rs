//! The gradient constant C(γ, r), its supremum over γ and the n = 4 closed form.
//!
//! ```text
//! cargo run --release --example sharp_constants -- [n]
//! ```

use ballschwarz::bounds::{c_bound, c_zero_limit, closed_form_n4, sup_c, u_derivative, ThetaParams};
use ballschwarz::{Dimension, QuadratureSpec};

fn main() -> ballschwarz::Result<()> {
    let n = Dimension::new(std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4))?;
    let q = QuadratureSpec::default();

    println!("C(gamma, 0.5), n = {}", n.get());
    println!("  gamma -> 0:    {:.10}", c_zero_limit(n, 0.5, &q)?.value);
    for g in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let c = c_bound(&ThetaParams::new(n, 0.5, g)?, &q)?;
        println!("  gamma = {g:>6}: {:.10}", c.value);
    }

    println!("\n   r      sup_C      gamma*   phi(r){}", if n.get() == 4 { "    closed form" } else { "" });
    for i in 1..=9 {
        let r = i as f64 / 10.0;
        let s = sup_c(r, n, &q)?;
        let phi = u_derivative(n, r, &q)?.value;
        let closed = if n.get() == 4 { format!("  {:.10}", closed_form_n4(r)?) } else { String::new() };
        println!("  {r:.1}  {:.10}  {:>6.3}  {phi:.6}{closed}", s.value, s.gamma_star);
    }
    Ok(())
}
