//! Maps with unit Jacobian at the origin whose images are arbitrarily thin:
//! no Landau-type radius exists for this class without a source bound.
//!
//! ```text
//! cargo run --release --example landau -- [n]
//! ```

use ballschwarz::fields::{landau_counterexample, sampled_sup, Domain};
use ballschwarz::potential::SolutionHandle;
use ballschwarz::{Dimension, Point, QuadratureSpec};

fn main() -> ballschwarz::Result<()> {
    let n = Dimension::solver(std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3))?;
    let q = QuadratureSpec::default();
    println!("{:>5} {:>16} {:>12} {:>12}", "k", "J(0)", "sup |f_2|", "sup |g|");
    for k in [1u32, 2, 5, 10, 100] {
        let pair = landau_counterexample(n, k)?;
        let h = SolutionHandle::from_pair(&pair, q.clone())?;
        let j = h.jacobian_det(&Point::origin(n.get()))?;
        let thin = sampled_sup(|x, o| o[0] = pair.f.components()[1].eval(x), n.get(), 1, 4000, Domain::ClosedBall);
        let g = sampled_sup(|x, o| pair.g.eval_into(x, o), n.get(), pair.g.ncomponents(), 4000, Domain::ClosedBall);
        println!("{k:>5} {:>16.12} {thin:>12.6} {g:>12.3}", j.value);
    }
    Ok(())
}
