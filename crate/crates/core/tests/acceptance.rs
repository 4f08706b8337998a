//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL ...` line. Criteria run one at a time so the
//! runtime limits are measured without contention.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use ballschwarz::ballgeom::{bracket, mobius, mobius_jacobian_abs, Dimension, Point};
use ballschwarz::bounds::{a_constant, closed_form_n4, rhs_thm2, sup_c, thm2_quotient, thm2_threshold, u_derivative, Verdict};
use ballschwarz::fields::{identity_map, landau_counterexample, sampled_sup, Domain};
use ballschwarz::harness::{run_suite, FieldSelection, Row, RunConfig, Suite};
use ballschwarz::potential::SolutionHandle;
use ballschwarz::specfun::{gauss_sum, hyp2f1, prop21_lhs, prop21_rhs, HypergeometricParams};
use ballschwarz::QuadratureSpec;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

/// Print the criterion line and fail the test if any check failed.
fn verdict(k: u32, title: &str, checks: &[(String, bool)], elapsed: Duration, limit: Duration) {
    let timely = elapsed < limit;
    let ok = timely && checks.iter().all(|c| c.1);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
    println!(
        "criterion {k}: {} {title} ({:.2} s, limit {} s){}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" failed: {}", failed.join("; "))
        }
    );
    assert!(timely, "criterion {k} exceeded its runtime limit");
    assert!(failed.is_empty(), "criterion {k} failed: {}", failed.join("; "));
}

fn random_in_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Point {
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = z.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
    let rho = radius * rng.random::<f64>().powf(1.0 / n as f64);
    Point::new(z.iter().map(|v| v * rho / norm).collect()).unwrap()
}

fn rows_of(cfg: &RunConfig) -> Vec<Row> {
    run_suite(cfg).expect("suite runs")
}

#[test]
fn criterion_01_mobius_identities() {
    let _g = serial();
    let t = Instant::now();
    let mut checks = Vec::new();
    let h = 1e-6;
    for n in 3..=5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        let (mut e_norm, mut e_defect, mut e_inv, mut e_jac): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..1000 {
            let x = random_in_ball(&mut rng, n, 0.95);
            let y = random_in_ball(&mut rng, n, 0.95);
            let p = mobius(&x, &y).unwrap();
            let b = bracket(&x, &y).unwrap();
            e_norm = e_norm.max((p.norm() - x.sub(&y).unwrap().norm() / b).abs());
            let rhs = (1.0 - x.norm_sq()) * (1.0 - y.norm_sq()) / (b * b);
            e_defect = e_defect.max((1.0 - p.norm_sq() - rhs).abs());
            e_inv = e_inv.max(mobius(&x, &p).unwrap().sub(&y).unwrap().norm());
            let mut jac = DMatrix::zeros(n, n);
            for j in 0..n {
                let (mut yp, mut ym) = (y.coords().to_vec(), y.coords().to_vec());
                yp[j] += h;
                ym[j] -= h;
                let fp = mobius(&x, &Point::new(yp).unwrap()).unwrap();
                let fm = mobius(&x, &Point::new(ym).unwrap()).unwrap();
                for i in 0..n {
                    jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
                }
            }
            let exact = mobius_jacobian_abs(&x, &y).unwrap();
            e_jac = e_jac.max((jac.determinant().abs() - exact).abs() / exact);
        }
        checks.push((format!("n={n} norm identity {e_norm:.2e}"), e_norm <= 1e-10));
        checks.push((format!("n={n} defect identity {e_defect:.2e}"), e_defect <= 1e-10));
        checks.push((format!("n={n} involution {e_inv:.2e}"), e_inv <= 1e-10));
        checks.push((format!("n={n} jacobian vs finite differences {e_jac:.2e}"), e_jac <= 1e-5));
    }
    verdict(1, "Mobius identities, 1000 pairs per n", &checks, t.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_02_sine_power_identity() {
    let _g = serial();
    let t = Instant::now();
    let q = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let l1 = rng.random_range(1.0..6.0);
        let l2 = rng.random_range(0.0..4.0);
        let r = rng.random_range(0.0..=0.95);
        let lhs = prop21_lhs(l1, l2, r, &q).unwrap().value;
        let rhs = prop21_rhs(l1, l2, r).unwrap();
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    let checks = vec![(format!("max rel err {worst:.2e}"), worst <= 1e-8)];
    verdict(2, "quadrature vs Beta x 2F1, 200 triples", &checks, t.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_03_gauss_summation() {
    let _g = serial();
    let t = Instant::now();
    let mut checks = Vec::new();
    for a in [0.5, 1.0, 1.5] {
        for b in [0.5, 1.0, 1.5] {
            for d in [0.5, 1.0, 2.0] {
                let c = a + b + d;
                let s = hyp2f1(HypergeometricParams::new(a, b, c, 1.0).unwrap()).unwrap();
                let g = gauss_sum(a, b, c).unwrap();
                let rel = (s - g).abs() / g;
                checks.push((format!("a={a} b={b} c={c} rel {rel:.2e}"), rel <= 1e-9));
            }
        }
    }
    verdict(3, "2F1 at x = 1 vs Gamma form", &checks, t.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_04_solver_reconstruction() {
    let _g = serial();
    let t = Instant::now();
    let cfg = RunConfig {
        suite: Suite::Reconstruct,
        dims: vec![3, 4, 5],
        fields: FieldSelection::Catalog(50),
        points: Some(50),
        ..RunConfig::default()
    };
    let rows = rows_of(&cfg);
    let mut checks = Vec::new();
    for n in 3..=5 {
        let k = rows.iter().filter(|r| r.n == n).count();
        checks.push((format!("n={n} has {k} pairs"), k >= 50));
    }
    for r in &rows {
        // rhs = 1e-4 + quadrature error of the worst point
        checks.push((
            format!("n={} {} deviation {:.2e} > {:.2e}", r.n, r.location, r.lhs, r.rhs),
            r.lhs <= r.rhs,
        ));
    }
    let worst = rows.iter().map(|r| r.lhs).fold(0.0, f64::max);
    println!("  worst deviation over {} pairs: {worst:.3e}", rows.len());
    verdict(4, "P_f - G_g reproduces f, 50 pairs x 50 points x n=3,4,5", &checks, t.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_05_sharpness_equalities() {
    let _g = serial();
    let t = Instant::now();
    let cfg = RunConfig {
        suite: Suite::Sharp,
        dims: vec![3, 4, 5],
        ..RunConfig::default()
    };
    let rows = rows_of(&cfg);
    let mut checks = Vec::new();
    for n in 3..=5 {
        let at = |id: &str, loc: &str| {
            rows.iter()
                .filter(|r| r.n == n && r.id == id && r.location.starts_with(loc))
                .collect::<Vec<_>>()
        };
        for r in at("thm1", "x=0").into_iter().chain(at("thm1", "zeta=")).chain(at("cor1", "x=0")) {
            checks.push((
                format!("n={n} {} {} |lhs-rhs| {:.2e} > budget {:.2e}", r.id, r.location, (r.lhs - r.rhs).abs(), r.budget),
                (r.lhs - r.rhs).abs() <= r.budget,
            ));
        }
        let green = at("green-bound", "x=");
        checks.push((format!("n={n} {} green rows", green.len()), green.len() == 20));
        for r in green {
            let rel = (r.lhs - r.rhs).abs() / r.rhs;
            checks.push((format!("n={n} constant-g potential {} rel {rel:.2e}", r.location), rel <= 1e-4));
        }
    }
    verdict(5, "sharp example equalities and constant-source potential", &checks, t.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_06_derivative_at_zero() {
    let _g = serial();
    let t = Instant::now();
    let q = QuadratureSpec::default();
    let mut checks = Vec::new();
    for n in 3..=6 {
        let d = dim(n);
        let phi0 = u_derivative(d, 0.0, &q).unwrap().value;
        let target = 2.0 * n as f64;
        let rel = (phi0 - target).abs() / target;
        checks.push((format!("n={n} phi(0) = {phi0:.6} vs 2n = {target} (rel {rel:.2e})"), rel <= 1e-6));
        let grid: Vec<f64> = (0..50)
            .map(|i| u_derivative(d, i as f64 / 49.0 * 0.999, &q).unwrap().value)
            .collect();
        checks.push((format!("n={n} phi strictly decreasing"), grid.windows(2).all(|w| w[1] < w[0])));
        let near = u_derivative(d, 1.0 - 1e-4, &q).unwrap().value;
        let a = a_constant(d).unwrap();
        let rel = (near - a).abs() / a;
        checks.push((format!("n={n} phi(1-1e-4) vs A_n rel {rel:.2e}"), rel <= 1e-3));
    }
    verdict(6, "phi(0) = 2n, phi decreasing, phi(1-) = A_n", &checks, t.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_07_n4_closed_form() {
    let _g = serial();
    let t = Instant::now();
    let q = QuadratureSpec::default();
    let mut checks = Vec::new();
    for i in 1..=9 {
        let r = i as f64 / 10.0;
        let s = sup_c(r, dim(4), &q).unwrap();
        let c = closed_form_n4(r).unwrap();
        let rel = (s.value - c).abs() / c;
        checks.push((format!("r={r} sup_C {:.8} closed {c:.8} rel {rel:.2e}", s.value), rel <= 1e-3));
    }
    // The same comparison is emitted as report rows.
    let cfg = RunConfig {
        suite: Suite::Thm3,
        dims: vec![4],
        fields: FieldSelection::Selectors(vec!["identity".into()]),
        points: Some(1),
        ..RunConfig::default()
    };
    let rows: Vec<Row> = rows_of(&cfg).into_iter().filter(|r| r.id == "n4-closed-form").collect();
    checks.push((format!("{} report rows", rows.len()), rows.len() == 9));
    for r in &rows {
        checks.push((format!("row {} {}", r.location, r.verdict), r.verdict == Verdict::Pass));
    }
    verdict(7, "n = 4 closed form vs sup over gamma", &checks, t.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_08_inequality_sweeps() {
    let _g = serial();
    let t = Instant::now();
    let mut rows = Vec::new();
    for suite in [Suite::Thm1, Suite::Cor1, Suite::Thm3] {
        let cfg = RunConfig {
            suite,
            dims: vec![3, 4, 5],
            fields: FieldSelection::Catalog(50),
            points: Some(20),
            ..RunConfig::default()
        };
        rows.extend(rows_of(&cfg));
    }
    let mut checks = Vec::new();
    for id in ["thm1", "cor1", "thm3", "thm3-simple", "green-gradient", "kalaj", "green-bound"] {
        for n in 3..=5 {
            let sel: Vec<&Row> = rows.iter().filter(|r| r.id == id && r.n == n).collect();
            let fails = sel.iter().filter(|r| r.verdict == Verdict::Fail).count();
            checks.push((format!("{id} n={n}: {} rows", sel.len()), sel.len() >= 50 * 20));
            checks.push((format!("{id} n={n}: {fails} FAIL"), fails == 0));
        }
    }
    let fails = rows.iter().filter(|r| r.verdict == Verdict::Fail).count();
    println!("  {} sweep rows, {fails} FAIL", rows.len());
    verdict(8, "inequality sweeps, 50 fields x 20 points x n=3,4,5", &checks, t.elapsed(), Duration::from_secs(600));
}

#[test]
fn criterion_09_boundary_witness() {
    let _g = serial();
    let t = Instant::now();
    let mut checks = Vec::new();
    for n in 3..=8 {
        let d = dim(n);
        let a = a_constant(d).unwrap();
        checks.push((format!("n={n} A_n = {a:.6} <= 1"), a <= 1.0));
        let f = identity_map(d);
        let mut rng = ChaCha8Rng::seed_from_u64(9 + n as u64);
        for _ in 0..5 {
            let z = random_in_ball(&mut rng, n, 1.0);
            let zeta: Vec<f64> = z.coords().iter().map(|v| v / z.norm()).collect();
            for k in 1..=4 {
                let qv = thm2_quotient(&f, &zeta, 1.0 - 10f64.powi(-k)).unwrap();
                checks.push((format!("n={n} identity quotient {qv}"), (qv - 1.0).abs() <= 1e-9));
            }
        }
        let gate = thm2_threshold(d).unwrap();
        checks.push((format!("n={n} gate at threshold"), rhs_thm2(d, gate).unwrap().is_none()));
        checks.push((format!("n={n} admissible below threshold"), rhs_thm2(d, 0.999 * gate).unwrap().is_some()));
    }
    let cfg = RunConfig {
        suite: Suite::Thm2,
        dims: vec![3, 4, 5],
        ..RunConfig::default()
    };
    let rows = rows_of(&cfg);
    let gates: Vec<&Row> = rows.iter().filter(|r| r.id == "thm2-gate" && r.location.starts_with("sup_g=")).collect();
    checks.push((format!("{} gate rows", gates.len()), gates.len() == 3));
    checks.push((
        "gate rows NOT-APPLICABLE".into(),
        gates.iter().all(|r| r.verdict == Verdict::NotApplicable),
    ));
    checks.push((
        "no FAIL rows".into(),
        rows.iter().all(|r| r.verdict != Verdict::Fail),
    ));
    verdict(9, "identity witness, A_n <= 1, hypothesis gate", &checks, t.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_10_landau_demo() {
    let _g = serial();
    let t = Instant::now();
    let q = QuadratureSpec::default();
    let mut checks = Vec::new();
    for n in 3..=5 {
        for k in [1u32, 2, 10] {
            let pair = landau_counterexample(dim(n), k).unwrap();
            let h = SolutionHandle::from_pair(&pair, q.clone()).unwrap();
            let j = h.jacobian_det(&Point::origin(n)).unwrap();
            checks.push((
                format!("n={n} k={k} J(0) = {} (err {:.1e})", j.value, j.error),
                (j.value - 1.0).abs() + j.error <= 1e-8,
            ));
            let thin = sampled_sup(|x, o| o[0] = pair.f.components()[1].eval(x), n, 1, 4000, Domain::ClosedBall);
            checks.push((format!("n={n} k={k} thinness {thin:.6}"), thin <= 1.0 / k as f64));
        }
    }
    verdict(10, "Landau maps: J(0) = 1 and thin images", &checks, t.elapsed(), Duration::from_secs(10));
}
