//! Acceptance criteria for the library, one line per criterion. Runs without
//! the libtest harness so that the summary is always printed.
//!
//! The process exits nonzero when a criterion fails that is not listed in
//! [`KNOWN_FAILING`], or when any criterion fails and
//! `MOCKCHEB_ACCEPTANCE_STRICT` is set.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use mockcheb::baselines::{fh_fit, hermite_fit, rbf_fit, RbfKernel, RbfParams};
use mockcheb::bench::{log_spaced_n, n_sweep, p_sweep, test_function, Method, SweepConfig, SweepResult};
use mockcheb::grids::{extract_mock_subset, mock_degree, regression_degree, EquispacedGrid};
use mockcheb::metrics::ErrorGrid;
use mockcheb::polycore::BarycentricInterpolant;
use mockcheb::{fit, FitOptions};

use common::{chebyshev_t, equispaced, exact, newton_interpolate, RandomSmooth};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_factor(value: f64, golden: f64, factor: f64) -> bool {
    value <= golden * factor && value >= golden / factor
}

fn within_rel(value: f64, golden: f64, rel: f64) -> bool {
    (value - golden).abs() <= rel * golden.abs()
}

fn error_of(sweep: &SweepResult, method: Method, p: Option<usize>) -> f64 {
    sweep
        .rows
        .iter()
        .find(|r| r.method == method && r.p == p)
        .map(|r| r.uniform_error)
        .unwrap_or(f64::NAN)
}

fn sample(grid: &EquispacedGrid, f: impl Fn(f64) -> f64) -> Vec<f64> {
    grid.nodes().iter().map(|&t| f(t)).collect()
}

fn degree_rules() -> Outcome {
    let table = [
        (20, 9, None),
        (292, 37, Some(15)),
        (923, 67, Some(27)),
        (1000, 70, Some(28)),
        (3530, 131, Some(53)),
        (7843, 196, Some(80)),
    ];
    let mut bad = Vec::new();
    for (n, m, p) in table {
        let got_m = mock_degree(n).map_err(|e| e.to_string())?;
        let got_p = regression_degree(n).map_err(|e| e.to_string())?;
        if got_m != m || p.is_some_and(|p| p != got_p) {
            bad.push(format!("n={n}: m={got_m} p={got_p}"));
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "6 (n, m, p) rows exact".into()
        } else {
            bad.join("; ")
        },
    )
}

fn table_golden() -> Outcome {
    let config = SweepConfig::default();
    let run = |name: &str, ps: &[usize]| {
        let f = test_function(name).map_err(|e| e.to_string())?;
        p_sweep(&f, 1000, ps, &config).map_err(|e| e.to_string())
    };
    let f2 = run("f2", &[28])?;
    let f1 = run("f1", &[28])?;
    let f4 = run("f4", &[34])?;
    let values = [
        (
            "f2 p=28",
            error_of(&f2, Method::Cmcls, Some(28)),
            9.7493857e-9,
            within_factor as fn(f64, f64, f64) -> bool,
            5.0,
        ),
        (
            "f2 mock",
            error_of(&f2, Method::MockOnly, None),
            8.9863528e-7,
            within_factor,
            2.0,
        ),
        (
            "f1 p=28",
            error_of(&f1, Method::Cmcls, Some(28)),
            7.9726586e-2,
            within_rel,
            0.02,
        ),
        (
            "f1 mock",
            error_of(&f1, Method::MockOnly, None),
            8.7569583e-2,
            within_rel,
            0.02,
        ),
        (
            "f4 p=34",
            error_of(&f4, Method::Cmcls, Some(34)),
            4.6554802e-5,
            within_rel,
            0.10,
        ),
    ];
    let ok = values.iter().all(|(_, v, g, test, tol)| test(*v, *g, *tol));
    let detail = values
        .iter()
        .map(|(label, v, g, _, _)| format!("{label} {v:.7e} (reference {g:.7e})"))
        .collect::<Vec<_>>()
        .join(", ");
    check(ok, detail)
}

fn table_ordering() -> Outcome {
    let f = test_function("f2").map_err(|e| e.to_string())?;
    let ps: Vec<usize> = (1..=100).collect();
    let sweep = p_sweep(&f, 1000, &ps, &SweepConfig::default()).map_err(|e| e.to_string())?;
    let mock = error_of(&sweep, Method::MockOnly, None);
    let losers: Vec<usize> = sweep
        .rows_for(Method::Cmcls)
        .filter(|r| !(r.uniform_error < mock))
        .filter_map(|r| r.p)
        .collect();
    let worst = sweep
        .rows_for(Method::Cmcls)
        .map(|r| r.uniform_error)
        .fold(0.0, f64::max);
    check(
        losers.is_empty() && sweep.rows_for(Method::Cmcls).count() == 100,
        format!("mock {mock:.3e}, worst cmcls over p=1..100 {worst:.3e}, failing p: {losers:?}"),
    )
}

fn convergence_sweep() -> Outcome {
    let f = test_function("f2").map_err(|e| e.to_string())?;
    let ns = log_spaced_n(30, 3530, 40);
    let sweep =
        n_sweep(&f, &[Method::Cmcls, Method::MockOnly], &ns, &SweepConfig::default()).map_err(|e| e.to_string())?;
    let mut losers = Vec::new();
    let mut best = f64::INFINITY;
    for &n in &ns {
        let row = |m: Method| {
            sweep
                .rows
                .iter()
                .find(|r| r.n == n && r.method == m)
                .map(|r| r.uniform_error)
        };
        let (c, k) = (
            row(Method::Cmcls).unwrap_or(f64::NAN),
            row(Method::MockOnly).unwrap_or(f64::NAN),
        );
        best = best.min(c);
        if !(c <= k) {
            losers.push(n);
        }
    }
    check(
        losers.is_empty() && best <= 1e-12,
        format!(
            "{} values of n, best cmcls {best:.3e}, n where cmcls > mock: {losers:?}",
            ns.len()
        ),
    )
}

fn residual_norms(n: usize, f: impl Fn(f64) -> f64) -> Result<(f64, f64), String> {
    let grid = EquispacedGrid::new(n).map_err(|e| e.to_string())?;
    let samples = sample(&grid, &f);
    let a = fit(&samples, n, FitOptions::default()).map_err(|e| e.to_string())?;
    let norm = |g: &dyn Fn(f64) -> f64| {
        a.split()
            .residual()
            .iter()
            .map(|&i| samples[i] - g(grid.node(i)))
            .fold(0.0_f64, f64::hypot)
    };
    Ok((norm(&|t| a.evaluate(t)), norm(&|t| a.mock_interpolant().eval(t))))
}

fn two_norm_optimality() -> Outcome {
    let mut failures = Vec::new();
    let mut strict = 0;
    for seed in 0..50 {
        let g = RandomSmooth::new(seed);
        for n in [20, 50, 100, 200] {
            let (cm, mock) = residual_norms(n, |t| g.eval(t))?;
            let ok = if mock > 1e-12 {
                strict += 1;
                cm < mock
            } else {
                cm <= mock + 1e-13
            };
            if !ok {
                failures.push(format!("seed {seed} n {n}: {cm:e} vs {mock:e}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!("200 fits ({strict} strict comparisons), violations: {failures:?}"),
    )
}

fn full_degree_interpolation() -> Outcome {
    let mut worst = 0.0_f64;
    for n in [12, 16, 20] {
        let grid = EquispacedGrid::new(n).map_err(|e| e.to_string())?;
        let m = mock_degree(n).map_err(|e| e.to_string())?;
        for seed in 0..10 {
            let g = RandomSmooth::new(100 + seed);
            let y = sample(&grid, |t| g.eval(t));
            let a = fit(&y, n, FitOptions::with_p(n - m - 1)).map_err(|e| e.to_string())?;
            let scale = y.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
            for (i, &x) in grid.nodes().iter().enumerate() {
                // the full interpolant reproduces the data at every node
                worst = worst.max((a.evaluate(x) - y[i]).abs() / scale);
            }
            for k in 0..=100 {
                let t = -1.0 + 0.02 * k as f64 + 0.001;
                let full = newton_interpolate(grid.nodes(), &y, t);
                worst = worst.max((a.evaluate(t) - full).abs() / scale.max(full.abs()));
            }
        }
    }
    check(
        worst <= 1e-9,
        format!("n in {{12,16,20}}, p = n-m-1: worst relative gap {worst:.3e}"),
    )
}

fn polynomial_reproduction() -> Outcome {
    use rand::{Rng, SeedableRng};
    let n = 100;
    let grid = EquispacedGrid::new(n).map_err(|e| e.to_string())?;
    let (m, p) = (mock_degree(n).unwrap(), regression_degree(n).unwrap());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let eval_grid: Vec<f64> = ErrorGrid::equispaced(10_001, |_| 0.0).points().to_vec();
    let mut worst = (0.0_f64, 0);
    for degree in [0, 1, m, m + 1, m + p] {
        for _ in 0..5 {
            let c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = |t: f64| c.iter().enumerate().map(|(k, a)| a * chebyshev_t(k, t)).sum::<f64>();
            let a = fit(&sample(&grid, poly), n, FitOptions::default()).map_err(|e| e.to_string())?;
            let scale = eval_grid.iter().fold(0.0_f64, |s, &t| s.max(poly(t).abs()));
            let err = eval_grid
                .iter()
                .fold(0.0_f64, |s, &t| s.max((a.evaluate(t) - poly(t)).abs()));
            if err / scale > worst.0 {
                worst = (err / scale, degree);
            }
        }
    }
    check(
        worst.0 <= 1e-8,
        format!(
            "degrees 0,1,{m},{},{} at n=100: worst relative error {:.3e} (degree {})",
            m + 1,
            m + p,
            worst.0,
            worst.1
        ),
    )
}

fn structural_nodes() -> Outcome {
    let mut bad = Vec::new();
    for n in 10..=2000 {
        let grid = EquispacedGrid::new(n).map_err(|e| e.to_string())?;
        let split = extract_mock_subset(&grid).map_err(|e| e.to_string())?;
        let first_three_mock = split.is_mock(0) && split.is_mock(1) && split.is_mock(2);
        let fourth_residual = !split.is_mock(3);
        let res = split.residual_nodes(&grid);
        let gap = res.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let prop = gap <= 4.0 / n as f64 * (1.0 + 1e-12);
        if !(first_three_mock && fourth_residual && prop) {
            bad.push(n);
        }
    }
    check(bad.is_empty(), format!("n = 10..=2000, violations: {bad:?}"))
}

fn oracle_equivalence() -> Outcome {
    let (n, p) = (30, 2);
    let grid = EquispacedGrid::new(n).map_err(|e| e.to_string())?;
    let f = test_function("f2").map_err(|e| e.to_string())?;
    let y = f.sample(&grid);
    let a = fit(&y, n, FitOptions::with_p(p)).map_err(|e| e.to_string())?;
    let oracle = exact::fit(grid.nodes(), &y, a.split().mock(), a.split().residual(), p);

    let scale = (-a.omega().log_scale()).exp();
    let ours: Vec<f64> = a.regression().coefficients().iter().map(|c| c * scale).collect();
    let theirs: Vec<f64> = oracle.coefficients.iter().map(exact::to_f64).collect();
    let cmax = theirs.iter().fold(0.0_f64, |s, c| s.max(c.abs()));
    let coef_gap = ours.iter().zip(&theirs).fold(0.0_f64, |s, (x, y)| s.max((x - y).abs())) / cmax;

    let mut value_gap = 0.0_f64;
    for k in 0..=100 {
        let t = -1.0 + 0.02 * k as f64 + 0.0037;
        let e = oracle.eval(t.min(1.0));
        value_gap = value_gap.max((a.evaluate(t.min(1.0)) - e).abs() / e.abs().max(1e-300));
    }
    check(
        coef_gap <= 1e-9 && value_gap <= 1e-9,
        format!("n=30 p=2: coefficient gap {coef_gap:.3e}, pointwise gap {value_gap:.3e}"),
    )
}

fn baseline_sanity() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    // Hermite functions with no damping are the polynomial interpolant.
    let mut herm_gap = 0.0_f64;
    for count in 2..=30 {
        let x = equispaced(count - 1);
        for g in [
            RandomSmooth::new(500 + count as u64),
            RandomSmooth::new(900 + count as u64),
        ] {
            let y: Vec<f64> = x.iter().map(|&t| g.eval(t)).collect();
            let h = hermite_fit(&x, &y, 0.0).map_err(|e| e.to_string())?;
            let b = BarycentricInterpolant::fit(&x, &y).map_err(|e| e.to_string())?;
            let ts: Vec<f64> = (0..=100).map(|k| -1.0 + 0.02 * k as f64).collect();
            let scale = ts.iter().fold(0.0_f64, |s, &t| s.max(b.eval(t).abs()));
            for &t in &ts {
                herm_gap = herm_gap.max((h.eval(t) - b.eval(t)).abs() / scale);
            }
        }
    }
    ok &= herm_gap <= 1e-10;
    notes.push(format!("hermite(gamma=0) vs lagrange {herm_gap:.1e}"));

    // Floater-Hormann with d = n is the polynomial interpolant.
    let x = equispaced(10);
    let y: Vec<f64> = x.iter().map(|&t| (1.0 + t).ln_1p() + (2.0 * t).sin()).collect();
    let r = fh_fit(&x, &y, 10).map_err(|e| e.to_string())?;
    let fh_gap = (0..=100)
        .map(|k| -1.0 + 0.02 * k as f64)
        .map(|t| (r.eval(t) - newton_interpolate(&x, &y, t)).abs())
        .fold(0.0, f64::max);
    ok &= fh_gap <= 1e-10;
    notes.push(format!("fh(d=n) vs newton {fh_gap:.1e}"));

    // Every baseline reproduces its data.
    let f = test_function("f2").map_err(|e| e.to_string())?;
    let x = equispaced(60);
    let y: Vec<f64> = x.iter().map(|&t| f.eval(t)).collect();
    let scale = y.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    let mut node_gap = 0.0_f64;
    let mut track = |approx: &dyn Fn(f64) -> f64| {
        for (t, v) in x.iter().zip(&y) {
            node_gap = node_gap.max((approx(*t) - v).abs() / scale);
        }
    };
    let h = hermite_fit(&x, &y, 1.0).map_err(|e| e.to_string())?;
    track(&|t| h.eval(t));
    for d in [0, 3, 8] {
        let r = fh_fit(&x, &y, d).map_err(|e| e.to_string())?;
        track(&|t| r.eval(t));
    }
    for params in [
        RbfParams::new(RbfKernel::Monomial, None),
        RbfParams::new(RbfKernel::Wendland2, None),
        RbfParams::new(RbfKernel::InverseMultiquadric, Some(10.0)),
        RbfParams::new(RbfKernel::Gaussian, Some(20.0)),
    ] {
        let s = rbf_fit(params, &x, &y).map_err(|e| e.to_string())?;
        track(&|t| s.eval(t));
    }
    ok &= node_gap <= 1e-9;
    notes.push(format!("node residual {node_gap:.1e}"));

    // For n >= 1000 the constrained fit beats every RBF's best trial.
    let methods = [
        Method::Cmcls,
        Method::RbfMn,
        Method::RbfW2,
        Method::RbfImq,
        Method::RbfG,
    ];
    for n in [1000, 2000] {
        let sweep = n_sweep(&f, &methods, &[n], &SweepConfig::default()).map_err(|e| e.to_string())?;
        let cm = sweep
            .rows_for(Method::Cmcls)
            .next()
            .map_or(f64::NAN, |r| r.uniform_error);
        let rbf: Vec<String> = methods[1..]
            .iter()
            .map(|&m| {
                let e = error_of(&sweep, m, None);
                ok &= cm < e;
                format!("{m} {e:.2e}")
            })
            .collect();
        notes.push(format!("n={n} cmcls {cm:.2e} vs {}", rbf.join(" ")));
    }
    check(ok, notes.join("; "))
}

/// Criteria that fail on the measured numbers and are kept failing rather
/// than tuned: at n = 1000 the tuned IMQ and Gaussian RBFs beat the
/// constrained fit on f2.
const KNOWN_FAILING: &[usize] = &[10];

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("degree rules", degree_rules),
        ("reference errors at n = 1000", table_golden),
        ("cmcls beats mock for p = 1..100", table_ordering),
        ("f2 convergence sweep", convergence_sweep),
        ("2-norm optimality on residual nodes", two_norm_optimality),
        ("full interpolation when p = n - m - 1", full_degree_interpolation),
        ("polynomial reproduction", polynomial_reproduction),
        ("structural node properties", structural_nodes),
        ("exact rational oracle", oracle_equivalence),
        ("baseline sanity and rbf ordering", baseline_sanity),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {tag} [{secs:6.1}s] {name}: {detail}", k + 1);
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    let unexpected: Vec<usize> = failed.iter().copied().filter(|k| !KNOWN_FAILING.contains(k)).collect();
    println!(
        "acceptance: {} of {} criteria passed; failed {failed:?}, of which unexpected {unexpected:?}",
        criteria.len() - failed.len(),
        criteria.len()
    );
    let strict = std::env::var_os("MOCKCHEB_ACCEPTANCE_STRICT").is_some();
    if unexpected.is_empty() && !(strict && !failed.is_empty()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
