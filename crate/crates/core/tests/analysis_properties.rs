mod common;

use fide_core::analysis::{convergence_sweep, fitted_decay_rate, l2_error, SweepOptions};
use fide_core::expr::parse;
use fide_core::galerkin::{solve, SpectralSolution};

use common::example1;

#[test]
fn error_norm_is_stable_under_refinement() {
    let p = example1();
    let exact = p.exact().unwrap();
    for n in (2..=16).step_by(2) {
        let sol = solve(&p, n).unwrap();
        let e200 = l2_error(&sol, exact, 200).unwrap();
        let e400 = l2_error(&sol, exact, 400).unwrap();
        // below ~1e-11 the two rules differ by ~1e-17 absolute, which is
        // no longer small relative to the error itself
        if e400 > 1e-11 {
            assert!(((e200 - e400) / e400).abs() <= 1e-6, "N={n}: {e200:e} vs {e400:e}");
        } else {
            assert!((e200 - e400).abs() <= 1e-16, "N={n}: {e200:e} vs {e400:e}");
        }
    }
}

#[test]
fn errors_decay_monotonically_to_the_floor() {
    let orders: Vec<usize> = (2..=16).step_by(2).collect();
    let report = convergence_sweep(&example1(), &orders, SweepOptions::default()).unwrap();
    for w in report.rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(
            b.l2_error <= a.l2_error || (a.l2_error <= 1e-12 && b.l2_error <= 1e-12),
            "N={} {:e} -> N={} {:e}",
            a.order,
            a.l2_error,
            b.order,
            b.l2_error
        );
    }
    let fit = fitted_decay_rate(&report).unwrap();
    assert!(fit.slope <= -0.75, "{fit:?}");
    assert!(fit.r_squared.unwrap() >= 0.97, "{fit:?}");
}

#[test]
fn zero_solution_against_zero_exact() {
    let zero = parse("0", &["x"]).unwrap();
    let sol = SpectralSolution::from_coefficients(0.5, vec![0.0; 4]);
    assert_eq!(l2_error(&sol, &zero, 200).unwrap(), 0.0);
}
