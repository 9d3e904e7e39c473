#![allow(dead_code)]

use fide_core::galerkin::Problem;
use fide_core::specialfn::gamma;

pub const EXAMPLE1_F: &str = "(-x + sqrt(x)*(sqrt(x)*cos(x) + sqrt(pi)*(besselj0(x/2)*cos(x/2) \
     - besselj1(x/2)*sin(x/2))) - 2*sin(x)) / (2*sqrt(x))";

/// q = 1/2, λ = 1/2, p = 1, K = √(xt), u = sin(x)/√x.
pub fn example1() -> Problem {
    Problem::from_sources("example1", 0.5, 0.5, "1", EXAMPLE1_F, "sqrt(x*t)")
        .unwrap()
        .with_exact_source("sin(x)/sqrt(x)")
        .unwrap()
}

/// Problem with exact solution u = x^{mq}, i.e. ū(v) = v^m.
///
/// p = 1 and K(x,t) = q t^{q-1}, for which the transformed kernel is
/// identically one and every inner product is a polynomial.
pub fn manufactured(m: usize, q: f64, lambda: f64) -> Problem {
    let mq = m as f64 * q;
    // D^q x^{mq} = Γ(mq+1)/Γ(mq-q+1) x^{(m-1)q}
    let mu = gamma(mq + 1.0).unwrap() / gamma(mq - q + 1.0).unwrap();
    let f = format!(
        "{mu:?}*x^{:?} - x^{mq:?} - {lambda:?}*x^{:?}/{}",
        (m as f64 - 1.0) * q,
        (m as f64 + 1.0) * q,
        m + 1
    );
    let kernel = format!("{q:?}*t^{:?}", q - 1.0);
    Problem::from_sources(format!("manufactured_v{m}_q{q}"), q, lambda, "1", &f, &kernel)
        .unwrap()
        .with_exact_source(&format!("x^{mq:?}"))
        .unwrap()
}
