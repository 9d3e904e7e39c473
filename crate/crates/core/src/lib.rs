//! Spectral Galerkin solver for linear fractional integro-differential
//! equations of the form
//!
//! ```text
//! D^q u(x) = p(x) u(x) + f(x) + λ ∫_0^x K(x,t) u(t) dt,   u(0) = d,   0 < q < 1,
//! ```
//!
//! where `D^q` is the Caputo derivative on [0, 1].
//!
//! Solutions of such equations typically behave like sums of powers
//! `x^{jq + k}` near the origin, which ruins the accuracy of polynomial
//! approximation in x. The solver therefore works in the variable
//! `v = x^q`, where the solution is smooth, and expands it in generalized
//! Jacobi polynomials that vanish at v = 0. The fractional operator maps
//! that basis to polynomials in closed form ([`fracops`]), so the only
//! approximations are the Gauss quadratures of the remaining inner
//! products.
//!
//! ```
//! use fide_core::galerkin::{solve, Problem};
//!
//! // D^{1/2} u = 1, u(0) = 0 has solution 2 sqrt(x / pi)
//! let p = Problem::from_sources("const", 0.5, 0.0, "0", "1", "0").unwrap();
//! let sol = solve(&p, 1).unwrap();
//! let exact = 2.0 * (0.3f64 / std::f64::consts::PI).sqrt();
//! assert!((sol.eval(0.3) - exact).abs() < 1e-14);
//! ```

pub mod analysis;
pub mod basis;
pub mod error;
pub mod expr;
pub mod fracops;
pub mod galerkin;
pub mod quadrature;
pub mod specialfn;

pub use error::{Error, Result};
pub use galerkin::{solve, Problem, SpectralSolution};
