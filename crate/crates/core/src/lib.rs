//! Symmetric q-orthogonal polynomials `S_n(a,b,c,d;x;q)` with four free parameters.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: q-numbers, q-shifted factorials, q-binomials, basic hypergeometric
//!   series and the q-difference operators.
//! - [`jackson`]: Jackson q-integrals on `[0,x]`, `[a,b]`, `[-b,b]` and the real line.
//! - [`sympoly`]: eigenvalues, `delta`/`C` recurrence coefficients, the monic
//!   recurrence polynomials, the explicit and `2phi1` forms and q-difference residuals.
//! - [`weights`]: the Pearson ratio, the general weight and `W*(x) = x^2 W(x)`.
//! - [`families`]: generalized q-ultraspherical, fifth/sixth-kind q-Chebyshev and
//!   generalized q-Hermite families, with closed-form norms and Gram matrices.
//! - [`classical`]: the `q -> 1` limits used as convergence oracles.
//!
//! All routines are generic over [`Real`], so they run in `f64` or in any wider
//! floating type implementing [`num_traits::Float`] such as [`DoubleDouble`].

pub mod classical;
pub mod dd;
pub mod error;
pub mod families;
pub mod jackson;
pub mod qcore;
pub mod real;
pub mod sympoly;
pub mod weights;

pub use error::{QError, Result};
pub use dd::DoubleDouble;
pub use real::Real;
