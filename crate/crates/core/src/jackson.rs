//! Jackson q-integration on the geometric grid `x q^n`.
//!
//! Every integral is a truncated series summed in ascending `n` with a
//! compensated accumulator, so results are reproducible bit for bit.

use crate::error::{QError, Result};
use crate::qcore::QContext;
use crate::real::{CompensatedSum, Real};

pub const DEFAULT_N_TERMS: usize = 256;

/// Truncation level for the Jackson sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacksonConfig<T> {
    n_terms: usize,
    ctx: QContext<T>,
}

impl<T: Real> JacksonConfig<T> {
    /// Uses `max(256, n)` grid points with `q^n < eps_term`, so the tail stays
    /// negligible for `q` close to 1 as well.
    pub fn new(ctx: QContext<T>) -> Result<Self> {
        let needed = (ctx.eps_term().ln() / ctx.q().ln())
            .ceil()
            .to_usize()
            .unwrap_or(DEFAULT_N_TERMS);
        Self::with_n_terms(ctx, needed.max(DEFAULT_N_TERMS))
    }

    pub fn with_n_terms(ctx: QContext<T>, n_terms: usize) -> Result<Self> {
        if n_terms == 0 {
            return Err(QError::InvalidContext("n_terms must be at least 1".into()));
        }
        let i = i32::try_from(n_terms)
            .map_err(|_| QError::InvalidContext("n_terms too large".into()))?;
        if !(ctx.q().powi(i) > T::min_positive_value()) {
            return Err(QError::InvalidContext(format!(
                "q^{n_terms} underflows for q = {}",
                ctx.q().as_f64()
            )));
        }
        Ok(Self { n_terms, ctx })
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn ctx(&self) -> &QContext<T> {
        &self.ctx
    }
}

/// A truncated q-integral with its geometric tail bound `|last term| / (1 - q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QIntegral<T> {
    pub value: T,
    pub tail: T,
}

fn checked<T: Real>(v: T, x: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QError::NonFinite { x: x.as_f64() })
    }
}

/// `int_0^x f(t) d_q t = x (1-q) sum_{n=0}^{N} q^n f(q^n x)`.
pub fn q_integral_zero_to<T: Real, F: Fn(T) -> T>(
    f: F,
    x: T,
    cfg: &JacksonConfig<T>,
) -> Result<QIntegral<T>> {
    let q = cfg.ctx.q();
    let scale = x * (T::one() - q);
    let mut acc = CompensatedSum::new();
    let mut qn = T::one();
    let mut last = T::zero();
    for _ in 0..=cfg.n_terms {
        let t = qn * x;
        let term = scale * qn * checked(f(t), t)?;
        acc.add(term);
        last = term;
        qn = qn * q;
    }
    Ok(QIntegral {
        value: acc.value(),
        tail: last.abs() / (T::one() - q),
    })
}

/// `int_a^b = int_0^b - int_0^a`.
pub fn q_integral<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    cfg: &JacksonConfig<T>,
) -> Result<QIntegral<T>> {
    let hi = q_integral_zero_to(&f, b, cfg)?;
    let lo = q_integral_zero_to(&f, a, cfg)?;
    Ok(QIntegral {
        value: hi.value - lo.value,
        tail: hi.tail + lo.tail,
    })
}

/// `int_{-b}^{b} f(t) d_q t = b (1-q) sum q^n (f(b q^n) + f(-b q^n))`.
///
/// The pair `f(t) + f(-t)` is formed before accumulation, so odd integrands
/// that respect `f(-t) = -f(t)` bitwise integrate to exactly zero.
pub fn q_integral_symmetric<T: Real, F: Fn(T) -> T>(
    f: F,
    b: T,
    cfg: &JacksonConfig<T>,
) -> Result<QIntegral<T>> {
    let q = cfg.ctx.q();
    let scale = b * (T::one() - q);
    let mut acc = CompensatedSum::new();
    let mut qn = T::one();
    let mut last = T::zero();
    for _ in 0..=cfg.n_terms {
        let t = qn * b;
        let pair = checked(f(t), t)? + checked(f(-t), -t)?;
        let term = scale * qn * pair;
        acc.add(term);
        last = term;
        qn = qn * q;
    }
    Ok(QIntegral {
        value: acc.value(),
        tail: last.abs() / (T::one() - q),
    })
}

/// Bilateral sum `(1-q) sum_{n=-N}^{N} q^n (f(q^n) + f(-q^n))`.
///
/// Both end terms must fall below `eps_term` relative to the result; a tail
/// that does not decay as `n -> -inf` is reported as divergence.
pub fn q_integral_real_line<T: Real, F: Fn(T) -> T>(
    f: F,
    cfg: &JacksonConfig<T>,
) -> Result<QIntegral<T>> {
    let q = cfg.ctx.q();
    let n = cfg.n_terms as i32;
    let one_minus_q = T::one() - q;
    let mut acc = CompensatedSum::new();
    let mut first = T::zero();
    let mut last = T::zero();
    for k in -n..=n {
        let t = q.powi(k);
        let pair = checked(f(t), t)? + checked(f(-t), -t)?;
        let term = one_minus_q * t * pair;
        if !term.is_finite() {
            return Err(QError::Divergence(format!(
                "bilateral term at n = {k} is not finite"
            )));
        }
        if k == -n {
            first = term;
        }
        acc.add(term);
        last = term;
    }
    let value = acc.value();
    let bound = cfg.ctx.eps_term() * value.abs();
    if first.abs() > bound {
        return Err(QError::Divergence(format!(
            "n -> -inf tail term {:e} does not decay",
            first.as_f64()
        )));
    }
    if last.abs() > bound {
        return Err(QError::Divergence(format!(
            "n -> +inf tail term {:e} does not decay",
            last.as_f64()
        )));
    }
    Ok(QIntegral {
        value,
        tail: first.abs().max(last.abs()) / one_minus_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{q_derivative, q_number_int};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cfg(q: f64) -> JacksonConfig<f64> {
        JacksonConfig::new(QContext::new(q).unwrap()).unwrap()
    }

    #[test]
    fn default_truncation() {
        assert_eq!(cfg(0.5).n_terms(), 256);
        assert!(cfg(0.95).n_terms() > 256);
        let ctx = QContext::new(0.01).unwrap();
        assert!(JacksonConfig::with_n_terms(ctx, 256).is_err());
        assert!(JacksonConfig::with_n_terms(ctx, 0).is_err());
    }

    #[test]
    fn zero_to_examples() {
        let c = cfg(0.5);
        assert_eq!(q_integral_zero_to(|_| 0.0, 1.0, &c).unwrap().value, 0.0);
        assert_relative_eq!(q_integral_zero_to(|_| 1.0, 1.0, &c).unwrap().value, 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            q_integral_zero_to(|t| t, 1.0, &c).unwrap().value,
            2.0 / 3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let c = cfg(0.5);
        let r = q_integral_zero_to(|t: f64| 1.0 / (t - 0.25), 1.0, &c);
        assert!(matches!(r, Err(QError::NonFinite { .. })));
    }

    #[test]
    fn interval_examples() {
        let c = cfg(0.5);
        let f = |t: f64| t.sin() + 2.0;
        assert_eq!(q_integral(f, 0.7, 0.7, &c).unwrap().value, 0.0);
        assert_eq!(
            q_integral(f, 0.0, 0.9, &c).unwrap().value,
            q_integral_zero_to(f, 0.9, &c).unwrap().value
        );
    }

    #[test]
    fn fundamental_theorem_cubic() {
        let c = cfg(0.5);
        let ctx = *c.ctx();
        let df = |t: f64| q_derivative(|s: f64| s * s * s, t, Some(0.0), &ctx).unwrap();
        for (a, b) in [(0.2, 1.3), (-0.8, 0.6), (1.5, -2.0)] {
            let v = q_integral(df, a, b, &c).unwrap().value;
            let expect = b * b * b - a * a * a;
            assert_relative_eq!(v, expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn symmetric_examples() {
        let c = cfg(0.5);
        assert_eq!(q_integral_symmetric(|t: f64| t * t * t - 2.0 * t, 1.3, &c).unwrap().value, 0.0);
        assert_eq!(q_integral_symmetric(|t: f64| t.sin(), 0.9, &c).unwrap().value, 0.0);
        assert_relative_eq!(q_integral_symmetric(|_| 1.0, 1.0, &c).unwrap().value, 2.0, max_relative = 1e-15);
        let even = |t: f64| (t * t).exp();
        assert_relative_eq!(
            q_integral_symmetric(even, 0.8, &c).unwrap().value,
            2.0 * q_integral_zero_to(even, 0.8, &c).unwrap().value,
            max_relative = 1e-14
        );
    }

    #[test]
    fn real_line_examples() {
        let c = cfg(0.5);
        assert_eq!(q_integral_real_line(|t: f64| t * (-t * t).exp(), &c).unwrap().value, 0.0);
        // support within [-1.5, 1.5] keeps only k >= 0: 2 (1-q) sum q^k (1 + q^2k)
        let f = |t: f64| if t.abs() <= 1.5 { 1.0 + t * t } else { 0.0 };
        let line = q_integral_real_line(f, &c).unwrap().value;
        let closed = 2.0 * 0.5 * (2.0 + 1.0 / (1.0 - 0.125));
        assert_relative_eq!(line, closed, max_relative = 1e-12);
        assert!(matches!(q_integral_real_line(|_| 1.0, &c), Err(QError::Divergence(_))));
    }

    #[test]
    fn tail_bounds_refinement() {
        let ctx = QContext::new(0.8).unwrap();
        let f = |t: f64| 1.0 + t + t * t;
        let coarse = q_integral_zero_to(f, 1.0, &JacksonConfig::with_n_terms(ctx, 40).unwrap()).unwrap();
        let fine = q_integral_zero_to(f, 1.0, &JacksonConfig::with_n_terms(ctx, 400).unwrap()).unwrap();
        assert!((fine.value - coarse.value).abs() < coarse.tail);
    }

    fn closed_form_monomial_integral(k: i32, x: f64, q: f64) -> f64 {
        x.powi(k + 1) * (1.0 - q) / (1.0 - q.powi(k + 1))
    }

    proptest! {
        #[test]
        fn linearity(q in 0.1f64..0.9, al in -3.0f64..3.0, be in -3.0f64..3.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let c = cfg(q);
            let f = |t: f64| t.cos();
            let g = |t: f64| t * t - t;
            let lhs = q_integral(|t| al * f(t) + be * g(t), a, b, &c).unwrap().value;
            let rhs = al * q_integral(f, a, b, &c).unwrap().value + be * q_integral(g, a, b, &c).unwrap().value;
            let scale = (al.abs() + be.abs()) * 2.0 * (a.abs() + b.abs()) + 1e-300;
            prop_assert!((lhs - rhs).abs() <= 1e-13 * scale);
        }

        #[test]
        fn exact_on_polynomials(q in 0.1f64..0.9, x in 0.1f64..1.5, coeffs in proptest::collection::vec(-1.0f64..1.0, 1..21)) {
            let c = cfg(q);
            let f = |t: f64| coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a);
            let v = q_integral_zero_to(f, x, &c).unwrap().value;
            let expect: f64 = coeffs.iter().enumerate().map(|(k, a)| a * closed_form_monomial_integral(k as i32, x, q)).sum();
            let scale: f64 = coeffs.iter().enumerate().map(|(k, a)| (a * closed_form_monomial_integral(k as i32, x, q)).abs()).sum();
            prop_assert!((v - expect).abs() <= 1e-12 * scale.max(1e-300));
        }

        #[test]
        fn fundamental_theorem_polynomials(q in 0.1f64..0.9, a in -1.2f64..1.2, b in -1.2f64..1.2,
                                           coeffs in proptest::collection::vec(-1.0f64..1.0, 1..21)) {
            let c = cfg(q);
            let f = |t: f64| coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a);
            // D_q f coefficientwise: x^k -> [k] x^(k-1)
            let df = |t: f64| coeffs.iter().enumerate().skip(1).rev()
                .fold(0.0, |acc, (k, &a)| acc * t + a * q_number_int(k as i64, c.ctx()));
            let v = q_integral(df, a, b, &c).unwrap().value;
            let bound = coeffs.iter().enumerate()
                .map(|(k, c)| c.abs() * (a.abs().powi(k as i32) + b.abs().powi(k as i32)))
                .sum::<f64>();
            prop_assert!((v - (f(b) - f(a))).abs() <= 1e-13 * bound);
        }
    }
}
