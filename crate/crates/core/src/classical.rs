//! The `q -> 1` limits: continuous symmetric polynomials, limit recurrence
//! coefficients and eigenvalues, limit weights, and sweeps along `q = 1 - eps`
//! that measure convergence towards them.

use crate::error::{QError, Result};
use crate::families::FamilySpec;
use crate::qcore::{sigma_parity, QContext};
use crate::real::{scaled_difference, Real};
use crate::sympoly::{eigenvalue, eval_explicit_terms, recurrence_c, CharVector};
use crate::weights::weight_star;

/// Decreasing `eps` values for `q = 1 - eps` and the order of the polynomial
/// extrapolation to `eps = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitProbe<T> {
    eps: Vec<T>,
    order: usize,
}

impl<T: Real> LimitProbe<T> {
    pub fn new(eps: Vec<T>, order: usize) -> Result<Self> {
        if eps.is_empty() {
            return Err(QError::Precondition("probe needs at least one eps".into()));
        }
        let half = T::lit(0.5);
        if eps.iter().any(|e| !(*e > T::zero() && *e < half)) {
            return Err(QError::Precondition("probe eps must lie in (0, 0.5)".into()));
        }
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(QError::Precondition("probe eps must be strictly decreasing".into()));
        }
        if order >= eps.len() {
            return Err(QError::Precondition(format!(
                "extrapolation order {order} needs more than {} points",
                eps.len()
            )));
        }
        Ok(Self { eps, order })
    }

    pub fn eps(&self) -> &[T] {
        &self.eps
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl<T: Real> Default for LimitProbe<T> {
    fn default() -> Self {
        Self::new(vec![T::lit(1e-2), T::lit(1e-3), T::lit(1e-4)], 2).expect("valid default probe")
    }
}

fn ratio_or_zero_den<T: Real>(num: T, den: T, what: &str) -> Result<T> {
    if den == T::zero() {
        return Err(QError::ZeroDenominator(what.to_string()));
    }
    Ok(num / den)
}

/// Monomial coefficients of the continuous symmetric solution
/// `sum_k binom(K, k) prod_{i<K-k} ((2i+e+2K) a + c)/((2i+e+2) b + d) x^(n-2k)`,
/// `K = [n/2]`, `e = (-1)^(n+1)`.
pub fn continuous_poly_coeffs<T: Real>(n: usize, v: &CharVector<T>) -> Result<Vec<T>> {
    let half = n / 2;
    let e: i64 = if n % 2 == 0 { -1 } else { 1 };
    let k2 = 2 * half as i64;
    let mut prefix = vec![T::one()];
    for i in 0..half as i64 {
        let num = T::from_i64_lossy(2 * i + e + k2) * v.a + v.c;
        let den = T::from_i64_lossy(2 * i + e + 2) * v.b + v.d;
        let r = ratio_or_zero_den(num, den, "continuous polynomial")?;
        let last = *prefix.last().expect("non-empty");
        prefix.push(last * r);
    }
    let mut coeffs = vec![T::zero(); n + 1];
    let mut binom = T::one();
    for k in 0..=half {
        coeffs[n - 2 * k] = binom * prefix[half - k];
        binom = binom * T::from_usize_lossy(half - k) / T::from_usize_lossy(k + 1);
    }
    Ok(coeffs)
}

fn eval_parity<T: Real>(coeffs: &[T], n: usize, x: T) -> (T, T) {
    let y = x * x;
    let mut v = T::zero();
    let mut m = T::zero();
    let mut k = n as i64;
    while k >= 0 {
        let c = coeffs[k as usize];
        v = v * y + c;
        m = m * y + c.abs();
        k -= 2;
    }
    if n % 2 == 1 {
        (v * x, m * x.abs())
    } else {
        (v, m)
    }
}

/// Continuous symmetric polynomial at `x`.
pub fn continuous_poly<T: Real>(n: usize, v: &CharVector<T>, x: T) -> Result<T> {
    let c = continuous_poly_coeffs(n, v)?;
    Ok(eval_parity(&c, n, x).0)
}

/// `lim C_n = (n (a (b (2-n) + d) - b c) - d sigma_n (2a(n-1) + c)) / ((a(2n-3) + c)(a(2n-1) + c))`.
pub fn continuous_c_limit<T: Real>(n: usize, v: &CharVector<T>) -> Result<T> {
    let nf = T::from_usize_lossy(n);
    let one = T::one();
    let two = T::lit(2.0);
    let sigma = T::from_usize_lossy(sigma_parity(n as i64));
    let (a, b, c, d) = (v.a, v.b, v.c, v.d);
    let num = nf * (a * (b * (two - nf) + d) - b * c) - d * sigma * (two * a * (nf - one) + c);
    let den = (a * (two * nf - T::lit(3.0)) + c) * (a * (two * nf - one) + c);
    ratio_or_zero_den(num, den, "continuous C limit")
}

/// `lim lambda_n = -n (c - (1-n) a)`.
pub fn continuous_lambda_limit<T: Real>(n: usize, v: &CharVector<T>) -> T {
    let nf = T::from_usize_lossy(n);
    -nf * (v.c - (T::one() - nf) * v.a)
}

/// Residual of the continuous equation
/// `x^2 (a x^2 + b) y'' + x (c x^2 + d) y' + (lambda x^2 - sigma d) y` with its term scale.
pub fn continuous_ode_residual<T: Real>(n: usize, v: &CharVector<T>, x: T) -> Result<(T, T)> {
    let c = continuous_poly_coeffs(n, v)?;
    let lam = continuous_lambda_limit(n, v);
    let sigma = T::from_usize_lossy(sigma_parity(n as i64));
    let mut res = T::zero();
    let mut scale = T::zero();
    for (k, &ck) in c.iter().enumerate() {
        if ck == T::zero() {
            continue;
        }
        let kf = T::from_usize_lossy(k);
        let d2 = kf * (kf - T::one());
        // x^2 (a x^2 + b) k(k-1) x^(k-2) = (a x^(k+2) + b x^k) k(k-1)
        let xk = x.powi(k as i32);
        let xk2 = xk * x * x;
        let terms = [
            v.a * d2 * ck * xk2,
            v.b * d2 * ck * xk,
            v.c * kf * ck * xk2,
            v.d * kf * ck * xk,
            lam * ck * xk2,
            -(sigma * v.d * ck * xk),
        ];
        for t in terms {
            res = res + t;
            scale = scale.max(t.abs());
        }
    }
    Ok((res, scale))
}

/// Printed continuous weights; `x` must lie in the open support where an
/// exponent is negative.
pub fn continuous_weight<T: Real>(fam: &FamilySpec<T>, x: T) -> Result<T> {
    let one = T::one();
    let x2 = x * x;
    match *fam {
        FamilySpec::Hermite { p } => {
            if x2 == T::zero() && p > T::zero() {
                return Err(QError::Domain("x^(-2p) is singular at 0".into()));
            }
            Ok(x2.powf(-p) * (-x2).exp())
        }
        FamilySpec::Chebyshev5 => {
            if !(x2 < one) {
                return Err(QError::Domain("fifth kind weight needs |x| < 1".into()));
            }
            Ok(x2 / (one - x2).sqrt())
        }
        FamilySpec::Chebyshev6 => {
            if !(x2 <= one) {
                return Err(QError::Domain("sixth kind weight needs |x| <= 1".into()));
            }
            Ok(x2 * (one - x2).sqrt())
        }
        FamilySpec::Ultraspherical { alpha, beta } => {
            if !(x2 <= one) || (x2 == one && beta < T::zero()) {
                return Err(QError::Domain("ultraspherical weight outside its support".into()));
            }
            if x2 == T::zero() && alpha < T::zero() {
                return Err(QError::Domain("x^(2 alpha) is singular at 0".into()));
            }
            Ok(x2.powf(alpha) * (one - x2).powf(beta))
        }
        FamilySpec::Custom(_) => Err(QError::Domain(
            "custom characteristic vectors have no printed limit weight".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitQuantity<T> {
    RecurrenceC,
    Eigenvalue,
    /// Unnormalized explicit polynomial at `x`.
    PolynomialValue(T),
    /// `W*(x)` at `x`.
    WeightValue(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport<T> {
    pub eps: Vec<T>,
    pub values: Vec<T>,
    pub target: T,
    /// Errors relative to `scale`.
    pub raw_errors: Vec<T>,
    pub extrapolated: T,
    pub extrapolated_error: T,
    /// `|target|`, or the term magnitude for polynomial values.
    pub scale: T,
    /// Raw errors never increase as `eps` decreases.
    pub monotone: bool,
}

impl<T: Real> LimitReport<T> {
    pub fn final_error(&self) -> T {
        *self.raw_errors.last().expect("probe is non-empty")
    }
}

/// Neville's scheme evaluated at 0 on the points `(xs[i], ys[i])`.
pub fn neville_at_zero<T: Real>(xs: &[T], ys: &[T]) -> T {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// Evaluates the selected quantity along `q = 1 - eps` and compares it with
/// its continuous counterpart.
pub fn limit_convergence_report<T: Real>(
    quantity: LimitQuantity<T>,
    fam: &FamilySpec<T>,
    n: usize,
    probe: &LimitProbe<T>,
    ctx: &QContext<T>,
) -> Result<LimitReport<T>> {
    let lim_v = fam.limit_char_vector()?;
    let (target, scale) = match quantity {
        LimitQuantity::RecurrenceC => {
            let t = continuous_c_limit(n, &lim_v)?;
            (t, t.abs())
        }
        LimitQuantity::Eigenvalue => {
            let t = continuous_lambda_limit(n, &lim_v);
            (t, t.abs())
        }
        LimitQuantity::PolynomialValue(x) => {
            let c = continuous_poly_coeffs(n, &lim_v)?;
            eval_parity(&c, n, x)
        }
        LimitQuantity::WeightValue(x) => {
            let t = continuous_weight(fam, x)?;
            (t, t.abs())
        }
    };
    let mut values = Vec::with_capacity(probe.eps.len());
    for &e in &probe.eps {
        let qctx = QContext::with_policy(T::one() - e, ctx.eps_term(), ctx.max_terms(), ctx.tol_check())?;
        let desc = fam.descriptor(&qctx)?;
        let v = match quantity {
            LimitQuantity::RecurrenceC => recurrence_c(n, &desc.v, &qctx)?,
            LimitQuantity::Eigenvalue => eigenvalue(n, &desc.v, &qctx)?,
            LimitQuantity::PolynomialValue(x) => eval_explicit_terms(n, &desc.v, &qctx, x)?.value,
            LimitQuantity::WeightValue(x) => weight_star(&desc.v, &qctx, x)?,
        };
        values.push(v);
    }
    let raw_errors: Vec<T> = values
        .iter()
        .map(|&v| scaled_difference(v, target, scale))
        .collect();
    let k = probe.order + 1;
    let tail = probe.eps.len() - k;
    let extrapolated = neville_at_zero(&probe.eps[tail..], &values[tail..]);
    Ok(LimitReport {
        eps: probe.eps.clone(),
        monotone: raw_errors.windows(2).all(|w| w[1] <= w[0]),
        extrapolated_error: scaled_difference(extrapolated, target, scale),
        values,
        target,
        raw_errors,
        extrapolated,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn continuous_poly_examples() {
        let v = CharVector::new(-1.0, 1.0, -6.0, 0.0).unwrap();
        for x in [-0.8, 0.0, 0.3] {
            assert_eq!(continuous_poly(0, &v, x).unwrap(), 1.0);
            assert_eq!(continuous_poly(1, &v, x).unwrap(), x);
        }
        for x in [0.1f64, 0.5, 0.9] {
            let (r, s) = continuous_ode_residual(4, &v, x).unwrap();
            assert!(r.abs() <= 1e-10 * s);
        }
        let bad = CharVector::new(1.0, 1.0, 0.0, -1.0).unwrap();
        assert!(matches!(continuous_poly(2, &bad, 0.5), Err(QError::ZeroDenominator(_))));
    }

    #[test]
    fn c_limit_matches_printed_forms() {
        for p in [0.0, 0.3] {
            let v = FamilySpec::Hermite { p }.limit_char_vector().unwrap();
            for n in 1..12 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let printed = 0.5 * (p * (sign - 1.0) + n as f64);
                assert_relative_eq!(continuous_c_limit(n, &v).unwrap(), printed, max_relative = 1e-14);
            }
        }
        let (al, be) = (0.4, 0.7);
        let v = FamilySpec::Ultraspherical { alpha: al, beta: be }.limit_char_vector().unwrap();
        for n in 1..12 {
            let nf = n as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let printed = (nf * nf - 2.0 * (al * sign * (al + be + nf) - (al + be) * (al + nf)))
                / ((2.0 * al + 2.0 * be + 2.0 * nf - 1.0) * (2.0 * al + 2.0 * be + 2.0 * nf + 1.0));
            assert_relative_eq!(continuous_c_limit(n, &v).unwrap(), printed, max_relative = 1e-13);
        }
    }

    // Numerator and denominator of C_n are O(eps^2) at q = 1 - eps, so f64
    // keeps only about 1e-16 / eps^2 relative accuracy; eps = 1e-6 needs double-double.
    #[test]
    fn c_limit_against_q_near_one() {
        use crate::DoubleDouble;
        let dd = DoubleDouble::from;
        let fams = [
            FamilySpec::Ultraspherical { alpha: dd(0.4), beta: dd(0.7) },
            FamilySpec::Chebyshev5,
            FamilySpec::Chebyshev6,
            FamilySpec::Hermite { p: dd(0.0) },
            FamilySpec::Hermite { p: dd(0.3) },
        ];
        let ctx = QContext::new(dd(1.0) - dd(1e-6)).unwrap();
        for f in &fams {
            let lim = f.limit_char_vector().unwrap();
            let desc = f.descriptor(&ctx).unwrap();
            for n in 1..=10 {
                let near = recurrence_c(n, &desc.v, &ctx).unwrap();
                let target = continuous_c_limit(n, &lim).unwrap();
                let rel = crate::real::relative_difference(near, target).as_f64();
                assert!(rel <= 1e-4, "{} n = {n}: {rel:e}", f.name());
            }
        }
    }

    #[test]
    fn lambda_limit_examples() {
        let v = CharVector::new(2.0, 0.0, 5.0, 0.0).unwrap();
        assert_eq!(continuous_lambda_limit(0, &v), 0.0);
        assert_eq!(continuous_lambda_limit(1, &v), -5.0);
        assert_eq!(continuous_lambda_limit(3, &v), -27.0);
    }

    #[test]
    fn weight_examples() {
        assert_relative_eq!(continuous_weight(&FamilySpec::Chebyshev5, 0.6).unwrap(), 0.45, max_relative = 1e-15);
        assert_relative_eq!(continuous_weight(&FamilySpec::Chebyshev6, 0.6).unwrap(), 0.288, max_relative = 1e-15);
        assert_eq!(continuous_weight(&FamilySpec::Hermite { p: 0.0 }, 0.0).unwrap(), 1.0);
        assert!(continuous_weight(&FamilySpec::Chebyshev5, 1.0).is_err());
        assert!(continuous_weight(&FamilySpec::Hermite { p: 0.3 }, 0.0).is_err());
        let alias = FamilySpec::Ultraspherical { alpha: 1.0, beta: -0.5 };
        for x in [0.1, 0.5, 0.95] {
            assert_relative_eq!(
                continuous_weight(&alias, x).unwrap(),
                continuous_weight(&FamilySpec::Chebyshev5, x).unwrap(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn probe_validation() {
        assert!(LimitProbe::new(vec![1e-3, 1e-2], 1).is_err());
        assert!(LimitProbe::new(vec![0.6, 1e-2], 1).is_err());
        assert!(LimitProbe::new(vec![1e-2, 1e-3], 2).is_err());
        let p = LimitProbe::<f64>::default();
        assert_eq!(p.eps(), &[1e-2, 1e-3, 1e-4]);
        assert_eq!(p.order(), 2);
    }

    #[test]
    fn neville_reproduces_quadratics() {
        let xs = [0.3, 0.2, 0.1];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 3.0 * x + 5.0 * x * x).collect();
        assert_relative_eq!(neville_at_zero(&xs, &ys), 2.0, max_relative = 1e-13);
    }

    #[test]
    fn reports() {
        let ctx = QContext::new(0.5).unwrap();
        let probe = LimitProbe::default();
        let fam = FamilySpec::Ultraspherical { alpha: 0.4, beta: 0.7 };
        for n in 1..=6 {
            let r = limit_convergence_report(LimitQuantity::Eigenvalue, &fam, n, &probe, &ctx).unwrap();
            assert!(r.final_error() <= 1e-3 && r.monotone, "{r:?}");
            let r = limit_convergence_report(LimitQuantity::RecurrenceC, &fam, n, &probe, &ctx).unwrap();
            assert!(r.extrapolated_error <= 10.0 * r.final_error(), "{r:?}");
        }
        let r = limit_convergence_report(LimitQuantity::PolynomialValue(0.3), &fam, 5, &probe, &ctx).unwrap();
        assert!(r.monotone, "{r:?}");
        let r = limit_convergence_report(LimitQuantity::WeightValue(0.5), &FamilySpec::Chebyshev6, 0, &probe, &ctx)
            .unwrap();
        assert!(r.monotone, "{r:?}");
    }

    proptest! {
        #[test]
        fn continuous_poly_symmetric(n in 0usize..16, x in -2.0f64..2.0, al in 0.0f64..2.0, be in 0.0f64..2.0) {
            let v = FamilySpec::Ultraspherical { alpha: al, beta: be }.limit_char_vector().unwrap();
            let p = continuous_poly(n, &v, x).unwrap();
            let m = continuous_poly(n, &v, -x).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((m - sign * p).abs() <= 1e-13 * p.abs().max(1e-300));
        }
    }
}
