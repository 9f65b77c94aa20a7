//! q-arithmetic primitives: q-numbers, q-shifted factorials, q-binomials,
//! basic hypergeometric series and the q-difference operators.

use crate::error::{QError, Result};
use crate::real::{CompensatedSum, Real};

pub const DEFAULT_EPS_TERM: f64 = 1e-17;
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
pub const DEFAULT_TOL_CHECK: f64 = 1e-10;

/// Base `q` together with the numerical policy shared by all routines.
///
/// Immutable once built; `0 < q < 1` is enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext<T> {
    q: T,
    eps_term: T,
    max_terms: usize,
    tol_check: T,
}

impl<T: Real> QContext<T> {
    pub fn new(q: T) -> Result<Self> {
        Self::with_policy(
            q,
            T::lit(DEFAULT_EPS_TERM),
            DEFAULT_MAX_TERMS,
            T::lit(DEFAULT_TOL_CHECK),
        )
    }

    pub fn with_policy(q: T, eps_term: T, max_terms: usize, tol_check: T) -> Result<Self> {
        if !(q > T::zero() && q < T::one()) {
            return Err(QError::InvalidContext(format!(
                "q must lie in (0,1), got {}",
                q.as_f64()
            )));
        }
        if !(eps_term > T::zero()) {
            return Err(QError::InvalidContext("eps_term must be positive".into()));
        }
        if max_terms == 0 {
            return Err(QError::InvalidContext("max_terms must be at least 1".into()));
        }
        if !(tol_check > T::zero()) {
            return Err(QError::InvalidContext("tol_check must be positive".into()));
        }
        Ok(Self {
            q,
            eps_term,
            max_terms,
            tol_check,
        })
    }

    pub fn with_tol_check(self, tol_check: T) -> Result<Self> {
        Self::with_policy(self.q, self.eps_term, self.max_terms, tol_check)
    }

    pub fn with_eps_term(self, eps_term: T) -> Result<Self> {
        Self::with_policy(self.q, eps_term, self.max_terms, self.tol_check)
    }

    pub fn with_max_terms(self, max_terms: usize) -> Result<Self> {
        Self::with_policy(self.q, self.eps_term, max_terms, self.tol_check)
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn eps_term(&self) -> T {
        self.eps_term
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn tol_check(&self) -> T {
        self.tol_check
    }
}

/// `sigma_n = (1 - (-1)^n) / 2`, defined for every integer.
pub fn sigma_parity(n: i64) -> usize {
    n.rem_euclid(2) as usize
}

/// Integer q-number in base `q`.
///
/// Positive arguments are summed as `1 + q + ... + q^(n-1)`, which avoids the
/// `q^n - 1` cancellation when `q` is close to 1; negative ones use
/// `[-k] = -q^(-k) [k]`.
pub fn q_int<T: Real>(n: i64, q: T) -> T {
    if n >= 0 {
        let mut acc = T::zero();
        let mut p = T::one();
        for _ in 0..n {
            acc = acc + p;
            p = p * q;
        }
        acc
    } else {
        let k = -n;
        -(q.powi(-(k as i32))) * q_int(k, q)
    }
}

/// `[z]_q = (q^z - 1)/(q - 1)` for real `z`.
pub fn q_number<T: Real>(z: T, ctx: &QContext<T>) -> T {
    let r = z.round();
    if z == r && r.abs() < T::lit(1.0e6) {
        let n = r.to_i64().expect("bounded integer");
        return q_int(n, ctx.q);
    }
    (ctx.q.powf(z) - T::one()) / (ctx.q - T::one())
}

/// `[n]_q` for an integer argument.
pub fn q_number_int<T: Real>(n: i64, ctx: &QContext<T>) -> T {
    q_int(n, ctx.q)
}

/// Finite q-Pochhammer symbol `(x; base)_n`.
pub fn q_pochhammer<T: Real>(x: T, base: T, n: usize) -> T {
    let mut acc = T::one();
    let mut p = T::one();
    for _ in 0..n {
        acc = acc * (T::one() - p * x);
        p = p * base;
    }
    acc
}

/// Infinite q-Pochhammer symbol `(x; base)_inf`.
///
/// Factors are multiplied until `|base^j x| < eps`; reaching `max_terms`
/// first is an error.
pub fn q_pochhammer_inf<T: Real>(x: T, base: T, eps: T, max_terms: usize) -> Result<T> {
    let mut acc = T::one();
    let mut factor = x;
    for _ in 0..max_terms {
        if factor.abs() < eps {
            return Ok(acc);
        }
        acc = acc * (T::one() - factor);
        factor = factor * base;
    }
    if factor.abs() < eps {
        Ok(acc)
    } else {
        Err(QError::TruncationNotReached { max_terms })
    }
}

/// `(x; q)_n` in the context base.
pub fn q_shifted_factorial<T: Real>(x: T, n: usize, ctx: &QContext<T>) -> T {
    q_pochhammer(x, ctx.q, n)
}

/// `(x; q)_inf` in the context base, truncated per the context policy.
pub fn q_shifted_factorial_inf<T: Real>(x: T, ctx: &QContext<T>) -> Result<T> {
    q_pochhammer_inf(x, ctx.q, ctx.eps_term, ctx.max_terms)
}

/// Gaussian binomial `(base;base)_n / ((base;base)_m (base;base)_{n-m})`.
pub fn q_binomial_in<T: Real>(n: usize, m: usize, base: T) -> Result<T> {
    if m > n {
        return Err(QError::OutOfRange(format!(
            "q-binomial lower index {m} exceeds {n}"
        )));
    }
    let m = m.min(n - m);
    let mut acc = T::one();
    for j in 1..=m {
        let num = T::one() - base.powi((n - m + j) as i32);
        let den = T::one() - base.powi(j as i32);
        acc = acc * num / den;
    }
    Ok(acc)
}

pub fn q_binomial<T: Real>(n: usize, m: usize, ctx: &QContext<T>) -> Result<T> {
    q_binomial_in(n, m, ctx.q)
}

/// Parameters of `r phi s (upper; lower; base, argument)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSeriesSpec<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub base: T,
    pub argument: T,
    /// Known last non-zero index for a terminating series. When `None`,
    /// termination is detected from upper parameters of the form `base^(-k)`.
    pub terminate_after: Option<usize>,
}

impl<T: Real> HypSeriesSpec<T> {
    pub fn new(upper: Vec<T>, lower: Vec<T>, base: T, argument: T) -> Self {
        Self {
            upper,
            lower,
            base,
            argument,
            terminate_after: None,
        }
    }

    pub fn terminating_after(mut self, k: usize) -> Self {
        self.terminate_after = Some(k);
        self
    }

    /// Smallest `k` such that some upper parameter equals `base^(-k)`.
    pub fn detected_termination(&self) -> Option<usize> {
        if let Some(k) = self.terminate_after {
            return Some(k);
        }
        let lnb = self.base.ln();
        self.upper
            .iter()
            .filter(|a| **a > T::zero())
            .filter_map(|&a| {
                let k = -(a.ln() / lnb);
                let kr = k.round();
                if kr < T::zero() || (k - kr).abs() > T::lit(1e-9) {
                    return None;
                }
                let ki = kr.to_usize()?;
                let resid = (T::one() - a * self.base.powi(ki as i32)).abs();
                (resid <= T::lit(1e-12)).then_some(ki)
            })
            .min()
    }
}

/// Value of a basic hypergeometric series together with `sum |term|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub magnitude: T,
    pub terms: usize,
}

const LOWER_PARAMETER_GUARD: f64 = 1e-14;

/// Evaluates `r phi s` including the `((-1)^k base^C(k,2))^(1+s-r)` factor.
pub fn basic_hypergeometric<T: Real>(spec: &HypSeriesSpec<T>, ctx: &QContext<T>) -> Result<T> {
    basic_hypergeometric_terms(spec, ctx).map(|s| s.value)
}

pub fn basic_hypergeometric_terms<T: Real>(
    spec: &HypSeriesSpec<T>,
    ctx: &QContext<T>,
) -> Result<SeriesValue<T>> {
    let r = spec.upper.len() as i32;
    let s = spec.lower.len() as i32;
    let excess = 1 + s - r;
    let base = spec.base;
    let z = spec.argument;
    let stop = spec.detected_termination();

    let mut sum = CompensatedSum::new();
    let mut magnitude = T::zero();
    let mut term = T::one();
    let mut base_k = T::one();
    let mut small_run = 0usize;
    let limit = stop.map_or(ctx.max_terms, |k| k.min(ctx.max_terms));

    for k in 0..=limit {
        sum.add(term);
        magnitude = magnitude + term.abs();
        if Some(k) == stop {
            return Ok(SeriesValue {
                value: sum.value(),
                magnitude,
                terms: k + 1,
            });
        }
        if term == T::zero() && z == T::zero() {
            return Ok(SeriesValue {
                value: sum.value(),
                magnitude,
                terms: k + 1,
            });
        }
        if stop.is_none() {
            if term.abs() <= ctx.eps_term * sum.value().abs() {
                small_run += 1;
                if small_run >= 2 {
                    return Ok(SeriesValue {
                        value: sum.value(),
                        magnitude,
                        terms: k + 1,
                    });
                }
            } else {
                small_run = 0;
            }
        }
        // term_{k+1} / term_k
        let mut ratio = z;
        for &a in &spec.upper {
            ratio = ratio * (T::one() - a * base_k);
        }
        let mut den = T::one() - base_k * base;
        for &b in &spec.lower {
            let f = T::one() - b * base_k;
            if f.abs() <= T::lit(LOWER_PARAMETER_GUARD) {
                return Err(QError::IllDefined(format!(
                    "lower parameter {} equals base^(-{k})",
                    b.as_f64()
                )));
            }
            den = den * f;
        }
        if excess != 0 {
            ratio = ratio * (-base_k).powi(excess);
        }
        term = term * ratio / den;
        if !term.is_finite() {
            return Err(QError::Divergence(format!(
                "term {} is not finite",
                k + 1
            )));
        }
        base_k = base_k * base;
    }
    Err(QError::Divergence(format!(
        "terms did not decay below {} within {} terms",
        ctx.eps_term.as_f64(),
        ctx.max_terms
    )))
}

/// `D_q f(x) = (f(qx) - f(x)) / ((q-1) x)`; at `x = 0` the caller must pass `f'(0)`.
pub fn q_derivative<T: Real, F: Fn(T) -> T>(
    f: F,
    x: T,
    derivative_at_zero: Option<T>,
    ctx: &QContext<T>,
) -> Result<T> {
    if x == T::zero() {
        return derivative_at_zero.ok_or(QError::MissingDerivativeAtZero);
    }
    let q = ctx.q;
    Ok((f(q * x) - f(x)) / ((q - T::one()) * x))
}

/// `D_{1/q} f(x) = (f(x/q) - f(x)) / ((1/q - 1) x)`.
pub fn q_derivative_inv<T: Real, F: Fn(T) -> T>(
    f: F,
    x: T,
    derivative_at_zero: Option<T>,
    ctx: &QContext<T>,
) -> Result<T> {
    if x == T::zero() {
        return derivative_at_zero.ok_or(QError::MissingDerivativeAtZero);
    }
    let qi = ctx.q.recip();
    Ok((f(x * qi) - f(x)) / ((qi - T::one()) * x))
}
