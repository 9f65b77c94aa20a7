//! Weights solving the Pearson-type q-difference equation
//!
//! `W(qx) / W(x) = (x^2 (a + c(q-1)) + b + d(q-1)) / (q^2 (a q^2 x^2 + b))`,
//!
//! and the orthogonality weight `W*(x) = x^2 W(x)`. The q-periodic factor left
//! free by the equation is fixed to 1.

use crate::error::{QError, Result};
use crate::qcore::QContext;
use crate::real::Real;
use crate::sympoly::CharVector;

/// Grid depth used when scanning `W*` on `+-alpha q^k`.
pub const GRID_POINTS: usize = 256;

/// `(x^2 (a + c(q-1)) + b + d(q-1)) / (q^2 (a q^2 x^2 + b))`.
pub fn pearson_ratio<T: Real>(v: &CharVector<T>, ctx: &QContext<T>, x: T) -> Result<T> {
    let q = ctx.q();
    let x2 = x * x;
    let t1 = v.a * q * q * x2;
    let den = q * q * (t1 + v.b);
    if den == T::zero() || (t1 + v.b).abs() <= T::epsilon() * t1.abs().max(v.b.abs()) {
        return Err(QError::Pole { x: x.as_f64() });
    }
    Ok((x2 * v.shifted_a(q) + v.shifted_b(q)) / den)
}

/// Power base `1 + d(q-1)/b`; must be positive.
pub fn weight_base<T: Real>(v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    if v.b == T::zero() {
        return Err(QError::Precondition("weight needs b != 0".into()));
    }
    let base = T::one() + v.d * (ctx.q() - T::one()) / v.b;
    if !(base > T::zero()) {
        return Err(QError::InvalidWeightBase { base: base.as_f64() });
    }
    Ok(base)
}

/// The two infinite products `(-a q^2 x^2/b; q^2)_inf / (-(a + c(q-1)) x^2/(b + d(q-1)); q^2)_inf`.
fn product_ratio<T: Real>(v: &CharVector<T>, ctx: &QContext<T>, x2: T) -> Result<T> {
    let q = ctx.q();
    let q2 = q * q;
    let bb = v.shifted_b(q);
    if bb == T::zero() {
        return Err(QError::ZeroDenominator("b + d(q-1) in the weight".into()));
    }
    q_ratio_inf(-(v.a * q2 * x2) / v.b, -(v.shifted_a(q) * x2) / bb, q2, ctx)
        .map_err(|e| match e {
            QError::ZeroDenominator(_) => QError::Pole { x: x2.sqrt().as_f64() },
            other => other,
        })
}

/// `(u; base)_inf / (v; base)_inf` as one product of factor ratios, so that
/// both products may underflow individually (`q` close to 1) while the
/// ratio stays representable.
pub fn q_ratio_inf<T: Real>(u: T, v: T, base: T, ctx: &QContext<T>) -> Result<T> {
    let eps = ctx.eps_term();
    let mut acc = T::one();
    let (mut fu, mut fv) = (u, v);
    for _ in 0..ctx.max_terms() {
        if fu.abs() < eps && fv.abs() < eps {
            return Ok(acc);
        }
        let den = T::one() - fv;
        if den == T::zero() {
            return Err(QError::ZeroDenominator("infinite product ratio".into()));
        }
        acc = acc * ((T::one() - fu) / den);
        fu = fu * base;
        fv = fv * base;
    }
    Err(QError::TruncationNotReached {
        max_terms: ctx.max_terms(),
    })
}

/// `W*(x) = x^2 W(x)`; finite at the origin whenever the power base is at most 1.
pub fn weight_star<T: Real>(v: &CharVector<T>, ctx: &QContext<T>, x: T) -> Result<T> {
    if v.a == T::zero() {
        return Err(QError::Precondition("weight needs a != 0".into()));
    }
    let base = weight_base(v, ctx)?;
    let x2 = x * x;
    let power = if x2 == T::zero() {
        if base == T::one() {
            T::one()
        } else if base < T::one() {
            T::zero()
        } else {
            return Err(QError::Domain(format!(
                "W* is unbounded at x = 0 for power base {}",
                base.as_f64()
            )));
        }
    } else {
        (base.ln() * x2.ln() / (T::lit(2.0) * ctx.q().ln())).exp()
    };
    Ok(power * product_ratio(v, ctx, x2)?)
}

/// `W(x) = W*(x) / x^2`, `x != 0`.
pub fn weight_general<T: Real>(v: &CharVector<T>, ctx: &QContext<T>, x: T) -> Result<T> {
    if x == T::zero() {
        return Err(QError::Domain("W has a double pole at x = 0".into()));
    }
    Ok(weight_star(v, ctx, x)? / (x * x))
}

/// A weight tied to its characteristic vector and support endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec<T> {
    pub v: CharVector<T>,
    pub support: T,
    pub ctx: QContext<T>,
}

/// `A(alpha) W(alpha)` against the interior maximum of `|A W|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryReport<T> {
    pub value: T,
    pub interior_max: T,
    pub relative: T,
    pub passed: bool,
}

impl<T: Real> WeightSpec<T> {
    pub fn new(v: CharVector<T>, support: T, ctx: QContext<T>) -> Result<Self> {
        if !(support > T::zero()) || !support.is_finite() {
            return Err(QError::Precondition("support bound must be positive".into()));
        }
        Ok(Self { v, support, ctx })
    }

    pub fn weight_star(&self, x: T) -> Result<T> {
        weight_star(&self.v, &self.ctx, x)
    }

    pub fn weight(&self, x: T) -> Result<T> {
        weight_general(&self.v, &self.ctx, x)
    }

    /// `W(qx) / W(x)`.
    pub fn pearson_lhs(&self, x: T) -> Result<T> {
        Ok(self.weight(self.ctx.q() * x)? / self.weight(x)?)
    }

    pub fn pearson_rhs(&self, x: T) -> Result<T> {
        pearson_ratio(&self.v, &self.ctx, x)
    }

    /// `A(x) W(x) = (a x^2 + b) W*(x)`.
    pub fn boundary_term(&self, x: T) -> Result<T> {
        Ok((self.v.a * x * x + self.v.b) * self.weight_star(x)?)
    }

    /// Exponent `e = ln(base) / ln(q)` of `W*(x) ~ |x|^e` at the origin.
    pub fn origin_exponent(&self) -> Result<T> {
        Ok(weight_base(&self.v, &self.ctx)?.ln() / self.ctx.q().ln())
    }

    /// Grid depth at which the Jackson tail of `W*` times a bounded function
    /// falls below `eps_term`: the terms decay like `q^(k (1 + e))`.
    pub fn jackson_depth(&self) -> Result<usize> {
        let e = self.origin_exponent()?;
        let rate = (T::one() + e) * self.ctx.q().ln();
        Ok((self.ctx.eps_term().ln() / rate).ceil().to_usize().unwrap_or(usize::MAX))
    }

    /// The grid `support * q^k`, `k = 0..n`.
    pub fn grid(&self, n: usize) -> Vec<T> {
        let q = self.ctx.q();
        let mut t = self.support;
        (0..n)
            .map(|_| {
                let cur = t;
                t = t * q;
                cur
            })
            .collect()
    }

    /// Checks that `W*` is finite, positive and even on `+-support q^k`, `k <= n`.
    ///
    /// Near the origin `W*(x) ~ |x|^e` with `e = ln(base) / ln(q)`; the Jackson
    /// sum of `W*` converges only for `e > -1`.
    pub fn check_admissible(&self, n: usize) -> Result<()> {
        let e = self.origin_exponent().map_err(|e| QError::Inadmissible(e.to_string()))?;
        if !(e > -T::one()) {
            return Err(QError::Inadmissible(format!(
                "W* ~ |x|^{} is not q-integrable at 0",
                e.as_f64()
            )));
        }
        for x in self.grid(n + 1) {
            let w = self
                .weight_star(x)
                .map_err(|e| QError::Inadmissible(format!("W*({}) failed: {e}", x.as_f64())))?;
            if !(w > T::zero()) || !w.is_finite() {
                return Err(QError::Inadmissible(format!(
                    "W*({}) = {} is not positive",
                    x.as_f64(),
                    w.as_f64()
                )));
            }
            let wm = self.weight_star(-x)?;
            if wm != w {
                return Err(QError::Inadmissible(format!("W* is not even at x = {}", x.as_f64())));
            }
        }
        Ok(())
    }
}

/// Evaluates `A(x) W(x)` at the support endpoint and compares it with its
/// largest magnitude on the interior grid `support * q^k`, `k = 1..=256`.
pub fn boundary_vanishing_check<T: Real>(spec: &WeightSpec<T>, ctx: &QContext<T>) -> BoundaryReport<T> {
    let value = spec.boundary_term(spec.support).unwrap_or(T::nan());
    let interior_max = spec
        .grid(GRID_POINTS + 1)
        .into_iter()
        .skip(1)
        .map(|x| spec.boundary_term(x).map(|v| v.abs()).unwrap_or(T::nan()))
        .fold(T::zero(), |m, v| if v.is_nan() { T::nan() } else { m.max(v) });
    let relative = crate::real::scaled_difference(value, T::zero(), interior_max);
    BoundaryReport {
        value,
        interior_max,
        relative,
        passed: relative.is_finite() && relative <= ctx.tol_check(),
    }
}
