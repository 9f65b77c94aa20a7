//! The symmetric family `S_n(a,b,c,d;x;q)`: eigenvalues, the `delta`/`C`
//! recurrence data, monic polynomials, explicit and `2phi1` representations,
//! residuals of the defining q-difference equation and a sign classification
//! of the recurrence coefficients.
//!
//! Polynomials are dense monomial coefficient vectors produced by the three-term
//! recurrence `phi_{n+1} = x phi_n - C_n phi_{n-1}`. Evaluation runs Horner's
//! scheme in `x^2` with an `x^sigma_n` prefactor, so `phi_n(-x) = (-1)^n phi_n(x)`
//! holds bitwise.

use crate::error::{QError, Result};
use crate::qcore::{
    basic_hypergeometric_terms, q_binomial_in, q_int, q_pochhammer, sigma_parity, HypSeriesSpec,
    QContext,
};
use crate::real::Real;

/// Denominators smaller than this fraction of their largest additive term are
/// treated as vanishing.
pub const RESONANCE_RTOL: f64 = 1e-13;

/// The characteristic vector `(a, b, c, d)` of the q-difference equation
///
/// `x^2 (a x^2 + b) D_q D_{1/q} phi + x (c x^2 + d) D_q phi + (lambda_n x^2 - sigma_n d) phi = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharVector<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> CharVector<T> {
    /// Fails when `a = c = 0`, where the eigenvalue is undetermined.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let v = Self { a, b, c, d };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite()) {
            return Err(QError::Precondition("characteristic vector must be finite".into()));
        }
        if self.a.abs() + self.c.abs() == T::zero() {
            return Err(QError::DegenerateParameters);
        }
        Ok(())
    }

    /// `a + c (q - 1)`.
    pub fn shifted_a(&self, q: T) -> T {
        self.a + self.c * (q - T::one())
    }

    /// `b + d (q - 1)`.
    pub fn shifted_b(&self, q: T) -> T {
        self.b + self.d * (q - T::one())
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Monic symmetric polynomial `x^n + delta_n x^(n-2) + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPolynomial<T> {
    degree: usize,
    coeffs: Vec<T>,
}

/// A value paired with the magnitude of the terms that produced it.
///
/// `magnitude` bounds the size of intermediate quantities, so
/// `|a.value - b.value| / max(a.magnitude, b.magnitude)` measures agreement
/// independently of cancellation near roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub value: T,
    pub magnitude: T,
}

impl<T: Real> Evaluation<T> {
    pub fn agreement(&self, other: &Self) -> T {
        crate::real::scaled_difference(
            self.value,
            other.value,
            self.magnitude.max(other.magnitude),
        )
    }
}

fn horner_even_odd<T: Real>(coeffs: &[T], parity: usize, x: T, abs: bool) -> T {
    let y = x * x;
    let mut acc = T::zero();
    let mut k = coeffs.len();
    // highest index with the right parity
    while k > 0 && (k - 1) % 2 != parity {
        k -= 1;
    }
    while k > 0 {
        let c = coeffs[k - 1];
        acc = acc * if abs { y.abs() } else { y } + if abs { c.abs() } else { c };
        if k < 2 {
            break;
        }
        k -= 2;
    }
    if parity == 1 {
        acc * if abs { x.abs() } else { x }
    } else {
        acc
    }
}

impl<T: Real> SymPolynomial<T> {
    /// Builds a polynomial from monomial coefficients, checking the parity
    /// structure and the unit leading coefficient.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        let degree = coeffs
            .len()
            .checked_sub(1)
            .ok_or_else(|| QError::Precondition("empty coefficient vector".into()))?;
        if coeffs[degree] != T::one() {
            return Err(QError::Precondition("leading coefficient must be 1".into()));
        }
        if coeffs
            .iter()
            .enumerate()
            .any(|(k, c)| (k + degree) % 2 == 1 && *c != T::zero())
        {
            return Err(QError::Precondition(
                "coefficients of the wrong parity must vanish".into(),
            ));
        }
        Ok(Self { degree, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn parity(&self) -> usize {
        self.degree % 2
    }

    /// Coefficient of `x^(n-2)`; zero for `n < 2`.
    pub fn subleading(&self) -> T {
        if self.degree >= 2 {
            self.coeffs[self.degree - 2]
        } else {
            T::zero()
        }
    }

    pub fn eval(&self, x: T) -> T {
        horner_even_odd(&self.coeffs, self.parity(), x, false)
    }

    /// `sum |c_k| |x|^k`.
    pub fn eval_magnitude(&self, x: T) -> T {
        horner_even_odd(&self.coeffs, self.parity(), x, true)
    }

    pub fn evaluate(&self, x: T) -> Evaluation<T> {
        Evaluation {
            value: self.eval(x),
            magnitude: self.eval_magnitude(x),
        }
    }
}

fn guard_denominator<T: Real>(den: T, terms: &[T], what: &'static str, n: usize) -> Result<T> {
    let scale = terms.iter().fold(T::zero(), |m, t| m.max(t.abs()));
    if !den.is_finite() || den.abs() <= T::lit(RESONANCE_RTOL) * scale {
        return Err(QError::Resonance {
            what,
            n,
            denominator: den.as_f64(),
        });
    }
    Ok(den)
}

/// `lambda_n = -[n]_q (c - [1-n]_q a)`.
pub fn eigenvalue<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    if v.a.abs() + v.c.abs() == T::zero() {
        return Err(QError::DegenerateParameters);
    }
    let q = ctx.q();
    let n = n as i64;
    Ok(-q_int(n, q) * (v.c - q_int(1 - n, q) * v.a))
}

/// Coefficient `delta_n` of `x^(n-2)` in the monic solution.
pub fn delta<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    if n < 2 {
        return Ok(T::zero());
    }
    let q = ctx.q();
    let ni = n as i64;
    let one = T::one();
    let sig = T::from_usize_lossy(sigma_parity(ni));
    let sig_prev = T::from_usize_lossy(sigma_parity(ni - 1));
    let qn = q.powi(n as i32);
    let q2n = qn * qn;
    let num = q * q
        * (-v.b * (q - one) * q * q_int(ni - 1, q) * q_int(ni, q) - v.d * q2n
            + v.d * qn * (q * sig + sig_prev));
    let t1 = v.a * q.powi(3);
    let t2 = q2n * v.shifted_a(q);
    let den = guard_denominator((q + one) * (t1 - t2), &[(q + one) * t1, (q + one) * t2], "delta", n)?;
    Ok(num / den)
}

#[derive(Debug, Clone, Copy)]
struct Rational<T> {
    num: T,
    num_scale: T,
    den: T,
    den_scale: T,
}

fn recurrence_parts<T: Real>(n: usize, v: &CharVector<T>, q: T) -> Rational<T> {
    let one = T::one();
    let ni = n as i64;
    let sig = T::from_usize_lossy(sigma_parity(ni));
    let sig_prev = T::from_usize_lossy(sigma_parity(ni - 1));
    let (a, b, c, d) = (v.a, v.b, v.c, v.d);
    let aa = v.shifted_a(q);
    let qn = q.powi(n as i32);
    let q2n = qn * qn;
    let q2 = q * q;
    let lead = qn * q;

    let n1 = q2n * aa * ((d - d * q) * sig - b);
    let n2 = qn * (a * (b * (q2 + one) + d * (q - one) * q2) + b * c * (q - one));
    let n3 = -(a * q2 * (b + d * (q - one) * sig_prev));
    let num = lead * (n1 + n2 + n3);
    let num_scale = lead.abs() * n1.abs().max(n2.abs()).max(n3.abs());

    let d1 = a * a * q2 * q2;
    let d2 = q2n * q2n * aa * aa;
    let d3 = -(a * (q2 * q + q) * q2n * aa);
    Rational {
        num,
        num_scale,
        den: d1 + d2 + d3,
        den_scale: d1.abs().max(d2.abs()).max(d3.abs()),
    }
}

/// Recurrence coefficient `C_n = delta_n - delta_{n+1}` in closed rational form.
pub fn recurrence_c<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    let p = recurrence_parts(n, v, ctx.q());
    let den = guard_denominator(p.den, &[p.den_scale], "C", n)?;
    Ok(p.num / den)
}

/// `C_{2m}` from the even-index simplification.
pub fn recurrence_c_even<T: Real>(m: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    let q = ctx.q();
    let one = T::one();
    let (a, b) = (v.a, v.b);
    let aa = v.shifted_a(q);
    let q2m = q.powi(2 * m as i32);
    let q4m = q2m * q2m;
    let num = -(q2m * q) * q_int(2 * m as i64, q) * (q - one)
        * (b * q2m * aa - a * q * q * v.shifted_b(q));
    let d1 = a * a * q.powi(4);
    let d2 = q4m * q4m * aa * aa;
    let d3 = -(a * (q.powi(3) + q) * q4m * aa);
    let den = guard_denominator(d1 + d2 + d3, &[d1, d2, d3], "C_even", 2 * m)?;
    Ok(num / den)
}

/// `C_{2m+1}` from the odd-index simplification.
pub fn recurrence_c_odd<T: Real>(m: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    let q = ctx.q();
    let a = v.a;
    let aa = v.shifted_a(q);
    let q2m = q.powi(2 * m as i32);
    let q4m = q2m * q2m;
    let num = -q2m * (q2m * aa - a * q) * (q2m * q * v.shifted_b(q) - v.b);
    let d1 = a * a * q;
    let d2 = q4m * q4m * q * aa * aa;
    let d3 = -(a * (q * q + T::one()) * q4m * aa);
    let den = guard_denominator(d1 + d2 + d3, &[d1, d2, d3], "C_odd", 2 * m + 1)?;
    Ok(num / den)
}

/// Monic polynomials `phi_0 ..= phi_n_max` from the three-term recurrence.
pub fn build_monic_sequence<T: Real>(
    n_max: usize,
    v: &CharVector<T>,
    ctx: &QContext<T>,
) -> Result<Vec<SymPolynomial<T>>> {
    let mut seq = Vec::with_capacity(n_max + 1);
    seq.push(SymPolynomial {
        degree: 0,
        coeffs: vec![T::one()],
    });
    if n_max == 0 {
        return Ok(seq);
    }
    seq.push(SymPolynomial {
        degree: 1,
        coeffs: vec![T::zero(), T::one()],
    });
    for n in 1..n_max {
        let c = recurrence_c(n, v, ctx)?;
        let cur = &seq[n].coeffs;
        let prev = &seq[n - 1].coeffs;
        let mut next = vec![T::zero(); n + 2];
        for (k, &ck) in cur.iter().enumerate() {
            next[k + 1] = ck;
        }
        for (k, &pk) in prev.iter().enumerate() {
            if pk != T::zero() {
                next[k] = next[k] - c * pk;
            }
        }
        seq.push(SymPolynomial {
            degree: n + 1,
            coeffs: next,
        });
    }
    Ok(seq)
}

pub fn build_monic<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<SymPolynomial<T>> {
    let mut seq = build_monic_sequence(n, v, ctx)?;
    Ok(seq.pop().expect("sequence holds n + 1 polynomials"))
}

/// Ratios `(a[2j+s+m-1] + c q^(2j+s+m-1)) / (b[2j+e+2] + d q^(2j+e+2))`, `j < [m/2]`.
fn explicit_ratios<T: Real>(m: usize, v: &CharVector<T>, q: T) -> Result<Vec<T>> {
    let half = m / 2;
    let s = sigma_parity(m as i64) as i64;
    let e: i64 = if m % 2 == 0 { -1 } else { 1 };
    (0..half as i64)
        .map(|j| {
            let up = 2 * j + s + m as i64 - 1;
            let lo = 2 * j + e + 2;
            let num = v.a * q_int(up, q) + v.c * q.powi(up as i32);
            let t1 = v.b * q_int(lo, q);
            let t2 = v.d * q.powi(lo as i32);
            let den = t1 + t2;
            if den.abs() <= T::lit(RESONANCE_RTOL) * t1.abs().max(t2.abs()) || den == T::zero() {
                return Err(QError::ZeroDenominator(format!(
                    "explicit form of degree {m}, factor j = {j}"
                )));
            }
            Ok(num / den)
        })
        .collect()
}

/// Explicit double-product sum for `S_m(a,b,c,d;x;q)`, with its term magnitude.
pub fn eval_explicit_terms<T: Real>(
    m: usize,
    v: &CharVector<T>,
    ctx: &QContext<T>,
    x: T,
) -> Result<Evaluation<T>> {
    let q = ctx.q();
    let half = m / 2;
    let ratios = explicit_ratios(m, v, q)?;
    // prefix[l] = prod_{j<l} ratios[j]
    let mut prefix = Vec::with_capacity(half + 1);
    prefix.push(T::one());
    for r in &ratios {
        let last = *prefix.last().expect("non-empty");
        prefix.push(last * *r);
    }
    let q2 = q * q;
    let mut sum = T::zero();
    let mut magnitude = T::zero();
    for k in 0..=half {
        let qpow = q.powi(((k as i64 - 1) * k as i64) as i32);
        let binom = q_binomial_in(half, k, q2)?;
        let term = qpow * x.powi((m - 2 * k) as i32) * binom * prefix[half - k];
        sum = sum + term;
        magnitude = magnitude + term.abs();
    }
    Ok(Evaluation {
        value: sum,
        magnitude,
    })
}

pub fn eval_explicit<T: Real>(m: usize, v: &CharVector<T>, ctx: &QContext<T>, x: T) -> Result<T> {
    eval_explicit_terms(m, v, ctx, x).map(|e| e.value)
}

/// Leading coefficient of the explicit sum (its `k = 0` product).
pub fn explicit_leading<T: Real>(m: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    Ok(explicit_ratios(m, v, ctx.q())?
        .into_iter()
        .fold(T::one(), |acc, r| acc * r))
}

/// The explicit sum divided by its own leading coefficient.
pub fn eval_explicit_monic<T: Real>(
    m: usize,
    v: &CharVector<T>,
    ctx: &QContext<T>,
    x: T,
) -> Result<Evaluation<T>> {
    let lead = explicit_leading(m, v, ctx)?;
    if lead == T::zero() || !lead.is_finite() {
        return Err(QError::ZeroDenominator(format!(
            "explicit form of degree {m} has a vanishing leading coefficient"
        )));
    }
    let e = eval_explicit_terms(m, v, ctx, x)?;
    Ok(Evaluation {
        value: e.value / lead,
        magnitude: e.magnitude / lead.abs(),
    })
}

fn require_ab<T: Real>(v: &CharVector<T>) -> Result<()> {
    if v.a == T::zero() || v.b == T::zero() {
        return Err(QError::Precondition(
            "the 2phi1 representation needs a != 0 and b != 0".into(),
        ));
    }
    Ok(())
}

/// Series data of `x^sigma 2phi1(q^(sigma-n), (a + c(q-1)) q^(n+sigma-1)/a;
/// (b + d(q-1)) q^(2 sigma+1)/b; q^2, -a q^2 x^2/b)`.
pub fn hypergeometric_spec<T: Real>(
    n: usize,
    v: &CharVector<T>,
    ctx: &QContext<T>,
    x: T,
) -> Result<HypSeriesSpec<T>> {
    require_ab(v)?;
    let q = ctx.q();
    let s = sigma_parity(n as i64) as i32;
    let ni = n as i32;
    let upper = vec![
        q.powi(s - ni),
        v.shifted_a(q) * q.powi(ni + s - 1) / v.a,
    ];
    let lower = vec![v.shifted_b(q) * q.powi(2 * s + 1) / v.b];
    let z = -(v.a * q * q * x * x) / v.b;
    Ok(HypSeriesSpec::new(upper, lower, q * q, z).terminating_after(n / 2))
}

fn eval_hypergeometric_terms<T: Real>(
    n: usize,
    v: &CharVector<T>,
    ctx: &QContext<T>,
    x: T,
) -> Result<Evaluation<T>> {
    let spec = hypergeometric_spec(n, v, ctx, x)?;
    let series = basic_hypergeometric_terms(&spec, ctx)?;
    let pre = if n % 2 == 1 { x } else { T::one() };
    Ok(Evaluation {
        value: pre * series.value,
        magnitude: pre.abs() * series.magnitude,
    })
}

/// `S_n` through its terminating `2phi1` representation (needs `a, b != 0`).
pub fn eval_hypergeometric<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>, x: T) -> Result<T> {
    eval_hypergeometric_terms(n, v, ctx, x).map(|e| e.value)
}

/// Factor turning the `2phi1` form into the monic polynomial:
///
/// `q^(s-m) (-b/a)^K (q^2, B; q^2)_K / (q^(s-m), A; q^2)_K`, `K = [m/2]`,
/// with `A`, `B` the upper and lower `2phi1` parameters.
pub fn monic_factor<T: Real>(m: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    require_ab(v)?;
    let q = ctx.q();
    let q2 = q * q;
    let half = m / 2;
    let s = sigma_parity(m as i64) as i32;
    let mi = m as i32;
    let upper = v.shifted_a(q) * q.powi(mi + s - 1) / v.a;
    let lower = v.shifted_b(q) * q.powi(2 * s + 1) / v.b;
    let num = q_pochhammer(q2, q2, half) * q_pochhammer(lower, q2, half);
    let den = q_pochhammer(q.powi(s - mi), q2, half) * q_pochhammer(upper, q2, half);
    if den == T::zero() || !den.is_finite() {
        return Err(QError::ZeroDenominator(format!(
            "monic normalization of degree {m}"
        )));
    }
    let ratio = -v.b / v.a;
    Ok(q.powi(s - mi) * ratio.powi(half as i32) * num / den)
}

/// Monic polynomial value via `monic_factor * eval_hypergeometric`.
pub fn eval_hypergeometric_monic<T: Real>(
    n: usize,
    v: &CharVector<T>,
    ctx: &QContext<T>,
    x: T,
) -> Result<Evaluation<T>> {
    let f = monic_factor(n, v, ctx)?;
    let e = eval_hypergeometric_terms(n, v, ctx, x)?;
    Ok(Evaluation {
        value: f * e.value,
        magnitude: f.abs() * e.magnitude,
    })
}

/// `D_q` on monomial coefficients: `x^k -> [k]_q x^(k-1)`.
pub fn dq_coeffs<T: Real>(coeffs: &[T], q: T) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| q_int(k as i64, q) * c)
        .collect()
}

/// `D_{1/q}` on monomial coefficients: `x^k -> q^(1-k) [k]_q x^(k-1)`.
pub fn dq_inv_coeffs<T: Real>(coeffs: &[T], q: T) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| q.powi(1 - k as i32) * q_int(k as i64, q) * c)
        .collect()
}

fn eval_coeffs<T: Real>(coeffs: &[T], x: T) -> (T, T) {
    let mut v = T::zero();
    let mut m = T::zero();
    for &c in coeffs.iter().rev() {
        v = v * x + c;
        m = m * x.abs() + c.abs();
    }
    (v, m)
}

/// Residual of the q-difference equation together with the largest of its
/// three term magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual<T> {
    pub residual: T,
    pub scale: T,
}

impl<T: Real> OdeResidual<T> {
    pub fn relative(&self) -> T {
        crate::real::scaled_difference(self.residual, T::zero(), self.scale)
    }
}

/// Coefficients of the three terms of the q-difference equation applied to
/// `coeffs`, computed by the exact maps of `D_q` and `D_{1/q}` on monomials.
pub fn qde_term_coeffs<T: Real>(
    coeffs: &[T],
    v: &CharVector<T>,
    lambda: T,
    sigma_coeff: T,
    q: T,
) -> [Vec<T>; 3] {
    let dd = dq_coeffs(&dq_inv_coeffs(coeffs, q), q);
    let d1 = dq_coeffs(coeffs, q);
    let len = coeffs.len() + 2;
    let mut t1 = vec![T::zero(); len];
    for (k, &c) in dd.iter().enumerate() {
        t1[k + 4] = t1[k + 4] + v.a * c;
        t1[k + 2] = t1[k + 2] + v.b * c;
    }
    let mut t2 = vec![T::zero(); len];
    for (k, &c) in d1.iter().enumerate() {
        t2[k + 3] = t2[k + 3] + v.c * c;
        t2[k + 1] = t2[k + 1] + v.d * c;
    }
    let mut t3 = vec![T::zero(); len];
    for (k, &c) in coeffs.iter().enumerate() {
        t3[k + 2] = t3[k + 2] + lambda * c;
        t3[k] = t3[k] + sigma_coeff * c;
    }
    [t1, t2, t3]
}

/// Residual of the defining equation for the monic `phi_n` at `x`.
pub fn ode_residual<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>, x: T) -> Result<OdeResidual<T>> {
    let phi = build_monic(n, v, ctx)?;
    residual_for(&phi, v, ctx, x)
}

pub fn residual_for<T: Real>(
    phi: &SymPolynomial<T>,
    v: &CharVector<T>,
    ctx: &QContext<T>,
    x: T,
) -> Result<OdeResidual<T>> {
    let n = phi.degree();
    let lambda = eigenvalue(n, v, ctx)?;
    let sigma = T::from_usize_lossy(sigma_parity(n as i64));
    let terms = qde_term_coeffs(phi.coeffs(), v, lambda, -(sigma * v.d), ctx.q());
    let mut residual = T::zero();
    let mut scale = T::zero();
    for t in &terms {
        let (val, mag) = eval_coeffs(t, x);
        residual = residual + val;
        scale = scale.max(mag);
    }
    Ok(OdeResidual { residual, scale })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthogonalityKind {
    PositiveDefinite,
    QuasiDefinite,
    Weak,
    Resonant,
}

impl OrthogonalityKind {
    pub fn label(&self) -> &'static str {
        match self {
            OrthogonalityKind::PositiveDefinite => "positive-definite",
            OrthogonalityKind::QuasiDefinite => "quasi-definite",
            OrthogonalityKind::Weak => "weak",
            OrthogonalityKind::Resonant => "resonant",
        }
    }
}

/// Sign scan of `C_1 ..= C_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification<T> {
    pub kind: OrthogonalityKind,
    /// `coefficients[i]` holds `C_{i+1}`, `None` where the denominator vanished.
    pub coefficients: Vec<Option<T>>,
    pub negative: Vec<usize>,
    pub zero: Vec<usize>,
    pub resonant: Vec<usize>,
}

/// A coefficient counts as zero when its numerator is below `tol_check` times
/// the magnitude of its additive terms.
pub fn classify_orthogonality<T: Real>(
    v: &CharVector<T>,
    ctx: &QContext<T>,
    n_max: usize,
) -> Classification<T> {
    let mut coefficients = Vec::with_capacity(n_max);
    let (mut negative, mut zero, mut resonant) = (Vec::new(), Vec::new(), Vec::new());
    for n in 1..=n_max {
        let p = recurrence_parts(n, v, ctx.q());
        if !p.den.is_finite() || p.den.abs() <= T::lit(RESONANCE_RTOL) * p.den_scale {
            resonant.push(n);
            coefficients.push(None);
            continue;
        }
        let c = p.num / p.den;
        if p.num.abs() <= ctx.tol_check() * p.num_scale {
            zero.push(n);
        } else if c < T::zero() {
            negative.push(n);
        }
        coefficients.push(Some(c));
    }
    let kind = if !resonant.is_empty() {
        OrthogonalityKind::Resonant
    } else if !zero.is_empty() {
        OrthogonalityKind::Weak
    } else if !negative.is_empty() {
        OrthogonalityKind::QuasiDefinite
    } else {
        OrthogonalityKind::PositiveDefinite
    };
    Classification {
        kind,
        coefficients,
        negative,
        zero,
        resonant,
    }
}
