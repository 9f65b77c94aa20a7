//! Named members of the symmetric family: generalized q-ultraspherical,
//! fifth and sixth kind q-Chebyshev, generalized q-Hermite.
//!
//! Each family carries its printed closed forms (recurrence coefficients,
//! weights, norm squares, q-difference equation) next to the values induced by
//! its characteristic vector, so the two can be compared.

use crate::error::{QError, Result};
use crate::jackson::{q_integral_symmetric, JacksonConfig};
use crate::qcore::{q_int, q_pochhammer, q_pochhammer_inf, sigma_parity, QContext};
use crate::real::{relative_difference, Real};
use crate::sympoly::{build_monic_sequence, recurrence_c, CharVector};
use crate::weights::{q_ratio_inf, WeightSpec};

/// Tolerance for agreement of two norm evaluations.
pub const NORM_AGREEMENT_TOL: f64 = 1e-8;
/// Deviation of a printed norm above which it is reported as a discrepancy.
pub const NORM_DISCREPANCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec<T> {
    Ultraspherical { alpha: T, beta: T },
    Chebyshev5,
    Chebyshev6,
    Hermite { p: T },
    Custom(CharVector<T>),
}

impl<T: Real> FamilySpec<T> {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Ultraspherical { .. } => "ultraspherical",
            FamilySpec::Chebyshev5 => "chebyshev5",
            FamilySpec::Chebyshev6 => "chebyshev6",
            FamilySpec::Hermite { .. } => "hermite",
            FamilySpec::Custom(_) => "custom",
        }
    }

    pub fn descriptor(&self, ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
        match *self {
            FamilySpec::Ultraspherical { alpha, beta } => make_ultraspherical(alpha, beta, ctx),
            FamilySpec::Chebyshev5 => make_chebyshev5(ctx),
            FamilySpec::Chebyshev6 => make_chebyshev6(ctx),
            FamilySpec::Hermite { p } => make_hermite(p, ctx),
            FamilySpec::Custom(v) => make_custom(v, ctx),
        }
    }

    /// `(alpha, beta)` of the continuous limit for the ultraspherical branch.
    pub fn limit_alpha_beta(&self) -> Option<(T, T)> {
        let half = T::lit(0.5);
        match *self {
            FamilySpec::Ultraspherical { alpha, beta } => Some((alpha, beta)),
            FamilySpec::Chebyshev5 => Some((T::one(), -half)),
            FamilySpec::Chebyshev6 => Some((T::one(), half)),
            _ => None,
        }
    }

    /// Characteristic vector of the `q -> 1` equation.
    pub fn limit_char_vector(&self) -> Result<CharVector<T>> {
        let two = T::lit(2.0);
        match *self {
            FamilySpec::Hermite { p } => CharVector::new(T::zero(), -T::one(), two, two * p),
            FamilySpec::Custom(v) => Ok(v),
            _ => {
                let (alpha, beta) = self.limit_alpha_beta().expect("ultraspherical branch");
                CharVector::new(
                    -T::one(),
                    T::one(),
                    -two * (alpha + beta + T::one()),
                    two * alpha,
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyDescriptor<T> {
    pub spec: FamilySpec<T>,
    /// `(alpha, beta)` for the ultraspherical branch, Chebyshev included.
    pub alpha_beta: Option<(T, T)>,
    pub p: Option<T>,
    pub v: CharVector<T>,
    /// Right endpoint of the symmetric support, when known.
    pub support: Option<T>,
    pub ctx: QContext<T>,
}

impl<T: Real> FamilyDescriptor<T> {
    pub fn name(&self) -> &'static str {
        self.spec.name()
    }

    pub fn support(&self) -> Result<T> {
        self.support
            .ok_or_else(|| QError::Precondition("family has no finite support endpoint".into()))
    }

    pub fn weight_spec(&self) -> Result<WeightSpec<T>> {
        if let Some(p) = self.p {
            let q = self.ctx.q();
            if !(p * (T::one() - q * q) < T::one()) {
                return Err(QError::Inadmissible(format!(
                    "Hermite weight needs p (1 - q^2) < 1, got p = {}",
                    p.as_f64()
                )));
            }
        }
        WeightSpec::new(self.v, self.support()?, self.ctx)
    }

    /// Printed closed-form norm square, if the family has one.
    pub fn closed_form_norm(&self, n: usize) -> Option<Result<T>> {
        if let Some(p) = self.p {
            return Some(norm_square_hermite(n, p, &self.ctx));
        }
        self.alpha_beta
            .map(|(al, be)| norm_square_ultraspherical(n, al, be, &self.ctx))
    }

    /// Printed family-specific recurrence coefficient, if any.
    pub fn printed_c(&self, n: usize) -> Option<Result<T>> {
        if let Some(p) = self.p {
            return Some(Ok(hermite_c(n, p, &self.ctx)));
        }
        self.alpha_beta
            .map(|(al, be)| ultraspherical_c(n, al, be, &self.ctx))
    }
}

fn ultraspherical_v<T: Real>(alpha: T, beta: T, q: T) -> Result<CharVector<T>> {
    let qq1 = q * (q + T::one());
    CharVector::new(
        -T::one(),
        T::one(),
        -qq1 * (alpha + beta + T::one()),
        alpha * qq1,
    )
}

/// `V = (-1, 1, -q(q+1)(alpha+beta+1), alpha q(q+1))` on `[-1, 1]`.
pub fn make_ultraspherical<T: Real>(alpha: T, beta: T, ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
    Ok(FamilyDescriptor {
        spec: FamilySpec::Ultraspherical { alpha, beta },
        alpha_beta: Some((alpha, beta)),
        p: None,
        v: ultraspherical_v(alpha, beta, ctx.q())?,
        support: Some(T::one()),
        ctx: *ctx,
    })
}

fn chebyshev<T: Real>(kind: FamilySpec<T>, top: i64, ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
    let q = ctx.q();
    let beta = q_int(top, q) / q_int(2, q) - T::lit(2.0);
    let mut d = make_ultraspherical(T::one(), beta, ctx)?;
    // c = -q[top]_q exactly, rather than through beta
    d.v.c = -q * q_int(top, q);
    d.spec = kind;
    Ok(d)
}

/// Ultraspherical with `alpha = 1`, `beta = [3]/[2] - 2`.
pub fn make_chebyshev5<T: Real>(ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
    chebyshev(FamilySpec::Chebyshev5, 3, ctx)
}

/// Ultraspherical with `alpha = 1`, `beta = [5]/[2] - 2`.
pub fn make_chebyshev6<T: Real>(ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
    chebyshev(FamilySpec::Chebyshev6, 5, ctx)
}

/// `V = (1 - q^2, -1, 1 + q, p(1 + q))` on `[-1/sqrt(1-q^2), 1/sqrt(1-q^2)]`.
pub fn make_hermite<T: Real>(p: T, ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
    let q = ctx.q();
    let one = T::one();
    Ok(FamilyDescriptor {
        spec: FamilySpec::Hermite { p },
        alpha_beta: None,
        p: Some(p),
        // (1-q)(1+q) + (1+q)(q-1) vanishes exactly in floating point
        v: CharVector::new((one - q) * (one + q), -one, one + q, p * (one + q))?,
        support: Some(one / (one - q * q).sqrt()),
        ctx: *ctx,
    })
}

/// Support is the positive root of `a x^2 + b`, when there is one.
pub fn make_custom<T: Real>(v: CharVector<T>, ctx: &QContext<T>) -> Result<FamilyDescriptor<T>> {
    v.validate()?;
    let r = -v.b / v.a;
    Ok(FamilyDescriptor {
        spec: FamilySpec::Custom(v),
        alpha_beta: None,
        p: None,
        v,
        support: (v.a != T::zero() && r > T::zero() && r.is_finite()).then(|| r.sqrt()),
        ctx: *ctx,
    })
}

/// Printed ultraspherical `C_{2m}` / `C_{2m+1}` with `theta = alpha + beta + 1`.
pub fn ultraspherical_c<T: Real>(n: usize, alpha: T, beta: T, ctx: &QContext<T>) -> Result<T> {
    let q = ctx.q();
    let one = T::one();
    let th = alpha + beta + one;
    let t = q * (q * q - one) * th + one;
    let m = (n / 2) as i32;
    let q2m = q.powi(2 * m);
    let (num, den) = if n % 2 == 0 {
        let num = q.powi(2 * m + 2)
            * (q2m - one)
            * (q2m * t + q * q * (alpha * (q - q.powi(3)) - one));
        let den = -(q * q + one) * q.powi(4 * m + 2) * t + q.powi(8 * m + 1) * t * t + q.powi(5);
        (num, den)
    } else {
        let inner = alpha * q.powi(5) + (beta + one) * q.powi(3) + q * q - q * th + one;
        let num = q2m
            * (-(q2m * inner)
                + (alpha * q * (q * q - one) + one) * q.powi(4 * m + 1) * t
                + q);
        let den = -(q * q + one) * q.powi(4 * m) * t + q.powi(8 * m + 1) * t * t + q;
        (num, den)
    };
    if den == T::zero() {
        return Err(QError::ZeroDenominator(format!("ultraspherical C_{n}")));
    }
    Ok(num / den)
}

/// Printed Hermite `C_{2m}` / `C_{2m+1}`.
pub fn hermite_c<T: Real>(n: usize, p: T, ctx: &QContext<T>) -> T {
    let q = ctx.q();
    let one = T::one();
    let m = (n / 2) as i32;
    let q2m1 = q * q - one;
    if n % 2 == 0 {
        -(p * q2m1 - one) * q.powi(2 * m - 1) * (q.powi(2 * m) - one) / q2m1
    } else {
        ((-p * q * q + p + one) * q.powi(4 * m + 1) - q.powi(2 * m)) / q2m1
    }
}

/// Printed ultraspherical norm square `d^2_n`.
///
/// The printed prefactor `1/(alpha q^3 - q theta + 1)` and the leading factor
/// `1 - T/(q^2 S)` of `(T/(q^2 S); q^2)_{m+1}` cancel identically
/// (`q^2 S - T = (q^2 - 1)(alpha q^3 - q theta + 1)`); the quotient is
/// evaluated as `(q^2 - 1)/(q^2 S)` so the expression stays finite where both
/// vanish.
pub fn norm_square_ultraspherical<T: Real>(n: usize, alpha: T, beta: T, ctx: &QContext<T>) -> Result<T> {
    let q = ctx.q();
    let one = T::one();
    let (q2, q3, q4) = (q * q, q * q * q, q * q * q * q);
    let th = alpha + beta + one;
    let t = th * q * (q2 - one) + one;
    let s = alpha * q * (q2 - one) + one;
    let m = n / 2;
    let mi = m as i32;
    let qf = q_pochhammer::<T>;
    let pre = (q - one)
        * (q * (q + one) * (alpha + beta) - one)
        * (q * (q + one) * th - one)
        * s.powi(mi + 1)
        / (q + one)
        * (q2 - one)
        / (q2 * s);
    let value = if n % 2 == 0 {
        let num = qf(q2, q2, m) * qf(q * s, q2, m) * qf(t / q, q2, m) * qf(t / s, q2, m);
        let den = qf(t / q3, q4, m + 1) * qf(t / q, q4, m) * qf(t / q, q4, m + 1) * qf(q * t, q4, m);
        num / den * q.powi(mi * (2 * mi - 1) - 2) * pre
    } else {
        let num = qf(q2, q2, m) * qf(q * s, q2, m + 1) * qf(t / q, q2, m + 1) * qf(t / s, q2, m);
        let tq = qf(t / q, q4, m + 1);
        let den = qf(q * t, q4, m + 1) * qf(t / q3, q4, m + 1) * tq * tq;
        num / den * q.powi(2 * mi * mi + mi - 2) * pre
    };
    if !value.is_finite() {
        return Err(QError::ZeroDenominator(format!("ultraspherical d^2_{n}")));
    }
    Ok(value)
}

/// Printed Hermite norm square `d^2_n`, evaluated as displayed.
pub fn norm_square_hermite<T: Real>(n: usize, p: T, ctx: &QContext<T>) -> Result<T> {
    let q = ctx.q();
    let one = T::one();
    let q2 = q * q;
    let big_p = -p * q2 + p + one;
    let m = n / 2;
    let mi = m as i32;
    let half = T::lit(0.5);
    let common = half * big_p.powi(mi) * q_pochhammer(-one, q, m + 1) * q_pochhammer(q, q, m);
    let arg = -p * q2 * q + p * q + q;
    let value = if n % 2 == 0 {
        common * q.powi(mi * (2 * mi - 1)) / (q2 - one).powi(2 * mi) * q_pochhammer(arg, q2, m)
    } else {
        common * q.powi(mi * (2 * mi + 1)) / (q2 - one).powi(2 * mi + 1) * q_pochhammer(arg, q2, m + 1)
    };
    if !value.is_finite() {
        return Err(QError::ZeroDenominator(format!("Hermite d^2_{n}")));
    }
    Ok(value)
}

/// `prod_{i=1}^{n} C_i`.
pub fn favard_norm<T: Real>(n: usize, v: &CharVector<T>, ctx: &QContext<T>) -> Result<T> {
    (1..=n).try_fold(T::one(), |acc, i| Ok(acc * recurrence_c(i, v, ctx)?))
}

/// Comparison of the printed reduction claims at `p = 0` with the computed ones.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteReductionReport<T> {
    /// Largest relative gap between `C_n` and `q^(n-1)(1-q^n)/(1-q^2)`.
    pub c_deviation: T,
    pub c_passed: bool,
    pub sample_points: Vec<T>,
    /// `W*(x; 0)` as computed from the characteristic vector.
    pub weight_computed: Vec<T>,
    /// `1/((1-q^2) x^2; q^2)_inf`, the printed reduction.
    pub weight_printed: Vec<T>,
    /// `(q^2 (1-q^2) x^2; q^2)_inf`, the discrete q-Hermite I weight.
    pub weight_product: Vec<T>,
    pub printed_deviation: T,
    pub product_deviation: T,
    pub weight_passed: bool,
}

/// Tolerances pinned for the reduction check.
pub const REDUCTION_C_TOL: f64 = 1e-13;
pub const REDUCTION_WEIGHT_TOL: f64 = 1e-12;

/// Checks `C_n = q^(n-1)(1-q^n)/(1-q^2)` for `n = 1..=n_max` at `p = 0` and
/// compares `W*(x; 0)` with the printed reduction at 20 interior points
/// `x = alpha (k+1)/21`.
pub fn hermite_p0_reduction_check<T: Real>(n_max: usize, ctx: &QContext<T>) -> Result<HermiteReductionReport<T>> {
    let q = ctx.q();
    let one = T::one();
    let fam = make_hermite(T::zero(), ctx)?;
    let mut c_deviation = T::zero();
    for n in 1..=n_max {
        let target = q.powi(n as i32 - 1) * (one - q.powi(n as i32)) / (one - q * q);
        let general = recurrence_c(n, &fam.v, ctx)?;
        let printed = hermite_c(n, T::zero(), ctx);
        c_deviation = c_deviation
            .max(relative_difference(general, target))
            .max(relative_difference(printed, target));
    }
    let spec = fam.weight_spec()?;
    let alpha = spec.support;
    let q2 = q * q;
    let sample_points: Vec<T> = (0..20)
        .map(|k| alpha * T::from_usize_lossy(k + 1) / T::lit(21.0))
        .collect();
    let mut weight_computed = Vec::new();
    let mut weight_printed = Vec::new();
    let mut weight_product = Vec::new();
    let mut printed_deviation = T::zero();
    let mut product_deviation = T::zero();
    for &x in &sample_points {
        let x2 = x * x;
        let w = spec.weight_star(x)?;
        let printed = one / q_pochhammer_inf((one - q2) * x2, q2, ctx.eps_term(), ctx.max_terms())?;
        let product = q_pochhammer_inf(q2 * (one - q2) * x2, q2, ctx.eps_term(), ctx.max_terms())?;
        printed_deviation = printed_deviation.max(relative_difference(w, printed));
        product_deviation = product_deviation.max(relative_difference(w, product));
        weight_computed.push(w);
        weight_printed.push(printed);
        weight_product.push(product);
    }
    Ok(HermiteReductionReport {
        c_deviation,
        c_passed: c_deviation <= T::lit(REDUCTION_C_TOL),
        sample_points,
        weight_computed,
        weight_printed,
        weight_product,
        printed_deviation,
        product_deviation,
        weight_passed: printed_deviation <= T::lit(REDUCTION_WEIGHT_TOL),
    })
}

/// Gram matrix `G[n][m] = int_{-alpha}^{alpha} W* phi_n phi_m d_q x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    pub entries: Vec<Vec<T>>,
}

impl<T: Real> GramMatrix<T> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// `max |G[n][m]| / sqrt(G[n][n] G[m][m])` over `n != m`.
    pub fn max_off_diagonal(&self) -> T {
        let mut worst = T::zero();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                if i != j {
                    let s = (self.entries[i][i] * self.entries[j][j]).abs().sqrt();
                    worst = worst.max(crate::real::scaled_difference(g, T::zero(), s));
                }
            }
        }
        worst
    }

    /// True when every entry with `n + m` odd is exactly zero.
    pub fn odd_entries_vanish(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &g)| (i + j) % 2 == 0 || g == T::zero())
        })
    }

    /// `G[n][n] / G[0][0]`.
    pub fn relative_norm(&self, n: usize) -> T {
        self.entries[n][n] / self.entries[0][0]
    }
}

fn check_same_q<T: Real>(fam: &FamilyDescriptor<T>, cfg: &JacksonConfig<T>) -> Result<()> {
    if fam.ctx.q() != cfg.ctx().q() {
        return Err(QError::Precondition(
            "family and integration config use different q".into(),
        ));
    }
    Ok(())
}

/// `G[n][m] = int_{-alpha}^{alpha} W*(x) phi_n(x) phi_m(x) d_q x` for `n, m <= n_max`.
///
/// The truncation is widened beyond `cfg` when `W*` decays slowly at the origin.
pub fn orthogonality_matrix<T: Real>(
    fam: &FamilyDescriptor<T>,
    n_max: usize,
    cfg: &JacksonConfig<T>,
) -> Result<GramMatrix<T>> {
    check_same_q(fam, cfg)?;
    let spec = fam.weight_spec()?;
    spec.check_admissible(cfg.n_terms())?;
    let depth = spec.jackson_depth()?;
    let widened;
    let cfg = if depth > cfg.n_terms() {
        widened = JacksonConfig::with_n_terms(*cfg.ctx(), depth)?;
        &widened
    } else {
        cfg
    };
    let polys = build_monic_sequence(n_max, &fam.v, &fam.ctx)?;
    let w = |t: T| spec.weight_star(t).unwrap_or(T::nan());
    let mut entries = vec![vec![T::zero(); n_max + 1]; n_max + 1];
    for i in 0..=n_max {
        for j in i..=n_max {
            let (pi, pj) = (&polys[i], &polys[j]);
            let g = q_integral_symmetric(|t| w(t) * pi.eval(t) * pj.eval(t), spec.support, cfg)?.value;
            entries[i][j] = g;
            entries[j][i] = g;
        }
    }
    Ok(GramMatrix { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormStatus {
    /// All available evaluations agree.
    Agree,
    /// Favard and quadrature agree, the printed closed form does not.
    PaperDiscrepancy,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormTriple<T> {
    pub n: usize,
    pub closed_form: Option<T>,
    pub favard: T,
    pub quadrature: T,
    pub favard_vs_quadrature: T,
    pub closed_vs_favard: Option<T>,
    pub closed_vs_quadrature: Option<T>,
    pub status: NormStatus,
}

/// Compares the printed norm, the Favard product and the Jackson ratio for
/// `n = 0..=n_max`.
pub fn norm_triple_check<T: Real>(
    fam: &FamilyDescriptor<T>,
    n_max: usize,
    cfg: &JacksonConfig<T>,
) -> Result<Vec<NormTriple<T>>> {
    let gram = orthogonality_matrix(fam, n_max, cfg)?;
    let agree = T::lit(NORM_AGREEMENT_TOL);
    let flag = T::lit(NORM_DISCREPANCY_TOL);
    (0..=n_max)
        .map(|n| {
            let favard = favard_norm(n, &fam.v, &fam.ctx)?;
            let quadrature = gram.relative_norm(n);
            let fq = relative_difference(favard, quadrature);
            let closed = fam.closed_form_norm(n).transpose()?;
            let cf = closed.map(|c| relative_difference(c, favard));
            let cq = closed.map(|c| relative_difference(c, quadrature));
            let status = match (cf, cq) {
                _ if !(fq <= agree) => NormStatus::Fail,
                (Some(a), Some(b)) if a <= agree && b <= agree => NormStatus::Agree,
                (Some(a), Some(b)) if a > flag && b > flag => NormStatus::PaperDiscrepancy,
                (Some(_), Some(_)) => NormStatus::Fail,
                _ => NormStatus::Agree,
            };
            Ok(NormTriple {
                n,
                closed_form: closed,
                favard,
                quadrature,
                favard_vs_quadrature: fq,
                closed_vs_favard: cf,
                closed_vs_quadrature: cq,
                status,
            })
        })
        .collect()
}

/// Coefficients of a q-difference equation
/// `x^2 (a x^2 + b) D_q D_{1/q} + x (c x^2 + d) D_q + (lambda x^2 - s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub lambda: T,
    pub constant: T,
}

impl<T: Real> EquationCoefficients<T> {
    fn to_array(self) -> [T; 6] {
        [self.a, self.b, self.c, self.d, self.lambda, self.constant]
    }

    /// Largest coefficientwise gap, relative to the larger of the two entries.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .fold(T::zero(), |m, (&x, &y)| m.max(relative_difference(x, y)))
    }
}

/// The equation induced by the characteristic vector at degree `n`.
pub fn induced_equation<T: Real>(v: &CharVector<T>, n: usize, ctx: &QContext<T>) -> Result<EquationCoefficients<T>> {
    let sigma = T::from_usize_lossy(sigma_parity(n as i64));
    Ok(EquationCoefficients {
        a: v.a,
        b: v.b,
        c: v.c,
        d: v.d,
        lambda: crate::sympoly::eigenvalue(n, v, ctx)?,
        constant: sigma * v.d,
    })
}

/// The family's q-difference equation as displayed, when it has one.
pub fn printed_equation<T: Real>(fam: &FamilyDescriptor<T>, n: usize) -> Option<EquationCoefficients<T>> {
    let q = fam.ctx.q();
    let one = T::one();
    let ni = n as i64;
    let sigma = T::from_usize_lossy(sigma_parity(ni));
    let qq1 = q * (q + one);
    match fam.spec {
        FamilySpec::Ultraspherical { alpha, beta } => {
            let th = one + alpha + beta;
            Some(EquationCoefficients {
                a: -one,
                b: one,
                c: -qq1 * th,
                d: qq1 * alpha,
                lambda: -q_int(ni, q) * (-th * qq1 + q_int(1 - ni, q)),
                constant: alpha * qq1 * sigma,
            })
        }
        FamilySpec::Chebyshev5 | FamilySpec::Chebyshev6 => {
            let top = if matches!(fam.spec, FamilySpec::Chebyshev5) { 3 } else { 5 };
            let c = -q * q_int(top, q);
            Some(EquationCoefficients {
                a: -one,
                b: one,
                c,
                d: qq1,
                lambda: q_int(ni, q) * (-c - q_int(1 - ni, q)),
                constant: qq1 * sigma,
            })
        }
        FamilySpec::Hermite { p } => Some(EquationCoefficients {
            a: one - q * q,
            b: -one,
            c: one + q,
            d: p * (one + q),
            lambda: q * q_int(-ni, q),
            constant: sigma * p,
        }),
        FamilySpec::Custom(_) => None,
    }
}

/// Printed `2phi1` parameters `(upper, lower, argument / x^2)` of the family.
pub fn printed_hypergeometric_parameters<T: Real>(fam: &FamilyDescriptor<T>, n: usize) -> Option<([T; 2], T, T)> {
    let q = fam.ctx.q();
    let one = T::one();
    let s = sigma_parity(n as i64) as i32;
    let ni = n as i32;
    let first = q.powi(s - ni);
    let lower_pow = q.powi(2 * s + 1);
    let upper_pow = q.powi(ni + s - 1);
    match fam.spec {
        FamilySpec::Ultraspherical { alpha, beta } => {
            let th = alpha + beta + one;
            Some((
                [first, upper_pow * (th * q * (q * q - one) + one)],
                lower_pow * (alpha * q * (q * q - one) + one),
                q * q,
            ))
        }
        FamilySpec::Chebyshev5 => Some((
            [first, upper_pow * (q.powi(4) - q + one)],
            lower_pow * (q.powi(3) - q + one),
            q * q,
        )),
        FamilySpec::Chebyshev6 => Some((
            [first, upper_pow * (q.powi(6) - q + one)],
            lower_pow * (q.powi(3) - q + one),
            q * q,
        )),
        FamilySpec::Hermite { p } => Some((
            [first, T::zero()],
            lower_pow * (-p * q * q + p + one),
            q * q * (one - q * q),
        )),
        FamilySpec::Custom(_) => None,
    }
}

/// Printed `W*` closed forms: the ultraspherical display built from
/// `A^2 = (q - q^3)(alpha + beta + 1) - 1` and `B^2 = alpha (q^3 - q) + 1`,
/// and the Hermite display with base `p(1 - q^2) + 1`.
pub fn printed_weight_star<T: Real>(fam: &FamilyDescriptor<T>, x: T) -> Option<Result<T>> {
    let ctx = &fam.ctx;
    let q = ctx.q();
    let one = T::one();
    let q2 = q * q;
    let x2 = x * x;
    let expo = x2.ln() / (T::lit(2.0) * q.ln());
    let inf = |z: T| q_pochhammer_inf(z, q2, ctx.eps_term(), ctx.max_terms());
    if let Some(p) = fam.p {
        let base = p * (one - q2) + one;
        return Some(inf(q2 * (one - q2) * x2).map(|prod| base.powf(expo) * prod));
    }
    let (alpha, beta) = fam.alpha_beta?;
    let a2 = (q - q2 * q) * (alpha + beta + one) - one;
    let b2 = alpha * (q2 * q - q) + one;
    Some(q_ratio_inf(q2 * x2, -a2 * x2 / b2, q2, ctx).map(|r| b2.powf(expo) * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sympoly::{eigenvalue, hypergeometric_spec};
    use approx::assert_relative_eq;

    fn ctx(q: f64) -> QContext<f64> {
        QContext::new(q).unwrap()
    }

    fn cfg(q: f64) -> JacksonConfig<f64> {
        JacksonConfig::new(ctx(q)).unwrap()
    }

    fn named(q: f64) -> Vec<FamilyDescriptor<f64>> {
        let c = ctx(q);
        vec![
            make_ultraspherical(0.4, 0.7, &c).unwrap(),
            make_chebyshev5(&c).unwrap(),
            make_chebyshev6(&c).unwrap(),
            make_hermite(0.0, &c).unwrap(),
            make_hermite(0.3, &c).unwrap(),
        ]
    }

    #[test]
    fn chebyshev_vectors() {
        let q = 0.5;
        let c = ctx(q);
        let f5 = make_chebyshev5(&c).unwrap();
        assert_eq!(f5.v.c, -q * (q * q + q + 1.0));
        assert_eq!(f5.v.d, q * (q + 1.0));
        let f6 = make_chebyshev6(&c).unwrap();
        assert_relative_eq!(f6.v.c, -q * (1.0 + q + q * q + q.powi(3) + q.powi(4)), max_relative = 1e-15);
        let (al, be) = f5.alpha_beta.unwrap();
        let u = make_ultraspherical(al, be, &c).unwrap();
        assert_relative_eq!(u.v.c, f5.v.c, max_relative = 1e-15);
        assert_eq!(u.v.d, f5.v.d);
    }

    #[test]
    fn hermite_support_and_vector() {
        let q = 0.5;
        let f = make_hermite(0.3, &ctx(q)).unwrap();
        assert_relative_eq!(f.support.unwrap(), 1.0 / (1.0f64 - 0.25).sqrt(), max_relative = 1e-15);
        assert_eq!(f.v.shifted_a(q), 0.0);
    }

    #[test]
    fn printed_c_matches_general() {
        for q in [0.3, 0.5, 0.9] {
            for fam in named(q) {
                for n in 0..=20 {
                    let printed = fam.printed_c(n).unwrap().unwrap();
                    let general = recurrence_c(n, &fam.v, &fam.ctx).unwrap();
                    if n == 0 {
                        assert!(printed.abs() < 1e-15 && general.abs() < 1e-12);
                        continue;
                    }
                    assert_relative_eq!(printed, general, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn favard_examples() {
        let q = 0.5;
        let c = ctx(q);
        let v = make_hermite(0.0, &c).unwrap().v;
        assert_eq!(favard_norm(0, &v, &c).unwrap(), 1.0);
        assert_relative_eq!(favard_norm(1, &v, &c).unwrap(), 2.0 / 3.0, max_relative = 1e-14);
        let by_hand: f64 = (1..=4)
            .map(|n| q.powi(n - 1) * (1.0 - q.powi(n)) / (1.0 - q * q))
            .product();
        assert_relative_eq!(favard_norm(4, &v, &c).unwrap(), by_hand, max_relative = 1e-13);
    }

    #[test]
    fn ultraspherical_norm_matches_favard() {
        for q in [0.3, 0.5] {
            let c = ctx(q);
            let f = make_ultraspherical(0.4, 0.7, &c).unwrap();
            assert_relative_eq!(norm_square_ultraspherical(0, 0.4, 0.7, &c).unwrap(), 1.0, max_relative = 1e-12);
            for n in 0..=8 {
                let closed = norm_square_ultraspherical(n, 0.4, 0.7, &c).unwrap();
                let fav = favard_norm(n, &f.v, &c).unwrap();
                assert_relative_eq!(closed, fav, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn hermite_norm_even_matches_favard() {
        let q = 0.5;
        let c = ctx(q);
        for p in [0.0, 0.3] {
            let f = make_hermite(p, &c).unwrap();
            assert_relative_eq!(norm_square_hermite(0, p, &c).unwrap(), 1.0, max_relative = 1e-14);
            for n in (0..=10).step_by(2) {
                assert_relative_eq!(
                    norm_square_hermite(n, p, &c).unwrap(),
                    favard_norm(n, &f.v, &c).unwrap(),
                    max_relative = 1e-10
                );
            }
            // odd degrees come out with the opposite sign
            for n in (1..=9).step_by(2) {
                assert_relative_eq!(
                    norm_square_hermite(n, p, &c).unwrap(),
                    -favard_norm(n, &f.v, &c).unwrap(),
                    max_relative = 1e-10
                );
            }
        }
    }

    // G[0][10] / sqrt(G[0][0] G[10][10]) amplifies a relative perturbation of
    // the C_k by about 1 / sqrt(prod C_k), near 1e8 here, so f64 stops near 1e-9.
    #[test]
    fn gram_matrix_hermite() {
        let q = 0.5;
        let fam = make_hermite(0.0, &ctx(q)).unwrap();
        let g = orthogonality_matrix(&fam, 10, &cfg(q)).unwrap();
        assert!(g.odd_entries_vanish());
        assert!(g.max_off_diagonal() <= 1e-8, "{}", g.max_off_diagonal());
        for n in 0..=10 {
            assert_relative_eq!(g.relative_norm(n), favard_norm(n, &fam.v, &fam.ctx).unwrap(), max_relative = 1e-9);
        }
    }

    #[test]
    fn gram_matrix_double_double() {
        use crate::DoubleDouble;
        let c = QContext::new(DoubleDouble::from(0.5)).unwrap();
        let cfg = JacksonConfig::new(c).unwrap();
        let fams = [
            make_hermite(DoubleDouble::from(0.0), &c).unwrap(),
            make_hermite(DoubleDouble::from(0.3), &c).unwrap(),
            make_ultraspherical(DoubleDouble::from(0.4), DoubleDouble::from(0.7), &c).unwrap(),
            make_chebyshev5(&c).unwrap(),
            make_chebyshev6(&c).unwrap(),
        ];
        for fam in &fams {
            let g = orthogonality_matrix(fam, 10, &cfg).unwrap();
            assert!(g.odd_entries_vanish());
            assert!(g.max_off_diagonal() <= DoubleDouble::from(1e-20), "{}: {:?}", fam.name(), g.max_off_diagonal());
        }
    }

    #[test]
    fn gram_requires_admissible_weight() {
        let q = 0.5;
        let fam = make_hermite(5.0, &ctx(q)).unwrap();
        assert!(matches!(orthogonality_matrix(&fam, 3, &cfg(q)), Err(QError::Inadmissible(_))));
        let fam = make_hermite(0.0, &ctx(q)).unwrap();
        assert!(matches!(orthogonality_matrix(&fam, 3, &cfg(0.4)), Err(QError::Precondition(_))));
    }

    #[test]
    fn norm_triples() {
        let q = 0.5;
        let c = cfg(q);
        let u = make_ultraspherical(0.4, 0.7, &ctx(q)).unwrap();
        for t in norm_triple_check(&u, 8, &c).unwrap() {
            assert_eq!(t.status, NormStatus::Agree, "{t:?}");
        }
        let h = make_hermite(0.3, &ctx(q)).unwrap();
        for t in norm_triple_check(&h, 8, &c).unwrap() {
            let expect = if t.n % 2 == 0 { NormStatus::Agree } else { NormStatus::PaperDiscrepancy };
            assert_eq!(t.status, expect, "{t:?}");
        }
    }

    #[test]
    fn reduction_report() {
        for q in [0.3, 0.5, 0.9] {
            let r = hermite_p0_reduction_check(20, &ctx(q)).unwrap();
            assert!(r.c_passed, "{}", r.c_deviation);
            // the computed weight is the discrete q-Hermite I product
            assert!(r.product_deviation <= 1e-12, "{}", r.product_deviation);
            assert!(!r.weight_passed);
        }
    }

    #[test]
    fn family_equations() {
        let q = 0.5;
        for fam in named(q) {
            for n in 0..10 {
                let printed = printed_equation(&fam, n).unwrap();
                let induced = induced_equation(&fam.v, n, &fam.ctx).unwrap();
                let dev = printed.max_deviation(&induced);
                if fam.p.is_some() && n > 0 {
                    // printed lambda and constant lack the factor 1 + q
                    assert!(dev > 0.1);
                    assert_relative_eq!(induced.lambda, (1.0 + q) * printed.lambda, max_relative = 1e-13);
                } else {
                    assert!(dev <= 1e-13, "{} n={n}: {dev}", fam.name());
                }
            }
        }
    }

    #[test]
    fn eigenvalue_of_hermite() {
        let q = 0.5;
        let f = make_hermite(0.0, &ctx(q)).unwrap();
        for n in 0..8i64 {
            let lam = eigenvalue(n as usize, &f.v, &f.ctx).unwrap();
            assert_relative_eq!(lam, (1.0 + q) * q * q_int(-n, q), max_relative = 1e-13, epsilon = 1e-15);
        }
    }

    #[test]
    fn hypergeometric_parameters_match_display() {
        for q in [0.3, 0.5, 0.9] {
            for fam in named(q) {
                for n in 0..8 {
                    let (up, lo, z) = printed_hypergeometric_parameters(&fam, n).unwrap();
                    let s = hypergeometric_spec(n, &fam.v, &fam.ctx, 1.0).unwrap();
                    for (x, y) in up.iter().zip(&s.upper) {
                        assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
                    }
                    assert!((lo - s.lower[0]).abs() <= 1e-14 * lo.abs());
                    assert!((z - s.argument).abs() <= 1e-14 * z.abs());
                }
            }
        }
    }

    #[test]
    fn printed_weights_match_computed() {
        for q in [0.3, 0.5, 0.9] {
            for fam in named(q) {
                let spec = fam.weight_spec().unwrap();
                for x in spec.grid(20).into_iter().skip(1) {
                    let printed = printed_weight_star(&fam, x).unwrap().unwrap();
                    assert_relative_eq!(spec.weight_star(x).unwrap(), printed, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn custom_support() {
        let c = ctx(0.5);
        let f = make_custom(CharVector::new(-4.0, 1.0, 1.0, 0.0).unwrap(), &c).unwrap();
        assert_eq!(f.support, Some(0.5));
        let g = make_custom(CharVector::new(1.0, 1.0, 1.0, 0.0).unwrap(), &c).unwrap();
        assert_eq!(g.support, None);
        assert!(g.weight_spec().is_err());
    }
}
