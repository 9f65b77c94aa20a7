use qsympoly::classical::{continuous_weight, limit_convergence_report, LimitProbe, LimitQuantity};
use qsympoly::families::{
    favard_norm, norm_triple_check, orthogonality_matrix, FamilyDescriptor, FamilySpec, NormStatus,
    NORM_AGREEMENT_TOL,
};
use qsympoly::jackson::JacksonConfig;
use qsympoly::qcore::QContext;
use qsympoly::real::relative_difference;
use qsympoly::sympoly::{
    build_monic, classify_orthogonality, delta, eigenvalue, eval_explicit_monic,
    eval_hypergeometric_monic, ode_residual, recurrence_c, CharVector,
};
use qsympoly::weights::boundary_vanishing_check;
use qsympoly::{QError, Real};
use serde_json::{Map, Value};

use crate::args::{Command, ExportKind, FamilyArgs, FamilyName, PointArgs, Suite};
use crate::report::{json_param, Cell, Report};
use crate::Failure;

/// Largest degree accepted on the command line.
pub const N_MAX_LIMIT: usize = 64;

pub const TOL_EVAL: f64 = 1e-10;
pub const TOL_ODE: f64 = 1e-10;
pub const TOL_ORTHO: f64 = 1e-10;
pub const TOL_PEARSON: f64 = 1e-11;
pub const TOL_LIMIT: f64 = 1e-3;
pub const TOL_BOUNDARY: f64 = 1e-12;

const PEARSON_POINTS: usize = 20;
const ODE_POINTS: usize = 16;
// even, so the origin is skipped as well
const DEFAULT_EXPORT_POINTS: usize = 100;
const LIMIT_X: f64 = 0.3;

/// Library errors caused by the requested parameters are usage errors; the
/// rest are numerical failures.
fn classify(e: QError) -> Failure {
    match e {
        QError::InvalidContext(_)
        | QError::OutOfRange(_)
        | QError::DegenerateParameters
        | QError::InvalidWeightBase { .. }
        | QError::Domain(_)
        | QError::Precondition(_)
        | QError::Inadmissible(_) => Failure::Usage(e.to_string()),
        _ => Failure::Numerical(e.to_string()),
    }
}

fn usage<S: Into<String>>(msg: S) -> Failure {
    Failure::Usage(msg.into())
}

fn check_n(n: usize, flag: &str) -> Result<usize, Failure> {
    if n > N_MAX_LIMIT {
        return Err(usage(format!("{flag} = {n} exceeds {N_MAX_LIMIT}")));
    }
    Ok(n)
}

fn parse_custom(text: &str) -> Result<[f64; 4], Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(usage(format!("--custom needs four values a,b,c,d, got {text:?}")));
    }
    let mut out = [0.0; 4];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p
            .parse::<f64>()
            .map_err(|_| usage(format!("--custom: {p:?} is not a number")))?;
        if !o.is_finite() {
            return Err(usage("--custom values must be finite"));
        }
    }
    Ok(out)
}

fn family_spec<T: Real>(fa: &FamilyArgs) -> Result<FamilySpec<T>, Failure> {
    if let Some(text) = &fa.custom {
        let [a, b, c, d] = parse_custom(text)?;
        let v = CharVector::new(T::lit(a), T::lit(b), T::lit(c), T::lit(d)).map_err(classify)?;
        return Ok(FamilySpec::Custom(v));
    }
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| usage(format!("--family ultraspherical needs {flag}")))
    };
    match fa.family {
        None => Err(usage("select a family with --family or --custom a,b,c,d")),
        Some(FamilyName::Ultraspherical) => Ok(FamilySpec::Ultraspherical {
            alpha: T::lit(need(fa.alpha, "--alpha")?),
            beta: T::lit(need(fa.beta, "--beta")?),
        }),
        Some(FamilyName::Chebyshev5) => Ok(FamilySpec::Chebyshev5),
        Some(FamilyName::Chebyshev6) => Ok(FamilySpec::Chebyshev6),
        Some(FamilyName::Hermite) => Ok(FamilySpec::Hermite {
            p: T::lit(fa.p.unwrap_or(0.0)),
        }),
    }
}

fn context<T: Real>(q: f64) -> Result<QContext<T>, Failure> {
    if !(q > 0.0 && q < 1.0) {
        return Err(usage(format!("q must lie in (0, 1), got {q}")));
    }
    QContext::new(T::lit(q)).map_err(classify)
}

fn family<T: Real>(fa: &FamilyArgs) -> Result<FamilyDescriptor<T>, Failure> {
    let ctx = context::<T>(fa.q)?;
    family_spec(fa)?.descriptor(&ctx).map_err(classify)
}

fn family_meta<T: Real>(fa: &FamilyArgs, fam: &FamilyDescriptor<T>) -> Map<String, Value> {
    let mut params = Map::new();
    if let Some(text) = &fa.custom {
        if let Ok(v) = parse_custom(text) {
            params.insert("custom".into(), Value::Array(v.iter().map(|&x| json_param(x)).collect()));
        }
    }
    if let FamilySpec::Ultraspherical { .. } = fam.spec {
        for (k, v) in [("alpha", fa.alpha), ("beta", fa.beta)] {
            if let Some(v) = v {
                params.insert(k.into(), json_param(v));
            }
        }
    }
    if let Some(p) = fam.p {
        params.insert("p".into(), json_param(p.as_f64()));
    }
    let mut meta = Map::new();
    meta.insert("family".into(), Value::from(fam.name()));
    meta.insert("parameters".into(), Value::Object(params));
    meta.insert("q".into(), json_param(fa.q));
    meta.insert(
        "char_vector".into(),
        Value::Array(fam.v.to_array().iter().map(|c| json_param(c.as_f64())).collect()),
    );
    if let Some(s) = fam.support {
        meta.insert("support".into(), json_param(s.as_f64()));
    }
    meta
}

fn points<T: Real>(pa: &PointArgs, support: Option<T>) -> Result<Vec<f64>, Failure> {
    let xs = if let Some(g) = &pa.grid {
        parse_grid(g)?
    } else {
        pa.x.clone()
    };
    if xs.is_empty() {
        return Err(usage("give evaluation points with -x or --grid"));
    }
    for &x in &xs {
        if !x.is_finite() {
            return Err(usage(format!("point {x} is not finite")));
        }
        if let Some(s) = support {
            if T::lit(x).abs() > s {
                return Err(usage(format!("point {x} lies outside the support [-{0}, {0}]", s.as_f64())));
            }
        }
    }
    Ok(xs)
}

/// `start:stop:count` with both ends included.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || usage(format!("--grid expects start:stop:count, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
        .collect())
}

/// Interior points `s (2k / (count + 1) - 1)`, `k = 1..=count`. The endpoints
/// are excluded since weights may be singular there; an even `count` also
/// avoids the origin.
fn default_grid(support: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| support * (2.0 * k as f64 / (count + 1) as f64 - 1.0))
        .collect()
}

pub fn run<T: Real>(cmd: &Command, precision: &str) -> Result<Report, Failure> {
    let mut report = match cmd {
        Command::Eval { family: fa, n, points: pa, tol, .. } => {
            let fam = family::<T>(fa)?;
            let n = check_n(*n, "-n")?;
            let xs = points(pa, fam.support)?;
            let tol = tol.unwrap_or(TOL_EVAL);
            let mut meta = family_meta(fa, &fam);
            meta.insert("n".into(), Value::from(n));
            meta.insert("tolerance".into(), json_param(tol));
            eval_rows(&fam, meta, &[n], &xs, Some(tol))?
        }
        Command::Table { family: fa, n_max, .. } => {
            let fam = family::<T>(fa)?;
            let n_max = check_n(*n_max, "--n-max")?;
            let mut meta = family_meta(fa, &fam);
            meta.insert("n_max".into(), Value::from(n_max));
            table(&fam, meta, n_max)
        }
        Command::Check { suite, family: fa, n, n_max, tol, .. } => {
            let fam = family::<T>(fa)?;
            if let Some(n) = n {
                check_n(*n, "-n")?;
            }
            if let Some(m) = n_max {
                check_n(*m, "--n-max")?;
            }
            let mut meta = family_meta(fa, &fam);
            meta.insert("suite".into(), Value::from(suite.name()));
            check(&fam, meta, *suite, *n, *n_max, *tol)?
        }
        Command::Export { what, family: fa, n, n_max, points: pa, .. } => {
            let fam = family::<T>(fa)?;
            let xs = if pa.grid.is_none() && pa.x.is_empty() {
                let s = fam.support.map_or(1.0, |s| s.as_f64());
                default_grid(s, DEFAULT_EXPORT_POINTS)
            } else {
                points(pa, fam.support)?
            };
            let mut meta = family_meta(fa, &fam);
            meta.insert(
                "export".into(),
                Value::from(match what {
                    ExportKind::Weight => "weight",
                    ExportKind::Poly => "poly",
                }),
            );
            match what {
                ExportKind::Weight => export_weight(&fam, meta, &xs)?,
                ExportKind::Poly => {
                    let degrees: Vec<usize> = match (n, n_max) {
                        (Some(n), _) => vec![check_n(*n, "-n")?],
                        (None, m) => (0..=check_n(m.unwrap_or(6), "--n-max")?).collect(),
                    };
                    meta.insert("degrees".into(), Value::from(degrees.clone()));
                    eval_rows(&fam, meta, &degrees, &xs, None)?
                }
            }
        }
    };
    report.meta.insert("command".into(), Value::from(cmd.name()));
    report.meta.insert("precision".into(), Value::from(precision));
    Ok(report)
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Table { .. } => "table",
            Command::Check { .. } => "check",
            Command::Export { .. } => "export",
        }
    }
}

/// Rows `{n, x, value_recurrence, value_explicit, value_hypergeometric}`; with
/// `tol`, pairwise disagreement beyond it is recorded as an error.
fn eval_rows<T: Real>(
    fam: &FamilyDescriptor<T>,
    meta: Map<String, Value>,
    degrees: &[usize],
    xs: &[f64],
    tol: Option<f64>,
) -> Result<Report, Failure> {
    let mut report = Report::new(
        meta,
        vec!["n", "x", "value_recurrence", "value_explicit", "value_hypergeometric"],
    );
    let (v, ctx) = (&fam.v, &fam.ctx);
    for &n in degrees {
        let poly = build_monic(n, v, ctx).map_err(classify)?;
        for &xf in xs {
            let x = T::lit(xf);
            let rec = poly.evaluate(x);
            let exp = eval_explicit_monic(n, v, ctx, x);
            let hyp = match eval_hypergeometric_monic(n, v, ctx, x) {
                Err(QError::Precondition(_)) => None,
                other => Some(other),
            };
            let mut cell = |r: &qsympoly::Result<qsympoly::sympoly::Evaluation<T>>, what: &str| match r {
                Ok(e) => Cell::Num(e.value.as_f64()),
                Err(e) => {
                    report.errors.push(format!("n={n} x={xf:?}: {what}: {e}"));
                    Cell::Null
                }
            };
            let c_exp = cell(&exp, "explicit");
            let c_hyp = hyp.as_ref().map_or(Cell::Null, |h| cell(h, "2phi1"));
            if let Some(tol) = tol {
                let mut gaps = Vec::new();
                if let Ok(e) = &exp {
                    gaps.push(("explicit", rec.agreement(e)));
                }
                if let Some(Ok(h)) = &hyp {
                    gaps.push(("2phi1", rec.agreement(h)));
                    if let Ok(e) = &exp {
                        gaps.push(("explicit vs 2phi1", e.agreement(h)));
                    }
                }
                for (what, g) in gaps {
                    if !(g <= T::lit(tol)) {
                        report.errors.push(format!(
                            "n={n} x={xf:?}: recurrence vs {what} gap {:e} exceeds {tol:e}",
                            g.as_f64()
                        ));
                    }
                }
            }
            report.push(vec![n.into(), xf.into(), rec.value.as_f64().into(), c_exp, c_hyp]);
        }
    }
    Ok(report)
}

fn table<T: Real>(fam: &FamilyDescriptor<T>, mut meta: Map<String, Value>, n_max: usize) -> Report {
    let (v, ctx) = (&fam.v, &fam.ctx);
    let class = classify_orthogonality(v, ctx, n_max);
    meta.insert("classification".into(), Value::from(class.kind.label()));
    let mut report = Report::new(
        meta,
        vec!["n", "lambda", "delta", "C", "favard_norm", "closed_form_norm", "classification"],
    );
    for n in 0..=n_max {
        let mut num = |r: qsympoly::Result<T>, what: &str| match r {
            Ok(x) => Cell::Num(x.as_f64()),
            Err(e) => {
                report.errors.push(format!("n={n}: {what}: {e}"));
                Cell::Null
            }
        };
        let lambda = num(eigenvalue(n, v, ctx), "lambda");
        let dl = num(delta(n, v, ctx), "delta");
        // C_0 multiplies phi_{-1} = 0 and is not defined
        let c = if n == 0 { Cell::Null } else { num(recurrence_c(n, v, ctx), "C") };
        let fav = num(favard_norm(n, v, ctx), "favard_norm");
        let closed = fam.closed_form_norm(n).map_or(Cell::Null, |r| num(r, "closed_form_norm"));
        report.push(vec![n.into(), lambda, dl, c, fav, closed, class.kind.label().into()]);
    }
    report
}

struct CheckRow {
    check: String,
    max_residual: f64,
    tolerance: f64,
    passed: bool,
    detail: String,
}

impl CheckRow {
    fn new(check: &str, max_residual: f64, tolerance: f64, extra_ok: bool, detail: String) -> Self {
        Self {
            check: check.to_string(),
            max_residual,
            tolerance,
            passed: extra_ok && max_residual <= tolerance,
            detail,
        }
    }
}

fn check<T: Real>(
    fam: &FamilyDescriptor<T>,
    meta: Map<String, Value>,
    suite: Suite,
    n: Option<usize>,
    n_max: Option<usize>,
    tol: Option<f64>,
) -> Result<Report, Failure> {
    let mut rows = Vec::new();
    for s in suite.expand() {
        match run_suite(fam, s, n, n_max, tol) {
            Ok(mut r) => rows.append(&mut r),
            Err(Failure::Numerical(msg)) => rows.push(CheckRow {
                check: s.name().into(),
                max_residual: f64::NAN,
                tolerance: f64::NAN,
                passed: false,
                detail: msg,
            }),
            Err(e) => return Err(e),
        }
    }
    let mut report = Report::new(meta, vec!["check", "max_residual", "tolerance", "passed", "detail"]);
    for r in rows {
        if !r.passed {
            report.errors.push(format!("{} failed: {}", r.check, r.detail));
        }
        let num = |v: f64| if v.is_finite() { Cell::Num(v) } else { Cell::Null };
        report.push(vec![
            r.check.into(),
            num(r.max_residual),
            num(r.tolerance),
            r.passed.into(),
            r.detail.into(),
        ]);
    }
    Ok(report)
}

fn run_suite<T: Real>(
    fam: &FamilyDescriptor<T>,
    suite: Suite,
    n: Option<usize>,
    n_max: Option<usize>,
    tol: Option<f64>,
) -> Result<Vec<CheckRow>, Failure> {
    let (v, ctx) = (&fam.v, &fam.ctx);
    let rows = match suite {
        Suite::All => unreachable!("expanded by the caller"),
        Suite::Ode => {
            let tol = tol.unwrap_or(TOL_ODE);
            let degrees: Vec<usize> = match n {
                Some(n) => vec![n],
                None => (0..=n_max.unwrap_or(10)).collect(),
            };
            let s = fam.support.unwrap_or_else(T::one);
            let (mut worst, mut at) = (T::zero(), (0, 0.0));
            for &deg in &degrees {
                for k in 1..=ODE_POINTS {
                    let x = s * T::lit(k as f64 / ODE_POINTS as f64);
                    let r = ode_residual(deg, v, ctx, x).map_err(classify)?.relative();
                    if !(r <= worst) {
                        worst = r;
                        at = (deg, x.as_f64());
                    }
                }
            }
            vec![CheckRow::new(
                "ode",
                worst.as_f64(),
                tol,
                true,
                format!(
                    "q-difference residual / largest term over degrees {:?}, {ODE_POINTS} points; worst at n={} x={:?}",
                    degrees, at.0, at.1
                ),
            )]
        }
        Suite::Ortho => {
            let tol = tol.unwrap_or(TOL_ORTHO);
            let n_max = n_max.unwrap_or(10);
            let cfg = JacksonConfig::new(*ctx).map_err(classify)?;
            let g = orthogonality_matrix(fam, n_max, &cfg).map_err(classify)?;
            let odd = g.odd_entries_vanish();
            vec![CheckRow::new(
                "ortho",
                g.max_off_diagonal().as_f64(),
                tol,
                odd,
                format!("max |G[n][m]| / sqrt(G[n][n] G[m][m]) for n != m <= {n_max}; odd-parity entries exactly 0: {odd}"),
            )]
        }
        Suite::Norm => {
            let tol = tol.unwrap_or(NORM_AGREEMENT_TOL);
            let n_max = n_max.unwrap_or(8);
            let cfg = JacksonConfig::new(*ctx).map_err(classify)?;
            let triples = norm_triple_check(fam, n_max, &cfg).map_err(classify)?;
            let worst = triples
                .iter()
                .map(|t| t.favard_vs_quadrature.as_f64())
                .fold(0.0, f64::max);
            let failed: Vec<usize> = triples.iter().filter(|t| t.status == NormStatus::Fail).map(|t| t.n).collect();
            let flagged: Vec<usize> = triples
                .iter()
                .filter(|t| t.status == NormStatus::PaperDiscrepancy)
                .map(|t| t.n)
                .collect();
            vec![CheckRow::new(
                "norm",
                worst,
                tol,
                failed.is_empty(),
                format!(
                    "Favard product vs Jackson ratio for n <= {n_max}; closed form disagrees at {flagged:?}; failed at {failed:?}"
                ),
            )]
        }
        Suite::Pearson => {
            let tol = tol.unwrap_or(TOL_PEARSON);
            let spec = fam.weight_spec().map_err(classify)?;
            let mut worst = T::zero();
            for x in spec.grid(PEARSON_POINTS) {
                let lhs = spec.pearson_lhs(x).map_err(classify)?;
                let rhs = spec.pearson_rhs(x).map_err(classify)?;
                worst = worst.max(relative_difference(lhs, rhs));
            }
            vec![CheckRow::new(
                "pearson",
                worst.as_f64(),
                tol,
                true,
                format!("W(qx)/W(x) against the Pearson ratio at support q^k, k < {PEARSON_POINTS}"),
            )]
        }
        Suite::Limit => {
            let tol = tol.unwrap_or(TOL_LIMIT);
            let n_max = n_max.unwrap_or(10).max(1);
            let probe = LimitProbe::<T>::default();
            let quantities = [
                ("limit:C", LimitQuantity::RecurrenceC),
                ("limit:lambda", LimitQuantity::Eigenvalue),
                ("limit:phi", LimitQuantity::PolynomialValue(T::lit(LIMIT_X))),
            ];
            let mut rows = Vec::new();
            for (name, quantity) in quantities {
                let (mut worst, mut worst_n, mut extrap) = (T::zero(), 0, T::zero());
                let mut non_monotone = Vec::new();
                for deg in 1..=n_max {
                    let r = limit_convergence_report(quantity, &fam.spec, deg, &probe, ctx).map_err(classify)?;
                    if !(r.final_error() <= worst) {
                        worst = r.final_error();
                        worst_n = deg;
                    }
                    extrap = extrap.max(r.extrapolated_error);
                    if !r.monotone {
                        non_monotone.push(deg);
                    }
                }
                rows.push(CheckRow::new(
                    name,
                    worst.as_f64(),
                    tol,
                    non_monotone.is_empty(),
                    format!(
                        "relative error at q = 1 - {:e}, n <= {n_max}, worst at n={worst_n}; \
                         non-monotone at {non_monotone:?}; extrapolated error {:.3e}",
                        probe.eps().last().expect("non-empty probe").as_f64(),
                        extrap.as_f64()
                    ),
                ));
            }
            rows
        }
        Suite::Boundary => {
            let tol = tol.unwrap_or(TOL_BOUNDARY);
            let spec = fam.weight_spec().map_err(classify)?;
            let r = boundary_vanishing_check(&spec, ctx);
            vec![CheckRow::new(
                "boundary",
                r.relative.as_f64(),
                tol,
                r.relative.is_finite(),
                format!(
                    "A(x)W(x) at the endpoint {:e} against interior max {:e}",
                    r.value.as_f64(),
                    r.interior_max.as_f64()
                ),
            )]
        }
    };
    Ok(rows)
}

fn export_weight<T: Real>(fam: &FamilyDescriptor<T>, meta: Map<String, Value>, xs: &[f64]) -> Result<Report, Failure> {
    let spec = fam.weight_spec().map_err(classify)?;
    let has_limit = !matches!(fam.spec, FamilySpec::Custom(_));
    let mut report = Report::new(meta, vec!["x", "weight_star", "weight_limit"]);
    for &xf in xs {
        let x = T::lit(xf);
        let ws = match spec.weight_star(x) {
            Ok(w) => Cell::Num(w.as_f64()),
            Err(e) => {
                report.errors.push(format!("x={xf:?}: weight_star: {e}"));
                Cell::Null
            }
        };
        let wl = if has_limit {
            match continuous_weight(&fam.spec, x) {
                Ok(w) => Cell::Num(w.as_f64()),
                Err(e) => {
                    report.errors.push(format!("x={xf:?}: weight_limit: {e}"));
                    Cell::Null
                }
            }
        } else {
            Cell::Null
        };
        report.push(vec![xf.into(), ws, wl]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        assert_eq!(parse_grid("-1:1:5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.3:0.9:1").unwrap(), vec![0.3]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:1:3").is_err());
    }

    #[test]
    fn default_grid_is_interior_and_symmetric() {
        let g = default_grid(2.0, 10);
        assert_eq!(g.len(), 10);
        assert!(!g.contains(&0.0));
        assert!(g.iter().all(|x| x.abs() < 2.0));
        for (a, b) in g.iter().zip(g.iter().rev()) {
            assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn custom_vector_parsing() {
        assert_eq!(parse_custom("-1, 1,-6,0").unwrap(), [-1.0, 1.0, -6.0, 0.0]);
        assert!(parse_custom("1,2,3").is_err());
        assert!(parse_custom("1,2,3,x").is_err());
        assert!(parse_custom("1,2,3,inf").is_err());
    }
}
