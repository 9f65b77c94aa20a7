use qsympoly::families::{norm_triple_check, FamilySpec, NormStatus};
use qsympoly::jackson::JacksonConfig;
use qsympoly::qcore::QContext;
use qsympoly::real::relative_difference;
use qsympoly::sympoly::{build_monic, eval_explicit_monic, recurrence_c};
use qsympoly::{DoubleDouble, Real};

fn families<T: Real>() -> Vec<FamilySpec<T>> {
    vec![
        FamilySpec::Ultraspherical { alpha: T::lit(0.4), beta: T::lit(0.7) },
        FamilySpec::Chebyshev5,
        FamilySpec::Chebyshev6,
        FamilySpec::Hermite { p: T::lit(0.0) },
        FamilySpec::Hermite { p: T::lit(0.3) },
    ]
}

fn dd(v: f64) -> DoubleDouble {
    DoubleDouble::from(v)
}

#[test]
fn double_double_agrees_with_f64() {
    for q in [0.3, 0.5, 0.9] {
        let c64 = QContext::new(q).unwrap();
        let cdd = QContext::new(dd(q)).unwrap();
        for (f64s, dds) in families::<f64>().into_iter().zip(families::<DoubleDouble>()) {
            let a = f64s.descriptor(&c64).unwrap();
            let b = dds.descriptor(&cdd).unwrap();
            for n in 1..=12 {
                let x = recurrence_c(n, &a.v, &c64).unwrap();
                let y = recurrence_c(n, &b.v, &cdd).unwrap().as_f64();
                assert!(relative_difference(x, y) <= 1e-13, "{} q={q} C_{n}: {x} vs {y}", a.name());
                for t in [0.1, 0.55, 0.95] {
                    let xf = build_monic(n, &a.v, &c64).unwrap().evaluate(t);
                    let xd = build_monic(n, &b.v, &cdd).unwrap().evaluate(dd(t));
                    let gap = (xf.value - xd.value.as_f64()).abs() / xf.magnitude;
                    assert!(gap <= 1e-13, "{} q={q} phi_{n}({t}) gap {gap:e}", a.name());
                }
            }
        }
    }
}

#[test]
fn double_double_forms_agree_far_below_f64() {
    let ctx = QContext::new(dd(0.5)).unwrap();
    for spec in families::<DoubleDouble>() {
        let fam = spec.descriptor(&ctx).unwrap();
        for n in 0..=12 {
            let x = dd(0.37);
            let rec = build_monic(n, &fam.v, &ctx).unwrap().evaluate(x);
            let exp = eval_explicit_monic(n, &fam.v, &ctx, x).unwrap();
            assert!(rec.agreement(&exp).as_f64() <= 1e-25, "{} n={n}", fam.name());
        }
    }
}

#[test]
fn norms_agree_in_double_double_at_q_near_one() {
    let ctx = QContext::new(dd(0.9)).unwrap();
    let cfg = JacksonConfig::new(ctx).unwrap();
    for spec in families::<DoubleDouble>() {
        let fam = spec.descriptor(&ctx).unwrap();
        for t in norm_triple_check(&fam, 8, &cfg).unwrap() {
            assert_ne!(t.status, NormStatus::Fail, "{} n={}", fam.name(), t.n);
            assert!(t.favard_vs_quadrature.as_f64() <= 1e-12, "{} n={}", fam.name(), t.n);
        }
    }
}
