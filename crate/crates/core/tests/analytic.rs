mod common;

use approx::assert_relative_eq;
use common::{fixture, richardson, unit};
use proptest::prelude::*;
use wishart_sum::analytic::*;
use wishart_sum::check::spread_clusters;
use wishart_sum::ensemble::{DegeneracyProfile, EnsembleParams, DEFAULT_CLUSTER_TOL};
use wishart_sum::Error;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn unit_case_is_the_gamma_density() {
    let p = unit();
    for x in [0.1, 1.0, 5.0] {
        assert_relative_eq!(marginal_pdf(&p, x).unwrap(), x * (-x).exp(), max_relative = 1e-12);
        assert_relative_eq!(joint_pdf(&p, &[x]).unwrap(), x * (-x).exp(), max_relative = 1e-12);
    }
    assert!(joint_log_norm(&p).unwrap().log_abs().abs() < 1e-15);
    assert_relative_eq!(mean_eigenvalue(&p).unwrap(), 2.0, max_relative = 1e-9);
}

#[test]
fn fixtures_are_normalized_with_the_right_mean() {
    for (name, mean) in [("fig1", 23.0), ("fig2", f64::NAN), ("fig3", (30.0 + 100.0 / 7.0) / 4.0)] {
        let p = fixture(name);
        let d = MarginalDensity::new(&p).unwrap();
        let total = integrate_density(&p, |x| d.pdf_or_zero(x)).unwrap();
        assert!((total - 1.0).abs() < 1e-6, "{name}: {total}");
        let m = mean_eigenvalue(&p).unwrap();
        assert!(rel(m, p.mean_eigenvalue_exact()) < 1e-6, "{name}: {m}");
        if mean.is_finite() {
            assert_relative_eq!(p.mean_eigenvalue_exact(), mean, max_relative = 1e-14);
        }
    }
}

#[test]
fn fig2_pointwise_values() {
    // 50-digit evaluation of the bordered determinant
    let p = fixture("fig2");
    for (x, want) in [
        (0.5, 8.978_885_104_847_626_5e-11),
        (2.0, 3.860_972_750_355_592_7e-4),
        (10.0, 2.558_968_512_624_408_6e-2),
        (25.0, 1.529_974_145_818_232_7e-2),
        (80.0, 3.448_832_624_203_076e-3),
    ] {
        let got = marginal_pdf(&p, x).unwrap();
        assert!(rel(got, want) < 1e-9, "p({x}) = {got}, want {want}");
    }
}

#[test]
fn fig3_pointwise_values() {
    // non-degenerate formula at a spread of 1e-20, evaluated with 80 digits
    let p = fixture("fig3");
    let d = MarginalDensity::new(&p).unwrap();
    for (x, want) in [
        (1.0, 1.887_824_148_456_505_1e-3),
        (4.0, 8.107_702_930_931_200_6e-2),
        (9.0, 4.816_819_471_625_570_5e-2),
        (20.0, 2.669_842_396_774_565e-2),
    ] {
        let got = d.pdf(x).unwrap();
        assert!(rel(got, want) < 1e-9, "p({x}) = {got}, want {want}");
    }
}

#[test]
fn fig1_joint_values() {
    let p = fixture("fig1");
    assert!(rel(joint_log_norm(&p).unwrap().to_f64(), 4.186_224_708_504_801e-10) < 1e-10);
    assert!(rel(joint_pdf(&p, &[5.0, 20.0]).unwrap(), 7.538_579_527_893_228e-4) < 1e-10);
    assert!(rel(joint_pdf(&p, &[2.0, 9.0]).unwrap(), 7.744_250_020_137_575e-6) < 1e-10);
    let a = joint_pdf(&p, &[3.0, 7.0]).unwrap();
    let b = joint_pdf(&p, &[7.0, 3.0]).unwrap();
    assert!(rel(a, b) < 1e-12);
    assert_eq!(joint_pdf(&p, &[4.0, 4.0]).unwrap(), 0.0);
    assert!(matches!(joint_pdf(&p, &[0.0, 1.0]), Err(Error::Domain(_))));
}

#[test]
fn fig1_joint_integrates_to_one() {
    let p = fixture("fig1");
    let top = lambda_max(&p).unwrap();
    let joint = JointDensity::new(&p).unwrap();
    let total = integrate(
        |x| {
            if x <= 0.0 {
                return Ok(0.0);
            }
            integrate(|y| if y <= 0.0 || y == x { Ok(0.0) } else { joint.pdf(&[x, y]) }, 0.0, top, 1e-12)
        },
        0.0,
        top,
        1e-10,
    )
    .unwrap();
    assert!((total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn joint_integrates_to_the_marginal() {
    let p = fixture("fig1");
    let top = lambda_max(&p).unwrap();
    let joint = JointDensity::new(&p).unwrap();
    let marginal = MarginalDensity::new(&p).unwrap();
    for x in linspace(1.0, 60.0, 20) {
        let f = |y: f64| if y <= 0.0 || y == x { Ok(0.0) } else { joint.pdf(&[x, y]) };
        let q = integrate(f, 0.0, x, 1e-12).unwrap() + integrate(f, x, top, 1e-12).unwrap();
        let want = marginal.pdf(x).unwrap();
        assert!((q - want).abs() < 1e-6, "lambda={x}: {q} vs {want}");
    }
}

#[test]
fn equal_covariance_is_the_laguerre_ensemble() {
    for sigma in [1.0, 0.7, 3.0] {
        let p = EnsembleParams::isotropic(3, 4, 5, sigma, sigma).unwrap();
        assert!(p.detect_clusters(DEFAULT_CLUSTER_TOL).is_degenerate());
        let d = MarginalDensity::new(&p).unwrap();
        for x in linspace(0.1 * sigma, 25.0 * sigma, 20) {
            let got = d.pdf(x).unwrap();
            let want = lue_marginal_reference(3, 9, sigma, x).unwrap();
            assert!((got - want).abs() < 1e-8, "sigma={sigma} lambda={x}: {got} vs {want}");
        }
    }
    // Laguerre-polynomial kernel in 40 digits
    let p = EnsembleParams::isotropic(2, 3, 4, 1.0, 1.0).unwrap();
    assert!(rel(MarginalDensity::new(&p).unwrap().pdf(3.0).unwrap(), 0.126_023_516_806_155_6) < 1e-12);
    assert!(rel(lue_marginal_reference(2, 7, 1.0, 3.0).unwrap(), 0.126_023_516_806_155_6) < 1e-12);
}

#[test]
fn lue_reference_small_cases() {
    assert_relative_eq!(lue_marginal_reference(1, 2, 1.0, 1.0).unwrap(), (-1f64).exp(), max_relative = 1e-14);
    for k in 1..6u32 {
        let x: f64 = 2.5;
        let want = x.powi(k as i32 - 1) * (-x).exp() / wishart_sum::specfun::gamma(f64::from(k)).unwrap();
        assert_relative_eq!(lue_marginal_reference(1, k, 1.0, x).unwrap(), want, max_relative = 1e-13);
    }
    assert!(matches!(lue_marginal_reference(3, 2, 1.0, 1.0), Err(Error::Dimension(_))));
}

#[test]
fn partial_degeneracy_is_the_limit_of_split_values() {
    let p = EnsembleParams::new(3, 4, 5, 1.5, vec![1.0, 1.0, 2.0]).unwrap();
    let profile = p.detect_clusters(DEFAULT_CLUSTER_TOL);
    assert_eq!(profile.clusters().len(), 2);
    let eps = [1e-4, 1e-5, 1e-6];
    let split: Vec<MarginalDensity> = eps
        .iter()
        .map(|&e| MarginalDensity::nondegenerate(&p.with_sigma_b(vec![1.0, 1.0 + e, 2.0]).unwrap()).unwrap())
        .collect();
    let exact = MarginalDensity::new(&p).unwrap();
    for x in linspace(0.5, 40.0, 20) {
        let values: Vec<f64> = split.iter().map(|d| d.pdf(x).unwrap()).collect();
        let limit = richardson(&eps, &values);
        let want = exact.pdf(x).unwrap();
        assert!((limit - want).abs() < 1e-6, "lambda={x}: {limit} vs {want}");
    }
}

#[test]
fn fig3_normalization_is_the_limit_of_split_values() {
    let p = fixture("fig3");
    let profile = p.detect_clusters(DEFAULT_CLUSTER_TOL);
    let exact = joint_log_norm(&p).unwrap().log_abs();
    let eps = [1e-4, 1e-5, 1e-6];
    // C⁻¹ of the split values carries the factor Π_{k<l}(c_l − c_k) / Π_i i! with
    // c_k = 1/σ_A − 1/σ_Bk, which the derivative-column form divides out.
    let logs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let sb = spread_clusters(&profile, e);
            let q = p.with_sigma_b(sb.clone()).unwrap();
            let mut log_vdm = -(12f64).ln();
            for l in 0..4 {
                for k in 0..l {
                    log_vdm += ((sb[l] - sb[k]) / (sb[k] * sb[l])).ln();
                }
            }
            JointDensity::nondegenerate(&q).unwrap().log_norm().log_abs() + log_vdm
        })
        .collect();
    assert!((logs[2] - exact).abs() < 1e-6, "{} vs {exact}", logs[2]);
    assert!((richardson(&eps, &logs) - exact).abs() < 1e-9);
}

#[test]
fn repeated_values_need_the_degenerate_form() {
    let p = EnsembleParams::new(3, 4, 5, 1.5, vec![1.0, 1.0, 2.0]).unwrap();
    assert!(matches!(MarginalDensity::nondegenerate(&p), Err(Error::Conditioning(_))));
    assert!(matches!(marginal_pdf(&p, 3.0), Err(Error::Conditioning(_))));
    assert!(matches!(JointDensity::nondegenerate(&p), Err(Error::Conditioning(_))));
    // the default constructor clusters values within the tolerance
    let q = p.with_sigma_b(vec![1.0, 1.0 + 1e-12, 2.0]).unwrap();
    let (a, b) = (MarginalDensity::new(&q).unwrap().pdf(3.0).unwrap(), MarginalDensity::new(&p).unwrap().pdf(3.0).unwrap());
    assert!(rel(a, b) < 1e-10, "{a} vs {b}");
}

#[test]
fn laplace_identity_reference_case() {
    let exact = 120.0 * wishart_sum::specfun::hyp2f1(3.0, 6.0, 6.0, 0.75).unwrap();
    // 2F1(3, 6; 6; z) = (1 − z)^{−3}
    assert_relative_eq!(exact, 120.0 * 64.0, max_relative = 1e-13);
    let quad = integrate(
        |x| Ok(x.powi(5) * (-x).exp() * wishart_sum::specfun::hyp1f1(3.0, 6.0, 0.75 * x)?),
        0.0,
        400.0,
        1e-9,
    )
    .unwrap();
    assert!(rel(quad, exact) < 1e-8);
    assert!(wishart_sum::check::laplace_residual(5.0, 1.0, 3.0, 6.0, 0.75).unwrap() < 1e-8);
}

#[test]
fn quadrature_basics() {
    let one = integrate(|x| Ok(x * (-x).exp()), 0.0, 60.0, 1e-13).unwrap();
    assert!((one - 1.0).abs() < 1e-10);
    let p = fixture("fig2");
    let total = integrate_density(&p, |x| marginal_pdf(&p, x)).unwrap();
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn curve_on_a_fixed_grid() {
    let p = fixture("fig2");
    let c = marginal_curve(&p, &linspace(0.0, 80.0, 400)).unwrap();
    assert_eq!(c.len(), 400);
    assert!(c.values().iter().all(|&v| v >= 0.0));
    assert_eq!(c.to_csv_string().lines().count(), 401);
    // the density still carries about 8% of its mass beyond 80 (20-digit quadrature)
    assert!((c.trapezoid() - 0.917_541_284_101_616_3).abs() < 1e-4, "{}", c.trapezoid());

    let full = marginal_curve(&p, &linspace(0.0, lambda_max(&p).unwrap(), 400)).unwrap();
    assert!((full.trapezoid() - 1.0).abs() < 1e-4, "{}", full.trapezoid());

    assert!(marginal_curve(&p, &[]).unwrap().is_empty());
    assert!(marginal_curve(&p, &[1.0, 1.0]).is_err());
}

#[test]
fn degenerate_inputs_dispatch_automatically() {
    let p = fixture("fig3");
    let profile = p.detect_clusters(DEFAULT_CLUSTER_TOL);
    assert_eq!(profile.clusters().len(), 1);
    assert_eq!(profile.clusters()[0].multiplicity, 4);
    let grid = linspace(0.5, 30.0, 12);
    let auto = marginal_curve(&p, &grid).unwrap();
    for (&x, &v) in grid.iter().zip(auto.values()) {
        assert_eq!(v, marginal_pdf_degenerate(&p, &profile, x).unwrap());
    }
    assert!(matches!(MarginalDensity::nondegenerate(&p), Err(Error::Conditioning(_))));
    let wrong = DegeneracyProfile::from_values(&[1.0, 2.0], 1e-9);
    assert!(matches!(MarginalDensity::with_profile(&p, &wrong), Err(Error::Shape(_))));
}

#[test]
fn joint_grid_is_symmetric() {
    let p = fixture("fig1");
    let axis = linspace(0.5, 40.0, 25);
    let g = joint_grid(&p, &axis, &axis).unwrap();
    assert!(g.max_asymmetry().unwrap() < 1e-12);
    let n9 = fixture("fig2");
    assert!(matches!(joint_grid(&n9, &axis, &axis), Err(Error::Dimension(_))));
}

fn params_strategy() -> impl Strategy<Value = EnsembleParams> {
    (1u32..4, 0u32..4, 0u32..4, 0.3f64..4.0, prop::collection::vec(0.3f64..4.0, 3)).prop_filter_map(
        "well separated sigma_B",
        |(n, da, db, sa, mut sb)| {
            sb.truncate(n as usize);
            let mut sorted = sb.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[1] - w[0] < 0.05) {
                return None;
            }
            EnsembleParams::new(n, n + da, n + db, sa, sb).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn joint_density_is_symmetric(p in params_strategy(), xs in prop::collection::vec(0.05f64..30.0, 3)) {
        let n = p.n() as usize;
        let xs = &xs[..n];
        let d = JointDensity::new(&p).unwrap();
        let base = d.pdf(xs).unwrap();
        prop_assert!(base >= 0.0);
        let mut rev = xs.to_vec();
        rev.reverse();
        let mut rot = xs.to_vec();
        rot.rotate_left(1);
        for perm in [rev, rot] {
            let v = d.pdf(&perm).unwrap();
            prop_assert!((v - base).abs() <= 1e-12 * base.abs().max(1e-300), "{v} vs {base}");
        }
    }

    #[test]
    fn marginal_density_is_nonnegative(p in params_strategy(), x in 0.01f64..60.0) {
        let v = marginal_pdf(&p, x).unwrap();
        prop_assert!(v >= 0.0 && v.is_finite());
    }

    #[test]
    fn scaling_sigma_scales_the_density(p in params_strategy(), t in 0.2f64..5.0, x in 0.1f64..20.0) {
        let q = p.scaled(t).unwrap();
        let a = marginal_pdf(&q, t * x).unwrap() * t;
        let b = marginal_pdf(&p, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1e-200), "{a} vs {b}");
    }
}
