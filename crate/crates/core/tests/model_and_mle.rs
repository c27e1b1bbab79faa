use gamma_entropy_core::gamma_model::*;
use gamma_entropy_core::mle::*;
use gamma_entropy_core::simlab::sample_gamma;
use gamma_entropy_core::variates::seeded_rng;
use gamma_entropy_core::{Error, SampleStats};
use proptest::prelude::*;
use statrs::distribution::{Continuous, Gamma};
use statrs::statistics::Distribution;

const SUGARCANE: [f64; 21] = [
    11.0, 19.0, 36.0, 4.0, 8.0, 11.0, 39.0, 74.0, 168.0, 27.0, 116.0, 3.0, 34.0, 1.0, 46.0, 12.0,
    2.0, 56.0, 14.0, 52.0, 14.0,
];

/// Gamma MLE in (α, β): solves ln α − ψ(α) = ln(mean) − mean(ln x) by
/// bisection, then β = α / mean.
fn alpha_beta_mle(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let target = mean.ln() - x.iter().map(|v| v.ln()).sum::<f64>() / n;
    let g = |a: f64| a.ln() - statrs::function::gamma::digamma(a) - target;
    let (mut lo, mut hi) = (1e-6f64, 1e6f64);
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = (lo * hi).sqrt();
    (alpha, alpha / mean)
}

fn simulated(alpha: f64, beta: f64, n: usize, seed: u64) -> SampleStats {
    let mut rng = seeded_rng(seed);
    SampleStats::new(sample_gamma(GammaParams { alpha, beta }, n, &mut rng)).unwrap()
}

#[test]
fn entropy_matches_statrs() {
    for &(a, b) in &[(4.0, 2.0), (2.0, 0.5), (0.3, 7.0), (25.0, 0.01), (1.0, 1.0)] {
        let h = entropy(GammaParams::new(a, b).unwrap()).unwrap();
        let oracle = Gamma::new(a, b).unwrap().entropy().unwrap();
        assert!((h - oracle).abs() < 1e-12, "({a}, {b}): {h} vs {oracle}");
    }
}

#[test]
fn log_likelihood_is_density_sum() {
    let s = simulated(2.5, 0.7, 40, 3);
    for &(w, h) in &[(0.5, 1.0), (2.5, 2.2), (9.0, 3.0)] {
        let e = EntropyParams::new(w, h).unwrap();
        let p = from_entropy_params(e).unwrap();
        let dist = Gamma::new(p.alpha, p.beta).unwrap();
        let oracle: f64 = s.data().iter().map(|&x| dist.ln_pdf(x)).sum();
        let ll = log_likelihood(e, &s).unwrap();
        assert!((ll - oracle).abs() < 1e-10 * oracle.abs().max(1.0), "{ll} vs {oracle}");
    }
}

#[test]
fn exponential_single_point_log_likelihood() {
    // two observations at 1 give twice the exponential log density at 1
    let s = SampleStats::new(vec![1.0, 1.0 + 1e-12]).unwrap();
    let ll = log_likelihood(EntropyParams::new(1.0, 1.0).unwrap(), &s).unwrap();
    assert!((ll + 2.0).abs() < 1e-11);
}

#[test]
fn sugarcane_initializer_golden() {
    let s = SampleStats::from_slice(&SUGARCANE).unwrap();
    let p = init_estimates(&s).unwrap();
    // n = 21, Σx = 747, D = nΣx ln x − Σx Σln x evaluated directly
    let n = 21.0;
    let sx: f64 = SUGARCANE.iter().sum();
    let sl: f64 = SUGARCANE.iter().map(|x| x.ln()).sum();
    let sxl: f64 = SUGARCANE.iter().map(|x| x * x.ln()).sum();
    let d = n * sxl - sx * sl;
    assert!((p.alpha - (n - 2.9) * sx / d).abs() < 1e-12);
    assert!((p.beta - n * n / d).abs() < 1e-14);
    assert!((p.alpha - 0.719_82).abs() < 1e-5, "{}", p.alpha);
    assert!((p.beta - 0.023_478).abs() < 1e-6, "{}", p.beta);
}

#[test]
fn initializer_errors() {
    let two = SampleStats::new(vec![1.0, core::f64::consts::E]).unwrap();
    assert!(matches!(init_estimates(&two), Err(Error::SampleTooSmall { .. })));
    assert!(matches!(SampleStats::new(vec![5.0, 5.0, 5.0]), Err(Error::DegenerateSample)));
    // the fallback start is the exponential fit
    let e = initial_point(&two);
    assert_eq!(e.w, 1.0);
    assert!((e.h - (1.0 - (2.0 / two.sum_x()).ln())).abs() < 1e-15);
}

#[test]
fn sugarcane_mle_golden() {
    let s = SampleStats::from_slice(&SUGARCANE).unwrap();
    let fit = fit_mle(&s, 0.95).unwrap();
    let (a, b) = alpha_beta_mle(&SUGARCANE);
    let oracle_h = Gamma::new(a, b).unwrap().entropy().unwrap();
    assert!((fit.estimate.w - a).abs() < 1e-8);
    assert!((fit.estimate.h - oracle_h).abs() < 1e-8);
    assert!((fit.estimate.h - 4.564_789).abs() < 1e-6);
    assert!((fit.se_h - 0.235_576).abs() < 1e-6);
    assert!(fit.ci_h.0 < fit.estimate.h && fit.estimate.h < fit.ci_h.1);
    assert!(fit.converged);
}

#[test]
fn mle_consistency_large_sample() {
    let s = simulated(4.0, 2.0, 100_000, 17);
    let fit = fit_mle(&s, 0.95).unwrap();
    assert!((fit.estimate.h - 1.330_259_3).abs() < 0.02, "{}", fit.estimate.h);
}

#[test]
fn wald_width_shrinks_like_root_n() {
    let mut rng = seeded_rng(99);
    let big = sample_gamma(GammaParams { alpha: 3.0, beta: 1.5 }, 800, &mut rng);
    let small = SampleStats::from_slice(&big[..200]).unwrap();
    let large = SampleStats::from_slice(&big).unwrap();
    let w = |s: &SampleStats| {
        let f = fit_mle(s, 0.95).unwrap();
        f.ci_h.1 - f.ci_h.0
    };
    let ratio = w(&large) / w(&small);
    assert!((0.45..=0.55).contains(&ratio), "{ratio}");
}

#[test]
fn fisher_inverse_identity_grid() {
    for i in 0..1000 {
        let w = 10f64.powf(-2.0 + 4.0 * i as f64 / 999.0);
        let f = fisher_info(w).unwrap();
        let det = f.ww * f.hh - f.wh * f.wh;
        let inv_hh = f.ww / det;
        let v = asymptotic_var_h(w).unwrap();
        assert!((v - inv_hh).abs() < 1e-10 * v.max(1.0), "W = {w}: {v} vs {inv_hh}");
        assert!((fisher_det(w).unwrap() - det).abs() < 1e-9 * det.abs().max(1e-3));
    }
}

#[test]
fn degenerate_data_fails_cleanly() {
    assert!(SampleStats::new(vec![2.0]).is_err());
    assert!(SampleStats::new(vec![1.0, -2.0, 3.0]).is_err());
    assert!(SampleStats::new(vec![1.0, f64::NAN]).is_err());
}

fn sample_strategy() -> impl Strategy<Value = (f64, f64, usize, u64)> {
    (0.2f64..20.0, 0.05f64..20.0, 5usize..200, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(alpha in 1e-3f64..1e3, log_beta in -10.0f64..10.0) {
        let p = GammaParams::new(alpha, log_beta.exp()).unwrap();
        let e = to_entropy_params(p).unwrap();
        let back = from_entropy_params(e).unwrap();
        prop_assert!((back.alpha - p.alpha).abs() <= 1e-12 * p.alpha);
        prop_assert!((back.beta - p.beta).abs() <= 1e-9 * p.beta);
    }

    #[test]
    fn score_matches_finite_differences(
        (alpha, beta, n, seed) in sample_strategy(),
        dw in 0.5f64..2.0,
        dh in -1.0f64..1.0,
    ) {
        let s = simulated(alpha, beta, n, seed);
        let truth = to_entropy_params(GammaParams { alpha, beta }).unwrap();
        let e = EntropyParams::new(truth.w * dw, truth.h + dh).unwrap();
        let (gw, gh) = score(e, &s).unwrap();
        let f = |w: f64, h: f64| log_likelihood(EntropyParams { w, h }, &s).unwrap();
        let sw = 1e-5 * e.w;
        let sh = 1e-5 * e.h.abs().max(1.0);
        let fw = (f(e.w + sw, e.h) - f(e.w - sw, e.h)) / (2.0 * sw);
        let fh = (f(e.w, e.h + sh) - f(e.w, e.h - sh)) / (2.0 * sh);
        let scale = f(e.w, e.h).abs().max(1.0);
        prop_assert!((gw - fw).abs() <= 1e-6 * gw.abs().max(scale / e.w), "dW {gw} vs {fw}");
        prop_assert!((gh - fh).abs() <= 1e-6 * gh.abs().max(scale), "dH {gh} vs {fh}");
    }

    #[test]
    fn mle_invariance_and_scale_equivariance((alpha, beta, n, seed) in sample_strategy(), c in 0.01f64..100.0) {
        let s = simulated(alpha, beta, n.max(10), seed);
        let fit = fit_mle(&s, 0.95).unwrap();
        let (a, b) = alpha_beta_mle(s.data());
        let oracle = to_entropy_params(GammaParams { alpha: a, beta: b }).unwrap();
        prop_assert!((fit.estimate.w - oracle.w).abs() < 1e-6 * oracle.w.max(1.0));
        prop_assert!((fit.estimate.h - oracle.h).abs() < 1e-6 * oracle.h.abs().max(1.0));
        let (gw, gh) = score(fit.estimate, &s).unwrap();
        prop_assert!(gw.abs().max(gh.abs()) < 1e-8);

        let scaled = s.scaled(c).unwrap();
        let refit = fit_mle(&scaled, 0.95).unwrap();
        prop_assert!((refit.estimate.h - fit.estimate.h - c.ln()).abs() < 1e-8);
        prop_assert!((refit.estimate.w - fit.estimate.w).abs() < 1e-8 * fit.estimate.w.max(1.0));

        let p = init_estimates(&s).unwrap();
        let q = init_estimates(&scaled).unwrap();
        prop_assert!((q.alpha - p.alpha).abs() < 1e-9 * p.alpha);
        prop_assert!((q.beta * c - p.beta).abs() < 1e-9 * p.beta);
    }

    #[test]
    fn hessian_negative_definite_at_optimum((alpha, beta, n, seed) in sample_strategy()) {
        let s = simulated(alpha, beta, n.max(10), seed);
        let fit = fit_mle(&s, 0.95).unwrap();
        let h = hessian(fit.estimate, &s).unwrap();
        let tr = h[0][0] + h[1][1];
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        prop_assert!(tr < 0.0 && det > 0.0, "{h:?}");
        prop_assert!(fit.se_h > 0.0 && fit.ci_h.0 < fit.estimate.h && fit.estimate.h < fit.ci_h.1);
    }

    #[test]
    fn delta_h_vanishes_on_the_rate_ridge((alpha, beta, n, seed) in sample_strategy(), w in 0.1f64..10.0) {
        let s = simulated(alpha, beta, n, seed);
        // H with δ(W,H) = nW/Σx
        let h = to_entropy_params(GammaParams { alpha: w, beta: s.n() as f64 * w / s.sum_x() }).unwrap().h;
        let (_, gh) = score(EntropyParams { w, h }, &s).unwrap();
        prop_assert!(gh.abs() < 1e-9 * (s.n() as f64 * w));
    }

    #[test]
    fn log_likelihood_permutation_invariant((alpha, beta, n, seed) in sample_strategy()) {
        let s = simulated(alpha, beta, n, seed);
        let mut rev = s.data().to_vec();
        rev.reverse();
        let r = SampleStats::new(rev).unwrap();
        let e = EntropyParams { w: alpha, h: 1.0 };
        let a = log_likelihood(e, &s).unwrap();
        let b = log_likelihood(e, &r).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }
}

#[test]
fn entropy_large_shape_matches_mpmath() {
    let table = [
        (10.0, 2.536_054_178_480_979_6),
        (1e3, 4.872_482_756_017_972),
        (1e6, 8.326_693_478_853_393),
        (1e9, 11.780_571_451_344_545),
    ];
    for (alpha, want) in table {
        let got = entropy(GammaParams { alpha, beta: 1.0 }).unwrap();
        assert!((got - want).abs() < 1e-14 * want, "{alpha}: {got} vs {want}");
    }
    // just below the switch to the asymptotic form
    let below = entropy(GammaParams { alpha: 10.0 - 1e-12, beta: 1.0 }).unwrap();
    assert!((below - 2.536_054_178_480_926_1).abs() < 1e-14 * below);
}
