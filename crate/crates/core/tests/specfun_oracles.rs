use gamma_entropy_core::specfun::*;
use proptest::prelude::*;

// (x, ψ′(x), ψ″(x), xψ′(x) − 1), evaluated with mpmath at 30 digits.
const POLYGAMMA_TABLE: [(f64, f64, f64, f64); 13] = [
    (1e-3, 1000001.6425331958, -2000000002.3976321, 999.0016425331959),
    (0.1, 101.43329915079275, -2001.8614573783436, 9.143329915079276),
    (0.5, 4.934802200544679, -16.82879664423432, 1.4674011002723397),
    (1.0, 1.6449340668482264, -2.4041138063191885, 0.6449340668482264),
    (1.5, 0.9348022005446793, -0.82879664423432, 0.40220330081701894),
    (2.5, 0.49035775610023485, -0.2362040516417274, 0.22589439025058716),
    (3.7, 0.3100378576700383, -0.09539530872855403, 0.14714007337914178),
    (9.99, 0.10527695014824179, -0.011073070531461051, 0.051716731980935446),
    (10.0, 0.10516633568168575, -0.011049834970802067, 0.051663356816857464),
    (10.01, 0.10505595320551508, -0.011026672403393367, 0.051610091587206045),
    (25.0, 0.04081066325722558, -0.001665279318422468, 0.02026658143063948),
    (100.0, 0.010050166663333571, -0.00010100499983335, 0.005016666333357139),
    (1e4, 0.00010000500016666666, -1.000100005e-08, 5.000166666666333e-05),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn polygamma_against_high_precision_table() {
    for (x, tri, tetra, xtm1) in POLYGAMMA_TABLE {
        assert!(rel(trigamma(x).unwrap(), tri) < 1e-13, "trigamma({x})");
        assert!(rel(tetragamma(x).unwrap(), tetra) < 1e-12, "tetragamma({x})");
        assert!(rel(x_trigamma_minus_one(x).unwrap(), xtm1) < 1e-12, "xψ′−1 at {x}");
    }
}

#[test]
fn ln_gamma_and_digamma_against_statrs() {
    let mut x = 0.013;
    while x < 500.0 {
        let lg = ln_gamma(x).unwrap();
        let oracle = statrs::function::gamma::ln_gamma(x);
        assert!((lg - oracle).abs() < 1e-13 * oracle.abs().max(1.0), "lnΓ({x}): {lg} vs {oracle}");
        let dg = digamma(x).unwrap();
        let oracle = statrs::function::gamma::digamma(x);
        assert!((dg - oracle).abs() < 1e-12 * oracle.abs().max(1.0), "ψ({x}): {dg} vs {oracle}");
        x *= 1.37;
    }
}

#[test]
fn incomplete_gamma_against_statrs() {
    for &a in &[0.05, 0.5, 1.0, 2.0, 4.5, 20.0, 150.0] {
        for &x in &[1e-4, 0.1, 0.9, 1.0, 3.0, 10.0, 40.0, 200.0] {
            let p = reg_lower_inc_gamma(a, x).unwrap();
            let oracle = statrs::function::gamma::gamma_lr(a, x);
            assert!((p - oracle).abs() < 1e-12, "P({a}, {x}): {p} vs {oracle}");
        }
    }
}

// Φ⁻¹(p) from mpmath at 30 digits.
const NORMAL_QUANTILES: [(f64, f64); 6] = [
    (1e-10, -6.361340902404057),
    (0.001, -3.0902323061678136),
    (0.01, -2.326347874040841),
    (0.025, -1.9599639845400543),
    (0.3, -0.5244005127080408),
    (0.975, 1.9599639845400543),
];

#[test]
fn normal_quantile_against_high_precision_table() {
    for (p, z) in NORMAL_QUANTILES {
        let q = std_normal_quantile(p).unwrap();
        assert!((q - z).abs() < 1e-14 * z.abs(), "{p}: {q} vs {z}");
    }
}

#[test]
fn asymptotic_branch_is_continuous() {
    // the polygamma functions switch to their asymptotic series at 10
    let below = 10.0 - 1e-12;
    let above = 10.0 + 1e-12;
    assert!(rel(trigamma(below).unwrap(), trigamma(above).unwrap()) < 1e-10);
    assert!(rel(digamma(below).unwrap(), digamma(above).unwrap()) < 1e-10);
    assert!(rel(ln_gamma(below).unwrap(), ln_gamma(above).unwrap()) < 1e-10);
}

#[test]
fn invalid_arguments_are_rejected() {
    for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(ln_gamma(bad).is_err());
        assert!(digamma(bad).is_err());
        assert!(trigamma(bad).is_err());
    }
    assert!(reg_lower_inc_gamma(1.0, -1.0).is_err());
    assert!(std_normal_quantile(0.0).is_err());
    assert!(PositiveReal::new(-2.0).is_err());
}

proptest! {
    #[test]
    fn recurrences(x in 1e-3f64..200.0) {
        // lnΓ(x+1) = lnΓ(x) + ln x, ψ(x+1) = ψ(x) + 1/x, ψ′(x+1) = ψ′(x) − 1/x²
        let lg = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap() - x.ln();
        prop_assert!(lg.abs() < 1e-12 * ln_gamma(x + 1.0).unwrap().abs().max(1.0));
        let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        prop_assert!(d.abs() < 1e-12 * (1.0 / x).max(1.0));
        let t = trigamma(x + 1.0).unwrap() - trigamma(x).unwrap() + 1.0 / (x * x);
        prop_assert!(t.abs() < 1e-12 * trigamma(x).unwrap());
    }

    #[test]
    fn x_trigamma_exceeds_one(x in 1e-6f64..1e8) {
        // the identity behind every prior weight being positive
        prop_assert!(x_trigamma_minus_one(x).unwrap() > 0.0);
        prop_assert!(trigamma(x).unwrap() > 0.0);
        prop_assert!(tetragamma(x).unwrap() < 0.0);
    }

    #[test]
    fn incomplete_gamma_is_a_cdf(a in 0.05f64..50.0, x in 0.0f64..100.0, dx in 0.0f64..5.0) {
        let p = reg_lower_inc_gamma(a, x).unwrap();
        let q = reg_lower_inc_gamma(a, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(q >= p - 1e-15);
    }
}
