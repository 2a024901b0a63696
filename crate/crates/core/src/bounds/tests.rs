use super::battery::{standard_battery, symmetric_mixture};
use super::*;
use crate::density::{Grid2DDensity, ProductDensity};
use crate::functionals::{reference_gaussian, relative_entropy};
use crate::settings::Settings;
use core::f64::consts::{LN_2, PI};
use proptest::prelude::*;
use std::vec::Vec;

fn gauss(m: f64, s: f64) -> Density {
    Density::Line(Density1D::gaussian(m, s * s).unwrap())
}

/// Closed forms for `N(0, σ²)` against `N(0, 1)`.
fn d_sigma(s: f64) -> f64 {
    0.5 * ((s * s - 1.0) - 2.0 * libm::log(s))
}

fn i_sigma(s: f64) -> f64 {
    let u = 1.0 / (s * s) - 1.0;
    s * s * u * u
}

/// `E Δ(c|Z|)` by a trapezoid sum on a fine grid.
fn expected_delta_abs(c: f64) -> f64 {
    let h = 1e-4;
    let mut s = 0.0;
    for k in 0..=120_000 {
        let z = k as f64 * h;
        let w = if k == 0 { 0.5 } else { 1.0 };
        s += w * (c * z - libm::log1p(c * z)) * libm::exp(-0.5 * z * z);
    }
    2.0 * s * h / libm::sqrt(2.0 * PI)
}

fn opts() -> BoundOptions {
    BoundOptions::default()
}

#[test]
fn constants() {
    assert!((cor12_constant() - 0.149_410_13).abs() < 1e-8);
    assert!((sqrt_chord_constant() - 0.490_429_952).abs() < 1e-8);
    assert!((log_concave_constant() - 0.036_535_678).abs() < 1e-8);
    assert!((TENSOR_CONSTANT * 256.0 * PI * PI - 1.0).abs() < 1e-15);
    let c0 = 1.0 - LN_2;
    assert!((w1_constant() - c0 * c0 / (512.0 * PI * PI)).abs() < 1e-18);
}

#[test]
fn scaled_gaussian_is_extremal_for_the_dimensional_bound() {
    let c = evaluate_bound("thm1.1-a", &gauss(0.0, 2.0), &opts()).unwrap();
    let lhs = 2.25 - (3.0 - 2.0 * LN_2);
    assert!((c.lhs - lhs).abs() < 1e-8, "{c:?}");
    assert!((c.rhs - (-0.75 + 2.0 * LN_2)).abs() < 1e-8);
    assert!(c.slack.abs() < 1e-8 && c.pass);
}

#[test]
fn dimensional_bound_is_tight_for_all_centred_gaussians() {
    for k in 0..=27 {
        let s = 0.3 + 0.1 * k as f64;
        let c = evaluate_bound("thm1.1-a", &gauss(0.0, s), &opts()).unwrap();
        assert!(c.slack.abs() < 1e-6, "sigma {s}: {c:?}");
    }
}

#[test]
fn lsi_is_an_equality_for_translates() {
    for m in [-3.0, -0.5, 0.0, 2.0, 7.0] {
        let c = evaluate_bound("lsi", &gauss(m, 1.0), &opts()).unwrap();
        assert!(c.slack.abs() < 1e-8, "{m}: {c:?}");
    }
}

#[test]
fn centred_deficit_bound_on_a_wide_gaussian() {
    let c = evaluate_bound("cor4.3", &gauss(0.0, 2.0), &opts()).unwrap();
    let deficit = 0.5 * i_sigma(2.0) - d_sigma(2.0);
    assert!((c.lhs - 0.318_147_2).abs() < 1e-7 && (c.lhs - deficit).abs() < 1e-8);
    // the monotone map is x ↦ 2x, so T_Δ = E Δ(|Z|)
    let t = expected_delta_abs(1.0);
    let want = (cor43_constant() * t * t / 1.0).max(t * t / (256.0 * PI * PI * d_sigma(2.0)));
    assert!((c.rhs - want).abs() < 1e-8, "{} vs {want}", c.rhs);
    assert!(c.pass);
}

#[test]
fn refined_transport_inequality_matches_oracle() {
    let s = 0.7;
    let c = evaluate_bound("thm4.1", &gauss(0.0, s), &opts()).unwrap();
    let t = expected_delta_abs(1.0 - s);
    let want = 0.5 * (s - 1.0) * (s - 1.0) + t / (8.0 * PI);
    assert!((c.rhs - want).abs() < 1e-8);
    assert!((c.lhs - d_sigma(s)).abs() < 1e-9);
    assert!(c.pass);
    let scaled = BoundOptions { thm41_scaled: true, ..opts() };
    let c2 = evaluate_bound("thm4.1", &gauss(0.0, s), &scaled).unwrap();
    let t2 = expected_delta_abs((1.0 - s) / libm::sqrt(2.0 * PI));
    assert!((c2.rhs - (0.5 * (s - 1.0) * (s - 1.0) + 0.25 * t2)).abs() < 1e-8);
    assert!(c2.pass);
}

#[test]
fn mean_zero_hypothesis_is_enforced() {
    let e = evaluate_bound("thm4.1", &gauss(1.0, 1.0), &opts()).unwrap_err();
    assert!(matches!(e, Error::Hypothesis { bound: "thm4.1", .. }), "{e}");
    let e = evaluate_bound("cor4.4", &gauss(0.5, 2.0), &opts()).unwrap_err();
    assert!(e.is_hypothesis());
}

#[test]
fn moment_hypothesis_gates_the_simplified_bounds() {
    let e = evaluate_bound("eq1.8", &gauss(0.0, 2.0), &opts()).unwrap_err();
    match e {
        Error::Hypothesis { reason, .. } => assert!(reason.starts_with("moment hypothesis")),
        other => panic!("{other}"),
    }
    let c = evaluate_bound("eq1.8", &gauss(0.0, 0.5), &opts()).unwrap();
    let (i, d) = (i_sigma(0.5), d_sigma(0.5));
    assert!((c.lhs - (i - 2.0 * d)).abs() < 1e-8);
    assert!((c.rhs - (i - libm::log1p(i))).abs() < 1e-8);
    assert!(c.pass);
}

#[test]
fn convexity_hypothesis_needs_a_certificate() {
    let mix = Density::Line(symmetric_mixture(1.0, &Settings::default()).unwrap());
    assert!(evaluate_bound("thm4.2", &mix, &opts()).unwrap_err().is_hypothesis());
    // N(0, 4) has v'' = 1/4
    let c = evaluate_bound("cor4.4", &gauss(0.0, 2.0), &opts()).unwrap();
    assert_eq!(c.constants["eps"].value, 0.25);
    let want = log_concave_constant() * 0.25 * 1.0;
    assert!((c.rhs - want).abs() < 1e-9);
}

#[test]
fn unknown_bound() {
    assert_eq!(evaluate_bound("nope", &gauss(0.0, 1.0), &opts()).unwrap_err(), Error::UnknownBound("nope".into()));
}

#[test]
fn zero_over_zero_convention() {
    let c = evaluate_bound("thm1.3", &Density::standard_gaussian(1), &opts()).unwrap();
    assert_eq!(c.rhs, 0.0);
    assert!(c.lhs.abs() < 1e-9);
}

#[test]
fn talagrand_map_identity_is_tight() {
    for mu in [gauss(0.0, 0.6), gauss(1.0, 1.5), Density::Line(symmetric_mixture(2.0, &Settings::default()).unwrap())] {
        let c = evaluate_bound("talagrand-map", &mu, &opts()).unwrap();
        assert!(c.slack.abs() < 1e-6, "{c:?}");
    }
}

#[test]
fn smoothing_bounds_with_a_partner() {
    let y = Density1D::gaussian(0.0, 0.5).unwrap();
    let o = BoundOptions { partner: Some(y), ..opts() };
    let mix = Density::Line(symmetric_mixture(2.0, &Settings::default()).unwrap());
    for id in ["epi", "lem3.2", "lem3.3"] {
        let c = evaluate_bound(id, &mix, &o).unwrap();
        assert!(c.pass, "{c:?}");
    }
    // Gaussians are extremal for the entropy power inequality
    let c = evaluate_bound("epi", &gauss(0.0, 1.3), &opts()).unwrap();
    assert!(c.slack.abs() < 1e-8, "{c:?}");
    let c = evaluate_bound("lem3.3", &gauss(0.0, 1.3), &opts()).unwrap();
    assert!(c.slack.abs() < 1e-8, "{c:?}");
}

#[test]
fn reversed_transport_for_a_shift_is_an_equality() {
    // D(N(m, 1 + t) | N(0, 1 + t)) = m²/(2(1 + t)) ≤ m²/(2t)
    let o = BoundOptions { t: 0.5, ..opts() };
    let c = evaluate_bound("lem3.2", &gauss(1.5, 1.0), &o).unwrap();
    assert!((c.lhs - 2.25).abs() < 1e-9);
    assert!((c.rhs - 2.25 / 3.0).abs() < 1e-9);
}

#[test]
fn equality_probe_on_translates() {
    let p = equality_probe(&gauss(5.0, 1.0)).unwrap();
    assert!(p.deficit.abs() < 1e-8 && p.w2_to_best_translate < 1e-6);
    let p = equality_probe(&gauss(0.0, 1.1)).unwrap();
    let want = 0.5 * (1.0 / 1.21 - 1.0 + 2.0 * libm::log(1.1));
    assert!((p.deficit - want).abs() < 1e-9, "{}", p.deficit);
    assert!((p.w2_to_best_translate - 0.1).abs() < 1e-7);
    let mix = Density1D::mixture(std::vec![
        crate::Component::new(0.5, -0.3, 1.0),
        crate::Component::new(0.5, 0.3, 1.0)
    ])
    .unwrap();
    let p = equality_probe(&Density::Line(mix)).unwrap();
    assert!(p.deficit > 0.0 && p.w2_to_best_translate > 0.0);
}

#[test]
fn equality_probe_on_a_shifted_plane() {
    let g = Grid2DDensity::bivariate_gaussian([1.0, -2.0], [[1.0, 0.0], [0.0, 1.0]], &Settings::default()).unwrap();
    let p = equality_probe(&Density::Plane(g)).unwrap();
    assert!(p.deficit.abs() < 1e-7 && p.w2_to_best_translate < 1e-4, "{p:?}");
}

#[test]
fn deficit_is_translation_invariant() {
    let mix = Density::Line(symmetric_mixture(2.0, &Settings::default()).unwrap());
    let base = crate::functionals::deficit(&mix).unwrap().value;
    for t in [-3.0, -1.0, 1.0, 3.0] {
        let v = crate::functionals::deficit(&mix.shifted(&[t]).unwrap()).unwrap().value;
        assert!((v - base).abs() < 1e-7, "{t}: {v} vs {base}");
    }
}

#[test]
fn plane_functionals_are_permutation_invariant() {
    let spec = crate::GridSpec::new(-8.0, 8.0, 321).unwrap();
    // non-Gaussian, asymmetric in the two coordinates
    let g = Grid2DDensity::from_fn(spec, spec, |x, y| -0.5 * x * x - 0.3 * y * y - 0.05 * (x + 0.5 * y).powi(4)).unwrap();
    let (a, b) = (Density::Plane(g.clone()), Density::Plane(g.transposed()));
    let ga = reference_gaussian(&a);
    let da = relative_entropy(&a, &ga).unwrap().value;
    let db = relative_entropy(&b, &ga).unwrap().value;
    assert!((da - db).abs() < 1e-7);
    let fa = crate::functionals::deficit(&a).unwrap().value;
    let fb = crate::functionals::deficit(&b).unwrap().value;
    assert!((fa - fb).abs() < 1e-7);
}

#[test]
fn correlated_plane_certificates() {
    let g = Grid2DDensity::bivariate_gaussian([0.0, 0.0], [[1.0, 0.5], [0.5, 1.0]], &Settings::default()).unwrap();
    let mu = Density::Plane(g);
    let out = certify_density(&mu, &["thm1.3", "thm1.4", "talagrand", "hwi"], &opts());
    for o in &out {
        assert!(o.is_ok() && o.certificate().is_some(), "{o:?}");
    }
    // rhs of the tensorised bound is positive: μ̄ is N(0,1) ⊗ N(0, 3/4)
    assert!(out[0].certificate().unwrap().rhs > 0.0);
    // exact W2² = tr Σ + 2 − 2 tr Σ^{1/2} lies inside the bracket used
    let w2 = 4.0 - 2.0 * (libm::sqrt(1.5) + libm::sqrt(0.5));
    let t = out[2].certificate().unwrap();
    assert!(t.notes.contains("W2^2 in"));
    assert!(t.rhs <= w2 + 1e-9);
}

#[test]
fn suite_is_ordered_by_bound_then_member() {
    let battery = [gauss(0.0, 1.0), gauss(0.0, 0.5)];
    let ids = ["lsi", "eq1.8", "thm1.1-a"];
    let out = certify_suite(&battery, &ids, &opts());
    let keys: Vec<(String, usize)> = out.iter().map(|e| (e.bound_id.clone(), e.index)).collect();
    assert_eq!(keys[0], ("lsi".to_string(), 0));
    assert_eq!(keys[1], ("lsi".to_string(), 1));
    assert_eq!(keys[5], ("thm1.1-a".to_string(), 1));
    assert!(out.iter().all(|e| e.outcome.is_ok()));
    let std_gauss = certify_suite(&[Density::standard_gaussian(1)], &bound_ids().collect::<Vec<_>>(), &opts());
    for e in &std_gauss {
        assert!(e.outcome.is_ok(), "{e:?}");
    }
}

#[test]
fn product_chain_inequalities() {
    // I − 2D ≥ nΔ(2D/n) ≥ nΔ(W2²/n) when E|X|² ≤ n
    let p = Density::Product(
        ProductDensity::new(std::vec![
            Density1D::gaussian(0.0, 0.25).unwrap(),
            symmetric_mixture(1.0, &Settings::default()).unwrap()
        ])
        .unwrap(),
    );
    assert!(p.second_moment() <= 2.0);
    let g = reference_gaussian(&p);
    let d = relative_entropy(&p, &g).unwrap().value;
    let i = crate::functionals::relative_fisher(&p, &g).unwrap().value;
    let w2: f64 = p.marginals().unwrap().iter().map(|f| crate::transport::w2(f, &Density1D::standard_gaussian()).unwrap().powi(2)).sum();
    let a = i - 2.0 * d;
    let b = 2.0 * delta(d).unwrap();
    let c = 2.0 * delta(w2 / 2.0).unwrap();
    assert!(a >= b - 1e-6 && b >= c - 1e-6, "{a} {b} {c}");
}

#[test]
fn battery_members_are_well_formed() {
    let b = standard_battery(&Settings::default()).unwrap();
    assert_eq!(b.len(), 14);
    let t = b.iter().find(|(n, _)| n == "tilted-eps-0.5").unwrap();
    assert_eq!(t.1.convexity_lower_bound(), Some(0.5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gaussian_bounds_hold(m in -3.0f64..3.0, s in 0.3f64..3.0) {
        let mu = gauss(m, s);
        for id in ["lsi", "thm1.1-a", "thm1.1-b", "hwi", "talagrand", "eq1.4", "thm1.3"] {
            let c = evaluate_bound(id, &mu, &opts()).unwrap();
            prop_assert!(c.pass, "{} {:?}", id, c);
        }
        let d = crate::functionals::deficit(&mu).unwrap().value;
        let want = 0.5 * (1.0 / (s * s) - 1.0 + 2.0 * libm::log(s));
        prop_assert!((d - want).abs() < 1e-8);
    }
}
