use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use eprsim::analytics::{chsh, correlation_from_counts, fit_visibility, subtract_accidentals};
use eprsim::experiments::{aspect_probabilities, gisin_expectation, kim_expectation, KimDetector};
use eprsim::mc_engine::{
    detection_rate_analytic, phase_accept, run_double_coincidence, wrap_phase, CoincidenceCounts, McConfig,
};
use eprsim::optics::{malus_probability, sfg_transform, PolarizerSetting, SfgType};
use eprsim::qcore::{tensor, PureState};
use eprsim::sources::{correlation_analytic, SourceModel};

fn qubit() -> impl Strategy<Value = PureState> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|[a, b, c, d]| {
            PureState::normalized(vec![Complex64::new(a, b), Complex64::new(c, d)]).unwrap()
        })
}

fn two_photon() -> impl Strategy<Value = PureState> {
    prop::array::uniform8(-1.0f64..1.0)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let amps = (0..4).map(|i| Complex64::new(v[2 * i], v[2 * i + 1])).collect();
            PureState::normalized(amps).unwrap()
        })
}

fn model() -> impl Strategy<Value = SourceModel> {
    prop_oneof![Just(SourceModel::entangled()), Just(SourceModel::disentangled())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tensor_is_associative(a in qubit(), b in qubit(), c in qubit()) {
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        for (x, y) in left.amplitudes().iter().zip(right.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn sfg_preserves_norm_and_is_involutive(psi in two_photon()) {
        for t in [SfgType::TypeI, SfgType::TypeII] {
            let once = sfg_transform(t, &psi).unwrap();
            let norm: f64 = once.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            prop_assert_eq!(sfg_transform(t, &once).unwrap(), psi.clone());
        }
        let i_then_ii = sfg_transform(SfgType::TypeII, &sfg_transform(SfgType::TypeI, &psi).unwrap()).unwrap();
        let ii_then_i = sfg_transform(SfgType::TypeI, &sfg_transform(SfgType::TypeII, &psi).unwrap()).unwrap();
        prop_assert_eq!(i_then_ii, ii_then_i);
    }

    #[test]
    fn malus_outcomes_are_complete(axis in -10.0f64..10.0, pol in -10.0f64..10.0) {
        let p = PolarizerSetting::new(pol);
        let sum = malus_probability(axis, &p) + malus_probability(axis, &p.orthogonal());
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_depends_only_on_relative_angle(m in model(), a in 0.0f64..PI, b in 0.0f64..PI, r in -TAU..TAU) {
        let e = correlation_analytic(&m, a, b).unwrap();
        prop_assert!((e - correlation_analytic(&m, a + r, b + r).unwrap()).abs() < 1e-12);
        prop_assert!((e - correlation_analytic(&m, b, a).unwrap()).abs() < 1e-12);
        prop_assert!(e.abs() <= 1.0);
    }

    #[test]
    fn channel_probabilities_are_a_distribution(m in model(), a in 0.0f64..PI, b in 0.0f64..PI) {
        let pa = PolarizerSetting::new(a);
        let pb = PolarizerSetting::new(b);
        let p = aspect_probabilities(&m, &pa, &pb).unwrap();
        prop_assert!(p.as_array().iter().all(|&x| x >= 0.0));
        prop_assert!((p.as_array().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // Exchanging the stations swaps the unlike channels.
        let q = aspect_probabilities(&m, &pb, &pa).unwrap();
        prop_assert!((p.pm - q.mp).abs() < 1e-12 && (p.pp - q.pp).abs() < 1e-12);
    }

    #[test]
    fn chsh_bounded_per_model(m in model(), angles in prop::array::uniform4(0.0f64..PI)) {
        let [a, ap, b, bp] = angles;
        let e = |x, y| correlation_analytic(&m, x, y).unwrap();
        let s = chsh(e(a, b), e(a, bp), e(ap, b), e(ap, bp)).abs();
        let bound = if m.is_entangled() { 2.0 * 2f64.sqrt() } else { 2.0 };
        prop_assert!(s <= bound + 1e-12);
    }

    #[test]
    fn visibility_fit_is_scale_equivariant(v in 0.05f64..1.0, k in 0.1f64..3.0, n in 2usize..20) {
        let angles: Vec<f64> = (0..n).map(|i| i as f64 * PI / n as f64 + 0.1).collect();
        let corr: Vec<f64> = angles.iter().map(|t| -v * (2.0 * t).cos()).collect();
        let scaled: Vec<f64> = corr.iter().map(|c| k * c).collect();
        let base = fit_visibility(&angles, &corr).unwrap().v;
        prop_assert!((base - v).abs() < 1e-12);
        prop_assert!((fit_visibility(&angles, &scaled).unwrap().v - k * base).abs() < 1e-12);
    }

    #[test]
    fn subtraction_never_flips_the_correlation_sign(
        channels in prop::array::uniform4(1u64..10_000),
        floor_frac in 0.0f64..1.0,
    ) {
        let c = CoincidenceCounts::from_channels(channels, channels.iter().sum());
        let floor = (floor_frac * *channels.iter().min().unwrap() as f64) as u64;
        let before = correlation_from_counts(&c).unwrap().value;
        let sub = subtract_accidentals(&c, floor).unwrap();
        if let Ok(after) = correlation_from_counts(&sub) {
            prop_assert!(before * after.value >= 0.0);
            prop_assert!(after.value.abs() >= before.abs() - 1e-12);
        }
    }

    #[test]
    fn phase_acceptance_is_monotone_in_window(
        phi2 in 0.0f64..TAU, phi3 in 0.0f64..TAU, w1 in 0.0f64..PI, w2 in 0.0f64..PI,
    ) {
        let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
        if phase_accept(phi2, phi3, lo) {
            prop_assert!(phase_accept(phi2, phi3, hi));
        }
        prop_assert_eq!(phase_accept(phi2, phi3, lo), phase_accept(phi2 + 1.0, phi3 + 1.0, lo));
        prop_assert!(detection_rate_analytic(lo) <= detection_rate_analytic(hi));
        let w = wrap_phase(phi3 - phi2);
        prop_assert!(w > -PI - 1e-12 && w <= PI + 1e-12);
    }

    #[test]
    fn triple_curves_stay_between_zero_and_a_quarter(m in model(), x in -TAU..TAU) {
        for d in [KimDetector::I, KimDetector::II] {
            let k = kim_expectation(&m, d, x);
            prop_assert!((0.0..=0.25).contains(&k));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = gisin_expectation(&m, x, s, s).unwrap();
        prop_assert!((0.0..=0.25).contains(&g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn monte_carlo_counts_account_for_every_trial(
        m in model(), a in 0.0f64..180.0, b in 0.0f64..180.0, seed in any::<u64>(), streams in 1usize..6,
    ) {
        let cfg = McConfig { streams, ..McConfig::new(4_000, seed) };
        let counts = run_double_coincidence(
            &m, &PolarizerSetting::from_degrees(a), &PolarizerSetting::from_degrees(b), &cfg,
        ).unwrap();
        prop_assert_eq!(counts.detected(), 4_000);
        prop_assert_eq!(counts.n_accidental, 0);
        let again = run_double_coincidence(
            &m, &PolarizerSetting::from_degrees(a), &PolarizerSetting::from_degrees(b), &cfg,
        ).unwrap();
        prop_assert_eq!(counts, again);
    }
}
