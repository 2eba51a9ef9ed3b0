//! Reductions from counts and curves to correlations, visibilities, CHSH
//! values and offset ratios.

use crate::error::{Error, Result};
use crate::experiments::Curve;
use crate::mc_engine::CoincidenceCounts;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationEstimate {
    pub value: f64,
    pub std_err: f64,
    /// Number of detected coincidences the estimate is normalized by.
    pub n: u64,
}

/// `E = P₊₊ − P₊₋ − P₋₊ + P₋₋` with probabilities normalized by the number of
/// detected coincidences.
pub fn correlation_from_counts(c: &CoincidenceCounts) -> Result<CorrelationEstimate> {
    let total = c.detected();
    if total == 0 {
        return Err(Error::InvalidArgument("no coincidences detected".into()));
    }
    let like = (c.n_pp + c.n_mm) as f64;
    let unlike = (c.n_pm + c.n_mp) as f64;
    let value = ((like - unlike) / total as f64).clamp(-1.0, 1.0);
    Ok(CorrelationEstimate {
        value,
        std_err: ((1.0 - value * value) / total as f64).sqrt(),
        n: total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityFit {
    /// Fitted visibility, unclamped.
    pub v: f64,
    pub rms_residual: f64,
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidArgument(format!(
            "{a} angles but {b} correlations"
        )));
    }
    Ok(())
}

fn fit_weighted(angles: &[f64], correlations: &[f64], weights: &[f64]) -> Result<VisibilityFit> {
    let design: Vec<f64> = angles.iter().map(|t| (2.0 * t).cos()).collect();
    let num: f64 = design
        .iter()
        .zip(correlations)
        .zip(weights)
        .map(|((c, e), w)| w * e * c)
        .sum();
    let den: f64 = design.iter().zip(weights).map(|(c, w)| w * c * c).sum();
    if design.iter().all(|c| c.abs() < 1e-12) {
        return Err(Error::InvalidArgument(
            "degenerate design: every cos 2θ vanishes".into(),
        ));
    }
    let v = -num / den;
    let ss: f64 = design
        .iter()
        .zip(correlations)
        .map(|(c, e)| (e + v * c).powi(2))
        .sum();
    Ok(VisibilityFit {
        v,
        rms_residual: (ss / angles.len() as f64).sqrt(),
    })
}

/// Unweighted least-squares V for `E(θ) = −V cos 2θ`.
///
/// Closed form `V = −Σ Eᵢ cos 2θᵢ / Σ cos² 2θᵢ`. A single point is accepted.
pub fn fit_visibility(angles: &[f64], correlations: &[f64]) -> Result<VisibilityFit> {
    check_lengths(angles.len(), correlations.len())?;
    if angles.is_empty() {
        return Err(Error::InvalidArgument("no data points".into()));
    }
    fit_weighted(angles, correlations, &vec![1.0; angles.len()])
}

/// Inverse-variance weighted variant of [`fit_visibility`].
pub fn fit_visibility_weighted(
    angles: &[f64],
    correlations: &[f64],
    std_errs: &[f64],
) -> Result<VisibilityFit> {
    check_lengths(angles.len(), correlations.len())?;
    check_lengths(angles.len(), std_errs.len())?;
    if angles.is_empty() {
        return Err(Error::InvalidArgument("no data points".into()));
    }
    if std_errs.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(Error::InvalidArgument(
            "weighted fit needs positive finite standard errors".into(),
        ));
    }
    let w: Vec<f64> = std_errs.iter().map(|s| 1.0 / (s * s)).collect();
    fit_weighted(angles, correlations, &w)
}

/// CHSH combination `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`.
pub fn chsh(e_ab: f64, e_ab_prime: f64, e_a_prime_b: f64, e_a_prime_b_prime: f64) -> f64 {
    e_ab - e_ab_prime + e_a_prime_b + e_a_prime_b_prime
}

/// `min(y) / max(y)` of a curve.
pub fn offset_peak_ratio(curve: &Curve) -> Result<f64> {
    let (min, max) = curve
        .ys()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| {
            (lo.min(y), hi.max(y))
        });
    if max <= 0.0 {
        return Err(Error::InvalidArgument(
            "curve maximum must be positive".into(),
        ));
    }
    Ok(min / max)
}

/// Subtracts a flat accidental floor from every channel.
pub fn subtract_accidentals(c: &CoincidenceCounts, floor_per_channel: u64) -> Result<CoincidenceCounts> {
    let channels = c.channels();
    if channels.iter().any(|&n| n < floor_per_channel) {
        return Err(Error::InvalidArgument(format!(
            "floor {floor_per_channel} exceeds a channel count {channels:?}"
        )));
    }
    let removed = 4 * floor_per_channel;
    Ok(CoincidenceCounts {
        n_accidental: c.n_accidental.saturating_sub(removed),
        ..CoincidenceCounts::from_channels(channels.map(|n| n - floor_per_channel), c.n_trials)
    })
}

/// Per-channel floor, as a fraction of the raw detected total, that turns a
/// raw visibility into a corrected one: `(1 − v_raw / v_corrected) / 4`.
pub fn accidental_floor_fraction(v_raw: f64, v_corrected: f64) -> Result<f64> {
    if v_corrected.is_nan() || v_corrected <= 0.0 || v_raw.abs() > v_corrected.abs() {
        return Err(Error::InvalidArgument(
            "corrected visibility must exceed the raw one".into(),
        ));
    }
    Ok((1.0 - v_raw / v_corrected) / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{sweep, Engine, SweepSettings, TripleSettings};
    use crate::sources::SourceModel;
    use std::f64::consts::{SQRT_2, TAU};

    fn counts(ch: [u64; 4]) -> CoincidenceCounts {
        CoincidenceCounts::from_channels(ch, ch.iter().sum())
    }

    #[test]
    fn correlation_examples() {
        assert_eq!(correlation_from_counts(&counts([0, 500, 500, 0])).unwrap().value, -1.0);
        assert_eq!(correlation_from_counts(&counts([250; 4])).unwrap().value, 0.0);
        let e = correlation_from_counts(&counts([125, 375, 375, 125])).unwrap();
        assert_eq!(e.value, -0.5);
        assert!((e.std_err - (0.75f64 / 1000.0).sqrt()).abs() < 1e-15);
        assert!(correlation_from_counts(&counts([0; 4])).is_err());
    }

    #[test]
    fn visibility_examples() {
        let angles: Vec<f64> = [0.0f64, 22.5, 45.0, 67.5].iter().map(|d| d.to_radians()).collect();
        for v in [1.0, 0.5] {
            let e: Vec<f64> = angles.iter().map(|t| -v * (2.0 * t).cos()).collect();
            let fit = fit_visibility(&angles, &e).unwrap();
            assert!((fit.v - v).abs() < 1e-12);
            assert!(fit.rms_residual < 1e-12);
        }
        let fit = fit_visibility(&[0.0], &[-0.46]).unwrap();
        assert!((fit.v - 0.46).abs() < 1e-15);
        assert!(fit_visibility(&[TAU / 8.0], &[0.1]).is_err());
        assert!(fit_visibility(&[0.0, 1.0], &[0.1]).is_err());
    }

    #[test]
    fn weighted_fit_agrees_on_exact_data() {
        let angles = [0.0, 0.3, 0.9];
        let e: Vec<f64> = angles.iter().map(|t: &f64| -0.7 * (2.0 * t).cos()).collect();
        let fit = fit_visibility_weighted(&angles, &e, &[0.1, 0.5, 0.01]).unwrap();
        assert!((fit.v - 0.7).abs() < 1e-12);
        assert!(fit_visibility_weighted(&angles, &e, &[0.1, 0.0, 0.1]).is_err());
    }

    #[test]
    fn chsh_examples() {
        let [a, ap, b, bp] = [0.0f64, 45.0, 22.5, 67.5].map(|d| d.to_radians());
        for (v, expected) in [(1.0, 2.0 * SQRT_2), (0.5, SQRT_2)] {
            let e = |x: f64, y: f64| -v * (2.0 * (x - y)).cos();
            let s = chsh(e(a, b), e(a, bp), e(ap, b), e(ap, bp));
            assert!((s.abs() - expected).abs() < 1e-12);
        }
        assert_eq!(chsh(0.0, 0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn offset_ratios() {
        let grid: Vec<f64> = (0..64).map(|i| i as f64 * TAU / 64.0).collect();
        let s = SweepSettings::Triple(TripleSettings::gisin(0.0));
        let dis = sweep(&s, &SourceModel::disentangled(), &grid, Engine::Analytic, None).unwrap();
        assert!((offset_peak_ratio(&dis).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let ent = sweep(&s, &SourceModel::entangled(), &grid, Engine::Analytic, None).unwrap();
        assert!(offset_peak_ratio(&ent).unwrap().abs() < 1e-12);
        let flat = sweep(&s, &SourceModel::entangled(), &[TAU / 4.0], Engine::Analytic, None).unwrap();
        assert_eq!(offset_peak_ratio(&flat).unwrap(), 1.0);
    }

    #[test]
    fn subtraction() {
        let c = counts([100, 300, 300, 100]);
        assert_eq!(subtract_accidentals(&c, 0).unwrap(), c);
        let s = subtract_accidentals(&c, 50).unwrap();
        assert_eq!(s.channels(), [50, 250, 250, 50]);
        let raw = correlation_from_counts(&c).unwrap().value;
        let cor = correlation_from_counts(&s).unwrap().value;
        assert!(cor.abs() > raw.abs() && cor.signum() == raw.signum());
        assert!(subtract_accidentals(&c, 101).is_err());
    }

    #[test]
    fn floor_fraction_for_10km_numbers() {
        let f = accidental_floor_fraction(0.46, 0.87).unwrap();
        assert!((f - 0.117_816_091_954_023).abs() < 1e-12);
        assert!(accidental_floor_fraction(0.9, 0.5).is_err());
    }
}
