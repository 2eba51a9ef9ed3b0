//! Closed-form predictions for the four coincidence experiments, for both
//! source models, plus direct Born-rule evaluations of the entangled cases.
//!
//! The three-photon experiments share one shape: Alice's photon 1 is
//! prepared in a pure state ρ¹, the source emits photons 2 and 3 in ρ²³, and
//! a triple coincidence registers the projection onto a measured state
//! `|Φ₁₂₃⟩`. The quantity of interest is `⟨Φ₁₂₃| ρ¹ ⊗ ρ²³ |Φ₁₂₃⟩`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::analytics::correlation_from_counts;
use crate::error::{Error, Result};
use crate::mc_engine::{run_double_coincidence, run_triple_coincidence, McConfig};
use crate::optics::PolarizerSetting;
use crate::qcore::{
    bell_state, born_expectation, linear_polarization_state, projector, BellKind, PureState,
    Tensor, C64,
};
use crate::sources::{entangled_pair_density, SourceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    AspectDouble,
    GisinTriple,
    ZeilingerTeleport,
    KimCompleteBsm,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::AspectDouble => "aspect",
            ExperimentKind::GisinTriple => "gisin",
            ExperimentKind::ZeilingerTeleport => "zeilinger",
            ExperimentKind::KimCompleteBsm => "kim",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Analytic,
    MonteCarlo,
}

impl Engine {
    pub fn label(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::MonteCarlo => "montecarlo",
        }
    }
}

/// The four double-coincidence channel probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AspectProbabilities {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl AspectProbabilities {
    /// `P₊₊ − P₊₋ − P₋₊ + P₋₋`.
    pub fn correlation(&self) -> f64 {
        self.pp - self.pm - self.mp + self.mm
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }
}

pub fn aspect_probabilities(
    model: &SourceModel,
    a: &PolarizerSetting,
    b: &PolarizerSetting,
) -> Result<AspectProbabilities> {
    let v = model.visibility()?;
    let fringe = v * (2.0 * (a.angle() - b.angle())).cos();
    let unlike = 0.25 * (1.0 + fringe);
    let like = 0.25 * (1.0 - fringe);
    Ok(AspectProbabilities {
        pp: like,
        pm: unlike,
        mp: unlike,
        mm: like,
    })
}

fn check_gisin_amplitudes(a0: f64, a1: f64) -> Result<()> {
    if !a0.is_finite() || !a1.is_finite() || (a0 * a0 + a1 * a1 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "Gisin amplitudes must satisfy a0² + a1² = 1 (got {a0}, {a1})"
        )));
    }
    Ok(())
}

/// Triple-coincidence expectation for the Gisin-type teleportation sweep.
///
/// Entangled: `(1 − 2·a0·a1·cos β) / 8`; disentangled: `(1 − a0·a1·cos β) / 8`.
/// At `a0 = a1 = 1/√2` these are `(1 − cos β)/8` and `(1 − ½cos β)/8`.
/// Unequal amplitudes are an extrapolation of the equal-amplitude curves.
pub fn gisin_expectation(model: &SourceModel, beta: f64, a0: f64, a1: f64) -> Result<f64> {
    check_gisin_amplitudes(a0, a1)?;
    // 2·a0·a1 ≤ a0² + a1² = 1; clamp away the rounding excess.
    let overlap = (2.0 * a0 * a1).clamp(-1.0, 1.0);
    let fringe = match model {
        SourceModel::EntangledPair(_) => overlap,
        SourceModel::DisentangledEnsemble(_) => 0.5 * overlap,
    };
    Ok((1.0 - fringe * beta.cos()) / 8.0)
}

/// The two diagonal polarizations used in the Zeilinger-type experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diagonal {
    Plus45,
    Minus45,
}

impl Diagonal {
    pub fn angle(&self) -> f64 {
        match self {
            Diagonal::Plus45 => FRAC_PI_4,
            Diagonal::Minus45 => -FRAC_PI_4,
        }
    }

    pub fn degrees(&self) -> f64 {
        self.angle().to_degrees()
    }

    pub fn from_degrees(deg: f64) -> Option<Self> {
        if (deg - 45.0).abs() < 1e-9 {
            Some(Diagonal::Plus45)
        } else if (deg + 45.0).abs() < 1e-9 {
            Some(Diagonal::Minus45)
        } else {
            None
        }
    }
}

/// Triple-coincidence rate at Bob's `bob_detector` output given Alice's
/// diagonal input.
///
/// Entangled: 1/4 matched, 0 mismatched. Disentangled: 3/16 matched,
/// 1/16 mismatched (the ensemble average evaluated at θ̄ = 45°).
pub fn zeilinger_rate(model: &SourceModel, alice: Diagonal, bob_detector: Diagonal) -> f64 {
    let matched = alice == bob_detector;
    match (model, matched) {
        (SourceModel::EntangledPair(_), true) => 0.25,
        (SourceModel::EntangledPair(_), false) => 0.0,
        (SourceModel::DisentangledEnsemble(_), true) => 3.0 / 16.0,
        (SourceModel::DisentangledEnsemble(_), false) => 1.0 / 16.0,
    }
}

/// Entangled teleportation rate for arbitrary linear polarizations:
/// `cos²(alice − bob) / 4`. Reduces to [`zeilinger_rate`] at ±45°.
pub fn zeilinger_entangled_rate(alice: f64, bob: f64) -> f64 {
    let c = (alice - bob).cos();
    c * c / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KimDetector {
    I,
    II,
}

impl KimDetector {
    pub fn sign(&self) -> f64 {
        match self {
            KimDetector::I => 1.0,
            KimDetector::II => -1.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            KimDetector::I => "I",
            KimDetector::II => "II",
        }
    }

    /// Photon-1/2 projection attributed to this detector:
    /// `(1,0,0,1)/√2` for D₄ᴵ, `(−1,0,0,1)/√2` for D₄ᴵᴵ.
    pub fn bsm_state(&self) -> PureState {
        let h = FRAC_1_SQRT_2;
        let first = match self {
            KimDetector::I => h,
            KimDetector::II => -h,
        };
        PureState::from_real(&[first, 0.0, 0.0, h]).expect("normalized")
    }

    /// The detector whose closed-form sign the Born evaluation of
    /// [`bsm_state`](Self::bsm_state) reproduces.
    ///
    /// Projecting `|+45°⟩ ⊗ |Ψ⁻⟩` onto D₄ᴵ's vector gives `(1 − 2cosφ sinφ)/8`,
    /// i.e. the "−" branch assigned to D₄ᴵᴵ, and vice versa: the two labels
    /// are exchanged between the state vectors and the closed-form signs.
    pub fn born_branch(&self) -> KimDetector {
        match self {
            KimDetector::I => KimDetector::II,
            KimDetector::II => KimDetector::I,
        }
    }
}

/// Complete-BSM triple coincidence vs. Bob's analyzer angle φ.
///
/// Entangled: `(1 ± 2cosφ sinφ)/8`; disentangled: `(1 ± cosφ sinφ)/8`, with
/// "+" for detector I. φ is 2π-periodic so any real angle is accepted.
pub fn kim_expectation(model: &SourceModel, detector: KimDetector, phi: f64) -> f64 {
    // 2 cosφ sinφ = sin 2φ
    let amp = match model {
        SourceModel::EntangledPair(_) => 1.0,
        SourceModel::DisentangledEnsemble(_) => 0.5,
    };
    (1.0 + detector.sign() * amp * (2.0 * phi).sin()) / 8.0
}

/// Settings for one triple-coincidence evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TripleSettings {
    Gisin { beta: f64, a0: f64, a1: f64 },
    /// Alice's input and Bob's detector polarization, radians.
    Zeilinger { alice: f64, bob: f64 },
    Kim { detector: KimDetector, phi: f64 },
}

impl TripleSettings {
    pub fn gisin(beta: f64) -> Self {
        TripleSettings::Gisin {
            beta,
            a0: FRAC_1_SQRT_2,
            a1: FRAC_1_SQRT_2,
        }
    }

    pub fn zeilinger(alice: Diagonal, bob: Diagonal) -> Self {
        TripleSettings::Zeilinger {
            alice: alice.angle(),
            bob: bob.angle(),
        }
    }

    pub fn kind(&self) -> ExperimentKind {
        match self {
            TripleSettings::Gisin { .. } => ExperimentKind::GisinTriple,
            TripleSettings::Zeilinger { .. } => ExperimentKind::ZeilingerTeleport,
            TripleSettings::Kim { .. } => ExperimentKind::KimCompleteBsm,
        }
    }

    /// Same settings with the swept variable replaced by `x`.
    pub fn with_x(&self, x: f64) -> Self {
        match *self {
            TripleSettings::Gisin { a0, a1, .. } => TripleSettings::Gisin { beta: x, a0, a1 },
            TripleSettings::Zeilinger { alice, .. } => TripleSettings::Zeilinger { alice, bob: x },
            TripleSettings::Kim { detector, .. } => TripleSettings::Kim { detector, phi: x },
        }
    }

    /// Settings whose literal Born evaluation reproduces the closed form of
    /// `self` (swaps the Kim detector label, see [`KimDetector::born_branch`]).
    pub fn born_equivalent(&self) -> Self {
        match *self {
            TripleSettings::Kim { detector, phi } => TripleSettings::Kim {
                detector: detector.born_branch(),
                phi,
            },
            other => other,
        }
    }
}

/// Closed-form triple-coincidence value for `settings`.
pub fn triple_closed_form(model: &SourceModel, settings: &TripleSettings) -> Result<f64> {
    match *settings {
        TripleSettings::Gisin { beta, a0, a1 } => gisin_expectation(model, beta, a0, a1),
        TripleSettings::Zeilinger { alice, bob } => match model {
            SourceModel::EntangledPair(_) => Ok(zeilinger_entangled_rate(alice, bob)),
            SourceModel::DisentangledEnsemble(_) => {
                let a = Diagonal::from_degrees(alice.to_degrees());
                let b = Diagonal::from_degrees(bob.to_degrees());
                match (a, b) {
                    (Some(a), Some(b)) => Ok(zeilinger_rate(model, a, b)),
                    _ => Err(Error::Unsupported(
                        "disentangled Zeilinger rate away from ±45°".into(),
                    )),
                }
            }
        },
        TripleSettings::Kim { detector, phi } => Ok(kim_expectation(model, detector, phi)),
    }
}

/// Ingredients of `⟨Φ₁₂₃| ρ¹ ⊗ ρ²³ |Φ₁₂₃⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSetup {
    /// Alice's pure input (photon 1).
    pub alice: PureState,
    /// The entangled source state of photons 2, 3.
    pub source: BellKind,
    /// The measured three-photon state.
    pub measured: PureState,
}

/// Builds the experimental configuration for `settings`.
///
/// - Gisin: ρ¹ = |+45°⟩, ρ²³ = |Φ⁺⟩, `|Φ₁₂₃⟩ = |Ψ⁻⟩₁₂ ⊗ (a0|+⟩ + e^{iβ}a1|−⟩)`.
/// - Zeilinger: ρ¹ = |alice⟩, ρ²³ = |Ψ⁻⟩, `|Φ₁₂₃⟩ = |Ψ⁻⟩₁₂ ⊗ |bob⟩`.
/// - Kim: ρ¹ = |+45°⟩, ρ²³ = |Ψ⁻⟩, `|Φ₁₂₃⟩ = bsm_state(detector) ⊗ (cosφ, sinφ)`.
pub fn triple_setup(settings: &TripleSettings) -> Result<TripleSetup> {
    let plus45 = linear_polarization_state(FRAC_PI_4);
    let (alice, source, pair, photon3) = match *settings {
        TripleSettings::Gisin { beta, a0, a1 } => {
            check_gisin_amplitudes(a0, a1)?;
            let p3 = PureState::new(vec![C64::new(a0, 0.0), C64::from_polar(a1, beta)])?;
            (plus45, BellKind::PhiPlus, bell_state(BellKind::PsiMinus), p3)
        }
        TripleSettings::Zeilinger { alice, bob } => (
            linear_polarization_state(alice),
            BellKind::PsiMinus,
            bell_state(BellKind::PsiMinus),
            linear_polarization_state(bob),
        ),
        TripleSettings::Kim { detector, phi } => (
            plus45,
            BellKind::PsiMinus,
            detector.bsm_state(),
            linear_polarization_state(phi),
        ),
    };
    Ok(TripleSetup {
        alice,
        source,
        measured: pair.tensor(&photon3)?,
    })
}

/// Direct 8-dimensional Born evaluation for an entangled source.
///
/// Kim detectors are evaluated with their literal projection vectors, so the
/// result equals the closed form of `detector.born_branch()`.
pub fn entangled_first_principles(model: &SourceModel, settings: &TripleSettings) -> Result<f64> {
    if !model.is_entangled() {
        return Err(Error::Unsupported(
            "first-principles evaluation of the disentangled ensemble".into(),
        ));
    }
    let setup = triple_setup(settings)?;
    let rho1 = projector(&setup.alice)?;
    let rho = rho1.tensor(&entangled_pair_density(setup.source))?;
    born_expectation(&rho, &setup.measured)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YRange {
    Expectation,
    Correlation,
}

impl YRange {
    fn contains(&self, y: f64) -> bool {
        match self {
            YRange::Expectation => (0.0..=1.0).contains(&y),
            YRange::Correlation => (-1.0..=1.0).contains(&y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub std_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub kind: ExperimentKind,
    pub model: SourceModel,
    pub engine: Engine,
    pub range: YRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    points: Vec<CurvePoint>,
    pub meta: CurveMeta,
}

impl Curve {
    pub fn new(points: Vec<CurvePoint>, meta: CurveMeta) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("curve has no points".into()));
        }
        if points.windows(2).any(|w| w[1].x <= w[0].x) {
            return Err(Error::InvalidArgument("curve x values must strictly increase".into()));
        }
        if let Some(p) = points.iter().find(|p| !p.y.is_finite() || !meta.range.contains(p.y)) {
            return Err(Error::Consistency(format!("curve value {} out of range", p.y)));
        }
        Ok(Self { points, meta })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.y)
    }
}

/// Non-swept parameters of a [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepSettings {
    /// Sweeps polarizer a against a fixed polarizer b (radians).
    Aspect { b: f64 },
    /// Template whose swept variable is overwritten at each grid point.
    Triple(TripleSettings),
}

impl SweepSettings {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            SweepSettings::Aspect { .. } => ExperimentKind::AspectDouble,
            SweepSettings::Triple(t) => t.kind(),
        }
    }
}

/// Derives the per-point seed of a Monte Carlo sweep.
pub(crate) fn point_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evaluates an experiment over `grid` (radians, strictly increasing).
pub fn sweep(
    settings: &SweepSettings,
    model: &SourceModel,
    grid: &[f64],
    engine: Engine,
    mc: Option<&McConfig>,
) -> Result<Curve> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("sweep grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("sweep grid must strictly increase".into()));
    }
    if engine == Engine::MonteCarlo && mc.is_none() {
        return Err(Error::InvalidArgument(
            "montecarlo engine requires a Monte Carlo configuration".into(),
        ));
    }
    let mut points = Vec::with_capacity(grid.len());
    for (i, &x) in grid.iter().enumerate() {
        let point = match (engine, settings) {
            (Engine::Analytic, SweepSettings::Aspect { b }) => {
                let p = aspect_probabilities(
                    model,
                    &PolarizerSetting::new(x),
                    &PolarizerSetting::new(*b),
                )?;
                CurvePoint { x, y: p.correlation(), std_err: None }
            }
            (Engine::Analytic, SweepSettings::Triple(t)) => CurvePoint {
                x,
                y: triple_closed_form(model, &t.with_x(x))?,
                std_err: None,
            },
            (Engine::MonteCarlo, SweepSettings::Aspect { b }) => {
                let base = mc.expect("checked above");
                let cfg = base.with_seed(point_seed(base.seed, i));
                let counts = run_double_coincidence(
                    model,
                    &PolarizerSetting::new(x),
                    &PolarizerSetting::new(*b),
                    &cfg,
                )?;
                let est = correlation_from_counts(&counts)?;
                CurvePoint { x, y: est.value, std_err: Some(est.std_err) }
            }
            (Engine::MonteCarlo, SweepSettings::Triple(t)) => {
                let base = mc.expect("checked above");
                let cfg = base.with_seed(point_seed(base.seed, i));
                let est = run_triple_coincidence(model, &t.with_x(x), &cfg)?;
                CurvePoint { x, y: est.value, std_err: Some(est.std_err) }
            }
        };
        points.push(point);
    }
    let range = match settings {
        SweepSettings::Aspect { .. } => YRange::Correlation,
        SweepSettings::Triple(_) => YRange::Expectation,
    };
    Curve::new(
        points,
        CurveMeta {
            kind: settings.kind(),
            model: *model,
            engine,
            range,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ALGEBRAIC_TOL;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn ent() -> SourceModel {
        SourceModel::entangled()
    }
    fn dis() -> SourceModel {
        SourceModel::disentangled()
    }
    fn h() -> f64 {
        FRAC_1_SQRT_2
    }

    #[test]
    fn aspect_values() {
        let z = PolarizerSetting::new(0.0);
        let p = aspect_probabilities(&ent(), &z, &z).unwrap();
        assert_eq!(p.as_array(), [0.0, 0.5, 0.5, 0.0]);
        let p = aspect_probabilities(&dis(), &z, &z).unwrap();
        assert_eq!(p.as_array(), [0.125, 0.375, 0.375, 0.125]);
        let q = PolarizerSetting::new(FRAC_PI_4);
        for m in [ent(), dis()] {
            let p = aspect_probabilities(&m, &q, &z).unwrap();
            for v in p.as_array() {
                assert!((v - 0.25).abs() < ALGEBRAIC_TOL);
            }
        }
    }

    #[test]
    fn aspect_sums_to_one_and_matches_correlation() {
        for i in 0..32 {
            let a = PolarizerSetting::new(i as f64 * 0.1);
            let b = PolarizerSetting::new(-0.7);
            for m in [ent(), dis()] {
                let p = aspect_probabilities(&m, &a, &b).unwrap();
                assert!((p.as_array().iter().sum::<f64>() - 1.0).abs() < 1e-15);
                let e = crate::sources::correlation_analytic(&m, a.angle(), b.angle()).unwrap();
                assert!((p.correlation() - e).abs() < ALGEBRAIC_TOL);
            }
        }
    }

    #[test]
    fn gisin_values() {
        assert!(gisin_expectation(&ent(), 0.0, h(), h()).unwrap().abs() < 1e-16);
        assert!((gisin_expectation(&dis(), 0.0, h(), h()).unwrap() - 0.0625).abs() < 1e-15);
        assert!((gisin_expectation(&dis(), PI, h(), h()).unwrap() - 0.1875).abs() < 1e-15);
        for m in [ent(), dis()] {
            assert!((gisin_expectation(&m, FRAC_PI_2, h(), h()).unwrap() - 0.125).abs() < 1e-15);
        }
        assert!(gisin_expectation(&ent(), 0.0, 1.0, 1.0).is_err());
        // a0·a1 = 0: no β dependence.
        for beta in [0.0, 1.0, PI] {
            assert_eq!(gisin_expectation(&ent(), beta, 1.0, 0.0).unwrap(), 0.125);
        }
    }

    #[test]
    fn zeilinger_values() {
        use Diagonal::*;
        assert_eq!(zeilinger_rate(&ent(), Plus45, Plus45), 0.25);
        assert_eq!(zeilinger_rate(&ent(), Plus45, Minus45), 0.0);
        assert_eq!(zeilinger_rate(&dis(), Minus45, Minus45), 3.0 / 16.0);
        assert_eq!(zeilinger_rate(&dis(), Minus45, Plus45), 1.0 / 16.0);
        let rel = zeilinger_rate(&dis(), Plus45, Minus45) / zeilinger_rate(&dis(), Plus45, Plus45);
        assert!((rel - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kim_values() {
        use KimDetector::*;
        assert!((kim_expectation(&ent(), I, FRAC_PI_4) - 0.25).abs() < 1e-15);
        assert!(kim_expectation(&ent(), II, FRAC_PI_4).abs() < 1e-15);
        assert!((kim_expectation(&dis(), I, FRAC_PI_4) - 3.0 / 16.0).abs() < 1e-15);
        assert!((kim_expectation(&dis(), II, FRAC_PI_4) - 1.0 / 16.0).abs() < 1e-15);
        for m in [ent(), dis()] {
            for d in [I, II] {
                assert!((kim_expectation(&m, d, FRAC_PI_2) - 0.125).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn first_principles_examples() {
        // Kim detector II vector at φ = π/4 yields the "1 + sin 2φ" branch.
        let kim = TripleSettings::Kim { detector: KimDetector::II, phi: FRAC_PI_4 };
        assert!((entangled_first_principles(&ent(), &kim).unwrap() - 0.25).abs() < 1e-12);
        let z = TripleSettings::zeilinger(Diagonal::Plus45, Diagonal::Plus45);
        assert!((entangled_first_principles(&ent(), &z).unwrap() - 0.25).abs() < 1e-12);
        let g = TripleSettings::gisin(PI);
        assert!((entangled_first_principles(&ent(), &g).unwrap() - 0.25).abs() < 1e-12);
        assert!(matches!(
            entangled_first_principles(&dis(), &g),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn first_principles_matches_closed_forms_on_grid() {
        for i in 0..16 {
            let x = i as f64 * TAU / 16.0;
            let cases = [
                TripleSettings::gisin(x),
                TripleSettings::Gisin { beta: x, a0: 0.6, a1: 0.8 },
                TripleSettings::Zeilinger { alice: FRAC_PI_4, bob: x },
                TripleSettings::Zeilinger { alice: -FRAC_PI_4, bob: x },
                TripleSettings::Kim { detector: KimDetector::I, phi: x },
                TripleSettings::Kim { detector: KimDetector::II, phi: x },
            ];
            for s in cases {
                let born = entangled_first_principles(&ent(), &s.born_equivalent()).unwrap();
                let closed = triple_closed_form(&ent(), &s).unwrap();
                assert!((born - closed).abs() < 1e-12, "{s:?}: {born} vs {closed}");
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let grid = [0.0, FRAC_PI_2, PI];
        let c = sweep(
            &SweepSettings::Triple(TripleSettings::gisin(0.0)),
            &dis(),
            &grid,
            Engine::Analytic,
            None,
        )
        .unwrap();
        let ys: Vec<f64> = c.ys().collect();
        for (y, e) in ys.iter().zip([1.0 / 16.0, 0.125, 3.0 / 16.0]) {
            assert!((y - e).abs() < 1e-15);
        }
        let grid = [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
        let kim = SweepSettings::Triple(TripleSettings::Kim { detector: KimDetector::I, phi: 0.0 });
        let c = sweep(&kim, &ent(), &grid, Engine::Analytic, None).unwrap();
        for (y, e) in c.ys().zip([0.25, 0.125, 0.0]) {
            assert!((y - e).abs() < 1e-15);
        }
        let one = sweep(&kim, &dis(), &[0.3], Engine::Analytic, None).unwrap();
        assert_eq!(one.points()[0].y, kim_expectation(&dis(), KimDetector::I, 0.3));
    }

    #[test]
    fn sweep_rejections() {
        let s = SweepSettings::Triple(TripleSettings::gisin(0.0));
        assert!(sweep(&s, &ent(), &[], Engine::Analytic, None).is_err());
        assert!(sweep(&s, &ent(), &[1.0, 0.5], Engine::Analytic, None).is_err());
        assert!(sweep(&s, &ent(), &[1.0], Engine::MonteCarlo, None).is_err());
    }
}
