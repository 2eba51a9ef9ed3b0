//! The two rival photon-pair sources: an entangled Bell pair, and the
//! disentangled ensemble of product states sharing a random quantization
//! axis with random per-photon phases.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::{bell_state, projector, BellKind, DensityOperator, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxisDistribution {
    /// θ uniform on `[0, π)`.
    #[default]
    UniformAxis,
}

/// How the per-photon phases φ₂, φ₃ are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseDistribution {
    /// φ₂, φ₃ independent and uniform on `[0, 2π)`.
    #[default]
    Uniform,
    /// φ₂ uniform, φ₃ = φ₂ (perfect phase match on every pair).
    Matched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleParams {
    pub axis_distribution: AxisDistribution,
    /// Photon 3's axis is orthogonal to photon 2's.
    pub anticorrelated: bool,
    pub phases: PhaseDistribution,
}

impl Default for EnsembleParams {
    fn default() -> Self {
        Self {
            axis_distribution: AxisDistribution::UniformAxis,
            anticorrelated: true,
            phases: PhaseDistribution::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceModel {
    EntangledPair(BellKind),
    DisentangledEnsemble(EnsembleParams),
}

impl SourceModel {
    /// Singlet source.
    pub fn entangled() -> Self {
        SourceModel::EntangledPair(BellKind::PsiMinus)
    }

    pub fn disentangled() -> Self {
        SourceModel::DisentangledEnsemble(EnsembleParams::default())
    }

    pub fn is_entangled(&self) -> bool {
        matches!(self, SourceModel::EntangledPair(_))
    }

    /// Signed fringe visibility V in `E(a, b) = −V cos 2(a − b)`.
    ///
    /// 1 for the singlet, 1/2 for the anticorrelated ensemble and −1/2 for
    /// the parallel-axis ensemble. Only the singlet is supported on the
    /// entangled side: the double-coincidence geometry is singlet-specific.
    pub fn visibility(&self) -> Result<f64> {
        match self {
            SourceModel::EntangledPair(BellKind::PsiMinus) => Ok(1.0),
            SourceModel::EntangledPair(k) => Err(Error::Unsupported(format!(
                "double-coincidence correlation for {k:?} (singlet only)"
            ))),
            SourceModel::DisentangledEnsemble(p) if p.anticorrelated => Ok(0.5),
            SourceModel::DisentangledEnsemble(_) => Ok(-0.5),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SourceModel::EntangledPair(_) => "entangled",
            SourceModel::DisentangledEnsemble(_) => "disentangled",
        }
    }
}

/// One draw of the disentangled ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSample {
    /// Polarization axis of photon 2, in `[0, π)`.
    pub theta: f64,
    pub phi2: f64,
    pub phi3: f64,
}

impl AxisSample {
    pub fn new(theta: f64, phi2: f64, phi3: f64) -> Self {
        Self {
            theta: theta.rem_euclid(PI),
            phi2: phi2.rem_euclid(TAU),
            phi3: phi3.rem_euclid(TAU),
        }
    }

    /// Raw phase difference φ₃ − φ₂ (not wrapped).
    pub fn delta_phi(&self) -> f64 {
        self.phi3 - self.phi2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    pub state2: PureState,
    pub state3: PureState,
    pub axis: AxisSample,
    pub anticorrelated: bool,
}

impl PairSample {
    /// Builds the product pair for a given axis draw.
    ///
    /// `state2 = cosθ|+⟩ + e^{iφ₂} sinθ|−⟩`; the anticorrelated partner is
    /// `state3 = sinθ|+⟩ − e^{iφ₃} cosθ|−⟩`, the parallel one
    /// `cosθ|+⟩ + e^{iφ₃} sinθ|−⟩`.
    pub fn from_axis(axis: AxisSample, anticorrelated: bool) -> Self {
        let (s, c) = axis.theta.sin_cos();
        let e2 = Complex64::from_polar(1.0, axis.phi2);
        let e3 = Complex64::from_polar(1.0, axis.phi3);
        let state2 = PureState::new(vec![Complex64::new(c, 0.0), e2 * s])
            .expect("cos/sin amplitudes are normalized");
        let state3 = if anticorrelated {
            PureState::new(vec![Complex64::new(s, 0.0), -e3 * c])
        } else {
            PureState::new(vec![Complex64::new(c, 0.0), e3 * s])
        }
        .expect("cos/sin amplitudes are normalized");
        Self {
            state2,
            state3,
            axis,
            anticorrelated,
        }
    }

    /// Linear polarization axis of photon 2 (used for Malus detection).
    pub fn axis2(&self) -> f64 {
        self.axis.theta
    }

    pub fn axis3(&self) -> f64 {
        if self.anticorrelated {
            self.axis.theta + FRAC_PI_2
        } else {
            self.axis.theta
        }
    }
}

pub fn entangled_pair_density(kind: BellKind) -> DensityOperator {
    projector(&bell_state(kind)).expect("Bell states are normalized")
}

pub fn sample_axis<R: Rng + ?Sized>(rng: &mut R, params: &EnsembleParams) -> AxisSample {
    let theta = match params.axis_distribution {
        AxisDistribution::UniformAxis => rng.random::<f64>() * PI,
    };
    let phi2 = rng.random::<f64>() * TAU;
    let phi3 = match params.phases {
        PhaseDistribution::Uniform => rng.random::<f64>() * TAU,
        PhaseDistribution::Matched => phi2,
    };
    AxisSample { theta, phi2, phi3 }
}

pub fn sample_disentangled_pair<R: Rng + ?Sized>(rng: &mut R, params: &EnsembleParams) -> PairSample {
    PairSample::from_axis(sample_axis(rng, params), params.anticorrelated)
}

/// Closed-form double-coincidence correlation `E(a, b) = −V cos 2(a − b)`.
pub fn correlation_analytic(model: &SourceModel, a: f64, b: f64) -> Result<f64> {
    Ok(-model.visibility()? * (2.0 * (a - b)).cos())
}
