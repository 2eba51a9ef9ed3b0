//! Optical elements as transforms on states, axes and operators.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{bell_state, projector, BellKind, Operator, PureState, Tensor, C64};
use crate::sources::AxisSample;

/// Polarizer axis orientation, reduced to `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizerSetting {
    angle: f64,
}

impl PolarizerSetting {
    pub fn new(angle: f64) -> Self {
        let mut a = angle.rem_euclid(PI);
        // rem_euclid can round up to exactly π for tiny negative inputs.
        if a >= PI {
            a = 0.0;
        }
        Self { angle: a }
    }

    pub fn from_degrees(deg: f64) -> Self {
        Self::new(deg.to_radians())
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The orthogonal output port of a polarizing beam splitter.
    pub fn orthogonal(&self) -> Self {
        Self::new(self.angle + PI / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfgType {
    TypeI,
    TypeII,
}

/// Malus law: probability that a photon linearly polarized along
/// `photon_axis` passes the polarizer.
pub fn malus_probability(photon_axis: f64, polarizer: &PolarizerSetting) -> f64 {
    let c = (polarizer.angle - photon_axis).cos();
    c * c
}

/// Helicity swap of a sum-frequency-generation crystal.
///
/// Type I exchanges `|++⟩ ↔ |−−⟩`, type II exchanges `|+−⟩ ↔ |−+⟩`.
pub fn sfg_transform(t: SfgType, state: &PureState) -> Result<PureState> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: state.dim(),
        });
    }
    let mut amps = state.amplitudes().to_vec();
    match t {
        SfgType::TypeI => amps.swap(0, 3),
        SfgType::TypeII => amps.swap(1, 2),
    }
    PureState::new(amps)
}

/// Azimuthal shift φ → φ + π on both photons' phases for type-I passage.
///
/// The rule is only known for type-I crystals; type II is rejected.
pub fn sfg_axis_transform(t: SfgType, axis: AxisSample) -> Result<AxisSample> {
    match t {
        SfgType::TypeI => Ok(AxisSample::new(axis.theta, axis.phi2 + PI, axis.phi3 + PI)),
        SfgType::TypeII => Err(Error::Unsupported(
            "azimuthal transform for type-II SFG crystals".into(),
        )),
    }
}

/// Bell-state measurement on a photon pair of the three-photon register:
/// `|B⟩⟨B| ⊗ 𝟙` for the pair (1, 2).
pub fn bsm_projector(kind: BellKind, photon_pair: (usize, usize)) -> Result<Operator> {
    match photon_pair {
        (1, 2) => {
            let p = projector(&bell_state(kind))?;
            let bell = Operator::new(p.matrix().clone())?;
            bell.tensor(&Operator::new(DMatrix::<C64>::identity(2, 2))?)
        }
        other => Err(Error::Unsupported(format!(
            "Bell-state measurement on photons {other:?}"
        ))),
    }
}
