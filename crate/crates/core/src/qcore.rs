//! Dense complex linear algebra for one to three polarization qubits.
//!
//! Index convention: photons are ordered 1, 2, 3 from left to right, the
//! leftmost photon being the most significant (slowest varying) bit. On each
//! photon `|+⟩` is bit 0 and `|−⟩` is bit 1, so the two-photon basis reads
//! `(++, +−, −+, −−)`. `|+⟩`/`|−⟩` are the z-basis linear polarizations
//! (0° and 90°); `±45°` are their equal-weight superpositions.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for algebraic identities (normalization, hermiticity, trace).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for internal consistency checks (imaginary residues, phase equality).
pub const CONSISTENCY_TOL: f64 = 1e-9;
/// Smallest eigenvalue accepted as "non-negative" for a density operator.
pub const PSD_TOL: f64 = 1e-10;

const MAX_DIM: usize = 8;

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        d => Err(Error::BadDimension(d)),
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A normalized pure polarization state on 2, 4 or 8 dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let amps = DVector::from_vec(amplitudes);
        let norm_sq = amps.norm_squared();
        if (norm_sq - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amps })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().copied().map(c).collect())
    }

    /// Builds a state from arbitrary non-zero amplitudes by rescaling them.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let v = DVector::from_vec(amplitudes);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(Self { amps: v / c(n) })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// True when the two states differ at most by a global phase.
    pub fn equal_up_to_phase(&self, other: &PureState) -> bool {
        self.inner(other)
            .map(|z| (z.norm() - 1.0).abs() <= CONSISTENCY_TOL)
            .unwrap_or(false)
    }

    /// `⟨self| f₁ ⊗ f₂ ⊗ …⟩` computed without materializing the product.
    ///
    /// Used on the Monte Carlo hot path, where the product state changes on
    /// every trial.
    pub fn product_overlap(&self, factors: &[&PureState]) -> Result<C64> {
        let total: usize = factors.iter().map(|f| f.dim()).product();
        if total != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: total,
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for (idx, amp) in self.amps.iter().enumerate() {
            if *amp == C64::new(0.0, 0.0) {
                continue;
            }
            let mut rem = idx;
            let mut prod = c(1.0);
            for f in factors.iter().rev() {
                let d = f.dim();
                prod *= f.amps[rem % d];
                rem /= d;
            }
            acc += amp.conj() * prod;
        }
        Ok(acc)
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensity("matrix is not square"));
        }
        check_dim(matrix.nrows())?;
        let herm_dev = (&matrix - matrix.adjoint()).camax();
        if herm_dev > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > ALGEBRAIC_TOL || tr.im.abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity("trace is not 1"));
        }
        let herm = (&matrix + matrix.adjoint()) * c(0.5);
        if herm.symmetric_eigenvalues().iter().any(|&l| l < -PSD_TOL) {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            matrix: DMatrix::identity(dim, dim) * c(1.0 / dim as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * c(0.5);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    /// Traces out qubit `qubit` (0-based, leftmost first).
    pub fn partial_trace(&self, qubit: usize) -> Result<Self> {
        let n = self.dim().trailing_zeros() as usize;
        if n < 2 {
            return Err(Error::BadDimension(self.dim()));
        }
        if qubit >= n {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} out of range for {n} qubits"
            )));
        }
        let shift = n - 1 - qubit;
        let out_dim = self.dim() / 2;
        // Re-inserts bit `b` at position `shift` of a reduced index.
        let expand = |r: usize, b: usize| {
            let low = r & ((1 << shift) - 1);
            let high = r >> shift;
            (high << (shift + 1)) | (b << shift) | low
        };
        let m = DMatrix::from_fn(out_dim, out_dim, |i, j| {
            (0..2)
                .map(|b| self.matrix[(expand(i, b), expand(j, b))])
                .sum()
        });
        Ok(Self { matrix: m })
    }
}

/// A general Hermitian operator with no trace or positivity constraint,
/// e.g. a measurement projector of rank > 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument("operator matrix is not square".into()));
        }
        check_dim(matrix.nrows())?;
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * c(0.5);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    /// Applies the operator; the result is generally unnormalized.
    pub fn apply(&self, psi: &PureState) -> Result<DVector<C64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        Ok(&self.matrix * psi.as_vector())
    }
}

/// Kronecker product for states and operators.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

fn check_product(left: usize, right: usize) -> Result<()> {
    if left * right > MAX_DIM {
        Err(Error::DimensionOverflow { left, right })
    } else {
        Ok(())
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_product(self.dim(), other.dim())?;
        Ok(Self {
            amps: self.amps.kronecker(&other.amps),
        })
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_product(self.dim(), other.dim())?;
        Ok(Self {
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_product(self.dim(), other.dim())?;
        Ok(Self {
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiMinus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PhiPlus,
    ];
}

pub fn bell_state(kind: BellKind) -> PureState {
    let h = FRAC_1_SQRT_2;
    let amps = match kind {
        BellKind::PsiMinus => [0.0, h, -h, 0.0],
        BellKind::PsiPlus => [0.0, h, h, 0.0],
        BellKind::PhiMinus => [h, 0.0, 0.0, -h],
        BellKind::PhiPlus => [h, 0.0, 0.0, h],
    };
    PureState {
        amps: DVector::from_iterator(4, amps.into_iter().map(c)),
    }
}

/// `(cos angle, sin angle)`: linear polarization at `angle` from the `|+⟩` axis.
pub fn linear_polarization_state(angle: f64) -> PureState {
    PureState {
        amps: DVector::from_vec(vec![c(angle.cos()), c(angle.sin())]),
    }
}

/// `|ψ⟩⟨ψ|`. Rejects states that drifted off the unit sphere.
pub fn projector(psi: &PureState) -> Result<DensityOperator> {
    let norm_sq = psi.amps.norm_squared();
    if (norm_sq - 1.0).abs() > ALGEBRAIC_TOL {
        return Err(Error::NotNormalized(norm_sq));
    }
    Ok(DensityOperator {
        matrix: &psi.amps * psi.amps.adjoint(),
    })
}

/// `⟨φ|ρ|φ⟩`, checked to be real and clamped to `[0, 1]`.
pub fn born_expectation(rho: &DensityOperator, phi: &PureState) -> Result<f64> {
    if rho.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: phi.dim(),
        });
    }
    let v = phi.amps.dotc(&(&rho.matrix * &phi.amps));
    if v.im.abs() > CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "Born expectation has imaginary part {}",
            v.im
        )));
    }
    if v.re < -CONSISTENCY_TOL || v.re > 1.0 + CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "Born expectation {} outside [0, 1]",
            v.re
        )));
    }
    Ok(v.re.clamp(0.0, 1.0))
}
