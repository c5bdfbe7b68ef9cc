//! Density matrices and generalized Bloch coordinates.
//!
//! A state in dimension n maps to theta in R^(n^2-1) via theta_i =
//! Tr(rho a_i) against an operator basis, and back via rho = (I + sum
//! theta_i a_i)/n. The inverse map is defined for every finite theta;
//! physicality (rho >= 0) is reported as a flag so polytope-exterior points
//! remain representable.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cmat::{C64, CMat};
use crate::error::{Error, Result};
use crate::linalg;
use crate::opbasis::OperatorBasis;
use crate::tol;

/// Validated density matrix: Hermitian, unit trace, PSD within
/// [`tol::STATE`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<DensityMatrix> {
        let herm = mat.herm_deviation();
        if herm > tol::STATE {
            return Err(Error::InvalidState(format!("Hermiticity deviation {herm:.3e}")));
        }
        let tr = mat.trace();
        if (tr - C64::ONE).norm() > tol::STATE {
            return Err(Error::InvalidState(format!("trace = {tr}")));
        }
        let min = linalg::min_eigenvalue(&mat.hermitized())?;
        if min < -tol::STATE {
            return Err(Error::InvalidState(format!("min eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn purity(&self) -> f64 {
        CMat::trace_product_re(&self.mat, &self.mat)
    }
}

/// Bloch coordinates against some operator basis; length n^2 - 1 for full
/// bases. Not constrained to the physical region.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    pub theta: Vec<f64>,
}

impl BlochVector {
    pub fn norm_sq(&self) -> f64 {
        self.theta.iter().map(|x| x * x).sum()
    }
}

/// theta_i = Tr(rho a_i), real for Hermitian inputs.
pub fn bloch_from_density(rho: &DensityMatrix, basis: &OperatorBasis) -> Result<BlochVector> {
    if rho.dim() != basis.n {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, basis expects {}",
            rho.dim(),
            rho.dim(),
            basis.n
        )));
    }
    let theta = basis
        .ops
        .iter()
        .map(|a| {
            let full = CMat::trace_product(rho.matrix(), a);
            debug_assert!(full.im.abs() < 1e-10, "imaginary residue {:.3e}", full.im);
            full.re
        })
        .collect();
    Ok(BlochVector { theta })
}

/// Reconstruction rho(theta) = (I + sum theta_i a_i)/n with its physicality
/// verdict.
#[derive(Clone, Debug)]
pub struct BlochState {
    pub rho: CMat,
    pub min_eigenvalue: f64,
    /// min eigenvalue >= -[`tol::STATE`].
    pub physical: bool,
}

pub fn density_from_bloch(theta: &BlochVector, basis: &OperatorBasis) -> Result<BlochState> {
    if theta.theta.len() != basis.ops.len() {
        return Err(Error::DimensionMismatch(format!(
            "theta has {} components, basis has {} operators",
            theta.theta.len(),
            basis.ops.len()
        )));
    }
    let n = basis.n;
    let mut acc = CMat::identity(n);
    for (x, a) in theta.theta.iter().zip(&basis.ops) {
        acc = &acc + &a.scale_re(*x);
    }
    let rho = acc.scale_re(1.0 / n as f64);
    let min_eigenvalue = linalg::min_eigenvalue(&rho.hermitized())?;
    Ok(BlochState { rho, min_eigenvalue, physical: min_eigenvalue >= -tol::STATE })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Pure,
    Mixed,
}

/// Haar-random pure state or Hilbert-Schmidt-random mixed state,
/// deterministic per seed.
pub fn random_state(n: usize, kind: StateKind, seed: u64) -> DensityMatrix {
    let mut rng = crate::rng::seeded(seed);
    random_state_with(n, kind, &mut rng)
}

/// Same draw with caller-managed generator state, for bulk sampling.
pub fn random_state_with(n: usize, kind: StateKind, rng: &mut impl Rng) -> DensityMatrix {
    assert!(n >= 2);
    let mat = match kind {
        StateKind::Pure => {
            let v: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = crate::cmat::vec_norm(&v);
            let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
            CMat::outer(&v, &v)
        }
        StateKind::Mixed => {
            let g = CMat::from_fn(n, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let gg = &g * &g.dagger();
            gg.scale_re(1.0 / gg.trace().re)
        }
    };
    DensityMatrix::new(mat.hermitized()).expect("construction yields a valid state")
}

/// On-disk state: either an explicit matrix or Bloch coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateFile {
    Density { mat: CMat },
    Bloch { theta: Vec<f64> },
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<StateFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Bloch coordinates of the stored state. Density matrices are
    /// validated and projected onto the basis; Bloch entries pass through.
    pub fn bloch(&self, basis: &OperatorBasis) -> Result<BlochVector> {
        match self {
            StateFile::Density { mat } => {
                bloch_from_density(&DensityMatrix::new(mat.clone())?, basis)
            }
            StateFile::Bloch { theta } => {
                if theta.len() != basis.ops.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "theta has {} components, basis has {} operators",
                        theta.len(),
                        basis.ops.len()
                    )));
                }
                Ok(BlochVector { theta: theta.clone() })
            }
        }
    }
}
