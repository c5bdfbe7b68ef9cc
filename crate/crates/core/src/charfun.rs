//! Margenau-Hill characteristic functions and their classical counterparts.
//!
//! The quantum side averages `Tr[rho e^{iA_1} ... e^{iA_F}]` over all
//! orderings of the per-family generators `A_m = sum_j t_j alpha_{m,j}`.
//! The classical side is the finite Fourier sum of the joint distribution
//! over the outcome tuples. For qubits the two coincide identically; for
//! qutrits they measurably do not, and [`coincidence_scan`] reports the gap
//! instead of assuming either answer. [`bochner_check`] probes positive
//! definiteness of a characteristic function on finite point sets, which
//! separates true distributions from the signed quasi-distributions that
//! appear outside the classicality polytope.

use crate::cmat::CMat;
use crate::error::{Error, Result};
use crate::linalg;
use crate::opbasis::{EigenvalueTable, OperatorBasis};
use crate::povm::{self, JointDistribution};
use crate::states::{bloch_from_density, DensityMatrix};
use crate::tol;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

/// Fourier argument grouped per family: `per_family[m][j]` multiplies the
/// j-th operator of family m.
#[derive(Clone, Debug, PartialEq)]
pub struct TVector {
    pub per_family: Vec<Vec<f64>>,
}

impl TVector {
    pub fn zero(b: &OperatorBasis) -> TVector {
        TVector {
            per_family: b.families.iter().map(|f| vec![0.0; f.len()]).collect(),
        }
    }

    /// Splits a flat vector laid out like `b.ops` into family blocks.
    pub fn from_flat(b: &OperatorBasis, flat: &[f64]) -> Result<TVector> {
        if flat.len() != b.ops.len() {
            return Err(Error::DimensionMismatch(format!(
                "t has {} components, basis has {} operators",
                flat.len(),
                b.ops.len()
            )));
        }
        Ok(TVector {
            per_family: b
                .families
                .iter()
                .map(|f| f.iter().map(|&i| flat[i]).collect())
                .collect(),
        })
    }

    pub fn negated(&self) -> TVector {
        TVector {
            per_family: self
                .per_family
                .iter()
                .map(|f| f.iter().map(|&x| -x).collect())
                .collect(),
        }
    }

    /// Componentwise difference; shapes must already agree.
    pub fn sub(&self, other: &TVector) -> TVector {
        debug_assert_eq!(self.per_family.len(), other.per_family.len());
        TVector {
            per_family: self
                .per_family
                .iter()
                .zip(&other.per_family)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x - y).collect())
                .collect(),
        }
    }

    pub fn flat(&self) -> Vec<f64> {
        self.per_family.iter().flatten().copied().collect()
    }

    fn matches(&self, b: &OperatorBasis) -> bool {
        self.per_family.len() == b.families.len()
            && self
                .per_family
                .iter()
                .zip(&b.families)
                .all(|(t, f)| t.len() == f.len())
    }

    fn matches_table(&self, table: &EigenvalueTable) -> bool {
        self.per_family.len() == table.outcomes.len()
            && self
                .per_family
                .iter()
                .zip(&table.outcomes)
                .all(|(t, fam)| fam.iter().all(|tuple| tuple.len() == t.len()))
    }
}

/// One evaluation point together with its value.
#[derive(Clone, Debug)]
pub struct CharFunSample {
    pub t: TVector,
    pub value: C64,
}

/// Default scan grid: every component drawn uniformly from `[-pi, pi]`.
pub fn uniform_t_grid(b: &OperatorBasis, points: usize, seed: u64) -> Vec<TVector> {
    let mut rng = crate::rng::seeded(seed);
    (0..points)
        .map(|_| TVector {
            per_family: b
                .families
                .iter()
                .map(|f| (0..f.len()).map(|_| rng.random_range(-PI..PI)).collect())
                .collect(),
        })
        .collect()
}

/// All permutations of `0..k` in Heap's-algorithm order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity((1..=k).product());
    out.push(items.clone());
    let mut c = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            out.push(items.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `A_m(t) = sum_j t^(m)_j alpha_{m,j}`.
pub(crate) fn family_generator(b: &OperatorBasis, t: &TVector, m: usize) -> CMat {
    let mut h = CMat::zeros(b.n);
    for (j, &idx) in b.families[m].iter().enumerate() {
        h = &h + &b.ops[idx].scale_re(t.per_family[m][j]);
    }
    h
}

/// Margenau-Hill characteristic function: the average of
/// `Tr[rho e^{iA_{pi(1)}} ... e^{iA_{pi(F)}}]` over all F! orderings of the
/// families. Symmetrization makes the value independent of how the
/// permutations are enumerated.
pub fn mh_charfun(rho: &DensityMatrix, b: &OperatorBasis, t: &TVector) -> Result<C64> {
    if rho.dim() != b.n {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs basis dimension {}",
            rho.dim(),
            b.n
        )));
    }
    if !t.matches(b) {
        return Err(Error::DimensionMismatch(
            "t vector shape does not match basis families".into(),
        ));
    }
    let exps = (0..b.families.len())
        .map(|m| linalg::unitary_exp(&family_generator(b, t, m), 1.0))
        .collect::<Result<Vec<CMat>>>()?;
    let perms = permutations(exps.len());
    let mut acc = C64::new(0.0, 0.0);
    for perm in &perms {
        let mut prod = exps[perm[0]].clone();
        for &i in &perm[1..] {
            prod = &prod * &exps[i];
        }
        acc += CMat::trace_product(rho.matrix(), &prod);
    }
    Ok(acc.unscale(perms.len() as f64))
}

/// Classical characteristic function of a joint (quasi-)distribution:
/// `sum_lambda p(lambda) exp(i sum_m <t^(m), z^(m, lambda_m)>)`. Negative
/// entries of `p` are summed as-is, so the formula covers signed
/// quasi-distributions outside the polytope.
pub fn classical_charfun(
    p: &JointDistribution,
    table: &EigenvalueTable,
    t: &TVector,
) -> Result<C64> {
    if !t.matches_table(table) {
        return Err(Error::DimensionMismatch(
            "t vector shape does not match eigenvalue table".into(),
        ));
    }
    let nfam = table.outcomes.len();
    let n = table.outcomes[0].len();
    if p.p.len() != n.pow(nfam as u32) {
        return Err(Error::DimensionMismatch(format!(
            "distribution has {} entries, table implies {}",
            p.p.len(),
            n.pow(nfam as u32)
        )));
    }
    // phases[m][o] = <t^(m), z^(m,o)>
    let phases: Vec<Vec<f64>> = table
        .outcomes
        .iter()
        .zip(&t.per_family)
        .map(|(fam, tm)| {
            fam.iter()
                .map(|tuple| tuple.iter().zip(tm).map(|(&z, &tc)| z * tc).sum())
                .collect()
        })
        .collect();
    let mut acc = C64::new(0.0, 0.0);
    for (index, &prob) in p.p.iter().enumerate() {
        let phase: f64 = povm::decode_tuple(index, n, nfam)
            .iter()
            .enumerate()
            .map(|(m, &o)| phases[m][o])
            .sum();
        acc += C64::from_polar(prob, phase);
    }
    Ok(acc)
}

/// Result of comparing the quantum and classical characteristic functions
/// of one state over a grid of t vectors.
#[derive(Clone, Debug, Serialize)]
pub struct CoincidenceReport {
    pub grid_points: usize,
    pub max_deviation: f64,
    /// Deviation stayed below [`tol::COINCIDENCE`] everywhere.
    pub coincide: bool,
}

/// Max over the grid of `|mh_charfun - classical_charfun|`, with the
/// classical side built from the eta = 1 joint distribution of `rho`. The
/// identity holds exactly for qubits; for qutrits the measured gap is the
/// finding.
pub fn coincidence_scan(
    rho: &DensityMatrix,
    b: &OperatorBasis,
    grid: &[TVector],
) -> Result<CoincidenceReport> {
    if grid.is_empty() {
        return Err(Error::Format("coincidence scan needs a nonempty grid".into()));
    }
    let theta = bloch_from_density(rho, b)?;
    let p = povm::joint_distribution(&theta, b, 1.0)?;
    let mut max_deviation = 0.0f64;
    for t in grid {
        let quantum = mh_charfun(rho, b, t)?;
        let classical = classical_charfun(&p, &b.eigentable, t)?;
        max_deviation = max_deviation.max((quantum - classical).norm());
    }
    Ok(CoincidenceReport {
        grid_points: grid.len(),
        max_deviation,
        coincide: max_deviation < tol::COINCIDENCE,
    })
}

/// Bochner test on a finite point set: builds the Gram matrix
/// `Phi_ij = phi(t_i - t_j)`, Hermitizes it, and returns the minimum
/// eigenvalue. Values at or above `-`[`tol::BOCHNER`] are consistent with a
/// true probability distribution on this set.
pub fn bochner_check<F>(phi: F, tpoints: &[TVector]) -> Result<f64>
where
    F: Fn(&TVector) -> Result<C64>,
{
    let r = tpoints.len();
    if r == 0 || r > 16 {
        return Err(Error::Format(format!(
            "Bochner point set size {r} outside 1..=16"
        )));
    }
    let mut gram = CMat::zeros(r);
    for i in 0..r {
        for j in 0..r {
            gram[(i, j)] = phi(&tpoints[i].sub(&tpoints[j]))?;
        }
    }
    linalg::min_eigenvalue(&gram.hermitized())
}

/// Outcome of a random search for Bochner violations.
#[derive(Clone, Debug, Serialize)]
pub struct BochnerSearchReport {
    pub trials: usize,
    pub worst_min_eigenvalue: f64,
    /// Set size and component scale of the worst point set.
    pub worst_set_size: usize,
    pub worst_scale: f64,
    pub violation_found: bool,
}

const BOCHNER_SET_SIZES: [usize; 2] = [4, 8];
const BOCHNER_SCALES: [f64; 3] = [0.5, 1.0, 2.0];

/// A violation this deep is unambiguous and stops the search early.
const BOCHNER_EARLY_STOP: f64 = -1e-6;

fn gaussian_t_set(
    table: &EigenvalueTable,
    r: usize,
    scale: f64,
    rng: &mut impl Rng,
) -> Vec<TVector> {
    (0..r)
        .map(|_| TVector {
            per_family: table
                .outcomes
                .iter()
                .map(|fam| {
                    (0..fam[0].len())
                        .map(|_| scale * rng.sample::<f64, _>(rand_distr::StandardNormal))
                        .collect()
                })
                .collect(),
        })
        .collect()
}

fn bochner_sweep(
    p: &JointDistribution,
    table: &EigenvalueTable,
    budget: usize,
    seed: u64,
    early_stop: bool,
) -> Result<BochnerSearchReport> {
    let mut rng = crate::rng::seeded(seed);
    let mut worst = f64::INFINITY;
    let mut worst_set_size = 0;
    let mut worst_scale = 0.0;
    let mut trials = 0;
    while trials < budget {
        let r = BOCHNER_SET_SIZES[trials % BOCHNER_SET_SIZES.len()];
        let scale = BOCHNER_SCALES[(trials / BOCHNER_SET_SIZES.len()) % BOCHNER_SCALES.len()];
        let set = gaussian_t_set(table, r, scale, &mut rng);
        let min = bochner_check(|t| classical_charfun(p, table, t), &set)?;
        trials += 1;
        if min < worst {
            worst = min;
            worst_set_size = r;
            worst_scale = scale;
        }
        if early_stop && worst < BOCHNER_EARLY_STOP {
            break;
        }
    }
    Ok(BochnerSearchReport {
        trials,
        worst_min_eigenvalue: worst,
        worst_set_size,
        worst_scale,
        violation_found: worst < -tol::BOCHNER,
    })
}

/// Random search for a Bochner violation: Gaussian t-sets of size 4 and 8
/// at component scales 0.5, 1, 2, stopping at the first unambiguous
/// negative eigenvalue.
pub fn bochner_search(
    p: &JointDistribution,
    table: &EigenvalueTable,
    budget: usize,
    seed: u64,
) -> Result<BochnerSearchReport> {
    bochner_sweep(p, table, budget, seed, true)
}

/// Exhausts the full budget without early stopping; used to confirm that a
/// valid distribution stays positive definite across many point sets.
pub fn bochner_validity_scan(
    p: &JointDistribution,
    table: &EigenvalueTable,
    sets: usize,
    seed: u64,
) -> Result<BochnerSearchReport> {
    bochner_sweep(p, table, sets, seed, false)
}

/// Which conjugation direction renders the family generators diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagonalizerConvention {
    /// `U A U†`
    #[serde(rename = "U A U^dagger")]
    Sandwich,
    /// `U† A U`
    #[serde(rename = "U^dagger A U")]
    Reversed,
}

impl fmt::Display for DiagonalizerConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagonalizerConvention::Sandwich => "U A U^dagger",
            DiagonalizerConvention::Reversed => "U^dagger A U",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalizerReport {
    /// Worst `‖U†U - I‖_max` over the three diagonalizers.
    pub unitarity_dev: f64,
    pub convention: DiagonalizerConvention,
    /// Worst off-diagonal Frobenius norm for the winning convention over
    /// families 2..4 and all trials.
    pub max_offdiag: f64,
    /// Off-diagonal norm of the family-1 generator, which must vanish as-is.
    pub a1_offdiag: f64,
    pub trials: usize,
}

fn offdiag_norm(a: &CMat) -> f64 {
    let mut s = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// The printed 3x3 diagonalizers for families 2, 3, 4, as omega-power
/// exponent tables scaled by 1/sqrt(3).
fn qutrit_diagonalizers() -> Vec<CMat> {
    let omega = C64::new(-0.5, 0.75f64.sqrt());
    let pows = [C64::new(1.0, 0.0), omega, omega * omega];
    let exps: [[[usize; 3]; 3]; 3] = [
        [[0, 0, 0], [0, 1, 2], [0, 2, 1]],
        [[0, 2, 0], [0, 0, 2], [0, 1, 1]],
        [[0, 1, 0], [0, 2, 2], [0, 0, 1]],
    ];
    let scale = 1.0 / 3.0f64.sqrt();
    exps.iter()
        .map(|table| CMat::from_fn(3, |i, j| pows[table[i][j]].scale(scale)))
        .collect()
}

/// Verifies the printed qutrit diagonalizers: unitarity, and which
/// conjugation direction diagonalizes the family generators for random t.
pub fn diagonalizer_check(
    b: &OperatorBasis,
    trials: usize,
    seed: u64,
) -> Result<DiagonalizerReport> {
    if b.n != 3 || b.families.len() != 4 || b.families.iter().any(|f| f.len() != 2) {
        return Err(Error::DimensionMismatch(
            "diagonalizer check applies to the builtin qutrit basis".into(),
        ));
    }
    let us = qutrit_diagonalizers();
    let eye = CMat::identity(3);
    let unitarity_dev = us
        .iter()
        .map(|u| (&(&u.dagger() * u) - &eye).max_abs())
        .fold(0.0, f64::max);

    let grid = uniform_t_grid(b, trials, seed);
    let mut worst = [0.0f64; 2];
    let mut a1_offdiag = 0.0f64;
    for t in &grid {
        a1_offdiag = a1_offdiag.max(offdiag_norm(&family_generator(b, t, 0)));
        for (fi, u) in us.iter().enumerate() {
            let a = family_generator(b, t, fi + 1);
            worst[0] = worst[0].max(offdiag_norm(&(&(u * &a) * &u.dagger())));
            worst[1] = worst[1].max(offdiag_norm(&(&(&u.dagger() * &a) * u)));
        }
    }
    let (convention, max_offdiag) = if worst[0] < tol::DIAG_OFFDIAG {
        (DiagonalizerConvention::Sandwich, worst[0])
    } else if worst[1] < tol::DIAG_OFFDIAG {
        (DiagonalizerConvention::Reversed, worst[1])
    } else {
        return Err(Error::NoDiagonalizingConvention);
    };
    Ok(DiagonalizerReport {
        unitarity_dev,
        convention,
        max_offdiag,
        a1_offdiag,
        trials,
    })
}
