//! Central numerical tolerances.
//!
//! Every threshold used by the library lives here so that reports and tests
//! agree on one set of numbers. Tolerances marked "relative" are multiplied
//! by a norm of the input; the rest are absolute.

/// Jacobi sweep convergence: off-diagonal Frobenius norm below this times
/// the Frobenius norm of the input.
pub const JACOBI_OFFDIAG_REL: f64 = 1e-14;

/// Hard cap on Jacobi sweeps before `NoConvergence`.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative Hermiticity gate for eigensolver inputs: `‖H − H†‖_F` must stay
/// below this times `max(1, ‖H‖_F)`.
pub const HERMITICITY_REL: f64 = 1e-8;

/// Eigendecomposition reconstruction and orthonormality guarantee (relative).
pub const EIG_RECONSTRUCT_REL: f64 = 1e-10;

/// Unitarity of matrix exponentials.
pub const UNITARY: f64 = 1e-10;

/// MUB construction guarantee: intra-basis Gram deviation from identity and
/// cross-basis `|overlap|² − 1/n` deviation.
pub const MUB_DEV: f64 = 1e-10;

/// Pass gate for unbiasedness reports on candidate bases.
pub const MUB_REPORT_GATE: f64 = 1e-8;

/// Spectra weight vectors must satisfy the zero-sum and scaled-orthogonality
/// conditions within this.
pub const SPECTRA: f64 = 1e-10;

/// Overall pass gate for operator-basis validation reports.
pub const BASIS_GATE: f64 = 1e-8;

/// Outcome-tuple coordinates closer than this are treated as tied when
/// ordering an eigenvalue table, so numerically recomputed tables sort the
/// same way as exact ones.
pub const OUTCOME_TIE: f64 = 1e-9;

/// Density-matrix admission gate: Hermiticity, unit trace, and positive
/// semidefiniteness must each hold within this.
pub const STATE: f64 = 1e-10;

/// An operator is accepted as positive semidefinite when its smallest
/// eigenvalue is at least `-PSD`.
pub const PSD: f64 = 1e-10;

/// A joint distribution is valid when its smallest entry is at least
/// `-DIST_VALID`.
pub const DIST_VALID: f64 = 1e-12;

/// POVM completeness: `‖Σ G(λ) − I‖_F`.
pub const COMPLETENESS: f64 = 1e-9;

/// Marginals of the global POVM must match the unsharp effects within this.
pub const MARGINAL: f64 = 1e-10;

/// Width of the bisection bracket when cross-checking the critical
/// unsharpness against the analytic formula.
pub const BISECTION: f64 = 1e-12;

/// Quantum and classical characteristic functions count as coinciding when
/// their pointwise deviation stays below this.
pub const COINCIDENCE: f64 = 1e-9;

/// Bochner Gram matrices with min eigenvalue at least `-BOCHNER` are
/// consistent with a true probability distribution.
pub const BOCHNER: f64 = 1e-9;

/// Unitarity bound for the printed qutrit diagonalizers.
pub const DIAG_UNITARY: f64 = 1e-12;

/// Off-diagonal Frobenius norm below which a conjugated family generator
/// counts as diagonalized.
pub const DIAG_OFFDIAG: f64 = 1e-9;

/// Vertex deduplication radius for polytope computations.
pub const VERTEX_DEDUP: f64 = 1e-7;

/// Coarser dedup radius used to detect ambiguous clusterings.
pub const VERTEX_DEDUP_COARSE: f64 = 1e-6;

/// Rank decisions (active-set spans, adjacency tests).
pub const RANK: f64 = 1e-8;

/// A point is inside the polytope when its membership margin is at least
/// `-MEMBERSHIP`.
pub const MEMBERSHIP: f64 = 1e-12;

/// A face constraint counts as active at a vertex within this.
pub const FACE_ACTIVE: f64 = 1e-9;

/// Total negative mass a distribution may carry and still be clipped and
/// renormalized for sampling.
pub const SAMPLE_CLIP: f64 = 1e-9;

/// Simplex pivot tolerance.
pub const LP_PIVOT: f64 = 1e-9;

/// Objective above this counts as a nontrivial recession direction.
pub const LP_RECESSION: f64 = 1e-9;
