//! Unsharp joint measurements built on an operator basis.
//!
//! Family m with outcome tuple z has effect E(z) = (I + eta sum_j z_j
//! a_{m,j})/n, a noisy smearing of the sharp projector recovered at eta = 1.
//! The global POVM over all families multiplies out to n^(n+1) elements
//! G(lambda) = (I + eta S_lambda)/n^(n+1); it is a valid POVM exactly when
//! every I + eta S_lambda is positive semidefinite, which caps eta at
//! eta* = 1 / max_lambda(-min_eig(S_lambda)).
//!
//! Joint outcome tuples are indexed lexicographically with family 1 most
//! significant; outcome order within a family follows the eigenvalue table.

use serde::Serialize;

use crate::cmat::CMat;
use crate::error::{Error, Result};
use crate::linalg;
use crate::opbasis::OperatorBasis;
use crate::states::{BlochVector, DensityMatrix};
use crate::tol;

/// Effects of one family at one unsharpness; `effects[o]` pairs with
/// `eigentable.outcomes[family][o]`.
#[derive(Clone, Debug)]
pub struct EffectSet {
    pub family: usize,
    pub eta: f64,
    pub effects: Vec<CMat>,
    pub min_eigenvalue: f64,
    /// min eigenvalue >= -[`tol::PSD`]; a computed verdict, never assumed.
    pub psd: bool,
    /// max-entry deviation of sum of effects from the identity.
    pub completeness_dev: f64,
}

/// The full product measurement; element index encodes one outcome per
/// family via [`encode_tuple`].
#[derive(Clone, Debug)]
pub struct GlobalPovm {
    pub eta: f64,
    pub elements: Vec<CMat>,
    pub min_eigenvalue: f64,
    pub psd: bool,
    pub completeness_dev: f64,
}

/// Critical unsharpness report. `analytic` comes from the exact rescaling
/// formula; `bisection` re-verifies it against fresh per-trial eigensolves
/// when the tuple count is small enough to afford that.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalEtaReport {
    pub analytic: f64,
    pub bisection: Option<f64>,
    /// Most negative eigenvalue of any S_lambda.
    pub worst_s_min_eigenvalue: f64,
    pub num_tuples: usize,
}

/// Joint outcome probabilities (or quasi-probabilities outside the
/// classical region).
#[derive(Clone, Debug)]
pub struct JointDistribution {
    pub eta: f64,
    pub p: Vec<f64>,
    pub sum: f64,
    pub min: f64,
    /// min p >= -[`tol::DIST_VALID`].
    pub valid: bool,
}

/// Joint index of per-family outcome digits, family 1 most significant.
pub fn encode_tuple(digits: &[usize], n: usize) -> usize {
    digits.iter().fold(0, |acc, &d| {
        debug_assert!(d < n);
        acc * n + d
    })
}

/// Inverse of [`encode_tuple`] for `count` families.
pub fn decode_tuple(index: usize, n: usize, count: usize) -> Vec<usize> {
    let mut digits = vec![0usize; count];
    let mut rest = index;
    for d in digits.iter_mut().rev() {
        *d = rest % n;
        rest /= n;
    }
    debug_assert_eq!(rest, 0);
    digits
}

/// Per-family outcome operators sum_j z_j a_{m,j}, the building blocks of
/// both effects and the global S_lambda.
fn family_outcome_ops(b: &OperatorBasis) -> Vec<Vec<CMat>> {
    b.families
        .iter()
        .enumerate()
        .map(|(m, family)| {
            b.eigentable.outcomes[m]
                .iter()
                .map(|tuple| {
                    let mut acc = CMat::zeros(b.n);
                    for (&z, &idx) in tuple.iter().zip(family) {
                        acc = &acc + &b.ops[idx].scale_re(z);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn effect_set(b: &OperatorBasis, m: usize, eta: f64) -> Result<EffectSet> {
    assert!(m < b.families.len(), "family index out of range");
    let n = b.n;
    let scale = 1.0 / n as f64;
    let outcome_ops = &family_outcome_ops(b)[m];
    let mut effects = Vec::with_capacity(outcome_ops.len());
    let mut min_eigenvalue = f64::INFINITY;
    let mut sum = CMat::zeros(n);
    for op in outcome_ops {
        let e = (&CMat::identity(n) + &op.scale_re(eta)).scale_re(scale);
        min_eigenvalue = min_eigenvalue.min(linalg::min_eigenvalue(&e.hermitized())?);
        sum = &sum + &e;
        effects.push(e);
    }
    let completeness_dev = (&sum - &CMat::identity(n)).max_abs();
    Ok(EffectSet {
        family: m,
        eta,
        effects,
        min_eigenvalue,
        psd: min_eigenvalue >= -tol::PSD,
        completeness_dev,
    })
}

/// Spectral projectors of family m: the eta = 1 effects.
pub fn sharp_projectors(b: &OperatorBasis, m: usize) -> Result<EffectSet> {
    effect_set(b, m, 1.0)
}

/// Noisy effects E(z) = (I + eta sum_j z_j a_{m,j})/n.
pub fn unsharp_effects(b: &OperatorBasis, m: usize, eta: f64) -> Result<EffectSet> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    effect_set(b, m, eta)
}

/// Number of joint outcome tuples, with a guard against runaway sizes.
fn tuple_count(b: &OperatorBasis) -> usize {
    let count = b.n.pow(b.families.len() as u32);
    assert!(count <= 1 << 22, "joint outcome space too large to materialize");
    count
}

/// All n^(n+1) joint elements at one unsharpness.
pub fn global_povm(b: &OperatorBasis, eta: f64) -> Result<GlobalPovm> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    let n = b.n;
    let count = tuple_count(b);
    let nfam = b.families.len();
    let outcome_ops = family_outcome_ops(b);
    let scale = 1.0 / count as f64;

    let mut elements = Vec::with_capacity(count);
    let mut min_eigenvalue = f64::INFINITY;
    let mut sum = CMat::zeros(n);
    for index in 0..count {
        let digits = decode_tuple(index, n, nfam);
        let mut s = CMat::zeros(n);
        for (m, &o) in digits.iter().enumerate() {
            s = &s + &outcome_ops[m][o];
        }
        let g = (&CMat::identity(n) + &s.scale_re(eta)).scale_re(scale);
        min_eigenvalue = min_eigenvalue.min(linalg::min_eigenvalue(&g.hermitized())?);
        sum = &sum + &g;
        elements.push(g);
    }
    let completeness_dev = (&sum - &CMat::identity(n)).max_abs();
    Ok(GlobalPovm {
        eta,
        elements,
        min_eigenvalue,
        psd: min_eigenvalue >= -tol::PSD,
        completeness_dev,
    })
}

/// Bisection is run only below this tuple count; above it the fresh
/// per-trial eigensolves get expensive and the analytic value stands alone.
const BISECTION_TUPLE_CAP: usize = 2048;

/// Largest eta keeping every global element PSD.
///
/// Analytic: min_eig(I + eta S) = 1 + eta min_eig(S) exactly, so
/// eta* = 1 / max_lambda(-min_eig(S_lambda)). The bisection cross-check
/// deliberately avoids that identity and re-diagonalizes I + eta S_lambda
/// at every trial eta.
pub fn critical_eta(b: &OperatorBasis) -> Result<CriticalEtaReport> {
    let n = b.n;
    let count = tuple_count(b);
    let nfam = b.families.len();
    let outcome_ops = family_outcome_ops(b);

    let mut s_mins = Vec::with_capacity(count);
    let mut worst = f64::INFINITY;
    for index in 0..count {
        let digits = decode_tuple(index, n, nfam);
        let mut s = CMat::zeros(n);
        for (m, &o) in digits.iter().enumerate() {
            s = &s + &outcome_ops[m][o];
        }
        let min = linalg::min_eigenvalue(&s.hermitized())?;
        worst = worst.min(min);
        s_mins.push((digits, s));
    }
    if worst >= 0.0 {
        return Err(Error::DegenerateBasis);
    }
    let analytic = 1.0 / (-worst);

    let bisection = if count <= BISECTION_TUPLE_CAP {
        let identity = CMat::identity(n);
        let all_psd = |eta: f64| -> Result<bool> {
            for (_, s) in &s_mins {
                let candidate = &identity + &s.scale_re(eta);
                if linalg::min_eigenvalue(&candidate.hermitized())? < 0.0 {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        if all_psd(hi)? {
            lo = hi;
        } else {
            while hi - lo > tol::BISECTION {
                let mid = 0.5 * (lo + hi);
                if all_psd(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        Some(0.5 * (lo + hi))
    } else {
        None
    };

    Ok(CriticalEtaReport {
        analytic,
        bisection,
        worst_s_min_eigenvalue: worst,
        num_tuples: count,
    })
}

/// Sum of global elements whose m-th outcome digit is fixed; must reproduce
/// the single-family effects.
pub fn marginalize(g: &GlobalPovm, b: &OperatorBasis, m: usize) -> Result<EffectSet> {
    assert!(m < b.families.len(), "family index out of range");
    let n = b.n;
    let nfam = b.families.len();
    if g.elements.len() != n.pow(nfam as u32) {
        return Err(Error::DimensionMismatch(format!(
            "POVM has {} elements, basis implies {}",
            g.elements.len(),
            n.pow(nfam as u32)
        )));
    }
    let mut effects = vec![CMat::zeros(n); n];
    for (index, el) in g.elements.iter().enumerate() {
        let o = decode_tuple(index, n, nfam)[m];
        effects[o] = &effects[o] + el;
    }
    let mut min_eigenvalue = f64::INFINITY;
    let mut sum = CMat::zeros(n);
    for e in &effects {
        min_eigenvalue = min_eigenvalue.min(linalg::min_eigenvalue(&e.hermitized())?);
        sum = &sum + e;
    }
    let completeness_dev = (&sum - &CMat::identity(n)).max_abs();
    Ok(EffectSet {
        family: m,
        eta: g.eta,
        effects,
        min_eigenvalue,
        psd: min_eigenvalue >= -tol::PSD,
        completeness_dev,
    })
}

/// p(lambda) = (1 + eta <w_lambda, theta>)/n^(n+1) straight from Bloch
/// coordinates; no operators are materialized.
pub fn joint_distribution(
    theta: &BlochVector,
    b: &OperatorBasis,
    eta: f64,
) -> Result<JointDistribution> {
    if theta.theta.len() != b.ops.len() {
        return Err(Error::DimensionMismatch(format!(
            "theta has {} components, basis has {} operators",
            theta.theta.len(),
            b.ops.len()
        )));
    }
    let n = b.n;
    let count = tuple_count(b);
    let nfam = b.families.len();

    // d[m][o] = <z^(m,o), theta restricted to family m>.
    let d: Vec<Vec<f64>> = b
        .families
        .iter()
        .enumerate()
        .map(|(m, family)| {
            b.eigentable.outcomes[m]
                .iter()
                .map(|tuple| {
                    tuple
                        .iter()
                        .zip(family)
                        .map(|(&z, &idx)| z * theta.theta[idx])
                        .sum()
                })
                .collect()
        })
        .collect();

    let scale = 1.0 / count as f64;
    let p: Vec<f64> = (0..count)
        .map(|index| {
            let overlap: f64 = decode_tuple(index, n, nfam)
                .iter()
                .enumerate()
                .map(|(m, &o)| d[m][o])
                .sum();
            scale * (1.0 + eta * overlap)
        })
        .collect();
    Ok(summarize(p, eta))
}

/// Same distribution through the operator path p = Tr[rho G(lambda)];
/// used to cross-check the Bloch formula.
pub fn joint_distribution_via_operators(
    rho: &DensityMatrix,
    b: &OperatorBasis,
    eta: f64,
) -> Result<JointDistribution> {
    if rho.dim() != b.n {
        return Err(Error::DimensionMismatch(format!(
            "state is {0}x{0}, basis expects {1}",
            rho.dim(),
            b.n
        )));
    }
    let g = global_povm(b, eta)?;
    let p: Vec<f64> = g
        .elements
        .iter()
        .map(|el| CMat::trace_product_re(rho.matrix(), el))
        .collect();
    Ok(summarize(p, eta))
}

/// Collapse a joint distribution onto family m's n outcomes.
pub fn marginal_distribution(p: &[f64], n: usize, nfam: usize, m: usize) -> Vec<f64> {
    assert_eq!(p.len(), n.pow(nfam as u32));
    let mut out = vec![0.0; n];
    for (index, &value) in p.iter().enumerate() {
        out[decode_tuple(index, n, nfam)[m]] += value;
    }
    out
}

fn summarize(p: Vec<f64>, eta: f64) -> JointDistribution {
    let sum = p.iter().sum();
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    JointDistribution { eta, p, sum, min, valid: min >= -tol::DIST_VALID }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opbasis::{self, SpectraSet};
    use crate::states::{self, StateKind};

    fn eta_qubit() -> f64 {
        1.0 / 3.0f64.sqrt()
    }

    fn eta_paper_qutrit() -> f64 {
        1.0 / 8.0f64.sqrt()
    }

    #[test]
    fn tuple_codec_roundtrips() {
        for index in 0..81 {
            let digits = decode_tuple(index, 3, 4);
            assert_eq!(encode_tuple(&digits, 3), index);
        }
        assert_eq!(decode_tuple(0, 3, 4), vec![0, 0, 0, 0]);
        // Family 1 is the most significant digit.
        assert_eq!(decode_tuple(27, 3, 4), vec![1, 0, 0, 0]);
    }

    #[test]
    fn qubit_sharp_projector_is_computational() {
        let b = opbasis::pauli_basis();
        // Family 2 is sigma_z; outcome 0 is eigenvalue +1.
        let set = sharp_projectors(&b, 2).unwrap();
        assert!((&set.effects[0] - &CMat::diag_re(&[1.0, 0.0])).max_abs() < 1e-15);
        assert!((&set.effects[1] - &CMat::diag_re(&[0.0, 1.0])).max_abs() < 1e-15);
        assert!(set.psd);
        assert!(set.completeness_dev < 1e-15);
    }

    #[test]
    fn qutrit_sharp_projectors_are_projectors() {
        let b = opbasis::qutrit_builtin();
        for m in 0..4 {
            let set = sharp_projectors(&b, m).unwrap();
            assert!(set.completeness_dev < 1e-13);
            for e in &set.effects {
                assert!(((&(e * e)) - e).max_abs() < 1e-12, "family {m}");
            }
        }
        // Family 1 outcome (sqrt(3/2), 1/sqrt(2)) picks out diag(1,0,0).
        let set = sharp_projectors(&b, 0).unwrap();
        assert!((&set.effects[0] - &CMat::diag_re(&[1.0, 0.0, 0.0])).max_abs() < 1e-13);
    }

    #[test]
    fn eta_zero_gives_pure_noise() {
        let b = opbasis::qutrit_builtin();
        let set = unsharp_effects(&b, 1, 0.0).unwrap();
        let third = CMat::identity(3).scale_re(1.0 / 3.0);
        for e in &set.effects {
            assert!((e - &third).max_abs() < 1e-15);
        }
    }

    #[test]
    fn eta_outside_unit_interval_is_rejected() {
        let b = opbasis::pauli_basis();
        assert!(matches!(unsharp_effects(&b, 0, -0.1), Err(Error::EtaOutOfRange(_))));
        assert!(matches!(unsharp_effects(&b, 0, 1.1), Err(Error::EtaOutOfRange(_))));
        assert!(matches!(global_povm(&b, 1.01), Err(Error::EtaOutOfRange(_))));
    }

    #[test]
    fn qubit_critical_eta_matches_paper() {
        let report = critical_eta(&opbasis::pauli_basis()).unwrap();
        assert_eq!(report.num_tuples, 8);
        assert!((report.analytic - eta_qubit()).abs() < 1e-12);
        assert!((report.worst_s_min_eigenvalue + 3.0f64.sqrt()).abs() < 1e-12);
        let bisect = report.bisection.unwrap();
        assert!((bisect - report.analytic).abs() < 1e-10);
    }

    #[test]
    fn qutrit_critical_eta_is_one_quarter() {
        // The worst S_lambda eigenvalue is exactly -4 (attained by tuples
        // picking one common eigenvector from each family), so eta* = 1/4,
        // strictly below the 1/sqrt(8) insphere radius.
        let report = critical_eta(&opbasis::qutrit_builtin()).unwrap();
        assert_eq!(report.num_tuples, 81);
        assert!((report.worst_s_min_eigenvalue + 4.0).abs() < 1e-12);
        assert!((report.analytic - 0.25).abs() < 1e-12);
        let bisect = report.bisection.unwrap();
        assert!((bisect - 0.25).abs() < 1e-10);
    }

    #[test]
    fn qubit_povm_is_boundary_tight_at_critical_eta() {
        let g = global_povm(&opbasis::pauli_basis(), eta_qubit()).unwrap();
        assert!(g.psd);
        assert!(g.min_eigenvalue.abs() < 1e-9, "min eig {}", g.min_eigenvalue);
        assert!(g.completeness_dev < 1e-12);
    }

    #[test]
    fn qutrit_povm_fails_at_paper_eta_and_passes_at_quarter() {
        let b = opbasis::qutrit_builtin();
        let at_paper = global_povm(&b, eta_paper_qutrit()).unwrap();
        assert!(!at_paper.psd);
        // min eig of G = (1 - sqrt(2))/81.
        let expect = (1.0 - 2.0f64.sqrt()) / 81.0;
        assert!((at_paper.min_eigenvalue - expect).abs() < 1e-12);

        let at_quarter = global_povm(&b, 0.25).unwrap();
        assert!(at_quarter.psd);
        assert!(at_quarter.min_eigenvalue.abs() < 1e-12);
        assert!(at_quarter.completeness_dev < 1e-12);

        assert!(!global_povm(&b, 0.40).unwrap().psd);
    }

    #[test]
    fn marginals_reproduce_single_family_effects() {
        let b = opbasis::qutrit_builtin();
        for eta in [0.0, 0.2, eta_paper_qutrit(), 1.0] {
            let g = global_povm(&b, eta).unwrap();
            for m in 0..4 {
                let marg = marginalize(&g, &b, m).unwrap();
                let direct = effect_set(&b, m, eta).unwrap();
                for (a, c) in marg.effects.iter().zip(&direct.effects) {
                    assert!((a - c).max_abs() < 1e-12, "eta={eta} family={m}");
                }
            }
        }
    }

    #[test]
    fn gell_mann_effect_is_not_a_projector() {
        // At eta = 1 the Gell-Mann "sharp" effect keeps eigenvalue -1/6 and
        // sits 1/sqrt(6) away from the true spectral projector.
        let gm = opbasis::gell_mann_basis();
        let set = sharp_projectors(&gm, 0).unwrap();
        assert!(!set.psd);
        assert!((set.min_eigenvalue + 1.0 / 6.0).abs() < 1e-12);

        let eig = crate::linalg::herm_eig(&gm.ops[0]).unwrap();
        let top = eig.vectors.col(2);
        let proj = CMat::outer(&top, &top);
        let dist = (&set.effects[0] - &proj).frob_norm();
        assert!((dist - 1.0 / 6.0f64.sqrt()).abs() < 1e-12);
        assert!(dist > 0.1);
    }

    #[test]
    fn uniform_distribution_at_origin() {
        let b = opbasis::qutrit_builtin();
        let p = joint_distribution(&BlochVector { theta: vec![0.0; 8] }, &b, 0.3).unwrap();
        assert_eq!(p.p.len(), 81);
        for &x in &p.p {
            assert!((x - 1.0 / 81.0).abs() < 1e-16);
        }
        assert!((p.sum - 1.0).abs() < 1e-12);
        assert!(p.valid);
    }

    #[test]
    fn qubit_distribution_matches_closed_form() {
        let b = opbasis::pauli_basis();
        let p = joint_distribution(&BlochVector { theta: vec![1.0, 0.0, 0.0] }, &b, eta_qubit())
            .unwrap();
        let hi = (1.0 + eta_qubit()) / 8.0;
        let lo = (1.0 - eta_qubit()) / 8.0;
        let his = p.p.iter().filter(|&&x| (x - hi).abs() < 1e-14).count();
        let los = p.p.iter().filter(|&&x| (x - lo).abs() < 1e-14).count();
        assert_eq!((his, los), (4, 4));
    }

    #[test]
    fn bloch_and_operator_paths_agree() {
        let b = opbasis::qutrit_builtin();
        for seed in 0..20 {
            let rho = states::random_state(3, StateKind::Mixed, seed);
            let theta = states::bloch_from_density(&rho, &b).unwrap();
            let via_bloch = joint_distribution(&theta, &b, 0.31).unwrap();
            let via_ops = joint_distribution_via_operators(&rho, &b, 0.31).unwrap();
            for (x, y) in via_bloch.p.iter().zip(&via_ops.p) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_scaling_identity() {
        let b = opbasis::qutrit_builtin();
        let rho = states::random_state(3, StateKind::Pure, 9);
        let theta = states::bloch_from_density(&rho, &b).unwrap();
        let eta = 0.21;
        let scaled = BlochVector { theta: theta.theta.iter().map(|x| eta * x).collect() };
        let a = joint_distribution(&theta, &b, eta).unwrap();
        let c = joint_distribution(&scaled, &b, 1.0).unwrap();
        for (x, y) in a.p.iter().zip(&c.p) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn sharp_marginals_are_projective_probabilities() {
        let b = opbasis::qutrit_builtin();
        let rho = states::random_state(3, StateKind::Mixed, 31);
        let theta = states::bloch_from_density(&rho, &b).unwrap();
        let p = joint_distribution(&theta, &b, 1.0).unwrap();
        for m in 0..4 {
            let marg = marginal_distribution(&p.p, 3, 4, m);
            let sharp = sharp_projectors(&b, m).unwrap();
            for (o, effect) in sharp.effects.iter().enumerate() {
                let direct = CMat::trace_product_re(rho.matrix(), effect);
                assert!((marg[o] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn n4_critical_eta_below_paper_value() {
        // eta*(4) = 0.2179974801... while the paper's sphere radius is
        // 1/sqrt(15) = 0.2581988897...
        let mubs = crate::mub::build(4).unwrap();
        let basis = opbasis::from_mubs(&mubs, &SpectraSet::default_for(4)).unwrap();
        let report = critical_eta(&basis).unwrap();
        assert_eq!(report.num_tuples, 1024);
        assert!((report.analytic - 0.21799748014663697).abs() < 1e-9);
        let bisect = report.bisection.unwrap();
        assert!((bisect - report.analytic).abs() < 1e-10);
    }

    #[test]
    fn distribution_at_vertex_touches_zero_at_full_sharpness() {
        // A vertex state: common eigenvector of family 1 (computational
        // e_0). Its sharp joint distribution has min exactly 0.
        let b = opbasis::qutrit_builtin();
        let rho = states::DensityMatrix::new(CMat::diag_re(&[1.0, 0.0, 0.0])).unwrap();
        let theta = states::bloch_from_density(&rho, &b).unwrap();
        let p = joint_distribution(&theta, &b, 1.0).unwrap();
        assert!(p.min.abs() < 1e-10);
        assert!(p.valid);
        assert!((p.sum - 1.0).abs() < 1e-12);
    }
}
