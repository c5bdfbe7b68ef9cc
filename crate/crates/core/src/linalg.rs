//! Hermitian eigendecomposition by cyclic Jacobi rotations, plus the
//! unitary exponentials built on it.
//!
//! Unconditionally stable for the tiny dense matrices this crate works with.
//! Output order is deterministic: eigenvalues ascending, ties broken by
//! lexicographic comparison of the phase-fixed eigenvector entries.

use crate::cmat::{C64, CMat};
use crate::error::{Error, Result};
use crate::tol;

/// Spectral decomposition of a Hermitian matrix. Eigenvectors are the
/// columns of `vectors`, orthonormal, paired with `values` in ascending
/// order, each column phase-fixed so its largest-modulus entry is real
/// positive.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEig {
    /// `‖H − VΛV†‖_F` against the matrix this was computed from.
    pub fn reconstruction_error(&self, h: &CMat) -> f64 {
        let lambda = CMat::diag_re(&self.values);
        let rebuilt = &(&self.vectors * &lambda) * &self.vectors.dagger();
        (&rebuilt - &h.hermitized()).frob_norm() / h.frob_norm().max(1.0)
    }
}

fn offdiag_norm(a: &CMat) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(H + H†)/2` before iterating; inputs whose
/// Hermitian deviation exceeds the relative gate are rejected.
pub fn herm_eig(h: &CMat) -> Result<HermEig> {
    let n = h.dim();
    let scale = h.frob_norm();
    let dev = h.herm_deviation();
    if dev > tol::HERMITICITY_REL * scale.max(1.0) {
        return Err(Error::NonHermitian { dev, gate: tol::HERMITICITY_REL * scale.max(1.0) });
    }

    let mut a = h.hermitized();
    let mut v = CMat::identity(n);
    if n == 1 {
        return Ok(sorted_phase_fixed(vec![a[(0, 0)].re], v));
    }

    let target = tol::JACOBI_OFFDIAG_REL * scale;
    let mut converged = scale == 0.0 || offdiag_norm(&a) <= target;
    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let m = apq.norm();
                if m <= f64::EPSILON * scale {
                    continue;
                }
                let phase = apq / m;
                let tau = (a[(p, p)].re - a[(q, q)].re) / (2.0 * m);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotation U is identity except U[p][p] = c,
                // U[p][q] = -s·phase, U[q][p] = s·conj(phase), U[q][q] = c;
                // this t zeroes the (p,q) entry of U†AU.
                let sp = phase.scale(s);
                let spc = sp.conj();
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) + akq * spc;
                    a[(k, q)] = akq.scale(c) - akp * sp;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) + vkq * spc;
                    v[(k, q)] = vkq.scale(c) - vkp * sp;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) + aqk * sp;
                    a[(q, k)] = aqk.scale(c) - apk * spc;
                }
            }
        }
        converged = offdiag_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence(tol::JACOBI_MAX_SWEEPS));
    }

    let values = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sorted_phase_fixed(values, v))
}

fn sorted_phase_fixed(values: Vec<f64>, mut v: CMat) -> HermEig {
    let n = values.len();
    for j in 0..n {
        fix_phase_col(&mut v, j);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .partial_cmp(&values[j])
            .unwrap()
            .then_with(|| col_lex_cmp(&v, i, j))
    });
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let mut sorted_v = CMat::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_v.set_col(dst, &v.col(src));
    }
    HermEig { values: sorted_values, vectors: sorted_v }
}

/// Multiplies column `j` by a unit phase so that its largest-modulus entry
/// (first such, scanning down) becomes real positive.
fn fix_phase_col(v: &mut CMat, j: usize) {
    let n = v.dim();
    let mut best = 0;
    let mut best_mod = 0.0;
    for i in 0..n {
        let m = v[(i, j)].norm();
        if m > best_mod + 1e-12 {
            best_mod = m;
            best = i;
        }
    }
    if best_mod == 0.0 {
        return;
    }
    let phase = v[(best, j)] / best_mod;
    let corr = phase.conj();
    for i in 0..n {
        let z = v[(i, j)] * corr;
        v[(i, j)] = z;
    }
}

fn col_lex_cmp(v: &CMat, i: usize, j: usize) -> std::cmp::Ordering {
    for k in 0..v.dim() {
        let a = v[(k, i)];
        let b = v[(k, j)];
        match a.re.partial_cmp(&b.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        match a.im.partial_cmp(&b.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// `e^{i·s·H}` for Hermitian `H`, via the eigendecomposition. The result is
/// unitary to within [`tol::UNITARY`].
pub fn unitary_exp(h: &CMat, s: f64) -> Result<CMat> {
    let eig = herm_eig(h)?;
    let n = h.dim();
    let mut d = CMat::zeros(n);
    for (k, &lam) in eig.values.iter().enumerate() {
        d[(k, k)] = C64::from_polar(1.0, s * lam);
    }
    Ok(&(&eig.vectors * &d) * &eig.vectors.dagger())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMat) -> Result<f64> {
    Ok(herm_eig(h)?.values[0])
}

/// Hermitian matrix with entries drawn uniformly from the centered unit
/// square before symmetrization. Used by property tests and random scans.
pub fn random_hermitian(n: usize, rng: &mut impl rand::Rng) -> CMat {
    CMat::from_fn(n, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
    .hermitized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn random_hermitian(n: usize, seed: u64) -> CMat {
        super::random_hermitian(n, &mut rng::seeded(seed))
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let eig = herm_eig(&CMat::diag_re(&[1.0, 0.0, -1.0])).unwrap();
        assert_eq!(eig.values, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let sx = CMat::from_rows(&[
            vec![C64::ZERO, C64::ONE],
            vec![C64::ONE, C64::ZERO],
        ]);
        let eig = herm_eig(&sx).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    // Matches the first family generator of the reference qutrit basis,
    // sqrt(3/2)·diag(1,0,-1): spectrum (-sqrt(3/2), 0, sqrt(3/2)).
    #[test]
    fn scaled_diag_spectrum() {
        let s = (1.5f64).sqrt();
        let eig = herm_eig(&CMat::diag_re(&[s, 0.0, -s])).unwrap();
        assert!((eig.values[0] + s).abs() < 1e-14);
        assert!(eig.values[1].abs() < 1e-14);
        assert!((eig.values[2] - s).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_on_random_inputs() {
        for seed in 0..50 {
            for n in [2, 3, 5, 8] {
                let h = random_hermitian(n, 1000 * seed + n as u64);
                let eig = herm_eig(&h).unwrap();
                assert!(eig.reconstruction_error(&h) < tol::EIG_RECONSTRUCT_REL);
                let vtv = &eig.vectors.dagger() * &eig.vectors;
                assert!((&vtv - &CMat::identity(n)).frob_norm() < tol::EIG_RECONSTRUCT_REL);
            }
        }
    }

    #[test]
    fn min_eigenvalue_is_rayleigh_lower_bound() {
        let h = random_hermitian(4, 7);
        let lo = min_eigenvalue(&h).unwrap();
        let mut r = rng::seeded(8);
        for _ in 0..50 {
            let x: Vec<C64> = (0..4)
                .map(|_| C64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
                .collect();
            let nrm = crate::cmat::vec_norm(&x);
            let x: Vec<C64> = x.iter().map(|z| z / nrm).collect();
            let quad = crate::cmat::inner(&x, &h.apply(&x)).re;
            assert!(lo <= quad + 1e-12);
        }
    }

    #[test]
    fn exponential_is_unitary_and_inverts() {
        for seed in 0..100 {
            let n = 2 + (seed as usize % 3);
            let h = random_hermitian(n, 4242 + seed);
            let u = unitary_exp(&h, 0.7).unwrap();
            let utu = &u.dagger() * &u;
            assert!((&utu - &CMat::identity(n)).frob_norm() < tol::UNITARY);
            let back = unitary_exp(&h, -0.7).unwrap();
            assert!((&(&u * &back) - &CMat::identity(n)).frob_norm() < tol::UNITARY);
        }
    }

    #[test]
    fn exponential_at_zero_is_identity() {
        let h = random_hermitian(5, 99);
        let u = unitary_exp(&h, 0.0).unwrap();
        assert!((&u - &CMat::identity(5)).frob_norm() < 1e-13);
    }

    // Closed form: e^{i(pi/2)σ_z} = diag(i, -i).
    #[test]
    fn exponential_of_sigma_z() {
        let sz = CMat::diag_re(&[1.0, -1.0]);
        let u = unitary_exp(&sz, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((u[(0, 0)] - C64::new(0.0, 1.0)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-15 && u[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMat::from_rows(&[
            vec![C64::ZERO, C64::ONE],
            vec![C64::new(0.3, 0.0), C64::ZERO],
        ]);
        assert!(matches!(herm_eig(&a), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn deterministic_across_runs() {
        let h = random_hermitian(6, 31);
        let a = herm_eig(&h).unwrap();
        let b = herm_eig(&h).unwrap();
        assert_eq!(a.values, b.values);
        assert!(a.vectors == b.vectors);
    }
}
