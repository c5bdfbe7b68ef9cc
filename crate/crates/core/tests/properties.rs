//! Property-based checks across module boundaries.

use proptest::prelude::*;
use unsharp::linalg;
use unsharp::opbasis::{self, OperatorBasis};
use unsharp::povm;
use unsharp::rng;
use unsharp::states::{bloch_from_density, density_from_bloch, random_state, StateFile, StateKind};
use unsharp::CMat;

fn reconstruct(eig: &linalg::HermEig, n: usize) -> CMat {
    let mut acc = CMat::zeros(n);
    for k in 0..n {
        let v = eig.vectors.col(k);
        acc = &acc + &CMat::outer(&v, &v).scale_re(eig.values[k]);
    }
    acc
}

fn basis_for(n: usize) -> OperatorBasis {
    match n {
        2 => opbasis::pauli_basis(),
        3 => opbasis::qutrit_builtin(),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigendecomposition_reconstructs(seed in 0u64..4096, n in 2usize..=5) {
        let mut rng = rng::seeded(seed);
        let h = linalg::random_hermitian(n, &mut rng);
        let eig = linalg::herm_eig(&h).unwrap();
        let dev = (&reconstruct(&eig, n) - &h).max_abs();
        prop_assert!(dev < 1e-10 * (1.0 + h.max_abs()));
    }

    #[test]
    fn bloch_roundtrip_is_faithful(seed in 0u64..4096, pure in any::<bool>(), n in 2usize..=3) {
        let basis = basis_for(n);
        let kind = if pure { StateKind::Pure } else { StateKind::Mixed };
        let rho = random_state(n, kind, seed);
        let theta = bloch_from_density(&rho, &basis).unwrap();
        let back = density_from_bloch(&theta, &basis).unwrap();
        prop_assert!(back.physical);
        prop_assert!((&back.rho - rho.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn distribution_paths_and_marginals_agree(
        seed in 0u64..4096,
        eta in 0.0f64..=1.0,
        n in 2usize..=3,
    ) {
        let basis = basis_for(n);
        let rho = random_state(n, StateKind::Mixed, seed);
        let theta = bloch_from_density(&rho, &basis).unwrap();
        let via_bloch = povm::joint_distribution(&theta, &basis, eta).unwrap();
        let via_ops = povm::joint_distribution_via_operators(&rho, &basis, eta).unwrap();
        prop_assert!((via_bloch.sum - 1.0).abs() < 1e-12);
        for (a, b) in via_bloch.p.iter().zip(&via_ops.p) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let nfam = basis.families.len();
        for m in 0..nfam {
            let marg = povm::marginal_distribution(&via_bloch.p, n, nfam, m);
            prop_assert!((marg.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tuple_codec_roundtrips(raw in 0usize..6561, n in 2usize..=4, nfam in 1usize..=5) {
        let index = raw % n.pow(nfam as u32);
        let digits = povm::decode_tuple(index, n, nfam);
        prop_assert_eq!(digits.len(), nfam);
        prop_assert!(digits.iter().all(|&d| d < n));
        prop_assert_eq!(povm::encode_tuple(&digits, n), index);
    }

    #[test]
    fn state_file_roundtrips(seed in 0u64..4096, n in 2usize..=3) {
        let basis = basis_for(n);
        let rho = random_state(n, StateKind::Mixed, seed);
        let file = StateFile::Density { mat: rho.matrix().clone() };
        let back = StateFile::from_json(&file.to_json().unwrap()).unwrap();
        let a = file.bloch(&basis).unwrap();
        let b = back.bloch(&basis).unwrap();
        for (x, y) in a.theta.iter().zip(&b.theta) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn basis_json_roundtrip_preserves_operators() {
    for basis in [
        opbasis::pauli_basis(),
        opbasis::qutrit_builtin(),
        {
            let mubs = unsharp::mub::build(4).unwrap();
            opbasis::from_mubs(&mubs, &opbasis::SpectraSet::default_for(4)).unwrap()
        },
    ] {
        let back = OperatorBasis::from_json(&basis.to_json().unwrap()).unwrap();
        assert_eq!(back.n, basis.n);
        assert_eq!(back.families, basis.families);
        for (a, b) in basis.ops.iter().zip(&back.ops) {
            assert!((a - b).max_abs() < 1e-14);
        }
        assert!(back.validate().unwrap().pass);
    }
}
