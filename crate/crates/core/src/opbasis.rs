//! Traceless Hermitian operator bases grouped into commuting families.
//!
//! A basis for dimension n holds n^2 - 1 operators with Tr(a_i a_j) = n d_ij.
//! The MUB-derived construction groups them into n + 1 families of n - 1
//! mutually commuting members; each family shares an eigenbasis, and the
//! eigenbases of different families are mutually unbiased. The Gell-Mann set
//! is provided as a control with the same normalization but no commuting
//! structure.

use serde::{Deserialize, Serialize};

use crate::cmat::{C64, CMat};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mub::MubFamily;
use crate::tol;

/// Joint outcome values per family: `outcomes[m][o][j]` is the value of the
/// j-th member of family m on the o-th shared eigenvector. Within each
/// family the tuples are sorted in descending lexicographic order, which
/// fixes the outcome labels used by measurements and geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueTable {
    pub outcomes: Vec<Vec<Vec<f64>>>,
}

/// Spectra rows for building operators from a basis: `rows` is (n-1) x n,
/// each row sums to zero and the Gram matrix of rows is n*I.
#[derive(Clone, Debug)]
pub struct SpectraSet {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl SpectraSet {
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<SpectraSet> {
        if rows.len() != n - 1 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadSpectra(format!(
                "need {} rows of length {n}",
                n - 1
            )));
        }
        for (j, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if sum.abs() > tol::SPECTRA {
                return Err(Error::BadSpectra(format!("row {j} sums to {sum:.3e}")));
            }
        }
        for j in 0..rows.len() {
            for l in j..rows.len() {
                let dot: f64 = rows[j].iter().zip(&rows[l]).map(|(a, b)| a * b).sum();
                let target = if j == l { n as f64 } else { 0.0 };
                if (dot - target).abs() > tol::SPECTRA {
                    return Err(Error::BadSpectra(format!(
                        "rows {j},{l} have Gram entry {dot:.6} (want {target})"
                    )));
                }
            }
        }
        Ok(SpectraSet { n, rows })
    }

    /// Helmert-style rows scaled to squared norm n. For n = 3 the hardwired
    /// pair (sqrt(3/2))(1,0,-1), (1/sqrt(2))(1,-2,1) is used instead so the
    /// qutrit eigenvalue table matches the builtin operators.
    pub fn default_for(n: usize) -> SpectraSet {
        assert!(n >= 2);
        if n == 3 {
            let rows = vec![
                vec![(1.5f64).sqrt(), 0.0, -(1.5f64).sqrt()],
                vec![0.5f64.sqrt(), -2.0 * 0.5f64.sqrt(), 0.5f64.sqrt()],
            ];
            return SpectraSet::new(3, rows).expect("hardwired qutrit spectra are valid");
        }
        let mut rows = Vec::with_capacity(n - 1);
        for j in 1..n {
            let scale = (n as f64 / (j * (j + 1)) as f64).sqrt();
            let mut row = vec![0.0; n];
            for entry in row.iter_mut().take(j) {
                *entry = scale;
            }
            row[j] = -(j as f64) * scale;
            rows.push(row);
        }
        SpectraSet::new(n, rows).expect("Helmert rows satisfy the spectra conditions")
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Operator basis with commuting-family structure.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    pub n: usize,
    pub ops: Vec<CMat>,
    /// Indices into `ops`, one list per family; a partition of all operators.
    pub families: Vec<Vec<usize>>,
    pub eigentable: EigenvalueTable,
}

/// The eight qutrit operators printed with omega = exp(2 pi i / 3), grouped
/// as families {(1,2), (3,4), (5,6), (7,8)} in 1-based labels.
pub fn qutrit_builtin() -> OperatorBasis {
    let w = C64::new(-0.5, 0.75f64.sqrt());
    let w2 = w.conj();
    let i = C64::new(0.0, 1.0);
    let o = C64::ZERO;
    let one = C64::ONE;
    let s = std::f64::consts::FRAC_1_SQRT_2;

    let a1 = {
        let r = 1.5f64.sqrt();
        CMat::from_rows(&[
            vec![C64::new(r, 0.0), o, o],
            vec![o, o, o],
            vec![o, o, C64::new(-r, 0.0)],
        ])
    };
    let a2 = CMat::from_rows(&[
        vec![one, o, o],
        vec![o, C64::new(-2.0, 0.0), o],
        vec![o, o, one],
    ])
    .scale_re(s);
    let a3 = CMat::from_rows(&[
        vec![o, -i * w, i * w2],
        vec![i * w2, o, -i * w],
        vec![-i * w, i * w2, o],
    ])
    .scale_re(s);
    let a4 = CMat::from_rows(&[
        vec![o, -w, -w2],
        vec![-w2, o, -w],
        vec![-w, -w2, o],
    ])
    .scale_re(s);
    let a5 = CMat::from_rows(&[
        vec![o, -i, i * w2],
        vec![i, o, -i * w2],
        vec![-i * w, i * w, o],
    ])
    .scale_re(s);
    let a6 = CMat::from_rows(&[
        vec![o, -one, -w2],
        vec![-one, o, -w2],
        vec![-w, -w, o],
    ])
    .scale_re(s);
    let a7 = CMat::from_rows(&[
        vec![o, -i * w2, i * w2],
        vec![i * w, o, -i],
        vec![-i * w, i, o],
    ])
    .scale_re(s);
    let a8 = CMat::from_rows(&[
        vec![o, -w2, -w2],
        vec![-w, o, -one],
        vec![-w, -one, o],
    ])
    .scale_re(s);

    let high = 1.5f64.sqrt();
    let low = 0.5f64.sqrt();
    let family_outcomes = vec![
        vec![high, low],
        vec![0.0, -2.0 * low],
        vec![-high, low],
    ];
    OperatorBasis {
        n: 3,
        ops: vec![a1, a2, a3, a4, a5, a6, a7, a8],
        families: vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]],
        eigentable: EigenvalueTable { outcomes: vec![family_outcomes; 4] },
    }
}

/// Pauli operators as three singleton families (sigma_x, sigma_y, sigma_z),
/// outcomes (+1) and (-1) each.
pub fn pauli_basis() -> OperatorBasis {
    let i = C64::new(0.0, 1.0);
    let o = C64::ZERO;
    let one = C64::ONE;
    let sx = CMat::from_rows(&[vec![o, one], vec![one, o]]);
    let sy = CMat::from_rows(&[vec![o, -i], vec![i, o]]);
    let sz = CMat::from_rows(&[vec![one, o], vec![o, -one]]);
    OperatorBasis {
        n: 2,
        ops: vec![sx, sy, sz],
        families: vec![vec![0], vec![1], vec![2]],
        eigentable: EigenvalueTable {
            outcomes: vec![vec![vec![1.0], vec![-1.0]]; 3],
        },
    }
}

/// One operator per spectra row and basis: a = sum_k c_k |e_k><e_k|. Every
/// family inherits the same outcome tuples, namely the spectra columns.
pub fn from_mubs(mubs: &MubFamily, spectra: &SpectraSet) -> Result<OperatorBasis> {
    let n = mubs.n;
    if spectra.n != n {
        return Err(Error::DimensionMismatch(format!(
            "spectra are for n={}, bases for n={n}",
            spectra.n
        )));
    }

    let mut ops = Vec::with_capacity((n + 1) * (n - 1));
    let mut families = Vec::with_capacity(n + 1);
    for basis in &mubs.bases {
        let mut family = Vec::with_capacity(n - 1);
        for row in &spectra.rows {
            let mut a = CMat::zeros(n);
            for (k, &c) in row.iter().enumerate() {
                let e = basis.col(k);
                a = &a + &CMat::outer(&e, &e).scale_re(c);
            }
            family.push(ops.len());
            ops.push(a.hermitized());
        }
        families.push(family);
    }

    let mut tuples: Vec<Vec<f64>> = (0..n)
        .map(|k| spectra.rows.iter().map(|row| row[k]).collect())
        .collect();
    sort_desc_lex(&mut tuples);
    let outcomes = vec![tuples; n + 1];

    Ok(OperatorBasis { n, ops, families, eigentable: EigenvalueTable { outcomes } })
}

/// Standard Gell-Mann matrices rescaled by sqrt(3/2) so Tr(L_i L_j) = 3 d_ij.
/// No commuting structure: eight singleton families.
pub fn gell_mann_basis() -> OperatorBasis {
    let o = C64::ZERO;
    let one = C64::ONE;
    let i = C64::new(0.0, 1.0);
    let raw = [
        vec![vec![o, one, o], vec![one, o, o], vec![o, o, o]],
        vec![vec![o, -i, o], vec![i, o, o], vec![o, o, o]],
        vec![vec![one, o, o], vec![o, -one, o], vec![o, o, o]],
        vec![vec![o, o, one], vec![o, o, o], vec![one, o, o]],
        vec![vec![o, o, -i], vec![o, o, o], vec![i, o, o]],
        vec![vec![o, o, o], vec![o, o, one], vec![o, one, o]],
        vec![vec![o, o, o], vec![o, o, -i], vec![o, i, o]],
    ];
    let scale = 1.5f64.sqrt();
    let mut ops: Vec<CMat> = raw
        .iter()
        .map(|rows| CMat::from_rows(rows).scale_re(scale))
        .collect();
    let t = scale / 3.0f64.sqrt();
    ops.push(CMat::from_rows(&[
        vec![C64::new(t, 0.0), o, o],
        vec![o, C64::new(t, 0.0), o],
        vec![o, o, C64::new(-2.0 * t, 0.0)],
    ]));

    let families: Vec<Vec<usize>> = (0..8).map(|k| vec![k]).collect();
    let eigentable = eigentable_from_ops(3, &ops, &families)
        .expect("Gell-Mann matrices diagonalize");
    OperatorBasis { n: 3, ops, families, eigentable }
}

/// Assemble a basis from raw parts (JSON import, ad hoc groupings). The
/// eigenvalue table is recomputed numerically; families need not commute,
/// in which case `validate` will flag them.
pub fn from_parts(n: usize, ops: Vec<CMat>, families: Vec<Vec<usize>>) -> Result<OperatorBasis> {
    if ops.iter().any(|a| a.dim() != n) {
        return Err(Error::DimensionMismatch(format!("all operators must be {n}x{n}")));
    }
    let mut seen = vec![false; ops.len()];
    for idx in families.iter().flatten() {
        if *idx >= ops.len() || seen[*idx] {
            return Err(Error::Format(format!(
                "families must partition operator indices, bad index {idx}"
            )));
        }
        seen[*idx] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Format("every operator must belong to a family".into()));
    }
    let eigentable = eigentable_from_ops(n, &ops, &families)?;
    Ok(OperatorBasis { n, ops, families, eigentable })
}

/// Shared-eigenvector outcome tuples, computed by diagonalizing a fixed-seed
/// random combination of each family (robust to degenerate member spectra).
fn eigentable_from_ops(
    n: usize,
    ops: &[CMat],
    families: &[Vec<usize>],
) -> Result<EigenvalueTable> {
    let mut rng = crate::rng::seeded(0x0b_a5e5);
    let mut outcomes = Vec::with_capacity(families.len());
    for family in families {
        let vectors = family_eigenvectors(n, ops, family, &mut rng)?;
        let mut tuples = Vec::with_capacity(n);
        for k in 0..n {
            let v = vectors.col(k);
            let tuple = family
                .iter()
                .map(|&idx| {
                    let av = ops[idx].apply(&v);
                    v.iter().zip(&av).map(|(x, y)| (x.conj() * y).re).sum()
                })
                .collect();
            tuples.push(tuple);
        }
        sort_desc_lex(&mut tuples);
        outcomes.push(tuples);
    }
    Ok(EigenvalueTable { outcomes })
}

fn family_eigenvectors(
    n: usize,
    ops: &[CMat],
    family: &[usize],
    rng: &mut impl rand::Rng,
) -> Result<CMat> {
    let mut combo = CMat::zeros(n);
    for &idx in family {
        combo = &combo + &ops[idx].scale_re(0.5 + rng.random::<f64>());
    }
    Ok(linalg::herm_eig(&combo.hermitized())?.vectors)
}

/// Descending lexicographic order with near-ties treated as equal, so noisy
/// zeros from a numerical eigensolve cannot flip the outcome labels.
fn sort_desc_lex(tuples: &mut [Vec<f64>]) {
    tuples.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            if (x - y).abs() <= tol::OUTCOME_TIE {
                continue;
            }
            return y.total_cmp(x);
        }
        std::cmp::Ordering::Equal
    });
}

/// Maximum deviations from the defining properties; `pass` gates every
/// deviation at 1e-8.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub num_ops: usize,
    pub herm_dev: f64,
    pub trace_dev: f64,
    /// Gram deviation |Tr(a_i a_j) - n d_ij|.
    pub ortho_dev: f64,
    /// Frobenius norm of intra-family commutators.
    pub commute_dev: f64,
    /// Cross-family eigenbasis overlap deviation from 1/sqrt(n).
    pub unbiased_dev: f64,
    /// Mismatch between recomputed outcome tuples and the stored table.
    pub eigentable_dev: f64,
    pub pass: bool,
}

impl ValidationReport {
    /// Largest of the tracked deviations.
    pub fn worst(&self) -> f64 {
        [
            self.herm_dev,
            self.trace_dev,
            self.ortho_dev,
            self.commute_dev,
            self.unbiased_dev,
            self.eigentable_dev,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl OperatorBasis {
    pub fn validate(&self) -> Result<ValidationReport> {
        let n = self.n;
        let nf = n as f64;

        let mut herm_dev: f64 = 0.0;
        let mut trace_dev: f64 = 0.0;
        for a in &self.ops {
            herm_dev = herm_dev.max(a.herm_deviation());
            trace_dev = trace_dev.max(a.trace().norm());
        }

        let mut ortho_dev: f64 = 0.0;
        for (i, a) in self.ops.iter().enumerate() {
            for (j, b) in self.ops.iter().enumerate() {
                let target = if i == j { nf } else { 0.0 };
                let g = CMat::trace_product(a, b);
                ortho_dev = ortho_dev.max((g - C64::new(target, 0.0)).norm());
            }
        }

        let mut commute_dev: f64 = 0.0;
        for family in &self.families {
            for (i, &a) in family.iter().enumerate() {
                for &b in family.iter().skip(i + 1) {
                    let c = CMat::commutator(&self.ops[a], &self.ops[b]);
                    commute_dev = commute_dev.max(c.frob_norm());
                }
            }
        }

        // Shared eigenvectors per family, then cross-family unbiasedness and
        // agreement with the stored eigenvalue table.
        let mut rng = crate::rng::seeded(0x0b_a5e5);
        let mut eigenbases = Vec::with_capacity(self.families.len());
        let mut eigentable_dev: f64 = 0.0;
        for (m, family) in self.families.iter().enumerate() {
            let vectors = family_eigenvectors(n, &self.ops, family, &mut rng)?;
            let mut tuples = Vec::with_capacity(n);
            for k in 0..n {
                let v = vectors.col(k);
                let tuple: Vec<f64> = family
                    .iter()
                    .map(|&idx| {
                        let av = self.ops[idx].apply(&v);
                        v.iter().zip(&av).map(|(x, y)| (x.conj() * y).re).sum()
                    })
                    .collect();
                tuples.push(tuple);
            }
            sort_desc_lex(&mut tuples);
            for (t, stored) in tuples.iter().zip(&self.eigentable.outcomes[m]) {
                for (a, b) in t.iter().zip(stored) {
                    eigentable_dev = eigentable_dev.max((a - b).abs());
                }
            }
            eigenbases.push(vectors);
        }

        let target = 1.0 / nf.sqrt();
        let mut unbiased_dev: f64 = 0.0;
        for (i, a) in eigenbases.iter().enumerate() {
            for b in eigenbases.iter().skip(i + 1) {
                let overlap = &a.dagger() * b;
                for r in 0..n {
                    for c in 0..n {
                        unbiased_dev =
                            unbiased_dev.max((overlap[(r, c)].norm() - target).abs());
                    }
                }
            }
        }

        let gate = tol::BASIS_GATE;
        Ok(ValidationReport {
            n,
            num_ops: self.ops.len(),
            herm_dev,
            trace_dev,
            ortho_dev,
            commute_dev,
            unbiased_dev,
            eigentable_dev,
            pass: herm_dev <= gate
                && trace_dev <= gate
                && ortho_dev <= gate
                && commute_dev <= gate
                && unbiased_dev <= gate
                && eigentable_dev <= gate,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = BasisJson {
            n: self.n,
            families: self.families.clone(),
            ops: self.ops.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<OperatorBasis> {
        let raw: BasisJson = serde_json::from_str(text)?;
        from_parts(raw.n, raw.ops, raw.families)
    }
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    n: usize,
    families: Vec<Vec<usize>>,
    ops: Vec<CMat>,
}
