//! Complete sets of mutually unbiased bases in prime-power dimension.
//!
//! `build` produces n + 1 bases: the computational basis plus n more, any
//! two of which are unbiased (|<u|v>| = 1/sqrt(n) between different bases).
//! Odd prime powers use quadratic phases with the field trace over F_{p^k};
//! even prime powers switch to fourth roots of unity with the Galois ring
//! trace, since the characteristic-2 field trace of a*x^2 is linear in x.

mod gf;
mod gr4;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::cmat::{C64, CMat};
use crate::error::{Error, Result};
use crate::tol;

/// Decomposition n = p^k with p prime, k >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

/// Trial division; rejects 0, 1, and mixed-factor numbers.
pub fn prime_power_decompose(n: u64) -> Result<PrimePower> {
    if n < 2 {
        return Err(Error::NotPrimePower(n));
    }
    let mut p = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut rest = n;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(n));
    }
    Ok(PrimePower { p, k })
}

/// A full set of n + 1 bases for one dimension. `bases[0]` is the
/// computational basis; every matrix stores its basis vectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct MubFamily {
    pub n: usize,
    pub bases: Vec<CMat>,
}

/// All n + 1 mutually unbiased bases for a prime-power dimension n.
///
/// Basis order is deterministic: computational first, then the quadratic
/// label a running over the field (odd p, a = 0 giving the Fourier basis) or
/// over the Teichmueller set (p = 2).
pub fn build(n: u64) -> Result<MubFamily> {
    let pp = prime_power_decompose(n)?;
    let dim = n as usize;
    let mut bases = vec![CMat::identity(dim)];
    if pp.p == 2 {
        bases.extend(gr4::Ring::new(pp.k as usize).mub_bases());
    } else {
        let field = gf::Field::new(pp.p, pp.k);
        let p = pp.p as f64;
        let scale = 1.0 / (dim as f64).sqrt();
        for a in 0..dim {
            bases.push(CMat::from_fn(dim, |x, j| {
                let axx = field.mul(a, field.mul(x, x));
                let t = field.trace(field.add(axx, field.mul(j, x)));
                C64::from_polar(scale, TAU * t as f64 / p)
            }));
        }
    }
    Ok(MubFamily { n: dim, bases })
}

/// Deviation summary for a candidate family, usable on partial or imperfect
/// sets (fewer than n + 1 bases, approximate entries).
#[derive(Clone, Debug, Serialize)]
pub struct UnbiasednessReport {
    pub n: usize,
    pub num_bases: usize,
    /// max |B'B - I| entry over all bases.
    pub orthonormality_dev: f64,
    /// max | |<u|v>| - 1/sqrt(n) | over vector pairs from distinct bases.
    pub unbiasedness_dev: f64,
    pub pass: bool,
}

pub fn unbiasedness_report(bases: &[CMat]) -> Result<UnbiasednessReport> {
    let first = bases
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty basis list".into()))?;
    let n = first.dim();
    if let Some(bad) = bases.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n} bases, found {0}x{0}",
            bad.dim()
        )));
    }

    let mut ortho_dev: f64 = 0.0;
    for b in bases {
        let gram = &b.dagger() * b;
        let dev = (&gram - &CMat::identity(n)).max_abs();
        ortho_dev = ortho_dev.max(dev);
    }

    let target = 1.0 / (n as f64).sqrt();
    let mut unbias_dev: f64 = 0.0;
    for (i, a) in bases.iter().enumerate() {
        for b in bases.iter().skip(i + 1) {
            let overlap = &a.dagger() * b;
            for r in 0..n {
                for c in 0..n {
                    unbias_dev = unbias_dev.max((overlap[(r, c)].norm() - target).abs());
                }
            }
        }
    }

    Ok(UnbiasednessReport {
        n,
        num_bases: bases.len(),
        orthonormality_dev: ortho_dev,
        unbiasedness_dev: unbias_dev,
        pass: ortho_dev <= tol::MUB_REPORT_GATE && unbias_dev <= tol::MUB_REPORT_GATE,
    })
}

/// Wire form: `{ "n": int, "bases": [rows of [re, im] pairs, ...] }`.
#[derive(Serialize, Deserialize)]
struct MubJson {
    n: usize,
    bases: Vec<Vec<Vec<[f64; 2]>>>,
}

impl MubFamily {
    pub fn to_json(&self) -> Result<String> {
        let bases = self
            .bases
            .iter()
            .map(|b| {
                (0..self.n)
                    .map(|r| (0..self.n).map(|c| [b[(r, c)].re, b[(r, c)].im]).collect())
                    .collect()
            })
            .collect();
        Ok(serde_json::to_string_pretty(&MubJson { n: self.n, bases })?)
    }

    pub fn from_json(text: &str) -> Result<MubFamily> {
        let raw: MubJson = serde_json::from_str(text)?;
        if raw.n == 0 {
            return Err(Error::Format("dimension must be positive".into()));
        }
        let mut bases = Vec::with_capacity(raw.bases.len());
        for rows in &raw.bases {
            if rows.len() != raw.n || rows.iter().any(|r| r.len() != raw.n) {
                return Err(Error::DimensionMismatch(format!(
                    "each basis must be {0}x{0}",
                    raw.n
                )));
            }
            bases.push(CMat::from_fn(raw.n, |r, c| {
                C64::new(rows[r][c][0], rows[r][c][1])
            }));
        }
        Ok(MubFamily { n: raw.n, bases })
    }
}
