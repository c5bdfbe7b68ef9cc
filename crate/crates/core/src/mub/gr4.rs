//! The Galois ring GR(4, m) = Z4[x]/(f) for a Hensel-lifted irreducible f.
//!
//! Characteristic-2 dimensions need fourth roots of unity: a field trace of
//! a*x^2 over F_{2^m} is linear in x, so the odd-prime quadratic-phase recipe
//! degenerates there. The ring trace into Z4 restores a genuine quadratic
//! character, and i^trace produces complete sets of unbiased bases.
//!
//! Elements are coefficient vectors mod 4, little-endian, length m. The
//! Teichmueller set T = {0, 1, xi, xi^2, ...} gives the unique 2-adic
//! splitting z = a + 2b with a, b in T, which drives both the Frobenius and
//! the basis labels.

use super::gf;
use crate::cmat::{C64, CMat};

pub(crate) struct Ring {
    m: usize,
    /// 2^m, the qudit dimension served by this ring.
    pub n: usize,
    modulus: Vec<u64>,
    /// T in fixed order: index 0 is zero, index j >= 1 holds xi^(j-1).
    teich: Vec<Vec<u64>>,
    /// Mod-2 residue key -> index into `teich`. A permutation of 0..n.
    teich_pos: Vec<usize>,
}

/// One Graeffe step: g(x^2) = (-1)^m f(x) f(-x) mod 4.
fn graeffe_step(f: &[u64], m: usize) -> Vec<u64> {
    let fneg: Vec<u64> = f
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 1 { (4 - c) % 4 } else { c })
        .collect();
    let mut prod = vec![0u64; 2 * m + 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in fneg.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a * b) % 4;
        }
    }
    let sign = if m % 2 == 0 { 1 } else { 3 };
    (0..=m)
        .map(|i| {
            debug_assert!(i == 0 || prod[2 * i - 1] == 0, "product must be even");
            (prod[2 * i] * sign) % 4
        })
        .collect()
}

/// Hensel lift of a mod-2 irreducible to Z4, as the Graeffe fixed point.
fn hensel_lift(f2: &[u64]) -> Vec<u64> {
    let m = f2.len() - 1;
    let mut f = f2.to_vec();
    for _ in 0..16 {
        let next = graeffe_step(&f, m);
        if next == f {
            return f;
        }
        f = next;
    }
    unreachable!("Graeffe iteration converges in O(log m) steps");
}

impl Ring {
    /// Smallest-code irreducible of degree m over F2 (nonzero constant term)
    /// whose lift yields a Teichmueller generator of full order 2^m - 1.
    pub fn new(m: usize) -> Ring {
        assert!(m >= 1);
        let n = 1usize << m;
        for code in (1..n).step_by(2) {
            let f2 = gf::poly_from_code(code, m as u32, 2);
            if !gf::is_irreducible(&f2, 2) {
                continue;
            }
            if let Some(ring) = Ring::from_modulus(m, hensel_lift(&f2)) {
                return ring;
            }
        }
        unreachable!("a primitive irreducible of degree m over F2 exists");
    }

    fn from_modulus(m: usize, modulus: Vec<u64>) -> Option<Ring> {
        let n = 1usize << m;
        let mut ring =
            Ring { m, n, modulus, teich: Vec::new(), teich_pos: vec![usize::MAX; n] };

        // xi is the class of x, reduced so the m = 1 case (modulus x + 3)
        // collapses to the scalar 1.
        let xi = ring.reduce(&[0, 1]);

        let one = {
            let mut e = vec![0u64; m];
            e[0] = 1;
            e
        };
        let mut teich = vec![vec![0u64; m], one.clone()];
        let mut pow = one.clone();
        for _ in 0..n - 2 {
            pow = ring.mul(&pow, &xi);
            if pow == one {
                return None; // xi has short order; try the next modulus
            }
            teich.push(pow.clone());
        }
        pow = ring.mul(&pow, &xi);
        if pow != one {
            return None;
        }

        let mut teich_pos = vec![usize::MAX; n];
        for (idx, t) in teich.iter().enumerate() {
            let key = residue_key(t);
            if teich_pos[key] != usize::MAX {
                return None; // residues must be distinct
            }
            teich_pos[key] = idx;
        }
        ring.teich = teich;
        ring.teich_pos = teich_pos;
        Some(ring)
    }

    fn reduce(&self, a: &[u64]) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        while r.len() > self.m {
            let lead = r.pop().unwrap();
            if lead == 0 {
                continue;
            }
            let shift = r.len() - self.m;
            for (i, &fi) in self.modulus.iter().take(self.m).enumerate() {
                r[i + shift] = (r[i + shift] + 16 - (lead * fi) % 4) % 4;
            }
        }
        r.resize(self.m, 0);
        r
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % 4).collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + 4 - y) % 4).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % 4;
            }
        }
        self.reduce(&prod)
    }

    /// Scale by 2 in Z4; kills the Teichmueller component of the argument.
    pub fn twice(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| (2 * x) % 4).collect()
    }

    pub fn teich_element(&self, idx: usize) -> &[u64] {
        &self.teich[idx]
    }

    /// The 2-adic coordinates of z: indices (in Teichmueller order) of the
    /// unique a, b in T with z = a + 2b.
    fn decompose(&self, z: &[u64]) -> (usize, usize) {
        let ai = self.teich_pos[residue_key(z)];
        let d = self.sub(z, &self.teich[ai]);
        debug_assert!(d.iter().all(|&c| c % 2 == 0), "z - a must be even");
        let hkey = d.iter().rev().fold(0usize, |acc, &c| (acc << 1) | (c as usize / 2));
        (ai, self.teich_pos[hkey])
    }

    /// Frobenius: a + 2b -> a^2 + 2b^2. Generates the Galois group over Z4.
    fn frobenius(&self, z: &[u64]) -> Vec<u64> {
        let (ai, bi) = self.decompose(z);
        let a = &self.teich[ai];
        let b = &self.teich[bi];
        self.add(&self.mul(a, a), &self.twice(&self.mul(b, b)))
    }

    /// Ring trace into Z4, returned as an integer mod 4.
    pub fn trace(&self, z: &[u64]) -> u64 {
        let mut acc = z.to_vec();
        let mut term = z.to_vec();
        for _ in 1..self.m {
            term = self.frobenius(&term);
            acc = self.add(&acc, &term);
        }
        debug_assert!(
            acc[1..].iter().all(|&c| c == 0),
            "trace must be a Z4 scalar"
        );
        acc[0]
    }

    /// The 2^m unbiased bases beyond the computational one. Rows and columns
    /// are indexed in Teichmueller order; basis a has columns
    /// v_b(x) = i^Tr((a + 2b) x) / sqrt(n).
    pub fn mub_bases(&self) -> Vec<CMat> {
        let n = self.n;
        let scale = 1.0 / (n as f64).sqrt();
        let i_pow = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ];
        (0..n)
            .map(|a_idx| {
                let a = self.teich_element(a_idx).to_vec();
                CMat::from_fn(n, |row, col| {
                    let z = self.add(&a, &self.twice(self.teich_element(col)));
                    let t = self.trace(&self.mul(&z, self.teich_element(row)));
                    i_pow[t as usize].scale(scale)
                })
            })
            .collect()
    }
}

fn residue_key(z: &[u64]) -> usize {
    z.iter().rev().fold(0usize, |acc, &c| (acc << 1) | (c as usize & 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifted_moduli_match_known_values() {
        // Little-endian mod-4 coefficients of the Hensel lifts.
        assert_eq!(Ring::new(1).modulus, vec![3, 1]); // x + 3
        assert_eq!(Ring::new(2).modulus, vec![1, 1, 1]); // x^2 + x + 1
        assert_eq!(Ring::new(3).modulus, vec![3, 1, 2, 1]); // x^3 + 2x^2 + x + 3
        assert_eq!(Ring::new(4).modulus, vec![1, 3, 2, 0, 1]); // x^4 + 2x^2 + 3x + 1
    }

    #[test]
    fn frobenius_fixes_z4_and_has_order_m() {
        let ring = Ring::new(3);
        for s in 0..4u64 {
            let mut z = vec![0u64; 3];
            z[0] = s;
            assert_eq!(ring.frobenius(&z), z);
        }
        for idx in 0..ring.n {
            let mut z = ring.add(ring.teich_element(idx), &[1, 2, 3]);
            let orig = z.clone();
            for _ in 0..3 {
                z = ring.frobenius(&z);
            }
            assert_eq!(z, orig);
        }
    }

    #[test]
    fn qubit_ring_reproduces_pauli_eigenbases() {
        let bases = Ring::new(1).mub_bases();
        assert_eq!(bases.len(), 2);
        let s = 1.0 / 2.0f64.sqrt();
        // a = 0: sigma-x eigenbasis.
        let bx = &bases[0];
        for (col, sign) in [(0, 1.0), (1, -1.0)] {
            assert!((bx[(0, col)] - C64::new(s, 0.0)).norm() < 1e-15);
            assert!((bx[(1, col)] - C64::new(sign * s, 0.0)).norm() < 1e-15);
        }
        // a = 1: sigma-y eigenbasis.
        let by = &bases[1];
        assert!((by[(1, 0)] - C64::new(0.0, s)).norm() < 1e-15);
        assert!((by[(1, 1)] - C64::new(0.0, -s)).norm() < 1e-15);
    }

    #[test]
    fn trace_is_additive() {
        let ring = Ring::new(4);
        let z = ring.add(ring.teich_element(5), &ring.twice(ring.teich_element(11)));
        let w = ring.add(ring.teich_element(2), &ring.twice(ring.teich_element(7)));
        let lhs = ring.trace(&ring.add(&z, &w));
        assert_eq!(lhs, (ring.trace(&z) + ring.trace(&w)) % 4);
    }
}
