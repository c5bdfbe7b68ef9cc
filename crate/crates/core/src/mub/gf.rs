//! Arithmetic in F_{p^k} via dense index tables.
//!
//! Elements are indices in `0..q` with q = p^k; the base-p digits of an index
//! are the coefficients of the representative polynomial, constant term in
//! the least significant digit. Index 0 is zero and indices below p form the
//! prime subfield, so the absolute trace can be returned as a plain integer.

/// Polynomials over F_p are coefficient vectors, little-endian, no trailing
/// zero guarantee required by callers.
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` under a monic divisor `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "divisor must be monic");
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            let idx = i + shift;
            r[idx] = (r[idx] + p * p - (lead * mi) % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Monic degree-`deg` polynomial from the `p`-ary digits of `code`
/// (non-leading coefficients only).
pub(crate) fn poly_from_code(code: usize, deg: u32, p: u64) -> Vec<u64> {
    let mut f = vec![0u64; deg as usize + 1];
    let mut c = code as u64;
    for coeff in f.iter_mut().take(deg as usize) {
        *coeff = c % p;
        c /= p;
    }
    f[deg as usize] = 1;
    f
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) as usize {
            let g = poly_from_code(code, d, p);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree `k` over F_p with the smallest coefficient
/// code (constant term least significant). Deterministic, so serialized
/// bases are stable across builds.
pub fn lex_smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    for code in 0..p.pow(k) as usize {
        let f = poly_from_code(code, k, p);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist for every degree");
}

/// F_{p^k} with precomputed add/mul tables. Intended for q at desk scale
/// (q <= 256); table size is q^2.
pub struct Field {
    pub p: u64,
    pub k: u32,
    pub q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl Field {
    pub fn new(p: u64, k: u32) -> Field {
        assert!(p >= 2 && k >= 1);
        let q = p.pow(k) as usize;
        assert!(q <= 256, "field too large for table representation");
        let modulus = lex_smallest_irreducible(p, k);

        let to_poly = |mut i: usize| -> Vec<u64> {
            let mut c = vec![0u64; k as usize];
            for d in c.iter_mut() {
                *d = (i as u64) % p;
                i /= p as usize;
            }
            c
        };
        let from_poly = |c: &[u64]| -> usize {
            c.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let pa = to_poly(a);
            for b in 0..q {
                let pb = to_poly(b);
                let sum: Vec<u64> = pa.iter().zip(&pb).map(|(&x, &y)| (x + y) % p).collect();
                add[a * q + b] = from_poly(&sum) as u16;
                let prod = poly_rem(&poly_mul(&pa, &pb, p), &modulus, p);
                let mut full = prod;
                full.resize(k as usize, 0);
                mul[a * q + b] = from_poly(&full) as u16;
            }
        }
        Field { p, k, q, add, mul }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    fn pow(&self, mut base: usize, mut e: u64) -> usize {
        let mut acc = 1usize;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace into F_p, returned as an integer in 0..p.
    pub fn trace(&self, a: usize) -> u64 {
        let mut acc = 0usize;
        let mut term = a;
        for _ in 0..self.k {
            acc = self.add(acc, term);
            term = self.pow(term, self.p);
        }
        debug_assert!(acc < self.p as usize, "trace must land in the prime subfield");
        acc as u64
    }
}
