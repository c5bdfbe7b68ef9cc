//! Dense square complex matrices, row-major, sized for dimensions up to 16.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub type C64 = Complex64;

/// Square complex matrix. All entries are finite; the dimension is fixed at
/// construction.
#[derive(Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        CMat { n, data: vec![C64::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        CMat::from_fn(n, |i, j| rows[i][j])
    }

    pub fn diag_re(entries: &[f64]) -> Self {
        let mut m = CMat::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Rank-one matrix `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        CMat::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn dagger(&self) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(C64::new(s, 0.0))
    }

    /// `‖A − A†‖_F`, the distance from the Hermitian cone.
    pub fn herm_deviation(&self) -> f64 {
        (self - &self.dagger()).frob_norm()
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitized(&self) -> CMat {
        (self + &self.dagger()).scale_re(0.5)
    }

    pub fn commutator(a: &CMat, b: &CMat) -> CMat {
        &(a * b) - &(b * a)
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.n);
        for i in 0..self.n {
            self[(i, j)] = v[i];
        }
    }

    /// Matrix-vector product `A·x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Real part of `Tr(A·B)`; exact pairing for Hermitian inputs.
    pub fn trace_product_re(a: &CMat, b: &CMat) -> f64 {
        assert_eq!(a.n, b.n);
        let mut acc = 0.0;
        for i in 0..a.n {
            for k in 0..a.n {
                acc += (a[(i, k)] * b[(k, i)]).re;
            }
        }
        acc
    }

    pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
        assert_eq!(a.n, b.n);
        let mut acc = C64::ZERO;
        for i in 0..a.n {
            for k in 0..a.n {
                acc += a[(i, k)] * b[(k, i)];
            }
        }
        acc
    }
}

/// Hermitian inner product `⟨u|v⟩` with the left argument conjugated.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        CMat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        CMat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{ "re": [[...]], "im": [[...]] }`, both row-major and square.
#[derive(Serialize, Deserialize)]
struct MatJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.n;
        let grid = |pick: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| pick(&self[(i, j)])).collect())
                .collect()
        };
        MatJson { re: grid(|z| z.re), im: grid(|z| z.im) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatJson::deserialize(deserializer)?;
        let n = raw.re.len();
        if n == 0 {
            return Err(D::Error::custom("matrix must be nonempty"));
        }
        let square = |g: &[Vec<f64>]| g.len() == n && g.iter().all(|row| row.len() == n);
        if !square(&raw.re) || !square(&raw.im) {
            return Err(D::Error::custom("re/im grids must be square and same size"));
        }
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let z = C64::new(raw.re[i][j], raw.im[i][j]);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(D::Error::custom("matrix entries must be finite"));
                }
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_trace() {
        let a = CMat::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ]);
        let t = (&a * &a).trace();
        // a is Hermitian with eigenvalues (3+sqrt(5))/2 and (3-sqrt(5))/2 summed squared = 7
        assert!((t.re - 7.0).abs() < 1e-12 && t.im.abs() < 1e-15);
    }

    #[test]
    fn hermitize_and_deviation() {
        let a = CMat::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(2.0, 3.0)],
            vec![C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
        ]);
        assert!(a.herm_deviation() > 1.0);
        assert!(a.hermitized().herm_deviation() < 1e-15);
    }

    #[test]
    fn outer_projects() {
        let u = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        let p = CMat::outer(&u, &u).scale_re(0.5);
        let p2 = &p * &p;
        assert!((&p2 - &p).frob_norm() < 1e-15);
        assert!((p.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_conjugates_left() {
        let u = vec![C64::new(0.0, 1.0)];
        let v = vec![C64::new(0.0, 1.0)];
        let ip = inner(&u, &v);
        assert!((ip.re - 1.0).abs() < 1e-15 && ip.im.abs() < 1e-15);
    }
}
