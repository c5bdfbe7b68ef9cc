//! The classicality polytope in generalized Bloch space.
//!
//! H-representation: one inequality `1 + <w_lambda, theta> >= 0` per outcome
//! tuple, with `w_lambda` the concatenated eigenvalue tuples. V-representation:
//! the Bloch vectors of the MUB eigenstates. The module checks membership,
//! insphere radius, centroid tangency, enumerates vertices by double
//! description (small dimensions only), and classifies edges by a rank test
//! on shared active faces.

use crate::error::{Error, Result};
use crate::lp::{self, LpSolution};
use crate::opbasis::OperatorBasis;
use crate::povm;
use crate::states::BlochVector;
use crate::tol;
use serde::Serialize;

/// Intersection of half-spaces `1 + <w, theta> >= 0`, one per face normal.
#[derive(Clone, Debug)]
pub struct PolytopeH {
    pub normals: Vec<Vec<f64>>,
    pub dim: usize,
}

/// A finite point set; for MUB polytopes, the pure-state Bloch vectors.
#[derive(Clone, Debug)]
pub struct PolytopeV {
    pub vertices: Vec<Vec<f64>>,
}

impl PolytopeH {
    pub fn new(normals: Vec<Vec<f64>>) -> Result<PolytopeH> {
        let dim = normals.first().map_or(0, |w| w.len());
        if dim == 0 || normals.iter().any(|w| w.len() != dim) {
            return Err(Error::DimensionMismatch(
                "face normals must be nonempty and of equal dimension".into(),
            ));
        }
        Ok(PolytopeH { normals, dim })
    }

    pub fn faces(&self) -> usize {
        self.normals.len()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Gram-Schmidt numerical rank with relative residual threshold
/// [`tol::RANK`]; optionally reports a unit vector orthogonal to all rows.
fn rank_with_complement(rows: &[&[f64]], dim: usize) -> (usize, Option<Vec<f64>>) {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let scale = norm(row).max(1.0);
        let mut r: Vec<f64> = row.to_vec();
        for q in &ortho {
            let c = dot(&r, q);
            for (x, &qk) in r.iter_mut().zip(q) {
                *x -= c * qk;
            }
        }
        let rn = norm(&r);
        if rn > tol::RANK * scale {
            for x in r.iter_mut() {
                *x /= rn;
            }
            ortho.push(r);
            if ortho.len() == dim {
                return (dim, None);
            }
        }
    }
    // Project coordinate axes to find a leftover direction.
    for k in 0..dim {
        let mut r = vec![0.0; dim];
        r[k] = 1.0;
        for q in &ortho {
            let c = dot(&r, q);
            for (x, &qk) in r.iter_mut().zip(q) {
                *x -= c * qk;
            }
        }
        let rn = norm(&r);
        if rn > tol::RANK {
            for x in r.iter_mut() {
                *x /= rn;
            }
            return (ortho.len(), Some(r));
        }
    }
    (ortho.len(), None)
}

/// The 2N recession probes are run when the face count is small; larger
/// systems rely on the zero-sum structure of the normals, under which a
/// full-rank normal set already forces a trivial recession cone.
const LP_PROBE_FACE_CAP: usize = 128;

fn verify_bounded(h: &PolytopeH) -> Result<()> {
    let refs: Vec<&[f64]> = h.normals.iter().map(|w| w.as_slice()).collect();
    let (rank, complement) = rank_with_complement(&refs, h.dim);
    if rank < h.dim {
        return Err(Error::UnboundedRegion(complement.unwrap_or(vec![0.0; h.dim])));
    }
    if h.faces() <= LP_PROBE_FACE_CAP {
        // maximize +-e_k . d over {w.d >= 0 for all faces} within a unit box;
        // any positive optimum is a recession direction.
        let mut rows: Vec<Vec<f64>> = h
            .normals
            .iter()
            .map(|w| w.iter().map(|&x| -x).collect())
            .collect();
        let mut rhs = vec![0.0; h.faces()];
        for k in 0..h.dim {
            for sign in [1.0, -1.0] {
                let mut row = vec![0.0; h.dim];
                row[k] = sign;
                rows.push(row);
                rhs.push(1.0);
            }
        }
        for k in 0..h.dim {
            for sign in [1.0, -1.0] {
                let mut c = vec![0.0; h.dim];
                c[k] = sign;
                match lp::maximize_free(&c, &rows, &rhs)? {
                    LpSolution::Optimal { x, value } => {
                        if value > tol::LP_RECESSION {
                            return Err(Error::UnboundedRegion(x));
                        }
                    }
                    LpSolution::Unbounded => {
                        return Err(Error::UnboundedRegion(c));
                    }
                    LpSolution::Infeasible => unreachable!("origin satisfies the cone"),
                }
            }
        }
    } else {
        let mut total = vec![0.0; h.dim];
        for w in &h.normals {
            for (t, &x) in total.iter_mut().zip(w) {
                *t += x;
            }
        }
        if norm(&total) > 1e-9 * h.faces() as f64 {
            return Err(Error::Format(
                "face normals do not sum to zero; boundedness check needs the LP path".into(),
            ));
        }
    }
    Ok(())
}

/// One face per outcome tuple, lexicographic with family 1 most significant;
/// boundedness is verified before the polytope is returned.
pub fn h_polytope(b: &OperatorBasis) -> Result<PolytopeH> {
    let nfam = b.families.len();
    let faces = (b.n as u128).pow(nfam as u32);
    if faces > 1 << 22 {
        return Err(Error::Format(format!(
            "{faces} faces exceed the materialization cap"
        )));
    }
    let faces = faces as usize;
    let dim = b.ops.len();
    let mut normals = Vec::with_capacity(faces);
    for index in 0..faces {
        let digits = povm::decode_tuple(index, b.n, nfam);
        let mut w = vec![0.0; dim];
        for (m, &o) in digits.iter().enumerate() {
            for (j, &op_idx) in b.families[m].iter().enumerate() {
                w[op_idx] = b.eigentable.outcomes[m][o][j];
            }
        }
        normals.push(w);
    }
    let h = PolytopeH { normals, dim };
    verify_bounded(&h)?;
    Ok(h)
}

/// Bloch vectors of all n(n+1) MUB eigenstates: family m's outcome o places
/// the eigenvalue tuple in that family's slots and zeros elsewhere.
pub fn mub_vertices(b: &OperatorBasis) -> PolytopeV {
    let dim = b.ops.len();
    let mut vertices = Vec::new();
    for (m, family) in b.families.iter().enumerate() {
        for tuple in &b.eigentable.outcomes[m] {
            let mut v = vec![0.0; dim];
            for (j, &op_idx) in family.iter().enumerate() {
                v[op_idx] = tuple[j];
            }
            vertices.push(v);
        }
    }
    PolytopeV { vertices }
}

/// Worst-case slack `min_lambda (1 + <w_lambda, theta>)`; nonnegative (up to
/// [`tol::MEMBERSHIP`]) means the point is classical.
pub fn membership(theta: &BlochVector, h: &PolytopeH) -> f64 {
    h.normals
        .iter()
        .map(|w| 1.0 + dot(w, &theta.theta))
        .fold(f64::INFINITY, f64::min)
}

/// Distance from the origin to the nearest face hyperplane.
pub fn insphere_radius(h: &PolytopeH) -> f64 {
    h.normals
        .iter()
        .map(|w| 1.0 / norm(w))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, Serialize)]
pub struct CentroidReport {
    pub faces: usize,
    pub faces_without_vertices: usize,
    pub insphere_radius: f64,
    /// Worst `| ||centroid|| - insphere |` over faces with vertices.
    pub max_norm_dev: f64,
    /// Worst `|1 + <w, centroid>|`: centroids must lie on their face planes.
    pub max_plane_dev: f64,
    /// Worst distance between a centroid and the insphere tangency point
    /// `-w / ||w||^2`.
    pub max_tangency_dev: f64,
    pub min_incident_vertices: usize,
    pub max_incident_vertices: usize,
}

/// For every face, averages the vertices saturating it and compares the
/// centroid against the insphere tangency point of that face.
pub fn centroid_tangency(h: &PolytopeH, v: &PolytopeV) -> CentroidReport {
    let insphere = insphere_radius(h);
    let mut report = CentroidReport {
        faces: h.faces(),
        faces_without_vertices: 0,
        insphere_radius: insphere,
        max_norm_dev: 0.0,
        max_plane_dev: 0.0,
        max_tangency_dev: 0.0,
        min_incident_vertices: usize::MAX,
        max_incident_vertices: 0,
    };
    for w in &h.normals {
        let incident: Vec<&Vec<f64>> = v
            .vertices
            .iter()
            .filter(|x| (1.0 + dot(w, x)).abs() <= tol::FACE_ACTIVE)
            .collect();
        if incident.is_empty() {
            report.faces_without_vertices += 1;
            continue;
        }
        report.min_incident_vertices = report.min_incident_vertices.min(incident.len());
        report.max_incident_vertices = report.max_incident_vertices.max(incident.len());
        let mut c = vec![0.0; h.dim];
        for x in &incident {
            for (ck, &xk) in c.iter_mut().zip(x.iter()) {
                *ck += xk;
            }
        }
        for ck in c.iter_mut() {
            *ck /= incident.len() as f64;
        }
        report.max_norm_dev = report.max_norm_dev.max((norm(&c) - insphere).abs());
        report.max_plane_dev = report.max_plane_dev.max((1.0 + dot(w, &c)).abs());
        let wsq = dot(w, w);
        let dev = c
            .iter()
            .zip(w)
            .map(|(&ck, &wk)| (ck + wk / wsq).powi(2))
            .sum::<f64>()
            .sqrt();
        report.max_tangency_dev = report.max_tangency_dev.max(dev);
    }
    if report.min_incident_vertices == usize::MAX {
        report.min_incident_vertices = 0;
    }
    report
}

fn invert(mut a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let d = a.len();
    let mut inv: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..d {
        let pivot = (col..d).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for x in inv[col].iter_mut() {
            *x /= p;
        }
        for row in 0..d {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..d {
                let s = a[col][j];
                a[row][j] -= f * s;
                let s = inv[col][j];
                inv[row][j] -= f * s;
            }
        }
    }
    Some(inv)
}

/// Double-description vertex enumeration over the homogenized cone
/// `{(x0, x) : x0 + <w, x> >= 0}`. Restricted to small instances; the
/// bitmask adjacency test caps the face count at 128.
pub fn enumerate_vertices(h: &PolytopeH) -> Result<PolytopeV> {
    if h.dim > 14 {
        return Err(Error::Format(format!(
            "vertex enumeration restricted to dimension <= 14, got {}",
            h.dim
        )));
    }
    if h.faces() > 128 {
        return Err(Error::Format(format!(
            "vertex enumeration restricted to <= 128 faces, got {}",
            h.faces()
        )));
    }
    verify_bounded(h)?;
    let d = h.dim + 1;
    let rows: Vec<Vec<f64>> = h
        .normals
        .iter()
        .map(|w| {
            let mut r = Vec::with_capacity(d);
            r.push(1.0);
            r.extend_from_slice(w);
            r
        })
        .collect();

    // Initial simplicial cone from d independent rows; rays are the columns
    // of the inverse, so that row_i . ray_j = delta_ij >= 0.
    let mut chosen: Vec<usize> = Vec::new();
    {
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let mut r = row.clone();
            for q in &ortho {
                let c = dot(&r, q);
                for (x, &qk) in r.iter_mut().zip(q) {
                    *x -= c * qk;
                }
            }
            let rn = norm(&r);
            if rn > tol::RANK * norm(row).max(1.0) {
                for x in r.iter_mut() {
                    *x /= rn;
                }
                ortho.push(r);
                chosen.push(i);
                if chosen.len() == d {
                    break;
                }
            }
        }
    }
    if chosen.len() < d {
        return Err(Error::NumericalDegeneracy {
            fine: chosen.len(),
            coarse: d,
        });
    }
    let basis_matrix: Vec<Vec<f64>> = chosen.iter().map(|&i| rows[i].clone()).collect();
    let inv = invert(basis_matrix).ok_or(Error::NumericalDegeneracy { fine: 0, coarse: d })?;
    let mut rays: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut r: Vec<f64> = (0..d).map(|i| inv[i][j]).collect();
            let rn = norm(&r);
            for x in r.iter_mut() {
                *x /= rn;
            }
            r
        })
        .collect();

    let mut processed: Vec<usize> = chosen.clone();
    let ztol = |row: &[f64]| 1e-9 * (1.0 + norm(row));
    let masks = |rays: &[Vec<f64>], processed: &[usize]| -> Vec<u128> {
        rays.iter()
            .map(|r| {
                let mut m = 0u128;
                for (bit, &ci) in processed.iter().enumerate() {
                    if dot(&rows[ci], r).abs() <= ztol(&rows[ci]) {
                        m |= 1 << bit;
                    }
                }
                m
            })
            .collect()
    };

    for ci in 0..rows.len() {
        if processed.contains(&ci) {
            continue;
        }
        let row = &rows[ci];
        let zt = ztol(row);
        let vals: Vec<f64> = rays.iter().map(|r| dot(row, r)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < -zt).collect();
        if neg.is_empty() {
            processed.push(ci);
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > zt).collect();
        let zero_masks = masks(&rays, &processed);
        let mut next: Vec<Vec<f64>> = (0..rays.len())
            .filter(|i| !neg.contains(i))
            .map(|i| rays[i].clone())
            .collect();
        for &i in &pos {
            for &j in &neg {
                let common = zero_masks[i] & zero_masks[j];
                let blocked = (0..rays.len())
                    .any(|k| k != i && k != j && common & !zero_masks[k] == 0);
                if blocked {
                    continue;
                }
                let mut r: Vec<f64> = rays[i]
                    .iter()
                    .zip(&rays[j])
                    .map(|(&ri, &rj)| vals[i] * rj - vals[j] * ri)
                    .collect();
                let rn = norm(&r);
                if rn < 1e-12 {
                    continue;
                }
                for x in r.iter_mut() {
                    *x /= rn;
                }
                next.push(r);
            }
        }
        rays = next;
        processed.push(ci);
    }

    // Scale rays back to the x0 = 1 slice.
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(rays.len());
    for r in &rays {
        if r[0] <= 1e-9 {
            return Err(Error::UnboundedRegion(r[1..].to_vec()));
        }
        points.push(r[1..].iter().map(|&x| x / r[0]).collect());
    }

    let cluster = |radius: f64| -> Vec<Vec<f64>> {
        let mut reps: Vec<Vec<f64>> = Vec::new();
        for p in &points {
            if !reps.iter().any(|q| {
                p.iter()
                    .zip(q.iter())
                    .map(|(&a, &b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    <= radius
            }) {
                reps.push(p.clone());
            }
        }
        reps
    };
    let fine = cluster(tol::VERTEX_DEDUP);
    let coarse = cluster(tol::VERTEX_DEDUP_COARSE);
    if fine.len() != coarse.len() {
        return Err(Error::NumericalDegeneracy {
            fine: fine.len(),
            coarse: coarse.len(),
        });
    }
    Ok(PolytopeV { vertices: fine })
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub edges: usize,
    pub pairs: Vec<(usize, usize)>,
    /// Pairwise inner products of the vertex set.
    pub gram: Vec<Vec<f64>>,
}

/// Two vertices are adjacent when their shared active faces span a subspace
/// of dimension >= N-1 and the midpoint still touches the boundary.
pub fn edge_adjacency(v: &PolytopeV, h: &PolytopeH) -> EdgeReport {
    let nv = v.vertices.len();
    let active: Vec<Vec<usize>> = v
        .vertices
        .iter()
        .map(|x| {
            h.normals
                .iter()
                .enumerate()
                .filter(|(_, w)| (1.0 + dot(w, x)).abs() <= tol::FACE_ACTIVE)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..nv {
        for j in i + 1..nv {
            let aj = &active[j];
            let shared: Vec<&[f64]> = active[i]
                .iter()
                .filter(|f| aj.binary_search(f).is_ok())
                .map(|&f| h.normals[f].as_slice())
                .collect();
            if shared.len() < h.dim - 1 {
                continue;
            }
            let (rank, _) = rank_with_complement(&shared, h.dim);
            if rank < h.dim - 1 {
                continue;
            }
            let mid: Vec<f64> = v.vertices[i]
                .iter()
                .zip(&v.vertices[j])
                .map(|(&a, &b)| 0.5 * (a + b))
                .collect();
            let margin = membership(&BlochVector { theta: mid }, h);
            if margin >= -tol::MEMBERSHIP && margin <= tol::FACE_ACTIVE {
                pairs.push((i, j));
            }
        }
    }
    let gram = v
        .vertices
        .iter()
        .map(|a| v.vertices.iter().map(|b| dot(a, b)).collect())
        .collect();
    EdgeReport {
        edges: pairs.len(),
        pairs,
        gram,
    }
}

/// LP certificate that vertex `index` is not a convex combination of the
/// remaining vertices.
pub fn vertex_irredundant(v: &PolytopeV, index: usize) -> Result<bool> {
    let dim = v.vertices[index].len();
    let others: Vec<&Vec<f64>> = v
        .vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, x)| x)
        .collect();
    let mut a: Vec<Vec<f64>> = (0..dim)
        .map(|k| others.iter().map(|x| x[k]).collect())
        .collect();
    a.push(vec![1.0; others.len()]);
    let mut b: Vec<f64> = v.vertices[index].clone();
    b.push(1.0);
    Ok(lp::feasible_eq(&a, &b)?.is_none())
}

/// Greatest distance from a point of `a` to its nearest neighbor in `b`;
/// zero (up to dedup radius) means `a` is contained in `b` as a point set.
pub fn containment_distance(a: &PolytopeV, b: &PolytopeV) -> f64 {
    a.vertices
        .iter()
        .map(|x| {
            b.vertices
                .iter()
                .map(|y| {
                    x.iter()
                        .zip(y)
                        .map(|(&p, &q)| (p - q).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub;
    use crate::opbasis::{from_mubs, pauli_basis, qutrit_builtin, SpectraSet};
    use crate::povm::{critical_eta, joint_distribution};
    use crate::states::{density_from_bloch, random_state, StateKind};

    fn qubit_h() -> PolytopeH {
        h_polytope(&pauli_basis()).unwrap()
    }

    fn qutrit_h() -> PolytopeH {
        h_polytope(&qutrit_builtin()).unwrap()
    }

    fn n4_basis() -> OperatorBasis {
        let mubs = mub::build(4).unwrap();
        from_mubs(&mubs, &SpectraSet::default_for(4)).unwrap()
    }

    #[test]
    fn qubit_octahedron_faces() {
        let h = qubit_h();
        assert_eq!(h.faces(), 8);
        for w in &h.normals {
            assert_eq!(w.len(), 3);
            for &x in w {
                assert!((x.abs() - 1.0).abs() < 1e-12);
            }
        }
        assert!((insphere_radius(&h) - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qubit_vertices_and_edges() {
        let h = qubit_h();
        let mub_v = mub_vertices(&pauli_basis());
        assert_eq!(mub_v.vertices.len(), 6);
        let enumerated = enumerate_vertices(&h).unwrap();
        assert_eq!(enumerated.vertices.len(), 6);
        assert!(containment_distance(&enumerated, &mub_v) < 1e-7);
        assert!(containment_distance(&mub_v, &enumerated) < 1e-7);
        // +-e_i exactly
        for v in &mub_v.vertices {
            let nonzero: Vec<f64> = v.iter().copied().filter(|x| x.abs() > 1e-12).collect();
            assert_eq!(nonzero.len(), 1);
            assert!((nonzero[0].abs() - 1.0).abs() < 1e-12);
        }
        let edges = edge_adjacency(&mub_v, &h);
        assert_eq!(edges.edges, 12);
    }

    #[test]
    fn qubit_faces_are_equilateral_with_side_sqrt2() {
        let h = qubit_h();
        let v = mub_vertices(&pauli_basis());
        for w in &h.normals {
            let incident: Vec<&Vec<f64>> = v
                .vertices
                .iter()
                .filter(|x| (1.0 + dot(w, x)).abs() <= tol::FACE_ACTIVE)
                .collect();
            assert_eq!(incident.len(), 3);
            for i in 0..3 {
                for j in i + 1..3 {
                    let d: f64 = incident[i]
                        .iter()
                        .zip(incident[j].iter())
                        .map(|(&a, &b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    assert!((d - 2.0f64.sqrt()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn qubit_centroids_touch_insphere() {
        let h = qubit_h();
        let v = mub_vertices(&pauli_basis());
        let rep = centroid_tangency(&h, &v);
        assert_eq!(rep.faces_without_vertices, 0);
        assert!(rep.max_norm_dev < 1e-9);
        assert!(rep.max_plane_dev < 1e-9);
        assert!(rep.max_tangency_dev < 1e-9);
        assert!((rep.insphere_radius - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qubit_membership_examples() {
        let h = qubit_h();
        let margin = membership(&BlochVector { theta: vec![1.0, 0.0, 0.0] }, &h);
        assert!(margin.abs() < 1e-12);
        let outside = membership(&BlochVector { theta: vec![0.6, 0.6, 0.6] }, &h);
        assert!((outside + 0.8).abs() < 1e-12);
        let origin = membership(&BlochVector { theta: vec![0.0; 3] }, &h);
        assert!((origin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qutrit_faces_and_insphere() {
        let h = qutrit_h();
        assert_eq!(h.faces(), 81);
        for w in &h.normals {
            assert!((dot(w, w) - 8.0).abs() < 1e-12);
        }
        assert!((insphere_radius(&h) - 1.0 / 8.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qutrit_vertices_pure_and_on_boundary() {
        let b = qutrit_builtin();
        let h = qutrit_h();
        let v = mub_vertices(&b);
        assert_eq!(v.vertices.len(), 12);
        // First listed vertex: (sqrt3, 1, 0^6)/sqrt2.
        let first = &v.vertices[0];
        assert!((first[0] - 1.5f64.sqrt()).abs() < 1e-12);
        assert!((first[1] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(first[2..].iter().all(|&x| x.abs() < 1e-12));
        for x in &v.vertices {
            assert!((dot(x, x) - 2.0).abs() < 1e-12);
            let margin = membership(&BlochVector { theta: x.clone() }, &h);
            assert!(margin.abs() < 1e-9, "margin {margin}");
            let state = density_from_bloch(&BlochVector { theta: x.clone() }, &b).unwrap();
            let rho = &state.rho;
            assert!((&(rho * rho) - rho).frob_norm() < 1e-9);
            assert!(state.physical);
        }
    }

    #[test]
    fn qutrit_enumeration_matches_mub_vertices() {
        let h = qutrit_h();
        let v = mub_vertices(&qutrit_builtin());
        let enumerated = enumerate_vertices(&h).unwrap();
        assert_eq!(enumerated.vertices.len(), 12);
        assert!(containment_distance(&enumerated, &v) < 1e-7);
        assert!(containment_distance(&v, &enumerated) < 1e-7);
        for i in 0..v.vertices.len() {
            assert!(vertex_irredundant(&v, i).unwrap());
        }
    }

    #[test]
    fn qutrit_gram_structure_and_edges() {
        let h = qutrit_h();
        let v = mub_vertices(&qutrit_builtin());
        let edges = edge_adjacency(&v, &h);
        // Rank-based adjacency connects every pair.
        assert_eq!(edges.edges, 66);
        for i in 0..12 {
            let mut minus_one = 0;
            let mut zero = 0;
            for j in 0..12 {
                if i == j {
                    continue;
                }
                let g = edges.gram[i][j];
                if (g + 1.0).abs() < 1e-9 {
                    minus_one += 1;
                } else if g.abs() < 1e-9 {
                    zero += 1;
                }
            }
            assert_eq!((minus_one, zero), (2, 9));
        }
    }

    #[test]
    fn qutrit_centroids_touch_insphere() {
        let h = qutrit_h();
        let v = mub_vertices(&qutrit_builtin());
        let rep = centroid_tangency(&h, &v);
        assert_eq!(rep.faces_without_vertices, 0);
        assert_eq!((rep.min_incident_vertices, rep.max_incident_vertices), (8, 8));
        assert!(rep.max_norm_dev < 1e-9);
        assert!(rep.max_plane_dev < 1e-9);
        assert!(rep.max_tangency_dev < 1e-9);
        assert!((rep.insphere_radius - 1.0 / 8.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn membership_matches_distribution_positivity() {
        let b = qutrit_builtin();
        let h = qutrit_h();
        let mut rng = crate::rng::seeded(61);
        for _ in 0..200 {
            use rand::Rng;
            let theta = BlochVector {
                theta: (0..8).map(|_| rng.random_range(-0.8..0.8)).collect(),
            };
            let p = joint_distribution(&theta, &b, 1.0).unwrap();
            let margin = membership(&theta, &h);
            assert!((margin - 81.0 * p.min).abs() < 1e-12);
            assert_eq!(margin >= -tol::MEMBERSHIP, p.min >= -1e-12 / 81.0);
        }
    }

    #[test]
    fn random_states_stay_near_the_polytope() {
        // Physical states need not be classical, but scaled deep enough
        // inside they are.
        let b = qutrit_builtin();
        let h = qutrit_h();
        for seed in 0..20 {
            let rho = random_state(3, StateKind::Mixed, 400 + seed);
            let theta = crate::states::bloch_from_density(&rho, &b).unwrap();
            let shrunk = BlochVector {
                theta: theta.theta.iter().map(|&x| 0.25 * x).collect(),
            };
            assert!(membership(&shrunk, &h) >= -tol::MEMBERSHIP);
        }
    }

    #[test]
    fn insphere_vs_critical_eta_measured() {
        // The two radii agree for qubits; for qutrits the joint-measurability
        // threshold sits strictly inside the insphere.
        let qubit = critical_eta(&pauli_basis()).unwrap();
        assert!((insphere_radius(&qubit_h()) - qubit.analytic).abs() < 1e-12);
        let qutrit = critical_eta(&qutrit_builtin()).unwrap();
        let r = insphere_radius(&qutrit_h());
        assert!((qutrit.analytic - 0.25).abs() < 1e-12);
        assert!(r - qutrit.analytic > 0.08);
    }

    #[test]
    fn n4_faces_vertices_and_edges() {
        let b = n4_basis();
        let h = h_polytope(&b).unwrap();
        assert_eq!(h.faces(), 1024);
        for w in &h.normals {
            assert!((dot(w, w) - 15.0).abs() < 1e-9);
        }
        assert!((insphere_radius(&h) - 1.0 / 15.0f64.sqrt()).abs() < 1e-9);
        let v = mub_vertices(&b);
        assert_eq!(v.vertices.len(), 20);
        for x in &v.vertices {
            assert!((dot(x, x) - 3.0).abs() < 1e-9);
            let margin = membership(&BlochVector { theta: x.clone() }, &h);
            assert!(margin.abs() < 1e-9);
        }
        let rep = centroid_tangency(&h, &v);
        assert_eq!(rep.faces_without_vertices, 0);
        assert!(rep.max_norm_dev < 1e-9);
        assert!(rep.max_tangency_dev < 1e-9);
        let edges = edge_adjacency(&v, &h);
        assert_eq!(edges.edges, 190);
    }

    #[test]
    fn cube_fixture_enumerates_eight_corners() {
        let mut normals = Vec::new();
        for k in 0..3 {
            for sign in [1.0, -1.0] {
                let mut w = vec![0.0; 3];
                w[k] = sign;
                normals.push(w);
            }
        }
        let h = PolytopeH::new(normals).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 8);
        for x in &v.vertices {
            assert!(x.iter().all(|&c| (c.abs() - 1.0).abs() < 1e-9));
        }
        let edges = edge_adjacency(&v, &h);
        assert_eq!(edges.edges, 12);
    }

    #[test]
    fn unbounded_fixture_is_rejected() {
        // Half-space pair {1 + x >= 0, 1 + y >= 0} in R^2: rank 2 but
        // recession cone nontrivial; the LP probe must catch it.
        let h = PolytopeH::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        match enumerate_vertices(&h) {
            Err(Error::UnboundedRegion(_)) => {}
            other => panic!("expected UnboundedRegion, got {other:?}"),
        }
    }
}
