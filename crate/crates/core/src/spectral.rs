//! Spectral idempotents, the bounding matrix and mutual eigenvalue supports.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_ENTRY_TOL: f64 = 1e-9;

/// Default eigenvalue clustering tolerance for a matrix of spectral radius `rho`.
pub fn default_cluster_tol(rho: f64) -> f64 {
    1e-8 * (1.0 + rho)
}

/// `M = sum_r theta_r E_r` over the distinct eigenvalues of a real symmetric
/// matrix, sorted so that `thetas[0]` is the largest.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    thetas: Vec<f64>,
    multiplicities: Vec<usize>,
    idempotents: Vec<DMatrix<f64>>,
    cluster_tol: f64,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.idempotents.first().map_or(0, |e| e.nrows())
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn idempotents(&self) -> &[DMatrix<f64>] {
        &self.idempotents
    }

    pub fn idempotent(&self, r: usize) -> &DMatrix<f64> {
        &self.idempotents[r]
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Largest eigenvalue in absolute value.
    pub fn spectral_radius(&self) -> f64 {
        self.thetas.iter().fold(0.0, |acc: f64, t| acc.max(t.abs()))
    }

    /// Every eigenvalue repeated by multiplicity, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.thetas
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&t, &m)| std::iter::repeat_n(t, m))
            .collect()
    }

    /// Index of the distinct eigenvalue within `tol` of `theta`, if any.
    pub fn index_of(&self, theta: f64, tol: f64) -> Option<usize> {
        self.thetas.iter().position(|&t| (t - theta).abs() <= tol)
    }

    /// `f(M) = sum_r f(theta_r) E_r`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let n = self.order();
        let mut out = DMatrix::zeros(n, n);
        for (t, e) in self.thetas.iter().zip(&self.idempotents) {
            out += e * f(*t);
        }
        out
    }
}

pub fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Orders up to this use cyclic Jacobi; larger matrices use nalgebra's
/// QR iteration with a residual check.
pub const JACOBI_MAX_ORDER: usize = 128;

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
/// Returns the eigenvalues and the matrix of eigenvector columns.
fn jacobi(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let fro = m.norm();
    for sweep in 0..100 {
        let mut off = 0.0;
        for q in 1..n {
            for p in 0..q {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-20 * fro || off == 0.0 {
            return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::EigensolverFailure(
        "Jacobi sweeps did not converge".into(),
    ))
}

fn eigen(m: &DMatrix<f64>, scale: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n <= JACOBI_MAX_ORDER {
        return jacobi(m);
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::EigensolverFailure("symmetric QR did not converge".into()))?;
    // eigenvalues can come back permuted relative to the vector columns;
    // recompute each one as a Rayleigh quotient and check the residual
    let mut lambdas = Vec::with_capacity(n);
    for k in 0..n {
        let x = eig.eigenvectors.column(k);
        let mx = m * x;
        let lambda = x.dot(&mx);
        let residual = (mx - x * lambda).amax();
        if residual > 1e-8 * scale {
            return Err(Error::EigensolverFailure(format!(
                "eigenvector residual {residual:e} exceeds tolerance"
            )));
        }
        lambdas.push(lambda);
    }
    Ok((lambdas, eig.eigenvectors))
}

/// Eigendecomposition of `m` with eigenvalues closer than `cluster_tol`
/// merged. `None` uses [`default_cluster_tol`].
///
/// Each `E_r` is the sum of `x x^T` over the orthonormal eigenvectors `x`
/// in its cluster.
pub fn decompose(m: &DMatrix<f64>, cluster_tol: Option<f64>) -> Result<SpectralDecomposition> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::BadParam(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = symmetry_defect(m);
    let scale = 1.0 + m.amax();
    if defect > 1e-12 * scale {
        return Err(Error::NotSymmetric(defect));
    }
    if let Some(tol) = cluster_tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::BadParam(format!(
                "cluster_tol must be positive, got {tol}"
            )));
        }
    }

    let (lambdas, vectors) = eigen(m, scale)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lambdas[b].total_cmp(&lambdas[a]));
    let rho = lambdas.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(rho));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NAN;
    for &k in &order {
        let lambda = lambdas[k];
        match clusters.last_mut() {
            Some(c) if last - lambda <= tol => c.push(k),
            _ => clusters.push(vec![k]),
        }
        last = lambda;
    }

    let mut thetas = Vec::with_capacity(clusters.len());
    let mut multiplicities = Vec::with_capacity(clusters.len());
    let mut idempotents = Vec::with_capacity(clusters.len());
    for c in clusters {
        let mean = c.iter().map(|&k| lambdas[k]).sum::<f64>() / c.len() as f64;
        let mut e = DMatrix::zeros(n, n);
        for &k in &c {
            let x = vectors.column(k);
            e.ger(1.0, &x, &x, 1.0);
        }
        thetas.push(mean);
        multiplicities.push(c.len());
        idempotents.push(e);
    }

    Ok(SpectralDecomposition {
        thetas,
        multiplicities,
        idempotents,
        cluster_tol: tol,
    })
}

/// `B(M) = sum_r |E_r|` entrywise.
pub fn bounding_matrix(dec: &SpectralDecomposition) -> DMatrix<f64> {
    let n = dec.order();
    let mut b = DMatrix::zeros(n, n);
    for e in dec.idempotents() {
        b += e.abs();
    }
    b
}

/// Eigenvalue indices split by the sign of `(E_r)_{v,u}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportClassification {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    /// `B(M)_{v,u}` summed over the kept entries.
    pub bound: f64,
    /// Some entry lies within a decade of `entry_tol`, so the sign split
    /// may depend on the tolerance.
    pub borderline: bool,
}

impl SupportClassification {
    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    /// All support indices, ascending (so eigenvalues descending).
    pub fn support(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.pos.iter().chain(&self.neg).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn is_positive(&self, r: usize) -> bool {
        self.pos.contains(&r)
    }
}

pub fn classify_support(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    entry_tol: f64,
) -> SupportClassification {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut bound = 0.0;
    let mut borderline = false;
    for (r, e) in dec.idempotents().iter().enumerate() {
        // average the two triangles so (u,v) and (v,u) classify identically
        let x = 0.5 * (e[(v, u)] + e[(u, v)]);
        let a = x.abs();
        if a >= entry_tol / 10.0 && a <= entry_tol * 10.0 {
            borderline = true;
        }
        if a <= entry_tol {
            continue;
        }
        bound += a;
        if x > 0.0 {
            pos.push(r);
        } else {
            neg.push(r);
        }
    }
    SupportClassification {
        pos,
        neg,
        bound,
        borderline,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn k2_idempotents() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let dec = decompose(&m, None).unwrap();
        assert_eq!(dec.len(), 2);
        assert!((dec.thetas()[0] - 1.0).abs() < 1e-14);
        assert!((dec.thetas()[1] + 1.0).abs() < 1e-14);
        let plus = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let minus = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert!(close(dec.idempotent(0), &plus, 1e-14));
        assert!(close(dec.idempotent(1), &minus, 1e-14));

        let s = classify_support(&dec, 0, 1, DEFAULT_ENTRY_TOL);
        assert_eq!(s.pos, vec![0]);
        assert_eq!(s.neg, vec![1]);
        assert!((s.bound - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_has_one_idempotent() {
        let m = DMatrix::<f64>::identity(4, 4);
        let dec = decompose(&m, None).unwrap();
        assert_eq!(dec.thetas().len(), 1);
        assert_eq!(dec.multiplicities(), &[4]);
        assert!(close(&bounding_matrix(&dec), &m, 1e-14));
    }

    #[test]
    fn p3_ends_support() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let dec = decompose(&m, None).unwrap();
        let s = classify_support(&dec, 0, 2, DEFAULT_ENTRY_TOL);
        // thetas = sqrt2, 0, -sqrt2 with entries 1/4, -1/2, 1/4
        assert_eq!(s.pos, vec![0, 2]);
        assert_eq!(s.neg, vec![1]);
        assert!((s.bound - 1.0).abs() < 1e-14);
        assert!((dec.idempotent(1)[(0, 2)] + 0.5).abs() < 1e-14);
        assert!((dec.idempotent(0)[(0, 2)] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(matches!(decompose(&m, None), Err(Error::NotSymmetric(_))));
        assert!(decompose(&DMatrix::zeros(2, 3), None).is_err());
        assert!(decompose(&DMatrix::identity(2, 2), Some(0.0)).is_err());
    }

    #[test]
    fn clusters_near_degenerate_eigenvalues() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0 + 1e-12, -2.0]));
        let dec = decompose(&m, None).unwrap();
        assert_eq!(dec.multiplicities(), &[2, 1]);
        let split = decompose(&m, Some(1e-14)).unwrap();
        assert_eq!(split.multiplicities(), &[1, 1, 1]);
    }

    #[test]
    fn eigenvalues_pair_with_their_vectors() {
        // Laplacian of K4 joined completely to K3-complement: spectrum 7^3 3^3 0
        let mut m = DMatrix::from_element(7, 7, -1.0);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = if i == j { 3.0 } else { 0.0 };
            }
        }
        for i in 4..7 {
            m[(i, i)] = 6.0;
        }
        let dec = decompose(&m, None).unwrap();
        assert_eq!(dec.multiplicities(), &[3, 3, 1]);
        let recon = dec.apply(|t| t);
        assert!(close(&recon, &m, 1e-12));
        assert!(close(
            dec.idempotent(2),
            &DMatrix::from_element(7, 7, 1.0 / 7.0),
            1e-12
        ));
    }

    #[test]
    fn large_orders_use_qr() {
        let n = JACOBI_MAX_ORDER + 2;
        let m = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let dec = decompose(&m, None).unwrap();
        assert_eq!(dec.len(), n);
        assert!(close(&dec.apply(|t| t), &m, 1e-10));
        let top = 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((dec.thetas()[0] - top).abs() < 1e-10);
    }

    #[test]
    fn borderline_flag() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let dec = decompose(&m, None).unwrap();
        assert!(!classify_support(&dec, 0, 1, 1e-9).borderline);
        assert!(classify_support(&dec, 0, 1, 0.2).borderline);
    }
}
