use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Sum of singular values of w^T applied against v: max_U tr(v^T U w) over
/// orthogonal U. Computed from the eigenvalues of the symmetric similarity
/// (v^T v)^{1/2} (w^T w) (v^T v)^{1/2}, which are real and nonnegative by
/// construction, unlike those of the raw k x k product (w^T w)(v^T v).
fn alignment_trace(v: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    let gram_v = v.transpose() * v;
    let gram_w = w.transpose() * w;
    let eig_v = SymmetricEigen::new(gram_v);
    let sqrt_vals = eig_v.eigenvalues.map(|l| l.max(0.0).sqrt());
    let root =
        &eig_v.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig_v.eigenvectors.transpose();
    let similar = &root * gram_w * &root;
    SymmetricEigen::new(similar)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum()
}

/// Minimum Frobenius distance min over U in O(d) of |v - U w|_F.
pub fn procrustes_min_distance(v: &DMatrix<f64>, w: &DMatrix<f64>) -> Result<f64> {
    if v.shape() != w.shape() {
        return Err(Error::domain(format!(
            "procrustes_min_distance: shapes differ, {:?} vs {:?}",
            v.shape(),
            w.shape()
        )));
    }
    let s = alignment_trace(v, w);
    Ok((v.norm_squared() + w.norm_squared() - 2.0 * s)
        .max(0.0)
        .sqrt())
}

/// Fisher-information bound along the aligned straight-line path
/// v_theta = (1 - theta) v + theta U* w, where U* realizes the orthogonal
/// alignment infimum:
///
///   I(theta) <= |v - U* w|_F^2 * 2 |v_theta|_F^2 / (2 |v_theta|_F^2 + m - 3),
///
/// with m = floor(d/k). The squared path norm expands to
/// (1-theta)^2 |v|^2 + theta^2 |w|^2 + 2 theta (1-theta) tr(v^T U* w), so the
/// aligning matrix never has to be formed. |v_theta| is convex in theta,
/// hence the supremum of the bound over [0, 1] is attained at an endpoint.
pub fn wishart_path_fisher_bound(v: &DMatrix<f64>, w: &DMatrix<f64>, theta: f64) -> Result<f64> {
    if v.shape() != w.shape() {
        return Err(Error::domain(format!(
            "wishart_path_fisher_bound: shapes differ, {:?} vs {:?}",
            v.shape(),
            w.shape()
        )));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::domain(format!(
            "wishart_path_fisher_bound: theta = {theta} must lie in [0, 1]"
        )));
    }
    let (d, k) = v.shape();
    let m = d / k;
    if m < 3 {
        return Err(Error::domain(format!(
            "wishart_path_fisher_bound: floor(d/k) = {m} must be >= 3 (d = {d}, k = {k})"
        )));
    }
    let s = alignment_trace(v, w);
    let dist_sq = (v.norm_squared() + w.norm_squared() - 2.0 * s).max(0.0);
    let path_norm_sq = ((1.0 - theta) * (1.0 - theta) * v.norm_squared()
        + theta * theta * w.norm_squared()
        + 2.0 * theta * (1.0 - theta) * s)
        .max(0.0);
    Ok(dist_sq * 2.0 * path_norm_sq / (2.0 * path_norm_sq + m as f64 - 3.0))
}
