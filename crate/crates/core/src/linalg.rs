//! Small dense helpers shared by the generators and the verifier.

use nalgebra::{DMatrix, DVector};

/// Frobenius inner product `A • B = trace(AᵀB)`.
pub fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `(M + Mᵀ) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&max) if max > 0.0 => sv.iter().filter(|&&s| s > rel_tol * max).count(),
        _ => 0,
    }
}

/// Ratio of extreme singular values (∞ for rank-deficient square-or-wide input).
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = singular_values(m);
    let k = m.nrows().min(m.ncols());
    if sv.is_empty() || sv[k - 1] == 0.0 {
        return f64::INFINITY;
    }
    sv[0] / sv[k - 1]
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = symmetrize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Block-diagonal concatenation of square blocks.
pub fn block_diag(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

/// `Q · diag(d) · Qᵀ`, symmetrized.
pub fn congruence_diag(q: &DMatrix<f64>, d: &[f64]) -> DMatrix<f64> {
    let mut qd = q.clone();
    for (j, &dj) in d.iter().enumerate() {
        qd.column_mut(j).scale_mut(dj);
    }
    symmetrize(&(qd * q.transpose()))
}

/// Rows are the column-major vectorizations of the given matrices.
pub fn stack_vectorized<'a, I>(mats: I) -> DMatrix<f64>
where
    I: IntoIterator<Item = &'a DMatrix<f64>>,
{
    let mats: Vec<&DMatrix<f64>> = mats.into_iter().collect();
    let len = mats.first().map_or(0, |m| m.len());
    DMatrix::from_fn(mats.len(), len, |i, j| mats[i].as_slice()[j])
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).norm()
}

pub fn dvec(values: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(values)
}

/// Row-major construction, for literals in code and tests.
pub fn dmat(rows: usize, cols: usize, row_major: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, row_major)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frob_matches_trace() {
        let a = dmat(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = dmat(2, 2, &[5.0, 6.0, 7.0, 8.0]);
        assert_eq!(frob(&a, &b), (a.transpose() * &b).trace());
    }

    #[test]
    fn rank_of_rank_one() {
        let u = dvec(&[1.0, 2.0, 3.0]);
        let m = &u * u.transpose();
        assert_eq!(numerical_rank(&m, 1e-10), 1);
        assert_eq!(numerical_rank(&DMatrix::zeros(3, 3), 1e-10), 0);
    }

    #[test]
    fn block_diag_layout() {
        let a = dmat(1, 1, &[2.0]);
        let b = dmat(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let m = block_diag(&[&a, &b]);
        assert_eq!(m, dmat(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.5, 1.0]));
    }
}
