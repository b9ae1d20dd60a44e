//! Seeded random scalars, vectors and matrices.
//!
//! Every generator in the crate draws from an [`RngStream`]: a ChaCha8 stream
//! keyed by a 64-bit seed and a 32-bit stream id. Output is a pure function of
//! `(seed, stream_id)` and the call sequence, independent of platform.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg::{numerical_rank, symmetrize};

/// Regenerations attempted before falling back to a diagonal perturbation.
const REGENERATIONS: usize = 5;
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u32,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(stream_id));
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u32 {
        self.stream_id
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn next_uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return arg(format!("uniform range requires lo < hi, got [{lo}, {hi})"));
        }
        Ok(self.uniform(lo, hi))
    }

    pub(crate) fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u: f64 = self.rng.random();
        let v = lo + (hi - lo) * u;
        // lo + (hi-lo)*u can round up to hi
        if v >= hi {
            hi.next_down()
        } else {
            v
        }
    }

    pub(crate) fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Default scalar distribution, uniform on [−1, 1].
    pub(crate) fn signed(&mut self) -> f64 {
        self.uniform(-1.0, 1.0)
    }

    /// Strictly positive draw, uniform on [0.1, 1.1].
    pub(crate) fn positive(&mut self) -> f64 {
        self.uniform(0.1, 1.1)
    }

    pub(crate) fn sign(&mut self) -> f64 {
        if self.rng.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    pub(crate) fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub(crate) fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    pub(crate) fn signed_vec(&mut self, n: usize) -> DVector<f64> {
        DVector::from_fn(n, |_, _| self.signed())
    }

    pub(crate) fn positive_vec(&mut self, n: usize) -> DVector<f64> {
        DVector::from_fn(n, |_, _| self.positive())
    }

    pub(crate) fn uniform_vec(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    /// Nonzero scalar with magnitude in [0.5, 1.5] and random sign.
    pub(crate) fn nonzero_pivot(&mut self) -> f64 {
        self.sign() * self.uniform(0.5, 1.5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    Dense,
    Sparse,
    Psd,
    Pd,
    Orthonormal,
    LowerTriangular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecipe {
    pub rows: usize,
    pub cols: usize,
    pub kind: MatrixKind,
    /// Fraction of nonzero entries, in (0, 1].
    pub density: f64,
    pub cond_target: Option<f64>,
    pub fro_norm_target: Option<f64>,
    pub eigen_floor: f64,
}

impl MatrixRecipe {
    pub fn new(rows: usize, cols: usize, kind: MatrixKind) -> Self {
        Self {
            rows,
            cols,
            kind,
            density: 1.0,
            cond_target: None,
            fro_norm_target: None,
            eigen_floor: 0.0,
        }
    }

    pub fn dense(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, MatrixKind::Dense)
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        if density < 1.0 && self.kind == MatrixKind::Dense {
            self.kind = MatrixKind::Sparse;
        }
        self
    }

    pub fn with_cond(mut self, cond: Option<f64>) -> Self {
        self.cond_target = cond;
        self
    }

    pub fn with_fro_norm(mut self, norm: Option<f64>) -> Self {
        self.fro_norm_target = norm;
        self
    }

    pub fn with_eigen_floor(mut self, floor: f64) -> Self {
        self.eigen_floor = floor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return arg("matrix dimensions must be positive");
        }
        let square = matches!(
            self.kind,
            MatrixKind::Psd | MatrixKind::Pd | MatrixKind::Orthonormal | MatrixKind::LowerTriangular
        );
        if square && self.rows != self.cols {
            return arg(format!("{:?} matrices must be square", self.kind));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return arg(format!("density must lie in (0, 1], got {}", self.density));
        }
        if let Some(c) = self.cond_target {
            if !(c >= 1.0) || !c.is_finite() {
                return arg(format!("condition target must be >= 1, got {c}"));
            }
        }
        if let Some(t) = self.fro_norm_target {
            if !(t > 0.0) || !t.is_finite() {
                return arg(format!("Frobenius norm target must be > 0, got {t}"));
            }
            if self.kind == MatrixKind::Orthonormal {
                return arg("a norm target would destroy orthonormality");
            }
        }
        if !(self.eigen_floor >= 0.0) {
            return arg("eigen floor must be >= 0");
        }
        if self.density < 1.0 && self.cond_target.is_some() {
            return arg("density and condition target cannot be combined");
        }
        Ok(())
    }
}

/// Build a random matrix following `recipe`.
///
/// Dense and sparse recipes with `rows <= cols` are returned with full row rank:
/// up to five fresh draws, then a perturbation of size `1e-6·‖A‖_F` on a
/// transversal of the sparsity pattern.
pub fn gen_matrix(recipe: &MatrixRecipe, stream: &mut RngStream) -> Result<DMatrix<f64>> {
    recipe.validate()?;
    let (rows, cols) = (recipe.rows, recipe.cols);
    let mut m = match recipe.kind {
        MatrixKind::Dense | MatrixKind::Sparse => match recipe.cond_target {
            Some(cond) if rows <= cols => gen_conditioned(rows, cols, cond, stream)?,
            Some(cond) => gen_conditioned(cols, rows, cond, stream)?.transpose(),
            None => gen_full_rank(rows, cols, recipe.density, stream)?,
        },
        MatrixKind::Psd => match recipe.cond_target {
            Some(_) => gen_psd(rows, PsdMethod::Spectral, Some(&pd_spectrum(recipe, stream)), stream)?,
            None => gen_psd(rows, PsdMethod::Gram, None, stream)?,
        },
        MatrixKind::Pd => gen_psd(rows, PsdMethod::Spectral, Some(&pd_spectrum(recipe, stream)), stream)?,
        MatrixKind::Orthonormal => gen_orthonormal(rows, stream)?,
        MatrixKind::LowerTriangular => random_lower_triangular(rows, stream),
    };
    if let Some(target) = recipe.fro_norm_target {
        let norm = m.norm();
        if norm == 0.0 {
            return Err(Error::Generation("cannot rescale a zero matrix to a norm target".into()));
        }
        m *= target / norm;
    }
    Ok(m)
}

fn pd_spectrum(recipe: &MatrixRecipe, stream: &mut RngStream) -> Vec<f64> {
    let n = recipe.rows;
    match recipe.cond_target {
        Some(cond) => {
            let floor = if recipe.eigen_floor > 0.0 { recipe.eigen_floor } else { 0.1 };
            geometric_profile(n, cond).into_iter().map(|s| s * cond * floor).collect()
        }
        None => (0..n).map(|_| recipe.eigen_floor + stream.positive()).collect(),
    }
}

/// `k` values from 1 down to `1/cond`, geometrically spaced.
pub fn geometric_profile(k: usize, cond: f64) -> Vec<f64> {
    if k == 1 {
        return vec![1.0];
    }
    (0..k)
        .map(|i| cond.powf(-(i as f64) / ((k - 1) as f64)))
        .collect()
}

fn gen_full_rank(rows: usize, cols: usize, density: f64, stream: &mut RngStream) -> Result<DMatrix<f64>> {
    let need_rank = rows <= cols;
    let total = rows * cols;
    // nearest achievable count; only the one-per-row floor may push it past the band
    let rounded = ((density * total as f64).round() as usize).min(total);
    let count = rounded.max(rows);
    if count > rounded && (count as f64 / total as f64) > density + 0.1 {
        return Err(Error::Generation(format!(
            "density {density} too low for full row rank: a {rows}x{cols} matrix needs at least {rows} nonzeros"
        )));
    }
    let mut last = None;
    for _ in 0..=REGENERATIONS {
        let (m, transversal) = draw_masked(rows, cols, count, stream);
        if !need_rank || numerical_rank(&m, RANK_TOL) == rows {
            return Ok(m);
        }
        last = Some((m, transversal));
    }
    let (mut m, transversal) = last.expect("at least one draw");
    let eps = 1e-6 * m.norm().max(f64::MIN_POSITIVE);
    for (i, j) in transversal {
        m[(i, j)] += eps;
    }
    if numerical_rank(&m, RANK_TOL) == rows {
        Ok(m)
    } else {
        Err(Error::Generation(format!(
            "full row rank not reached for a {rows}x{cols} matrix with density {density}"
        )))
    }
}

/// Random matrix with exactly `count` nonzeros, at least one per row.
/// Returns the matrix and the mandatory (row, col) positions.
fn draw_masked(
    rows: usize,
    cols: usize,
    count: usize,
    stream: &mut RngStream,
) -> (DMatrix<f64>, Vec<(usize, usize)>) {
    let mut mask = vec![false; rows * cols];
    let mut transversal = Vec::with_capacity(rows);
    let mut perm: Vec<usize> = (0..cols).collect();
    stream.shuffle(&mut perm);
    for i in 0..rows {
        let j = if rows <= cols { perm[i] } else { stream.index(cols) };
        mask[i * cols + j] = true;
        transversal.push((i, j));
    }
    let mut rest: Vec<usize> = (0..rows * cols).filter(|&k| !mask[k]).collect();
    stream.shuffle(&mut rest);
    let placed = mask.iter().filter(|&&b| b).count();
    for &k in rest.iter().take(count.saturating_sub(placed)) {
        mask[k] = true;
    }
    let m = DMatrix::from_fn(rows, cols, |i, j| {
        if mask[i * cols + j] {
            stream.signed()
        } else {
            0.0
        }
    });
    (m, transversal)
}

/// `rows × cols` matrix `U·diag(σ)·Vᵀ` whose singular values run geometrically
/// from 1 down to `1/cond`.
pub fn gen_conditioned(rows: usize, cols: usize, cond: f64, stream: &mut RngStream) -> Result<DMatrix<f64>> {
    if !(cond >= 1.0) || !cond.is_finite() {
        return arg(format!("condition number must be >= 1, got {cond}"));
    }
    if rows == 0 || rows > cols {
        return arg(format!("conditioned matrices need 0 < rows <= cols, got {rows}x{cols}"));
    }
    if rows == 1 && cond != 1.0 {
        return arg(format!("a single-row matrix has condition number 1, cannot reach {cond}"));
    }
    let u = gen_orthonormal(rows, stream)?;
    let v = gen_orthonormal(cols, stream)?;
    let sigma = geometric_profile(rows, cond);
    let mut us = u;
    for (j, s) in sigma.iter().enumerate() {
        us.column_mut(j).scale_mut(*s);
    }
    Ok(us * v.columns(0, rows).transpose())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsdMethod {
    /// `A·Aᵀ` for a random square `A`.
    Gram,
    /// `L·Lᵀ` for a random lower-triangular `L`.
    CholeskyLike,
    /// `Q·Λ·Qᵀ` for a random orthonormal `Q`.
    Spectral,
    /// `L·D·Lᵀ` with unit lower-triangular `L`.
    Ldl,
}

/// Random symmetric positive semidefinite matrix.
///
/// `spectrum` fixes the eigenvalues (`Spectral`) or the diagonal factor `D`
/// (`Ldl`); it is rejected for the other methods.
pub fn gen_psd(
    n: usize,
    method: PsdMethod,
    spectrum: Option<&[f64]>,
    stream: &mut RngStream,
) -> Result<DMatrix<f64>> {
    if n == 0 {
        return arg("PSD dimension must be positive");
    }
    if let Some(s) = spectrum {
        if s.len() != n {
            return arg(format!("spectrum has length {}, expected {n}", s.len()));
        }
        if let Some(bad) = s.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return arg(format!("spectrum entries must be finite and >= 0, got {bad}"));
        }
        if !matches!(method, PsdMethod::Spectral | PsdMethod::Ldl) {
            return arg(format!("{method:?} does not accept a prescribed spectrum"));
        }
    }
    let p = match method {
        PsdMethod::Gram => {
            let a = DMatrix::from_fn(n, n, |_, _| stream.signed());
            &a * a.transpose()
        }
        PsdMethod::CholeskyLike => {
            let l = random_lower_triangular(n, stream);
            return Ok(psd_from_lower(&l));
        }
        PsdMethod::Spectral => {
            let q = gen_orthonormal(n, stream)?;
            let d: Vec<f64> = match spectrum {
                Some(s) => s.to_vec(),
                None => stream.uniform_vec(n, 0.1, 1.1),
            };
            return Ok(crate::linalg::congruence_diag(&q, &d));
        }
        PsdMethod::Ldl => {
            let mut l = DMatrix::identity(n, n);
            for i in 0..n {
                for j in 0..i {
                    l[(i, j)] = stream.signed();
                }
            }
            let d: Vec<f64> = match spectrum {
                Some(s) => s.to_vec(),
                None => stream.uniform_vec(n, 0.1, 1.1),
            };
            let mut ld = l.clone();
            for (j, dj) in d.iter().enumerate() {
                ld.column_mut(j).scale_mut(*dj);
            }
            ld * l.transpose()
        }
    };
    Ok(symmetrize(&p))
}

/// Lower-triangular matrix with off-diagonal entries in [−1, 1] and diagonal in [0.1, 1.1].
pub fn random_lower_triangular(n: usize, stream: &mut RngStream) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = stream.signed();
        }
        l[(i, i)] = stream.positive();
    }
    l
}

/// `L·Lᵀ`; singular exactly when some diagonal entry of `L` is zero.
pub fn psd_from_lower(l: &DMatrix<f64>) -> DMatrix<f64> {
    symmetrize(&(l * l.transpose()))
}

/// Random `n × n` orthonormal matrix from a Householder QR of a Gaussian matrix,
/// signs fixed so that the triangular factor has a positive diagonal.
pub fn gen_orthonormal(n: usize, stream: &mut RngStream) -> Result<DMatrix<f64>> {
    if n == 0 {
        return arg("orthonormal dimension must be positive");
    }
    for _ in 0..=REGENERATIONS {
        let a = DMatrix::from_fn(n, n, |_, _| stream.normal());
        let (mut q, r_diag) = householder_qr(a);
        let max = r_diag.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        if r_diag.iter().any(|r| r.abs() <= 1e-8 * max) {
            continue;
        }
        for (j, r) in r_diag.iter().enumerate() {
            if *r < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        return Ok(q);
    }
    Err(Error::Generation("orthonormalization met a numerically singular draw".into()))
}

/// Householder QR of a square matrix. Returns the explicit `Q` and the diagonal of `R`.
pub fn householder_qr(mut a: DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut reflectors: Vec<Option<DVector<f64>>> = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.view((k, k), (n - k, 1)).column(0).clone_owned();
        let norm = x.norm();
        if norm == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vn = v.norm();
        if vn == 0.0 {
            reflectors.push(None);
            continue;
        }
        v /= vn;
        let mut block = a.view_mut((k, k), (n - k, n - k));
        let w = v.transpose() * &block;
        block -= (&v * w) * 2.0;
        reflectors.push(Some(v));
    }
    let r_diag = (0..n).map(|k| a[(k, k)]).collect();
    let mut q = DMatrix::identity(n, n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if let Some(v) = v {
            let mut block = q.view_mut((k, 0), (n - k, n));
            let w = v.transpose() * &block;
            block -= (v * w) * 2.0;
        }
    }
    (q, r_diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{condition_number, sym_eigenvalues};

    fn orth_defect(q: &DMatrix<f64>) -> f64 {
        let n = q.nrows();
        (q.transpose() * q - DMatrix::<f64>::identity(n, n)).norm()
    }

    #[test]
    fn uniform_range_and_determinism() {
        let mut a = RngStream::new(1, 0);
        let mut b = RngStream::new(1, 0);
        for _ in 0..100 {
            let v = a.next_uniform(0.0, 1.0).unwrap();
            assert!((0.0..1.0).contains(&v));
            assert_eq!(v, b.next_uniform(0.0, 1.0).unwrap());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = RngStream::new(1, 0);
        let mut b = RngStream::new(2, 0);
        let xs: Vec<f64> = (0..10).map(|_| a.next_uniform(0.0, 1.0).unwrap()).collect();
        let ys: Vec<f64> = (0..10).map(|_| b.next_uniform(0.0, 1.0).unwrap()).collect();
        assert!(xs.iter().zip(&ys).all(|(x, y)| x != y));
    }

    #[test]
    fn streams_are_distinct() {
        let mut a = RngStream::new(7, 0);
        let mut b = RngStream::new(7, 1);
        let xs: Vec<f64> = (0..10).map(|_| a.uniform(0.0, 1.0)).collect();
        let ys: Vec<f64> = (0..10).map(|_| b.uniform(0.0, 1.0)).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn uniform_rejects_empty_range() {
        let mut s = RngStream::new(1, 0);
        assert!(matches!(s.next_uniform(1.0, 1.0), Err(Error::Argument(_))));
        assert!(matches!(s.next_uniform(2.0, 1.0), Err(Error::Argument(_))));
    }

    #[test]
    fn scalar_norm_target() {
        let mut s = RngStream::new(3, 0);
        let m = gen_matrix(&MatrixRecipe::dense(1, 1).with_fro_norm(Some(3.0)), &mut s).unwrap();
        assert!((m[(0, 0)].abs() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dense_wide_has_full_row_rank() {
        let mut s = RngStream::new(11, 0);
        let m = gen_matrix(&MatrixRecipe::dense(2, 4), &mut s).unwrap();
        assert_eq!(numerical_rank(&m, 1e-10), 2);
    }

    #[test]
    fn fro_norm_target_is_exact() {
        let mut s = RngStream::new(5, 0);
        let m = gen_matrix(&MatrixRecipe::dense(3, 7).with_fro_norm(Some(2.5)), &mut s).unwrap();
        assert!((m.norm() - 2.5).abs() <= 1e-12 * 2.5);
    }

    #[test]
    fn sparse_density_within_band() {
        for seed in 0..50 {
            let mut s = RngStream::new(seed, 0);
            let m = gen_matrix(&MatrixRecipe::dense(4, 4).with_density(0.5), &mut s).unwrap();
            let nnz = m.iter().filter(|v| **v != 0.0).count() as f64 / 16.0;
            assert!((0.4..=0.6).contains(&nnz), "seed {seed}: {nnz}");
            assert_eq!(numerical_rank(&m, 1e-10), 4);
            for i in 0..4 {
                assert!(m.row(i).iter().any(|v| *v != 0.0));
            }
        }
    }

    #[test]
    fn density_too_low_is_reported() {
        let mut s = RngStream::new(1, 0);
        let err = gen_matrix(&MatrixRecipe::dense(4, 4).with_density(0.05), &mut s).unwrap_err();
        assert!(matches!(err, Error::Generation(ref m) if m.contains("full row rank")));
    }

    #[test]
    fn square_kinds_must_be_square() {
        let mut s = RngStream::new(1, 0);
        let r = MatrixRecipe::new(2, 3, MatrixKind::Psd);
        assert!(matches!(gen_matrix(&r, &mut s), Err(Error::Argument(_))));
    }

    #[test]
    fn conditioned_equal_spectrum() {
        let mut s = RngStream::new(2, 0);
        let m = gen_conditioned(3, 3, 1.0, &mut s).unwrap();
        assert!(condition_number(&m) <= 1.01);
    }

    #[test]
    fn conditioned_wide() {
        let mut s = RngStream::new(2, 0);
        let m = gen_conditioned(3, 5, 1e6, &mut s).unwrap();
        let k = condition_number(&m);
        assert!((1e6 / 1.01..=1.01e6).contains(&k), "{k}");
    }

    #[test]
    fn conditioned_scalar() {
        let mut s = RngStream::new(2, 0);
        let m = gen_conditioned(1, 1, 1.0, &mut s).unwrap();
        assert!(m[(0, 0)] != 0.0);
        assert!(matches!(gen_conditioned(2, 2, 0.5, &mut s), Err(Error::Argument(_))));
        assert!(matches!(gen_conditioned(3, 2, 2.0, &mut s), Err(Error::Argument(_))));
    }

    #[test]
    fn spectral_identity() {
        let mut s = RngStream::new(4, 0);
        let p = gen_psd(3, PsdMethod::Spectral, Some(&[1.0, 1.0, 1.0]), &mut s).unwrap();
        assert!((p - DMatrix::<f64>::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn zeroed_cholesky_diagonal_is_singular() {
        let mut s = RngStream::new(4, 0);
        let mut l = random_lower_triangular(2, &mut s);
        l[(1, 1)] = 0.0;
        let p = psd_from_lower(&l);
        assert!(p.determinant().abs() <= 1e-12);
        assert!(sym_eigenvalues(&p)[0] >= -1e-12);
    }

    #[test]
    fn spectral_condition() {
        let mut s = RngStream::new(4, 0);
        let p = gen_psd(4, PsdMethod::Spectral, Some(&[1e3, 1.0, 1.0, 1.0]), &mut s).unwrap();
        let ev = sym_eigenvalues(&p);
        let k = ev[3] / ev[0];
        assert!((k - 1e3).abs() <= 10.0, "{k}");
    }

    #[test]
    fn every_psd_method_is_psd() {
        for method in [PsdMethod::Gram, PsdMethod::CholeskyLike, PsdMethod::Spectral, PsdMethod::Ldl] {
            for seed in 0..20 {
                let mut s = RngStream::new(seed, 0);
                let p = gen_psd(6, method, None, &mut s).unwrap();
                let ev = sym_eigenvalues(&p);
                assert!(ev[0] >= -1e-9 * (1.0 + ev[5]), "{method:?}");
                assert_eq!(p, p.transpose());
            }
        }
    }

    #[test]
    fn psd_spectrum_errors() {
        let mut s = RngStream::new(4, 0);
        assert!(matches!(
            gen_psd(2, PsdMethod::Spectral, Some(&[1.0, -1.0]), &mut s),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            gen_psd(2, PsdMethod::Gram, Some(&[1.0, 1.0]), &mut s),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn ldl_uses_spectrum_as_pivots() {
        let mut s = RngStream::new(9, 0);
        let p = gen_psd(3, PsdMethod::Ldl, Some(&[2.0, 0.0, 1.0]), &mut s).unwrap();
        // det(L D Lᵀ) = det(D) = 0
        assert!(p.determinant().abs() < 1e-12);
    }

    #[test]
    fn orthonormal_small_cases() {
        let mut s = RngStream::new(1, 0);
        let q1 = gen_orthonormal(1, &mut s).unwrap();
        assert_eq!(q1[(0, 0)].abs(), 1.0);
        let q5 = gen_orthonormal(5, &mut s).unwrap();
        assert!(orth_defect(&q5) <= 5e-12);
        let q4 = gen_orthonormal(4, &mut s).unwrap();
        assert!((q4.determinant().abs() - 1.0).abs() <= 1e-10);
        assert!(matches!(gen_orthonormal(0, &mut s), Err(Error::Argument(_))));
    }

    #[test]
    fn householder_reproduces_input() {
        let mut s = RngStream::new(8, 0);
        let a = DMatrix::from_fn(5, 5, |_, _| s.normal());
        let (q, _) = householder_qr(a.clone());
        let r = q.transpose() * &a;
        for i in 0..5 {
            for j in 0..i {
                assert!(r[(i, j)].abs() < 1e-12);
            }
        }
        assert!((&q * r - a).norm() < 1e-12);
    }
}
