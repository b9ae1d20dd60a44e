//! Semidefinite optimization: `min C•X  s.t. Aᵢ•X = bᵢ, X ⪰ 0`.
//!
//! Dual: `max bᵀy  s.t. Σ yᵢAᵢ + S = C, S ⪰ 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::controls::{GenControls, Scaling};
use crate::error::{arg, Error, Result};
use crate::io::hexfloat;
use crate::linalg::{
    asymmetry, block_diag, congruence_diag, frob, numerical_rank, stack_vectorized, sym_eigenvalues, symmetrize,
};
use crate::randkit::{gen_orthonormal, gen_psd, geometric_profile, PsdMethod, RngStream};

const ATTEMPTS: usize = 6;
const INDEPENDENCE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdoInstance {
    #[serde(with = "hexfloat::matrices")]
    pub a: Vec<DMatrix<f64>>,
    #[serde(with = "hexfloat::vector")]
    pub b: DVector<f64>,
    #[serde(with = "hexfloat::matrix")]
    pub c: DMatrix<f64>,
}

impl SdoInstance {
    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.c.nrows()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdoSolution {
    #[serde(with = "hexfloat::matrix")]
    pub x: DMatrix<f64>,
    #[serde(with = "hexfloat::vector")]
    pub y: DVector<f64>,
    #[serde(with = "hexfloat::matrix")]
    pub s: DMatrix<f64>,
}

impl SdoSolution {
    fn scaled(&self, f: Scaling) -> Self {
        Self {
            x: &self.x * f.primal,
            y: &self.y * f.dual,
            s: &self.s * f.dual,
        }
    }
}

/// Sizes of the `B`, `T` and `N` eigenspace blocks, in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDims {
    pub n_b: usize,
    pub n_t: usize,
    pub n_n: usize,
}

impl PartitionDims {
    pub fn new(n: usize, n_b: usize, n_n: usize) -> Result<Self> {
        if n_b + n_n > n {
            return arg(format!("n_B + n_N = {} exceeds n = {n}", n_b + n_n));
        }
        Ok(Self {
            n_b,
            n_t: n - n_b - n_n,
            n_n,
        })
    }

    pub fn n(&self) -> usize {
        self.n_b + self.n_t + self.n_n
    }

    pub fn t_start(&self) -> usize {
        self.n_b
    }

    pub fn n_start(&self) -> usize {
        self.n_b + self.n_t
    }
}

/// Extra structure a generator imposed on the constraint matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SdoStructure {
    General,
    /// `A₁ = Q·diag(γ)·Qᵀ` with `γ_B = 0` and `γ_T > 0`.
    MaxComp {
        #[serde(with = "hexfloat::scalars")]
        gamma: Vec<f64>,
    },
    /// Every `Aᵢ = Q·diag(γᵢ)·Qᵀ` with `γᵢ` vanishing on `T`, and `b = 0`.
    EmptyB,
}

/// Whether the declared dims are the instance's optimal partition or only a
/// containment that was not verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionStatus {
    Exact,
    Declared,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdoFlags {
    pub maximally_complementary: bool,
    pub strictly_complementary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdoCertificate {
    pub interior: Option<SdoSolution>,
    pub optimal: Option<SdoSolution>,
    pub dims: Option<PartitionDims>,
    /// Orthonormal basis whose column blocks span the `B`, `T`, `N` subspaces.
    #[serde(with = "hexfloat::opt_matrix")]
    pub basis: Option<DMatrix<f64>>,
    pub structure: SdoStructure,
    pub status: PartitionStatus,
    pub flags: SdoFlags,
    #[serde(with = "hexfloat::opt_scalar")]
    pub mu: Option<f64>,
    pub scaling: Scaling,
}

impl SdoCertificate {
    fn interior_only(sol: SdoSolution, mu: Option<f64>) -> Self {
        Self {
            interior: Some(sol),
            optimal: None,
            dims: None,
            basis: None,
            structure: SdoStructure::General,
            status: PartitionStatus::Declared,
            flags: SdoFlags::default(),
            mu,
            scaling: Scaling::default(),
        }
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if n == 0 || m == 0 || m >= n * (n + 1) / 2 {
        return arg(format!("SDO dimensions need 1 <= m < n(n+1)/2, got m = {m}, n = {n}"));
    }
    Ok(())
}

fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return arg(format!("{what} must be square"));
    }
    if asymmetry(m) > 1e-12 * m.norm().max(1.0) {
        return arg(format!("{what} must be symmetric"));
    }
    Ok(())
}

fn check_pd(m: &DMatrix<f64>, what: &str) -> Result<()> {
    check_symmetric(m, what)?;
    match sym_eigenvalues(m).first() {
        Some(&l) if l > 0.0 => Ok(()),
        _ => arg(format!("{what} must be positive definite")),
    }
}

fn rhs(a: &[DMatrix<f64>], x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(a.len(), a.iter().map(|ai| frob(ai, x)))
}

fn dual_combination(a: &[DMatrix<f64>], y: &DVector<f64>, s: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = s.clone();
    for (ai, yi) in a.iter().zip(y.iter()) {
        c += ai * *yi;
    }
    symmetrize(&c)
}

/// `S = μ·X⁻¹`, entrywise when `X` is diagonal.
pub fn central_partner(x: &DMatrix<f64>, mu: f64) -> Result<DMatrix<f64>> {
    check_pd(x, "X0")?;
    if !(mu > 0.0) {
        return arg(format!("mu must be > 0, got {mu}"));
    }
    let n = x.nrows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || x[(i, j)] == 0.0));
    if diagonal {
        return Ok(DMatrix::from_diagonal(&x.diagonal().map(|v| mu / v)));
    }
    let eig = symmetrize(x).symmetric_eigen();
    let inv: Vec<f64> = eig.eigenvalues.iter().map(|l| mu / l).collect();
    Ok(congruence_diag(&eig.eigenvectors, &inv))
}

/// `bᵢ = Aᵢ•X⁰`, `C = Σ y⁰ᵢAᵢ + S⁰`.
pub fn assemble_interior(
    a: Vec<DMatrix<f64>>,
    x0: DMatrix<f64>,
    y0: DVector<f64>,
    s0: DMatrix<f64>,
) -> Result<(SdoInstance, SdoCertificate)> {
    let n = x0.nrows();
    for (i, ai) in a.iter().enumerate() {
        check_symmetric(ai, &format!("A{}", i + 1))?;
        if ai.nrows() != n {
            return arg(format!("A{} has size {}, expected {n}", i + 1, ai.nrows()));
        }
    }
    if y0.len() != a.len() {
        return arg("y0 length must equal the number of constraints");
    }
    check_pd(&x0, "X0")?;
    check_pd(&s0, "S0")?;
    let b = rhs(&a, &x0);
    let c = dual_combination(&a, &y0, &s0);
    let sol = SdoSolution { x: x0, y: y0, s: s0 };
    Ok((SdoInstance { a, b, c }, SdoCertificate::interior_only(sol, None)))
}

/// `bᵢ = Aᵢ•X*`, `C = Σ y*ᵢAᵢ + S*`.
pub fn assemble_optimal(a: Vec<DMatrix<f64>>, opt: &SdoSolution) -> Result<SdoInstance> {
    for (i, ai) in a.iter().enumerate() {
        check_symmetric(ai, &format!("A{}", i + 1))?;
    }
    check_symmetric(&opt.x, "X*")?;
    check_symmetric(&opt.s, "S*")?;
    if opt.y.len() != a.len() {
        return arg("y* length must equal the number of constraints");
    }
    let b = rhs(&a, &opt.x);
    let c = dual_combination(&a, &opt.y, &opt.s);
    Ok(SdoInstance { a, b, c })
}

/// Output of [`assemble_both`]: the extended instance and both solutions.
#[derive(Clone, Debug)]
pub struct Extended {
    pub instance: SdoInstance,
    pub optimal: SdoSolution,
    pub interior: SdoSolution,
}

/// Append one constraint and one row/column so that the instance carries the
/// padded optimal solution and the interior point `blockdiag(X⁰, x0_last)`,
/// `blockdiag(S⁰, s0_last)`.
///
/// `s0_last` must exceed `(−δ/x0_last)⁺` with `δ = (X⁰ − X̂)•(S⁰ − Ŝ)`.
pub fn assemble_both(
    inner: &SdoInstance,
    inner_opt: &SdoSolution,
    x0: &DMatrix<f64>,
    s0: &DMatrix<f64>,
    x0_last: f64,
    s0_last: f64,
    y0: &DVector<f64>,
) -> Result<Extended> {
    let (m, n) = (inner.m(), inner.n());
    check_pd(x0, "X0")?;
    check_pd(s0, "S0")?;
    if x0.nrows() != n || s0.nrows() != n {
        return arg(format!("interior blocks must be {n}x{n}"));
    }
    if y0.len() != m + 1 || y0[m] == 0.0 || !y0[m].is_finite() {
        return arg("y0 must have length m + 1 with a nonzero last entry");
    }
    if !(x0_last > 0.0) {
        return arg("appended interior eigenvalue must be > 0");
    }
    let delta = frob(&(x0 - &inner_opt.x), &(s0 - &inner_opt.s));
    let floor = (-delta / x0_last).max(0.0);
    if !(s0_last > floor) {
        return arg(format!("appended slack {s0_last} must exceed {floor}"));
    }
    let s_hat_last = delta / x0_last + s0_last;
    let y_last = y0[m];

    let pad = |mat: &DMatrix<f64>, corner: f64| {
        let mut out = DMatrix::zeros(n + 1, n + 1);
        out.view_mut((0, 0), (n, n)).copy_from(mat);
        out[(n, n)] = corner;
        out
    };
    let to_opt = &inner_opt.x - x0;
    let alpha: Vec<f64> = inner.a.iter().map(|ai| frob(ai, &to_opt) / x0_last).collect();
    let mut a: Vec<DMatrix<f64>> = inner.a.iter().zip(&alpha).map(|(ai, al)| pad(ai, *al)).collect();

    let mut a_new = pad(&(&inner_opt.s - s0), s_hat_last - s0_last);
    for (i, ai) in a.iter().enumerate() {
        a_new += ai * (inner_opt.y[i] - y0[i]);
    }
    let a_new = symmetrize(&(a_new / y_last));

    let x_star = pad(&inner_opt.x, 0.0);
    let s_star = pad(&inner_opt.s, s_hat_last);
    let theta = s_hat_last + inner_opt.y.iter().zip(&alpha).map(|(y, al)| y * al).sum::<f64>();
    let c = pad(&inner.c, theta);
    let mut b = inner.b.clone().push(0.0);
    b[m] = frob(&a_new, &x_star);
    a.push(a_new);

    let x0_full = pad(x0, x0_last);
    let s0_full = pad(s0, s0_last);
    let dx = &x0_full - &x_star;
    let ds = &s0_full - &s_star;
    let gap = frob(&dx, &ds);
    if gap.abs() > 1e-11 * (1.0 + dx.norm() * ds.norm()) {
        return Err(Error::Internal(format!(
            "orthogonality of the interior and optimal solutions violated: {gap:e}"
        )));
    }
    Ok(Extended {
        instance: SdoInstance { a, b, c },
        optimal: SdoSolution {
            x: x_star,
            y: inner_opt.y.clone().push(0.0),
            s: s_star,
        },
        interior: SdoSolution {
            x: x0_full,
            y: y0.clone(),
            s: s0_full,
        },
    })
}

fn random_symmetric(n: usize, density: Option<f64>, rng: &mut RngStream) -> DMatrix<f64> {
    let slots = n * (n + 1) / 2;
    let count = match density {
        Some(d) => ((d * slots as f64).round() as usize).clamp(1, slots),
        None => slots,
    };
    let mut keep = vec![false; slots];
    if count == slots {
        keep.iter_mut().for_each(|k| *k = true);
    } else {
        let mut order: Vec<usize> = (0..slots).collect();
        rng.shuffle(&mut order);
        for &k in order.iter().take(count) {
            keep[k] = true;
        }
    }
    let mut out = DMatrix::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        for i in 0..=j {
            if keep[k] {
                let v = rng.signed();
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
            k += 1;
        }
    }
    out
}

fn independent(mats: &[DMatrix<f64>]) -> bool {
    mats.is_empty() || numerical_rank(&stack_vectorized(mats), INDEPENDENCE_TOL) == mats.len()
}

/// `m` random symmetric matrices with linearly independent vectorizations.
fn random_constraints(m: usize, n: usize, controls: &GenControls, rng: &mut RngStream) -> Result<Vec<DMatrix<f64>>> {
    for _ in 0..ATTEMPTS {
        let a: Vec<_> = (0..m).map(|_| random_symmetric(n, controls.density, rng)).collect();
        if independent(&a) {
            return Ok(a);
        }
    }
    Err(Error::Generation(format!(
        "could not draw {m} linearly independent symmetric {n}x{n} constraint matrices"
    )))
}

/// Positive eigenvalues for solution blocks: `floor + U[0.5, 1.5]`, or a
/// geometric profile spanning `cond` when a condition target is set.
fn spectrum(k: usize, controls: &GenControls, rng: &mut RngStream) -> Vec<f64> {
    match controls.cond {
        Some(cond) => {
            let base = controls.eigen_floor.max(0.5);
            geometric_profile(k, cond).into_iter().map(|v| v * cond * base).collect()
        }
        None => (0..k).map(|_| controls.eigen_floor + rng.uniform(0.5, 1.5)).collect(),
    }
}

fn random_pd(k: usize, controls: &GenControls, rng: &mut RngStream) -> Result<DMatrix<f64>> {
    if k == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let spec = spectrum(k, controls, rng);
    gen_psd(k, PsdMethod::Spectral, Some(&spec), rng)
}

/// Diagonal of `(0_B, σ, 0_T, 0_N)`-style profiles in `B, T, N` order.
fn profile(dims: &PartitionDims, b: &[f64], t: &[f64], n: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(dims.n());
    out.extend_from_slice(b);
    out.extend_from_slice(t);
    out.extend_from_slice(n);
    debug_assert_eq!(out.len(), dims.n());
    out
}

/// Unscaled optimal construction shared by the optimal and combined generators.
struct Inner {
    instance: SdoInstance,
    optimal: SdoSolution,
    dims: PartitionDims,
    q: DMatrix<f64>,
    gamma: Option<Vec<f64>>,
    exact: bool,
    maximal: bool,
}

impl Inner {
    fn certificate(self) -> (SdoInstance, SdoCertificate) {
        let structure = match self.gamma {
            Some(gamma) => SdoStructure::MaxComp { gamma },
            None => SdoStructure::General,
        };
        let cert = SdoCertificate {
            interior: None,
            optimal: Some(self.optimal),
            dims: Some(self.dims),
            basis: Some(self.q),
            structure,
            status: if self.exact { PartitionStatus::Exact } else { PartitionStatus::Declared },
            flags: SdoFlags {
                maximally_complementary: self.maximal,
                strictly_complementary: self.dims.n_t == 0,
            },
            mu: None,
            scaling: Scaling::default(),
        };
        (self.instance, cert)
    }
}

fn block_inner(m: usize, n: usize, dims: PartitionDims, controls: &GenControls, rng: &mut RngStream) -> Result<Inner> {
    let x_b = random_pd(dims.n_b, controls, rng)?;
    let s_n = random_pd(dims.n_n, controls, rng)?;
    let zeros_t = DMatrix::zeros(dims.n_t, dims.n_t);
    let x = block_diag(&[&x_b, &zeros_t, &DMatrix::zeros(dims.n_n, dims.n_n)]);
    let s = block_diag(&[&DMatrix::zeros(dims.n_b, dims.n_b), &zeros_t, &s_n]);
    let a = random_constraints(m, n, controls, rng)?;
    let y = rng.signed_vec(m);
    let optimal = SdoSolution { x, y, s };
    let instance = assemble_optimal(a, &optimal)?;
    Ok(Inner {
        instance,
        optimal,
        dims,
        q: DMatrix::identity(n, n),
        gamma: None,
        exact: dims.n_t == 0,
        maximal: dims.n_t == 0,
    })
}

fn eigen_pair(dims: &PartitionDims, q: &DMatrix<f64>, controls: &GenControls, rng: &mut RngStream) -> (DMatrix<f64>, DMatrix<f64>) {
    let sigma = spectrum(dims.n_b, controls, rng);
    let lambda = spectrum(dims.n_n, controls, rng);
    let zt = vec![0.0; dims.n_t];
    let x = congruence_diag(q, &profile(dims, &sigma, &zt, &vec![0.0; dims.n_n]));
    let s = congruence_diag(q, &profile(dims, &vec![0.0; dims.n_b], &zt, &lambda));
    (x, s)
}

fn eig_inner(m: usize, n: usize, dims: PartitionDims, controls: &GenControls, rng: &mut RngStream) -> Result<Inner> {
    let q = gen_orthonormal(n, rng)?;
    let (x, s) = eigen_pair(&dims, &q, controls, rng);
    let a = random_constraints(m, n, controls, rng)?;
    let y = rng.signed_vec(m);
    let optimal = SdoSolution { x, y, s };
    let instance = assemble_optimal(a, &optimal)?;
    Ok(Inner {
        instance,
        optimal,
        dims,
        q,
        gamma: None,
        exact: dims.n_t == 0,
        maximal: dims.n_t == 0,
    })
}

/// Columns of `Q` spanning the `B` block.
pub fn basis_block(q: &DMatrix<f64>, start: usize, len: usize) -> DMatrix<f64> {
    q.columns(start, len).clone_owned()
}

/// Rank of the stacked vectorizations of `{Aᵢ·Q_B}` over the given constraint indices.
pub fn restricted_rank(a: &[DMatrix<f64>], q_b: &DMatrix<f64>, indices: impl Iterator<Item = usize>) -> usize {
    let prods: Vec<DMatrix<f64>> = indices.map(|i| &a[i] * q_b).collect();
    if prods.is_empty() {
        return 0;
    }
    numerical_rank(&stack_vectorized(&prods), INDEPENDENCE_TOL)
}

fn maxcomp_inner(m: usize, n: usize, dims: PartitionDims, controls: &GenControls, rng: &mut RngStream) -> Result<Inner> {
    if dims.n_b == 0 || dims.n_n == 0 {
        return arg("maximally complementary generation needs n_B >= 1 and n_N >= 1");
    }
    let capacity = n * dims.n_b - dims.n_b * (dims.n_b - 1) / 2;
    if m - 1 > capacity {
        return arg(format!(
            "m - 1 = {} exceeds the dimension {capacity} available for independent A_i Q_B",
            m - 1
        ));
    }
    let q = gen_orthonormal(n, rng)?;
    let (x, s) = eigen_pair(&dims, &q, controls, rng);
    let q_b = basis_block(&q, 0, dims.n_b);
    for _ in 0..ATTEMPTS {
        let gamma_t: Vec<f64> = (0..dims.n_t).map(|_| rng.positive()).collect();
        let gamma_n: Vec<f64> = (0..dims.n_n).map(|_| rng.signed()).collect();
        let gamma = profile(&dims, &vec![0.0; dims.n_b], &gamma_t, &gamma_n);
        let mut a = vec![congruence_diag(&q, &gamma)];
        for _ in 1..m {
            let w = random_symmetric(n, None, rng);
            a.push(symmetrize(&(&q * w * q.transpose())));
        }
        if restricted_rank(&a, &q_b, 1..m) != m - 1 || !independent(&a) {
            continue;
        }
        let y = rng.signed_vec(m);
        let optimal = SdoSolution { x, y, s };
        let instance = assemble_optimal(a, &optimal)?;
        return Ok(Inner {
            instance,
            optimal,
            dims,
            q,
            gamma: Some(gamma),
            exact: true,
            maximal: true,
        });
    }
    Err(Error::Generation(
        "rank condition on {A_i Q_B} not met within the retry budget".into(),
    ))
}

fn apply_scaling(controls: &GenControls, (mut inst, mut cert): (SdoInstance, SdoCertificate)) -> Result<(SdoInstance, SdoCertificate)> {
    let f = Scaling::for_targets(controls, inst.b.norm(), inst.c.norm())?;
    if f.is_identity() {
        return Ok((inst, cert));
    }
    inst.b *= f.primal;
    inst.c *= f.dual;
    cert.interior = cert.interior.map(|s| s.scaled(f));
    cert.optimal = cert.optimal.map(|s| s.scaled(f));
    cert.scaling = f;
    Ok((inst, cert))
}

/// Random instance with an interior point.
///
/// `controls.mu` couples the pair as `S⁰ = μ(X⁰)⁻¹`; `diagonal` draws both
/// matrices diagonal.
pub fn gen_sdo_interior(m: usize, n: usize, controls: &GenControls, diagonal: bool) -> Result<(SdoInstance, SdoCertificate)> {
    check_dims(m, n)?;
    controls.validate()?;
    let mut rng = controls.rng();
    let x0 = if diagonal {
        DMatrix::from_diagonal(&DVector::from_vec(spectrum(n, controls, &mut rng)))
    } else {
        random_pd(n, controls, &mut rng)?
    };
    let s0 = match controls.mu {
        Some(mu) => central_partner(&x0, mu)?,
        None if diagonal => DMatrix::from_diagonal(&DVector::from_vec(spectrum(n, controls, &mut rng))),
        None => random_pd(n, controls, &mut rng)?,
    };
    let a = random_constraints(m, n, controls, &mut rng)?;
    let y0 = rng.signed_vec(m);
    let (inst, mut cert) = assemble_interior(a, x0, y0, s0)?;
    cert.mu = controls.mu;
    apply_scaling(controls, (inst, cert))
}

fn prelude(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<PartitionDims> {
    check_dims(m, n)?;
    controls.validate()?;
    controls.reject_mu("optimal-solution generation")?;
    PartitionDims::new(n, n_b, n_n)
}

/// Optimal solution `X* = blockdiag(X_B, 0, 0)`, `S* = blockdiag(0, 0, S_N)`.
pub fn gen_sdo_block_optimal(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, n_b, n_n, controls)?;
    let mut rng = controls.rng();
    apply_scaling(controls, block_inner(m, n, dims, controls, &mut rng)?.certificate())
}

/// Optimal solution `X* = Q·diag(σ,0,0)·Qᵀ`, `S* = Q·diag(0,0,λ)·Qᵀ` for a random orthonormal `Q`.
pub fn gen_sdo_eig_optimal(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, n_b, n_n, controls)?;
    let mut rng = controls.rng();
    apply_scaling(controls, eig_inner(m, n, dims, controls, &mut rng)?.certificate())
}

/// Maximally complementary optimal solution whose eigenspace split is the optimal partition.
pub fn gen_sdo_maxcomp(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, n_b, n_n, controls)?;
    let mut rng = controls.rng();
    apply_scaling(controls, maxcomp_inner(m, n, dims, controls, &mut rng)?.certificate())
}

/// Maximally complementary construction with `B = ∅`: `X* = 0`, `b = 0`.
///
/// Needs `m <= n_N` so that the diagonal profiles stay independent.
pub fn gen_sdo_maxcomp_empty_b(m: usize, n: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, 0, n_n, controls)?;
    if n_n == 0 {
        return arg("n_N must be at least 1");
    }
    if m > n_n {
        return arg(format!("m = {m} exceeds n_N = {n_n}; the constraint matrices would be dependent"));
    }
    let mut rng = controls.rng();
    let q = gen_orthonormal(n, &mut rng)?;
    let lambda = spectrum(n_n, controls, &mut rng);
    let zt = vec![0.0; dims.n_t];
    let s = congruence_diag(&q, &profile(&dims, &[], &zt, &lambda));
    for _ in 0..ATTEMPTS {
        let a: Vec<_> = (0..m)
            .map(|_| {
                let g: Vec<f64> = (0..n_n).map(|_| rng.signed()).collect();
                congruence_diag(&q, &profile(&dims, &[], &zt, &g))
            })
            .collect();
        if !independent(&a) {
            continue;
        }
        let y = rng.signed_vec(m);
        let optimal = SdoSolution {
            x: DMatrix::zeros(n, n),
            y,
            s,
        };
        let c = dual_combination(&a, &optimal.y, &optimal.s);
        let inst = SdoInstance {
            a,
            b: DVector::zeros(m),
            c,
        };
        let cert = SdoCertificate {
            interior: None,
            optimal: Some(optimal),
            dims: Some(dims),
            basis: Some(q),
            structure: SdoStructure::EmptyB,
            status: if dims.n_t == 0 { PartitionStatus::Exact } else { PartitionStatus::Declared },
            flags: SdoFlags {
                maximally_complementary: dims.n_t == 0,
                strictly_complementary: dims.n_t == 0,
            },
            mu: None,
            scaling: Scaling::default(),
        };
        return apply_scaling(controls, (inst, cert));
    }
    Err(Error::Generation("could not draw independent diagonal profiles".into()))
}

#[derive(Clone, Copy)]
enum InteriorShape {
    /// Independent positive definite blocks on `B`, `T`, `N`.
    Blocks,
    /// Diagonal in the basis of the optimal solution.
    Eigen,
}

fn extend(inner: Inner, shape: InteriorShape, controls: &GenControls, rng: &mut RngStream) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = inner.dims;
    let n = dims.n();
    let m = inner.instance.m();
    let (x0, s0) = match shape {
        InteriorShape::Blocks => {
            let xb = random_pd(dims.n_b, controls, rng)?;
            let xt = random_pd(dims.n_t, controls, rng)?;
            let xn = random_pd(dims.n_n, controls, rng)?;
            let sb = random_pd(dims.n_b, controls, rng)?;
            let st = random_pd(dims.n_t, controls, rng)?;
            let sn = random_pd(dims.n_n, controls, rng)?;
            (block_diag(&[&xb, &xt, &xn]), block_diag(&[&sb, &st, &sn]))
        }
        InteriorShape::Eigen => {
            let sigma0 = spectrum(n, controls, rng);
            let lambda0 = spectrum(n, controls, rng);
            (congruence_diag(&inner.q, &sigma0), congruence_diag(&inner.q, &lambda0))
        }
    };
    let x0_last = controls.eigen_floor + rng.uniform(0.5, 1.5);
    let y0 = rng.signed_vec(m).push(rng.nonzero_pivot());
    let delta = frob(&(&x0 - &inner.optimal.x), &(&s0 - &inner.optimal.s));
    let s0_last = controls.eigen_floor + controls.above_positive_part(delta / x0_last);
    let ext = assemble_both(&inner.instance, &inner.optimal, &x0, &s0, x0_last, s0_last, &y0)?;

    let mut q = DMatrix::identity(n + 1, n + 1);
    q.view_mut((0, 0), (n, n)).copy_from(&inner.q);
    let gamma = inner.gamma.map(|mut g| {
        // The appended direction of A₁ is its corner entry.
        g.push(ext.instance.a[0][(n, n)]);
        g
    });
    let out_dims = PartitionDims {
        n_b: dims.n_b,
        n_t: dims.n_t,
        n_n: dims.n_n + 1,
    };
    let structure = match gamma {
        Some(gamma) => SdoStructure::MaxComp { gamma },
        None => SdoStructure::General,
    };
    let cert = SdoCertificate {
        interior: Some(ext.interior),
        optimal: Some(ext.optimal),
        dims: Some(out_dims),
        basis: Some(q),
        structure,
        status: if inner.exact { PartitionStatus::Exact } else { PartitionStatus::Declared },
        flags: SdoFlags {
            maximally_complementary: inner.maximal,
            strictly_complementary: dims.n_t == 0,
        },
        mu: None,
        scaling: Scaling::default(),
    };
    apply_scaling(controls, (ext.instance, cert))
}

/// Block-diagonal optimal and interior solutions on an `(m+1)`-constraint, `(n+1)`-dimensional instance.
pub fn gen_sdo_block_both(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, n_b, n_n, controls)?;
    let mut rng = controls.rng();
    let inner = block_inner(m, n, dims, controls, &mut rng)?;
    extend(inner, InteriorShape::Blocks, controls, &mut rng)
}

/// General-structure optimal and interior solutions sharing the eigenbasis `blockdiag(Q̂, 1)`.
pub fn gen_sdo_eig_both(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, n_b, n_n, controls)?;
    let mut rng = controls.rng();
    let inner = eig_inner(m, n, dims, controls, &mut rng)?;
    extend(inner, InteriorShape::Eigen, controls, &mut rng)
}

/// Interior point plus a maximally complementary solution; the appended direction joins `N`.
pub fn gen_sdo_maxcomp_both(m: usize, n: usize, n_b: usize, n_n: usize, controls: &GenControls) -> Result<(SdoInstance, SdoCertificate)> {
    let dims = prelude(m, n, n_b, n_n, controls)?;
    // The appended constraint needs its own direction among the AᵢQ_B, and
    // every extended AᵢQ_B vanishes in the appended coordinate.
    let capacity = n * n_b - n_b * n_b.saturating_sub(1) / 2;
    if m > capacity {
        return arg(format!("m = {m} exceeds {capacity}, the room for independent A_i Q_B after extension"));
    }
    let mut rng = controls.rng();
    let inner = maxcomp_inner(m, n, dims, controls, &mut rng)?;
    extend(inner, InteriorShape::Eigen, controls, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dmat, dvec};

    #[test]
    fn interior_toy() {
        let (inst, _) = assemble_interior(
            vec![dmat(2, 2, &[1.0, 0.0, 0.0, 2.0])],
            DMatrix::identity(2, 2),
            dvec(&[1.0]),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        assert_eq!(inst.b, dvec(&[3.0]));
        assert_eq!(inst.c, dmat(2, 2, &[2.0, 0.0, 0.0, 3.0]));
    }

    #[test]
    fn diagonal_mu_partner() {
        let x = dmat(2, 2, &[2.0, 0.0, 0.0, 4.0]);
        let s = central_partner(&x, 1.0).unwrap();
        assert_eq!(s, dmat(2, 2, &[0.5, 0.0, 0.0, 0.25]));
        assert_eq!(frob(&x, &s), 2.0);
    }

    #[test]
    fn general_mu_partner() {
        let c = GenControls {
            mu: Some(1.0),
            ..GenControls::seeded(5)
        };
        let (_, cert) = gen_sdo_interior(3, 4, &c, false).unwrap();
        let int = cert.interior.unwrap();
        let prod = &int.x * &int.s;
        assert!((prod - DMatrix::<f64>::identity(4, 4)).norm() <= 1e-10);
    }

    #[test]
    fn block_optimal_toy() {
        let opt = SdoSolution {
            x: dmat(2, 2, &[2.0, 0.0, 0.0, 0.0]),
            y: dvec(&[1.0]),
            s: dmat(2, 2, &[0.0, 0.0, 0.0, 3.0]),
        };
        let inst = assemble_optimal(vec![dmat(2, 2, &[1.0, 1.0, 1.0, 0.0])], &opt).unwrap();
        assert_eq!(inst.b, dvec(&[2.0]));
        assert_eq!(inst.c, dmat(2, 2, &[1.0, 1.0, 1.0, 3.0]));
    }

    #[test]
    fn dims_validation() {
        assert!(PartitionDims::new(3, 2, 2).is_err());
        let d = PartitionDims::new(5, 2, 1).unwrap();
        assert_eq!((d.n_t, d.t_start(), d.n_start()), (2, 2, 4));
        assert!(matches!(
            gen_sdo_block_optimal(1, 2, 2, 1, &GenControls::default()),
            Err(Error::Argument(_))
        ));
        assert!(matches!(gen_sdo_interior(3, 2, &GenControls::default(), false), Err(Error::Argument(_))));
    }

    #[test]
    fn maxcomp_gamma_layout() {
        let (_, cert) = gen_sdo_maxcomp(4, 5, 1, 2, &GenControls::seeded(3)).unwrap();
        let SdoStructure::MaxComp { gamma } = cert.structure else { panic!() };
        assert_eq!(gamma[0], 0.0);
        assert!(gamma[1..3].iter().all(|g| *g >= 0.1));
    }

    #[test]
    fn maxcomp_both_dims() {
        let (inst, cert) = gen_sdo_maxcomp_both(3, 4, 1, 1, &GenControls::seeded(3)).unwrap();
        assert_eq!((inst.m(), inst.n()), (4, 5));
        assert_eq!(cert.dims.unwrap(), PartitionDims { n_b: 1, n_t: 2, n_n: 2 });
        let SdoStructure::MaxComp { gamma } = cert.structure else { panic!() };
        assert_eq!(gamma.len(), 5);
        assert_eq!(gamma[0], 0.0);
    }

    #[test]
    fn empty_b_rejects_large_m() {
        assert!(matches!(
            gen_sdo_maxcomp_empty_b(3, 4, 2, &GenControls::seeded(1)),
            Err(Error::Argument(_))
        ));
        let (inst, _) = gen_sdo_maxcomp_empty_b(2, 4, 2, &GenControls::seeded(1)).unwrap();
        assert!(inst.b.iter().all(|v| *v == 0.0));
    }
}
