//! Second-order cone optimization over `K = L^{n₁} × … × L^{n_p}`:
//! `min cᵀx  s.t. Ax = b, x ∈ K`, dual `max bᵀy  s.t. Aᵀy + s = c, s ∈ K`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::controls::{GenControls, Scaling};
use crate::error::{arg, Error, Result};
use crate::io::hexfloat;
use crate::linalg::numerical_rank;
use crate::randkit::{gen_matrix, RngStream};

const ATTEMPTS: usize = 6;
const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeLabel {
    B,
    N,
    R,
    T1,
    T2,
    T3,
}

impl ConeLabel {
    /// Labels whose optimal blocks must lie on the boundary with a nonzero tail.
    pub fn needs_tail(self) -> bool {
        matches!(self, ConeLabel::R | ConeLabel::T2 | ConeLabel::T3)
    }
}

impl fmt::Display for ConeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConeLabel::B => "B",
            ConeLabel::N => "N",
            ConeLabel::R => "R",
            ConeLabel::T1 => "T1",
            ConeLabel::T2 => "T2",
            ConeLabel::T3 => "T3",
        };
        f.write_str(s)
    }
}

impl FromStr for ConeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "B" => ConeLabel::B,
            "N" => ConeLabel::N,
            "R" => ConeLabel::R,
            "T1" => ConeLabel::T1,
            "T2" => ConeLabel::T2,
            "T3" => ConeLabel::T3,
            other => return arg(format!("unknown cone label `{other}`")),
        })
    }
}

/// Column ranges of the cone blocks.
pub fn cone_ranges(dims: &[usize]) -> Vec<Range<usize>> {
    let mut start = 0;
    dims.iter()
        .map(|d| {
            let r = start..start + d;
            start += d;
            r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SocoInstance {
    pub cone_dims: Vec<usize>,
    #[serde(with = "hexfloat::matrix")]
    pub a: DMatrix<f64>,
    #[serde(with = "hexfloat::vector")]
    pub b: DVector<f64>,
    #[serde(with = "hexfloat::vector")]
    pub c: DVector<f64>,
}

impl SocoInstance {
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn ranges(&self) -> Vec<Range<usize>> {
        cone_ranges(&self.cone_dims)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SocoSolution {
    #[serde(with = "hexfloat::vector")]
    pub x: DVector<f64>,
    #[serde(with = "hexfloat::vector")]
    pub y: DVector<f64>,
    #[serde(with = "hexfloat::vector")]
    pub s: DVector<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RScalar {
    pub cone: usize,
    #[serde(with = "hexfloat::scalar")]
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocoFlags {
    pub maximally_complementary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SocoCertificate {
    pub interior: Option<SocoSolution>,
    pub optimal: Option<SocoSolution>,
    pub partition: Option<Vec<ConeLabel>>,
    pub r_scalars: Vec<RScalar>,
    /// Column appended when an interior point was added to an optimal construction.
    pub appended_column: Option<usize>,
    pub flags: SocoFlags,
    #[serde(with = "hexfloat::opt_scalar")]
    pub mu: Option<f64>,
    pub scaling: Scaling,
}

fn tail_norm(v: &[f64]) -> f64 {
    v.iter().skip(1).map(|t| t * t).sum::<f64>().sqrt()
}

/// `x₁ − ‖x_{2:}‖`; nonnegative iff the block lies in the cone.
pub fn cone_margin(v: &[f64]) -> f64 {
    match v.first() {
        Some(h) => h - tail_norm(v),
        None => 0.0,
    }
}

/// `(xᵀs, x₁s_{2:} + s₁x_{2:})`.
pub fn jordan_product(x: &[f64], s: &[f64]) -> Result<DVector<f64>> {
    if x.len() != s.len() || x.is_empty() {
        return arg(format!("Jordan product needs equal nonempty blocks, got {} and {}", x.len(), s.len()));
    }
    let mut out = DVector::zeros(x.len());
    out[0] = x.iter().zip(s).map(|(a, b)| a * b).sum();
    for i in 1..x.len() {
        out[i] = x[0] * s[i] + s[0] * x[i];
    }
    Ok(out)
}

/// Replace the head with `‖v_{2:}‖ + |v₁|`.
pub fn interiorize(v: &[f64]) -> Result<DVector<f64>> {
    match v.first() {
        None => arg("cannot interiorize an empty block"),
        Some(&h) if h == 0.0 || !h.is_finite() => arg("head entry must be nonzero to interiorize"),
        Some(&h) => {
            let mut out = DVector::from_column_slice(v);
            out[0] = tail_norm(v) + h.abs();
            Ok(out)
        }
    }
}

/// `μ·x⁻¹` in the Jordan algebra: `μ(x₁, −x_{2:}) / (x₁² − ‖x_{2:}‖²)`.
fn central_block(x: &[f64], mu: f64) -> DVector<f64> {
    let det = x[0] * x[0] - tail_norm(x).powi(2);
    let mut out = DVector::from_column_slice(x) * (-mu / det);
    out[0] = mu * x[0] / det;
    out
}

fn check_dims(m: usize, dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return arg("cone dimensions must be a nonempty list of positive integers");
    }
    let n: usize = dims.iter().sum();
    if m == 0 || m >= n {
        return arg(format!("need 1 <= m < n, got m = {m}, n = {n}"));
    }
    Ok(n)
}

fn check_partition(dims: &[usize], labels: &[ConeLabel]) -> Result<()> {
    if labels.len() != dims.len() {
        return arg(format!("partition has {} labels for {} cones", labels.len(), dims.len()));
    }
    for (i, (d, l)) in dims.iter().zip(labels).enumerate() {
        if l.needs_tail() && *d < 2 {
            return arg(format!("cone {i} has dimension 1 and cannot carry label {l}"));
        }
    }
    Ok(())
}

fn check_interior(v: &DVector<f64>, ranges: &[Range<usize>], what: &str) -> Result<()> {
    for (i, r) in ranges.iter().enumerate() {
        if !(cone_margin(&v.as_slice()[r.clone()]) > 0.0) {
            return arg(format!("{what} block {i} is not strictly inside its cone"));
        }
    }
    Ok(())
}

fn interior_only(sol: SocoSolution, mu: Option<f64>) -> SocoCertificate {
    SocoCertificate {
        interior: Some(sol),
        optimal: None,
        partition: None,
        r_scalars: Vec::new(),
        appended_column: None,
        flags: SocoFlags::default(),
        mu,
        scaling: Scaling::default(),
    }
}

/// `b = Ax⁰`, `c = Aᵀy⁰ + s⁰` with every block of `x⁰` and `s⁰` strictly interior.
pub fn assemble_interior(
    cone_dims: Vec<usize>,
    a: DMatrix<f64>,
    x0: DVector<f64>,
    y0: DVector<f64>,
    s0: DVector<f64>,
) -> Result<(SocoInstance, SocoCertificate)> {
    let n: usize = cone_dims.iter().sum();
    if a.ncols() != n || x0.len() != n || s0.len() != n || y0.len() != a.nrows() {
        return arg("dimension mismatch between A, cones and the interior point");
    }
    let ranges = cone_ranges(&cone_dims);
    check_interior(&x0, &ranges, "x0")?;
    check_interior(&s0, &ranges, "s0")?;
    let b = &a * &x0;
    let c = a.tr_mul(&y0) + &s0;
    let sol = SocoSolution { x: x0, y: y0, s: s0 };
    Ok((SocoInstance { cone_dims, a, b, c }, interior_only(sol, None)))
}

/// `b = Ax*`, `c = Aᵀy* + s*`.
pub fn assemble_optimal(cone_dims: Vec<usize>, a: DMatrix<f64>, opt: &SocoSolution) -> Result<SocoInstance> {
    let n: usize = cone_dims.iter().sum();
    if a.ncols() != n || opt.x.len() != n || opt.s.len() != n || opt.y.len() != a.nrows() {
        return arg("dimension mismatch between A, cones and the optimal solution");
    }
    let b = &a * &opt.x;
    let c = a.tr_mul(&opt.y) + &opt.s;
    Ok(SocoInstance { cone_dims, a, b, c })
}

#[derive(Clone, Debug)]
pub struct Extended {
    pub instance: SocoInstance,
    pub optimal: SocoSolution,
    pub interior: SocoSolution,
}

/// Extend the last cone by one coordinate and append one row so that the
/// instance also carries the interior point `(x0, y0, s0)`.
///
/// `x0` and `s0` have length `n + 1` (the extended cones); `y0` has length `m + 1`.
pub fn assemble_both(
    inner: &SocoInstance,
    inner_opt: &SocoSolution,
    x0: &DVector<f64>,
    s0: &DVector<f64>,
    y0: &DVector<f64>,
) -> Result<Extended> {
    let (m, n) = (inner.rows(), inner.cols());
    if x0.len() != n + 1 || s0.len() != n + 1 || y0.len() != m + 1 {
        return arg("interior point must have n + 1 primal and m + 1 dual entries");
    }
    if y0[m] == 0.0 || !y0[m].is_finite() {
        return arg("last entry of y0 must be nonzero");
    }
    let mut dims = inner.cone_dims.clone();
    *dims.last_mut().expect("nonempty cones") += 1;
    let ranges = cone_ranges(&dims);
    check_interior(x0, &ranges, "x0")?;
    check_interior(s0, &ranges, "s0")?;

    let x_last = x0[n];
    let x0_hat = x0.rows(0, n);
    let s0_hat = s0.rows(0, n);
    let delta = (x0_hat - &inner_opt.x).dot(&(s0_hat - &inner_opt.s));
    let floor = (-delta / x_last).max(0.0);
    if !(s0[n] > floor) {
        return arg(format!("appended slack {} must exceed {floor}", s0[n]));
    }
    let s_hat_last = delta / x_last + s0[n];

    let alpha = &inner.a * (&inner_opt.x - x0_hat) / x_last;
    let mut a_tilde = inner.a.clone().insert_column(n, 0.0);
    a_tilde.set_column(n, &alpha);
    let x_star = inner_opt.x.clone().push(0.0);
    let s_star = inner_opt.s.clone().push(s_hat_last);
    let y_star = inner_opt.y.clone().push(0.0);
    let beta = (a_tilde.tr_mul(&(&inner_opt.y - y0.rows(0, m))) + &s_star - s0) / y0[m];
    let mut a = a_tilde.insert_row(m, 0.0);
    a.set_row(m, &beta.transpose());

    let last = ranges.last().expect("nonempty cones").clone();
    if cone_margin(&s_star.as_slice()[last]) < 0.0 {
        return arg("appended dual coordinate pushes s* out of the last cone");
    }
    let dx = x0 - &x_star;
    let ds = s0 - &s_star;
    let gap = dx.dot(&ds);
    if gap.abs() > 1e-11 * (1.0 + dx.norm() * ds.norm()) {
        return Err(Error::Internal(format!(
            "orthogonality of the interior and optimal solutions violated: {gap:e}"
        )));
    }
    let b = &a * &x_star;
    let c = a.tr_mul(&y_star) + &s_star;
    Ok(Extended {
        instance: SocoInstance { cone_dims: dims, a, b, c },
        optimal: SocoSolution {
            x: x_star,
            y: y_star,
            s: s_star,
        },
        interior: SocoSolution {
            x: x0.clone(),
            y: y0.clone(),
            s: s0.clone(),
        },
    })
}

/// Random strictly interior block with `x₁ − ‖x_{2:}‖ ≥ max(floor, ‖x‖∞ / 9)`.
fn interior_block(dim: usize, controls: &GenControls, rng: &mut RngStream) -> DVector<f64> {
    let mut v = rng.signed_vec(dim);
    let t = tail_norm(v.as_slice());
    v[0] = t + controls.eigen_floor + rng.positive().max(t / 8.0);
    v
}

/// `(‖v‖, v)` for a random nonzero tail `v`.
fn boundary_block(dim: usize, rng: &mut RngStream) -> DVector<f64> {
    loop {
        let mut v = rng.signed_vec(dim);
        let t = tail_norm(v.as_slice());
        if t > 1e-3 {
            v[0] = t;
            return v;
        }
    }
}

fn interior_vector(dims: &[usize], controls: &GenControls, rng: &mut RngStream) -> DVector<f64> {
    let blocks: Vec<f64> = dims
        .iter()
        .flat_map(|d| interior_block(*d, controls, rng).iter().copied().collect::<Vec<_>>())
        .collect();
    DVector::from_vec(blocks)
}

struct Inner {
    instance: SocoInstance,
    optimal: SocoSolution,
    labels: Vec<ConeLabel>,
    r_scalars: Vec<RScalar>,
    maximal: bool,
}

/// Optimal blocks per label; `A` and `y*` are drawn by the caller.
fn optimal_blocks(dims: &[usize], labels: &[ConeLabel], controls: &GenControls, rng: &mut RngStream) -> (DVector<f64>, DVector<f64>, Vec<RScalar>) {
    let n: usize = dims.iter().sum();
    let mut x = DVector::zeros(n);
    let mut s = DVector::zeros(n);
    let mut r_scalars = Vec::new();
    for (i, (r, l)) in cone_ranges(dims).into_iter().zip(labels).enumerate() {
        let d = r.len();
        match l {
            ConeLabel::B => x.rows_mut(r.start, d).copy_from(&interior_block(d, controls, rng)),
            ConeLabel::N => s.rows_mut(r.start, d).copy_from(&interior_block(d, controls, rng)),
            ConeLabel::T1 => {}
            ConeLabel::T2 => x.rows_mut(r.start, d).copy_from(&boundary_block(d, rng)),
            ConeLabel::T3 => s.rows_mut(r.start, d).copy_from(&boundary_block(d, rng)),
            ConeLabel::R => {
                let v = boundary_block(d, rng);
                let delta = rng.uniform(0.5, 1.5);
                let mut w = &v * delta;
                w.rows_mut(1, d - 1).neg_mut();
                x.rows_mut(r.start, d).copy_from(&v);
                s.rows_mut(r.start, d).copy_from(&w);
                r_scalars.push(RScalar { cone: i, delta });
            }
        }
    }
    (x, s, r_scalars)
}

fn general_inner(m: usize, dims: &[usize], labels: &[ConeLabel], controls: &GenControls, rng: &mut RngStream) -> Result<Inner> {
    let n: usize = dims.iter().sum();
    let (x, s, r_scalars) = optimal_blocks(dims, labels, controls, rng);
    let y = rng.signed_vec(m);
    let a = gen_matrix(&controls.recipe(m, n), rng)?;
    let optimal = SocoSolution { x, y, s };
    let instance = assemble_optimal(dims.to_vec(), a, &optimal)?;
    Ok(Inner {
        instance,
        optimal,
        labels: labels.to_vec(),
        r_scalars,
        maximal: false,
    })
}

/// Count of cones per label group, in the order used by the size condition.
fn count(labels: &[ConeLabel], set: &[ConeLabel]) -> usize {
    labels.iter().filter(|l| set.contains(l)).count()
}

/// Columns belonging to cones whose label is in `set`.
pub fn label_columns(dims: &[usize], labels: &[ConeLabel], set: &[ConeLabel]) -> Vec<usize> {
    cone_ranges(dims)
        .into_iter()
        .zip(labels)
        .filter(|(_, l)| set.contains(l))
        .flat_map(|(r, _)| r)
        .collect()
}

/// Rank of the rows `rows` of `A` restricted to `cols`, each column scaled by `weights` when given.
pub fn sub_rank(a: &DMatrix<f64>, rows: Range<usize>, cols: &[usize], weights: Option<&DVector<f64>>) -> usize {
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        let w = weights.map_or(1.0, |w| w[cols[j]]);
        a[(rows.start + i, cols[j])] * w
    });
    numerical_rank(&sub, RANK_TOL)
}

/// Admissibility of a partition for the maximally complementary construction.
pub fn check_maxcomp_partition(m: usize, labels: &[ConeLabel]) -> Result<()> {
    use ConeLabel::*;
    let t2 = count(labels, &[T2]);
    let upper = count(labels, &[B, R, T2]);
    if !(t2 + 1 < m && m <= upper) {
        return arg(format!("need |T2| + 1 < m <= |B| + |R| + |T2|, got |T2| = {t2}, m = {m}, bound = {upper}"));
    }
    if count(labels, &[T1, T3, N]) == 0 {
        return arg("need at least one cone labeled T1, T3 or N, otherwise the first row of A vanishes");
    }
    Ok(())
}

fn maxcomp_inner(m: usize, dims: &[usize], labels: &[ConeLabel], controls: &GenControls, rng: &mut RngStream) -> Result<Inner> {
    use ConeLabel::*;
    check_maxcomp_partition(m, labels)?;
    let n: usize = dims.iter().sum();
    let ranges = cone_ranges(dims);
    let (x, s, r_scalars) = optimal_blocks(dims, labels, controls, rng);
    let t2_cones: Vec<usize> = (0..labels.len()).filter(|i| labels[*i] == T2).collect();
    let free_rows = m - 1 - t2_cones.len();
    let support = label_columns(dims, labels, &[B, R, T2]);

    for _ in 0..ATTEMPTS {
        let mut a = DMatrix::zeros(m, n);
        for (r, l) in ranges.iter().zip(labels) {
            match l {
                T1 | T3 => a[(0, r.start)] = rng.positive(),
                N => {
                    for j in r.clone() {
                        a[(0, j)] = rng.signed();
                    }
                }
                B | R | T2 => {}
            }
        }
        for (k, &p) in t2_cones.iter().enumerate() {
            let r = &ranges[p];
            let t = tail_norm(&x.as_slice()[r.clone()]);
            a[(k + 1, r.start)] = -1.0;
            for j in r.start + 1..r.end {
                a[(k + 1, j)] = x[j] / t;
            }
        }
        let rest = gen_matrix(&controls.recipe(free_rows, n), rng)?;
        a.rows_mut(1 + t2_cones.len(), free_rows).copy_from(&rest);

        let ok = numerical_rank(&a, RANK_TOL) == m
            && sub_rank(&a, 1..m, &support, None) == m - 1
            && sub_rank(&a, 1..m, &support, Some(&x)) == m - 1;
        if !ok {
            continue;
        }
        let y = rng.signed_vec(m);
        let optimal = SocoSolution { x, y, s };
        let instance = assemble_optimal(dims.to_vec(), a, &optimal)?;
        return Ok(Inner {
            instance,
            optimal,
            labels: labels.to_vec(),
            r_scalars,
            maximal: true,
        });
    }
    Err(Error::Generation("rank conditions on the structured rows not met within the retry budget".into()))
}

fn certificate(inner: Inner) -> (SocoInstance, SocoCertificate) {
    let cert = SocoCertificate {
        interior: None,
        optimal: Some(inner.optimal),
        partition: Some(inner.labels),
        r_scalars: inner.r_scalars,
        appended_column: None,
        flags: SocoFlags {
            maximally_complementary: inner.maximal,
        },
        mu: None,
        scaling: Scaling::default(),
    };
    (inner.instance, cert)
}

fn apply_scaling(controls: &GenControls, (mut inst, mut cert): (SocoInstance, SocoCertificate)) -> Result<(SocoInstance, SocoCertificate)> {
    let f = Scaling::for_targets(controls, inst.b.norm(), inst.c.norm())?;
    if f.is_identity() {
        return Ok((inst, cert));
    }
    let scale = |sol: SocoSolution| SocoSolution {
        x: sol.x * f.primal,
        y: sol.y * f.dual,
        s: sol.s * f.dual,
    };
    inst.b *= f.primal;
    inst.c *= f.dual;
    cert.interior = cert.interior.map(scale);
    cert.optimal = cert.optimal.map(scale);
    for r in &mut cert.r_scalars {
        r.delta *= f.dual / f.primal;
    }
    cert.scaling = f;
    Ok((inst, cert))
}

/// Random instance with a strictly interior primal-dual point.
///
/// With `controls.mu`, `s⁰ = μ·(x⁰)⁻¹` blockwise so that `x⁰ ∘ s⁰ = μe`.
pub fn gen_soco_interior(m: usize, cone_dims: &[usize], controls: &GenControls) -> Result<(SocoInstance, SocoCertificate)> {
    let n = check_dims(m, cone_dims)?;
    controls.validate()?;
    let mut rng = controls.rng();
    let x0 = interior_vector(cone_dims, controls, &mut rng);
    let s0 = match controls.mu {
        Some(mu) => {
            let mut s = DVector::zeros(n);
            for r in cone_ranges(cone_dims) {
                s.rows_mut(r.start, r.len()).copy_from(&central_block(&x0.as_slice()[r.clone()], mu));
            }
            s
        }
        None => interior_vector(cone_dims, controls, &mut rng),
    };
    let a = gen_matrix(&controls.recipe(m, n), &mut rng)?;
    let y0 = rng.signed_vec(m);
    let (inst, mut cert) = assemble_interior(cone_dims.to_vec(), a, x0, y0, s0)?;
    cert.mu = controls.mu;
    apply_scaling(controls, (inst, cert))
}

fn prelude(m: usize, cone_dims: &[usize], labels: &[ConeLabel], controls: &GenControls) -> Result<()> {
    check_dims(m, cone_dims)?;
    check_partition(cone_dims, labels)?;
    controls.validate()?;
    controls.reject_mu("optimal-solution generation")
}

/// Optimal solution with the given cone labels; the labels are only a containment of the true partition.
pub fn gen_soco_optimal(m: usize, cone_dims: &[usize], labels: &[ConeLabel], controls: &GenControls) -> Result<(SocoInstance, SocoCertificate)> {
    prelude(m, cone_dims, labels, controls)?;
    let mut rng = controls.rng();
    apply_scaling(controls, certificate(general_inner(m, cone_dims, labels, controls, &mut rng)?))
}

/// Maximally complementary solution whose labels are the optimal partition.
pub fn gen_soco_maxcomp(m: usize, cone_dims: &[usize], labels: &[ConeLabel], controls: &GenControls) -> Result<(SocoInstance, SocoCertificate)> {
    prelude(m, cone_dims, labels, controls)?;
    let mut rng = controls.rng();
    apply_scaling(controls, certificate(maxcomp_inner(m, cone_dims, labels, controls, &mut rng)?))
}

fn require_last_n(labels: &[ConeLabel]) -> Result<()> {
    if labels.last() != Some(&ConeLabel::N) {
        return arg("the last cone must be labeled N to append an interior coordinate");
    }
    Ok(())
}

fn extend(inner: Inner, controls: &GenControls, rng: &mut RngStream) -> Result<(SocoInstance, SocoCertificate)> {
    let dims = &inner.instance.cone_dims;
    let (m, n) = (inner.instance.rows(), inner.instance.cols());
    let last = cone_ranges(dims).pop().expect("nonempty cones");

    let mut s0 = interior_vector(dims, controls, rng);
    s0.rows_mut(last.start, last.len())
        .copy_from(&inner.optimal.s.rows(last.start, last.len()));
    let mut x0 = interior_vector(dims, controls, rng);
    let delta = (&x0 - &inner.optimal.x).dot(&(&s0 - &inner.optimal.s));

    let s_block = &inner.optimal.s.as_slice()[last.clone()];
    let radius = (s_block[0].powi(2) - tail_norm(s_block).powi(2)).sqrt();
    let x_last = rng.uniform(0.5, 1.5).max(4.0 * delta.abs() / radius);
    let ratio = delta / x_last;
    let s_last = (-ratio).max(0.0) + controls.margin.max(controls.margin * ratio.abs()).min(radius / 4.0);

    let mut x_block: Vec<f64> = x0.as_slice()[last.clone()].to_vec();
    x_block.push(x_last);
    let t = tail_norm(&x_block);
    x0[last.start] = t + controls.eigen_floor + rng.positive().max(t / 8.0);
    let x0 = x0.push(x_last);
    let s0 = s0.push(s_last);
    let y0 = rng.signed_vec(m).push(rng.nonzero_pivot());

    let ext = assemble_both(&inner.instance, &inner.optimal, &x0, &s0, &y0)?;
    let cert = SocoCertificate {
        interior: Some(ext.interior),
        optimal: Some(ext.optimal),
        partition: Some(inner.labels),
        r_scalars: inner.r_scalars,
        appended_column: Some(n),
        flags: SocoFlags {
            maximally_complementary: inner.maximal,
        },
        mu: None,
        scaling: Scaling::default(),
    };
    apply_scaling(controls, (ext.instance, cert))
}

/// Interior and optimal solutions on an `(m+1) × (n+1)` instance. The last cone must be labeled `N`.
pub fn gen_soco_both(m: usize, cone_dims: &[usize], labels: &[ConeLabel], controls: &GenControls) -> Result<(SocoInstance, SocoCertificate)> {
    prelude(m, cone_dims, labels, controls)?;
    require_last_n(labels)?;
    let mut rng = controls.rng();
    let inner = general_inner(m, cone_dims, labels, controls, &mut rng)?;
    extend(inner, controls, &mut rng)
}

/// Interior point plus a maximally complementary solution; the appended coordinate joins the last `N` cone.
pub fn gen_soco_maxcomp_both(m: usize, cone_dims: &[usize], labels: &[ConeLabel], controls: &GenControls) -> Result<(SocoInstance, SocoCertificate)> {
    prelude(m, cone_dims, labels, controls)?;
    require_last_n(labels)?;
    let mut rng = controls.rng();
    let inner = maxcomp_inner(m, cone_dims, labels, controls, &mut rng)?;
    extend(inner, controls, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dmat, dvec};
    use ConeLabel::*;

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_product(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), dvec(&[1.0, 0.0]));
        assert_eq!(jordan_product(&[5.0, 3.0, 4.0], &[10.0, -6.0, -8.0]).unwrap(), dvec(&[0.0, 0.0, 0.0]));
        assert!(jordan_product(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn interiorize_examples() {
        assert_eq!(interiorize(&[0.5, 3.0, 4.0]).unwrap(), dvec(&[5.5, 3.0, 4.0]));
        assert_eq!(interiorize(&[2.0]).unwrap(), dvec(&[2.0]));
        assert_eq!(interiorize(&[-1.0, 0.0]).unwrap(), dvec(&[1.0, 0.0]));
        assert!(interiorize(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn interior_toy() {
        let (inst, _) = assemble_interior(
            vec![3],
            dmat(1, 3, &[1.0, 0.0, 0.0]),
            dvec(&[2.0, 1.0, 1.0]),
            dvec(&[1.0]),
            dvec(&[3.0, 0.0, 0.0]),
        )
        .unwrap();
        assert_eq!(inst.b, dvec(&[2.0]));
        assert_eq!(inst.c, dvec(&[4.0, 0.0, 0.0]));
    }

    #[test]
    fn central_blocks() {
        let c = GenControls {
            mu: Some(0.5),
            ..GenControls::seeded(2)
        };
        let (inst, cert) = gen_soco_interior(2, &[3, 1, 2], &c).unwrap();
        let int = cert.interior.unwrap();
        for (k, r) in inst.ranges().into_iter().enumerate() {
            let j = jordan_product(&int.x.as_slice()[r.clone()], &int.s.as_slice()[r]).unwrap();
            assert!((j[0] - 0.5).abs() < 1e-12, "cone {k}");
            assert!(j.rows(1, j.len() - 1).amax() < 1e-12);
        }
    }

    #[test]
    fn label_parsing_and_dimension_check() {
        assert_eq!("t2".parse::<ConeLabel>().unwrap(), T2);
        assert!("X".parse::<ConeLabel>().is_err());
        assert!(matches!(
            gen_soco_optimal(1, &[1, 2], &[R, B], &GenControls::default()),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn r_cone_blocks_are_complementary() {
        let (inst, cert) = gen_soco_optimal(3, &[3, 2, 3], &[R, N, B], &GenControls::seeded(4)).unwrap();
        let opt = cert.optimal.unwrap();
        let r = inst.ranges()[0].clone();
        let (x, s) = (&opt.x.as_slice()[r.clone()], &opt.s.as_slice()[r]);
        assert!(jordan_product(x, s).unwrap().amax() < 1e-14);
        let delta = cert.r_scalars[0].delta;
        assert!((s[0] - delta * x[0]).abs() < 1e-14);
    }

    #[test]
    fn maxcomp_size_condition() {
        assert!(check_maxcomp_partition(2, &[T2, B, N]).is_err());
        assert!(check_maxcomp_partition(3, &[T2, B, R, N]).is_ok());
        assert!(check_maxcomp_partition(3, &[T2, B, R]).is_err());
    }

    #[test]
    fn maxcomp_first_row_annihilates_x() {
        let dims = [2, 3, 2, 2, 3, 2];
        let labels = [B, T2, R, T1, N, T3];
        let (inst, cert) = gen_soco_maxcomp(3, &dims, &labels, &GenControls::seeded(8)).unwrap();
        assert!(inst.b[0].abs() <= 1e-12 * cert.optimal.unwrap().x.norm());
    }

    #[test]
    fn both_requires_last_n() {
        let c = GenControls::seeded(1);
        assert!(gen_soco_both(2, &[2, 2], &[N, B], &c).is_err());
        let (inst, cert) = gen_soco_both(2, &[2, 2], &[B, N], &c).unwrap();
        assert_eq!(inst.cone_dims, vec![2, 3]);
        assert_eq!(cert.appended_column, Some(4));
        let opt = cert.optimal.unwrap();
        assert_eq!(opt.x[4], 0.0);
    }
}
