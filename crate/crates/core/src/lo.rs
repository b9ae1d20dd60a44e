//! Linear optimization in standard form: `min cᵀx  s.t. Ax = b, x ≥ 0`.
//!
//! Dual: `max bᵀy  s.t. Aᵀy + s = c, s ≥ 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::controls::{GenControls, Scaling};
use crate::error::{arg, Error, Result};
use crate::io::hexfloat;
use crate::linalg::numerical_rank;
use crate::randkit::{gen_matrix, RngStream};

const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearInstance {
    #[serde(with = "hexfloat::matrix")]
    pub a: DMatrix<f64>,
    #[serde(with = "hexfloat::vector")]
    pub b: DVector<f64>,
    #[serde(with = "hexfloat::vector")]
    pub c: DVector<f64>,
}

impl LinearInstance {
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }
}

/// A primal-dual triple `(x, y, s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalDual {
    #[serde(with = "hexfloat::vector")]
    pub x: DVector<f64>,
    #[serde(with = "hexfloat::vector")]
    pub y: DVector<f64>,
    #[serde(with = "hexfloat::vector")]
    pub s: DVector<f64>,
}

impl PrimalDual {
    fn scaled(&self, s: Scaling) -> Self {
        Self {
            x: &self.x * s.primal,
            y: &self.y * s.dual,
            s: &self.s * s.dual,
        }
    }
}

/// Zero-based index split of the variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoPartition {
    pub basic: Vec<usize>,
    pub nonbasic: Vec<usize>,
}

impl LoPartition {
    /// `B = {0..n_b}`, `N` the rest.
    pub fn leading(n: usize, n_b: usize) -> Self {
        Self {
            basic: (0..n_b.min(n)).collect(),
            nonbasic: (n_b.min(n)..n).collect(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &i in self.basic.iter().chain(&self.nonbasic) {
            if i >= n {
                return arg(format!("partition index {i} out of range for n = {n}"));
            }
            if seen[i] {
                return arg(format!("partition index {i} appears twice"));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return arg("partition must cover every variable");
        }
        Ok(())
    }

    pub fn is_basic(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &i in &self.basic {
            mask[i] = true;
        }
        mask
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoFlags {
    pub strictly_complementary: bool,
    pub unique_basis: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoCertificate {
    pub interior: Option<PrimalDual>,
    pub optimal: Option<PrimalDual>,
    pub partition: Option<LoPartition>,
    #[serde(with = "hexfloat::opt_scalar")]
    pub mu: Option<f64>,
    pub flags: LoFlags,
    pub scaling: Scaling,
}

fn check_len(v: &DVector<f64>, n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return arg(format!("{what} has length {}, expected {n}", v.len()));
    }
    Ok(())
}

fn check_positive(v: &DVector<f64>, what: &str) -> Result<()> {
    if let Some(bad) = v.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return arg(format!("{what} must be strictly positive, found {bad}"));
    }
    Ok(())
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || m >= n {
        return arg(format!("LO dimensions need 1 <= m < n, got m = {m}, n = {n}"));
    }
    Ok(())
}

/// `b = A x⁰`, `c = Aᵀy⁰ + s⁰`.
pub fn assemble_interior(
    a: DMatrix<f64>,
    x0: DVector<f64>,
    y0: DVector<f64>,
    s0: DVector<f64>,
) -> Result<(LinearInstance, LoCertificate)> {
    let (m, n) = a.shape();
    check_len(&x0, n, "x0")?;
    check_len(&s0, n, "s0")?;
    check_len(&y0, m, "y0")?;
    check_positive(&x0, "x0")?;
    check_positive(&s0, "s0")?;
    let b = &a * &x0;
    let c = a.tr_mul(&y0) + &s0;
    let cert = LoCertificate {
        interior: Some(PrimalDual { x: x0, y: y0, s: s0 }),
        optimal: None,
        partition: None,
        mu: None,
        flags: LoFlags::default(),
        scaling: Scaling::default(),
    };
    Ok((LinearInstance { a, b, c }, cert))
}

/// `b = A x*`, `c = Aᵀy* + s*` for a complementary pair supported on `partition`.
pub fn assemble_optimal(
    a: DMatrix<f64>,
    optimal: PrimalDual,
    partition: LoPartition,
) -> Result<(LinearInstance, LoCertificate)> {
    let (m, n) = a.shape();
    partition.validate(n)?;
    check_len(&optimal.x, n, "x*")?;
    check_len(&optimal.s, n, "s*")?;
    check_len(&optimal.y, m, "y*")?;
    let basic = partition.is_basic(n);
    for (i, &in_b) in basic.iter().enumerate() {
        let (xi, si) = (optimal.x[i], optimal.s[i]);
        if xi < 0.0 || si < 0.0 {
            return arg(format!("optimal pair must be nonnegative, index {i}"));
        }
        if (in_b && si != 0.0) || (!in_b && xi != 0.0) {
            return arg(format!("optimal pair is not supported on the partition at index {i}"));
        }
    }
    let b = &a * &optimal.x;
    let c = a.tr_mul(&optimal.y) + &optimal.s;
    let flags = complementarity_flags(&a, &optimal, &partition);
    let cert = LoCertificate {
        interior: None,
        optimal: Some(optimal),
        partition: Some(partition),
        mu: None,
        flags,
        scaling: Scaling::default(),
    };
    Ok((LinearInstance { a, b, c }, cert))
}

fn complementarity_flags(a: &DMatrix<f64>, opt: &PrimalDual, partition: &LoPartition) -> LoFlags {
    let strict = opt.x.iter().zip(opt.s.iter()).all(|(x, s)| x + s > 0.0);
    let unique_basis = strict && partition.basic.len() == a.nrows() && {
        let cols: Vec<_> = partition.basic.iter().map(|&j| a.column(j)).collect();
        numerical_rank(&DMatrix::from_columns(&cols), RANK_TOL) == a.nrows()
    };
    LoFlags {
        strictly_complementary: strict,
        unique_basis,
    }
}

/// Interior data for extending an instance with a known optimal solution.
#[derive(Clone, Debug)]
pub struct InteriorExtension {
    pub x0: DVector<f64>,
    pub s0: DVector<f64>,
    /// Length `m + 1`, last entry nonzero.
    pub y0: DVector<f64>,
    pub x0_last: f64,
    /// Must exceed `(−δ/x0_last)⁺`.
    pub s0_last: f64,
}

/// Orthogonality quantity `δ = (x⁰_B − x̂_B)ᵀs⁰_B + (s⁰_N − ŝ_N)ᵀx⁰_N`.
pub fn extension_delta(inner: &PrimalDual, partition: &LoPartition, x0: &DVector<f64>, s0: &DVector<f64>) -> f64 {
    let xb: f64 = partition
        .basic
        .iter()
        .map(|&i| (x0[i] - inner.x[i]) * s0[i])
        .sum();
    let sn: f64 = partition
        .nonbasic
        .iter()
        .map(|&i| (s0[i] - inner.s[i]) * x0[i])
        .sum();
    xb + sn
}

/// Append one constraint and one variable so that the returned instance has both
/// the inner optimal solution (padded) and the given interior point.
pub fn assemble_both(
    inner: &LinearInstance,
    inner_opt: &PrimalDual,
    partition: &LoPartition,
    ext: InteriorExtension,
) -> Result<(LinearInstance, LoCertificate)> {
    let (m, n) = inner.a.shape();
    partition.validate(n)?;
    check_len(&ext.x0, n, "x0")?;
    check_len(&ext.s0, n, "s0")?;
    check_len(&ext.y0, m + 1, "y0")?;
    check_positive(&ext.x0, "x0")?;
    check_positive(&ext.s0, "s0")?;
    if !(ext.x0_last > 0.0) {
        return arg("appended interior coordinate x0 must be > 0");
    }
    let y_last = ext.y0[m];
    if y_last == 0.0 || !y_last.is_finite() {
        return arg("last entry of y0 must be nonzero");
    }
    let delta = extension_delta(inner_opt, partition, &ext.x0, &ext.s0);
    let floor = (-delta / ext.x0_last).max(0.0);
    if !(ext.s0_last > floor) {
        return arg(format!("appended slack s0 = {} must exceed {floor}", ext.s0_last));
    }
    let s_hat_last = delta / ext.x0_last + ext.s0_last;
    let basic = partition.is_basic(n);

    // Column n of the inner rows.
    let mut diff = DVector::zeros(n);
    for i in 0..n {
        diff[i] = if basic[i] { inner_opt.x[i] - ext.x0[i] } else { -ext.x0[i] };
    }
    let a_last_col = (&inner.a * &diff) / ext.x0_last;

    // Row m over the first n columns.
    let y_diff = &inner_opt.y - ext.y0.rows(0, m);
    let at_y = inner.a.tr_mul(&y_diff);
    let mut d = DVector::zeros(n);
    for i in 0..n {
        d[i] = if basic[i] {
            (at_y[i] - ext.s0[i]) / y_last
        } else {
            (at_y[i] + inner_opt.s[i] - ext.s0[i]) / y_last
        };
    }
    let mut d_last = 0.0;
    for i in 0..n {
        d_last += d[i] * diff[i];
    }
    d_last /= ext.x0_last;

    let mut a = DMatrix::zeros(m + 1, n + 1);
    a.view_mut((0, 0), (m, n)).copy_from(&inner.a);
    a.view_mut((0, n), (m, 1)).copy_from(&a_last_col);
    for i in 0..n {
        a[(m, i)] = d[i];
    }
    a[(m, n)] = d_last;

    let mut b = DVector::zeros(m + 1);
    b.rows_mut(0, m).copy_from(&inner.b);
    b[m] = (0..n).filter(|&i| basic[i]).map(|i| d[i] * inner_opt.x[i]).sum();
    let mut c = DVector::zeros(n + 1);
    c.rows_mut(0, n).copy_from(&inner.c);
    c[n] = a_last_col.dot(&inner_opt.y) + s_hat_last;

    let x_star = inner_opt.x.clone().push(0.0);
    let s_star = inner_opt.s.clone().push(s_hat_last);
    let y_star = inner_opt.y.clone().push(0.0);
    let x0 = ext.x0.clone().push(ext.x0_last);
    let s0 = ext.s0.clone().push(ext.s0_last);

    let gap = (&x0 - &x_star).dot(&(&s0 - &s_star));
    let scale = 1.0 + (&x0 - &x_star).norm() * (&s0 - &s_star).norm();
    if gap.abs() > 1e-12 * scale {
        return Err(Error::Internal(format!(
            "orthogonality of the interior and optimal solutions violated: {gap:e}"
        )));
    }

    let mut out_partition = partition.clone();
    out_partition.nonbasic.push(n);
    let optimal = PrimalDual {
        x: x_star,
        y: y_star,
        s: s_star,
    };
    let flags = complementarity_flags(&a, &optimal, &out_partition);
    let cert = LoCertificate {
        interior: Some(PrimalDual { x: x0, y: ext.y0, s: s0 }),
        optimal: Some(optimal),
        partition: Some(out_partition),
        mu: None,
        flags,
        scaling: Scaling::default(),
    };
    Ok((LinearInstance { a, b, c }, cert))
}

fn apply_scaling(
    controls: &GenControls,
    (mut inst, mut cert): (LinearInstance, LoCertificate),
) -> Result<(LinearInstance, LoCertificate)> {
    let s = Scaling::for_targets(controls, inst.b.norm(), inst.c.norm())?;
    if s.is_identity() {
        return Ok((inst, cert));
    }
    inst.b *= s.primal;
    inst.c *= s.dual;
    cert.interior = cert.interior.map(|p| p.scaled(s));
    cert.optimal = cert.optimal.map(|p| p.scaled(s));
    cert.scaling = s;
    Ok((inst, cert))
}

/// Random instance with a prescribed (or random) interior point.
///
/// With `controls.mu` set, `s⁰ᵢ = μ / x⁰ᵢ`, so the duality gap is `nμ`.
pub fn gen_lo_interior(
    m: usize,
    n: usize,
    controls: &GenControls,
    x0: Option<DVector<f64>>,
    s0: Option<DVector<f64>>,
) -> Result<(LinearInstance, LoCertificate)> {
    check_dims(m, n)?;
    controls.validate()?;
    if controls.mu.is_some() && s0.is_some() {
        return arg("mu and s0 are mutually exclusive");
    }
    for (v, what) in [(&x0, "x0"), (&s0, "s0")] {
        if let Some(v) = v {
            check_len(v, n, what)?;
            check_positive(v, what)?;
        }
    }
    let mut rng = controls.rng();
    let a = gen_matrix(&controls.recipe(m, n), &mut rng)?;
    let x0 = x0.unwrap_or_else(|| rng.positive_vec(n));
    let s0 = match (s0, controls.mu) {
        (Some(s), _) => s,
        (None, Some(mu)) => x0.map(|x| mu / x),
        (None, None) => rng.positive_vec(n),
    };
    let y0 = rng.signed_vec(m);
    let (inst, mut cert) = assemble_interior(a, x0, y0, s0)?;
    cert.mu = controls.mu;
    apply_scaling(controls, (inst, cert))
}

fn draw_optimal(
    n: usize,
    m: usize,
    partition: &LoPartition,
    strict: bool,
    rng: &mut RngStream,
) -> PrimalDual {
    let basic = partition.is_basic(n);
    let mut x = DVector::zeros(n);
    let mut s = DVector::zeros(n);
    for i in 0..n {
        let keep = strict || rng.uniform(0.0, 1.0) >= 0.25;
        let v = if keep { rng.positive() } else { 0.0 };
        if basic[i] {
            x[i] = v;
        } else {
            s[i] = v;
        }
    }
    PrimalDual {
        x,
        y: rng.signed_vec(m),
        s,
    }
}

fn optimal_unscaled(
    m: usize,
    n: usize,
    partition: &LoPartition,
    controls: &GenControls,
    strict: bool,
    rng: &mut RngStream,
) -> Result<(LinearInstance, LoCertificate)> {
    check_dims(m, n)?;
    controls.validate()?;
    partition.validate(n)?;
    let a = gen_matrix(&controls.recipe(m, n), rng)?;
    let opt = draw_optimal(n, m, partition, strict, rng);
    assemble_optimal(a, opt, partition.clone())
}

/// Random instance with an optimal solution supported on `partition`.
///
/// `strict = false` zeroes each support entry with probability 1/4, so the
/// declared partition need not be the optimal one.
pub fn gen_lo_optimal(
    m: usize,
    n: usize,
    partition: &LoPartition,
    controls: &GenControls,
    strict: bool,
) -> Result<(LinearInstance, LoCertificate)> {
    controls.reject_mu("optimal-solution generation")?;
    if strict && partition.basic.is_empty() && controls.norm_b.is_some() {
        return Err(Error::Generation(
            "empty B forces b = 0, which cannot meet a norm target".into(),
        ));
    }
    let mut rng = controls.rng();
    let out = optimal_unscaled(m, n, partition, controls, strict, &mut rng)?;
    apply_scaling(controls, out)
}

/// Random instance of size `(m+1) × (n+1)` carrying both an optimal solution
/// supported on `partition` (plus the appended variable in `N`) and an interior point.
///
/// `simplified` takes `x⁰_B = x̂_B`, `s⁰_N = ŝ_N` and `y⁰_{1:m} = ŷ`, which makes `δ = 0`.
pub fn gen_lo_both(
    m: usize,
    n: usize,
    partition: &LoPartition,
    controls: &GenControls,
    simplified: bool,
) -> Result<(LinearInstance, LoCertificate)> {
    controls.reject_mu("combined generation")?;
    if simplified && partition.basic.is_empty() {
        return arg("the simplified construction with an empty B produces an all-zero appended row");
    }
    let mut rng = controls.rng();
    let (inner, inner_cert) = optimal_unscaled(m, n, partition, controls, true, &mut rng)?;
    let opt = inner_cert.optimal.expect("optimal solution present");
    let basic = partition.is_basic(n);
    let mut x0 = rng.positive_vec(n);
    let mut s0 = rng.positive_vec(n);
    let mut y0 = rng.signed_vec(m).push(rng.nonzero_pivot());
    if simplified {
        for i in 0..n {
            if basic[i] {
                x0[i] = opt.x[i];
            } else {
                s0[i] = opt.s[i];
            }
        }
        y0.rows_mut(0, m).copy_from(&opt.y);
    }
    let x0_last = rng.uniform(0.5, 1.5);
    let delta = extension_delta(&opt, partition, &x0, &s0);
    let s0_last = controls.above_positive_part(delta / x0_last);
    let ext = InteriorExtension {
        x0,
        s0,
        y0,
        x0_last,
        s0_last,
    };
    let out = assemble_both(&inner, &opt, partition, ext)?;
    apply_scaling(controls, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dmat, dvec};

    #[test]
    fn interior_toy() {
        let (inst, _) = assemble_interior(
            dmat(1, 2, &[1.0, 1.0]),
            dvec(&[1.0, 2.0]),
            dvec(&[2.0]),
            dvec(&[3.0, 1.0]),
        )
        .unwrap();
        assert_eq!(inst.b, dvec(&[3.0]));
        assert_eq!(inst.c, dvec(&[5.0, 3.0]));
    }

    #[test]
    fn interior_mu() {
        let controls = GenControls {
            mu: Some(1.0),
            ..GenControls::seeded(4)
        };
        let (_, cert) = gen_lo_interior(1, 2, &controls, Some(dvec(&[2.0, 4.0])), None).unwrap();
        let int = cert.interior.unwrap();
        assert_eq!(int.s, dvec(&[0.5, 0.25]));
        assert_eq!(int.x.dot(&int.s), 2.0);
    }

    #[test]
    fn interior_rejects_bad_input() {
        let c = GenControls::seeded(1);
        assert!(matches!(
            gen_lo_interior(1, 2, &c, Some(dvec(&[1.0, 0.0])), None),
            Err(Error::Argument(_))
        ));
        let cm = GenControls {
            mu: Some(1.0),
            ..c
        };
        assert!(matches!(
            gen_lo_interior(1, 2, &cm, None, Some(dvec(&[1.0, 1.0]))),
            Err(Error::Argument(_))
        ));
        assert!(matches!(gen_lo_interior(2, 2, &GenControls::default(), None, None), Err(Error::Argument(_))));
    }

    #[test]
    fn optimal_toy() {
        let (inst, cert) = assemble_optimal(
            dmat(1, 2, &[1.0, 1.0]),
            PrimalDual {
                x: dvec(&[2.0, 0.0]),
                y: dvec(&[1.0]),
                s: dvec(&[0.0, 3.0]),
            },
            LoPartition::leading(2, 1),
        )
        .unwrap();
        assert_eq!(inst.b, dvec(&[2.0]));
        assert_eq!(inst.c, dvec(&[1.0, 4.0]));
        let opt = cert.optimal.unwrap();
        assert_eq!(inst.c.dot(&opt.x), inst.b.dot(&opt.y));
        assert!(cert.flags.strictly_complementary);
        assert!(cert.flags.unique_basis);
    }

    #[test]
    fn both_toy() {
        let inner = LinearInstance {
            a: dmat(1, 2, &[1.0, 1.0]),
            b: dvec(&[2.0]),
            c: dvec(&[1.0, 4.0]),
        };
        let opt = PrimalDual {
            x: dvec(&[2.0, 0.0]),
            y: dvec(&[1.0]),
            s: dvec(&[0.0, 3.0]),
        };
        let p = LoPartition::leading(2, 1);
        let ext = InteriorExtension {
            x0: dvec(&[1.0, 1.0]),
            s0: dvec(&[1.0, 1.0]),
            y0: dvec(&[1.0, 1.0]),
            x0_last: 1.0,
            s0_last: 4.0,
        };
        assert_eq!(extension_delta(&opt, &p, &ext.x0, &ext.s0), -3.0);
        let (inst, cert) = assemble_both(&inner, &opt, &p, ext).unwrap();
        assert_eq!(inst.a, dmat(2, 3, &[1.0, 1.0, 0.0, -1.0, 2.0, -3.0]));
        assert_eq!(inst.b, dvec(&[2.0, -2.0]));
        assert_eq!(inst.c, dvec(&[1.0, 4.0, 1.0]));
        let o = cert.optimal.unwrap();
        assert_eq!(o.x, dvec(&[2.0, 0.0, 0.0]));
        assert_eq!(o.s, dvec(&[0.0, 3.0, 1.0]));
        let i = cert.interior.unwrap();
        assert_eq!(&inst.a * &i.x, inst.b);
        assert_eq!(inst.a.tr_mul(&i.y) + &i.s, inst.c);
        assert_eq!(cert.partition.unwrap().nonbasic, vec![1, 2]);
    }

    #[test]
    fn both_rejects_small_slack() {
        let inner = LinearInstance {
            a: dmat(1, 2, &[1.0, 1.0]),
            b: dvec(&[2.0]),
            c: dvec(&[1.0, 4.0]),
        };
        let opt = PrimalDual {
            x: dvec(&[2.0, 0.0]),
            y: dvec(&[1.0]),
            s: dvec(&[0.0, 3.0]),
        };
        let ext = InteriorExtension {
            x0: dvec(&[1.0, 1.0]),
            s0: dvec(&[1.0, 1.0]),
            y0: dvec(&[1.0, 1.0]),
            x0_last: 1.0,
            s0_last: 3.0,
        };
        let r = assemble_both(&inner, &opt, &LoPartition::leading(2, 1), ext);
        assert!(matches!(r, Err(Error::Argument(_))));
    }

    #[test]
    fn empty_basis_with_norm_target() {
        let c = GenControls {
            norm_b: Some(1.0),
            ..GenControls::seeded(1)
        };
        let r = gen_lo_optimal(1, 3, &LoPartition::leading(3, 0), &c, true);
        assert!(matches!(r, Err(Error::Generation(_))));
    }

    #[test]
    fn norm_targets_are_met() {
        let c = GenControls {
            norm_b: Some(2.0),
            norm_c: Some(5.0),
            ..GenControls::seeded(8)
        };
        let (inst, cert) = gen_lo_both(3, 6, &LoPartition::leading(6, 3), &c, false).unwrap();
        assert!((inst.b.norm() - 2.0).abs() < 1e-12);
        assert!((inst.c.norm() - 5.0).abs() < 1e-12);
        let o = cert.optimal.unwrap();
        assert!((&inst.a * &o.x - &inst.b).norm() < 1e-12);
    }

    #[test]
    fn partition_validation() {
        let p = LoPartition {
            basic: vec![0, 1],
            nonbasic: vec![1],
        };
        assert!(p.validate(2).is_err());
        assert!(LoPartition::leading(3, 1).validate(3).is_ok());
    }
}
