//! Independent verification of generated instances and their certificates.
//!
//! Every quantity is recomputed from the raw instance data. Certificate flags
//! only decide which checks are enabled.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::io::hexfloat;
use crate::linalg::{asymmetry, frob, numerical_rank, stack_vectorized, sym_eigenvalues};
use crate::lo::{LinearInstance, LoCertificate, PrimalDual};
use crate::sdo::{restricted_rank, SdoCertificate, SdoInstance, SdoSolution, SdoStructure};
use crate::soco::{cone_margin, cone_ranges, jordan_product, label_columns, sub_rank, ConeLabel, SocoCertificate, SocoInstance, SocoSolution};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Residuals pass when `‖r‖ ≤ residual·(1 + ‖rhs‖)`.
    pub residual: f64,
    /// Complementarity and orthogonality, relative to `1 + ‖x‖‖s‖`.
    pub complementarity: f64,
    /// Eigenvalues and cone margins of optimal solutions may dip to `−psd·(1 + λ_max)`.
    pub psd: f64,
    /// Singular values below `rank·σ_max` count as zero.
    pub rank: f64,
    /// Symmetric inputs with larger entrywise asymmetry are rejected.
    pub asymmetry: f64,
    /// Structural zeros and identities, relative to the data norm.
    pub structure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            complementarity: 1e-10,
            psd: 1e-9,
            rank: 1e-8,
            asymmetry: 1e-10,
            structure: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Primal,
    Dual,
    Complementarity,
    Cone,
    Partition,
    Structure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compare {
    AtMost,
    Above,
    AtLeast,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    #[serde(with = "hexfloat::scalar")]
    pub value: f64,
    pub compare: Compare,
    #[serde(with = "hexfloat::scalar")]
    pub threshold: f64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.compare {
            Compare::AtMost => "<=",
            Compare::Above => ">",
            Compare::AtLeast => ">=",
            Compare::Equal => "==",
        };
        let verdict = if self.passed { "ok" } else { "FAILED" };
        write!(f, "{:<36} {:>12.4e} {op} {:<12.4e} {verdict}", self.name, self.value, self.threshold)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Lo,
    Sdo,
    Soco,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Lo => "lo",
            Family::Sdo => "sdo",
            Family::Soco => "soco",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub family: Family,
    #[serde(with = "hexfloat::scalar")]
    pub primal_residual: f64,
    #[serde(with = "hexfloat::scalar")]
    pub dual_residual: f64,
    #[serde(with = "hexfloat::scalar")]
    pub complementarity_gap: f64,
    /// Smallest eigenvalue or cone margin over every certified block.
    #[serde(with = "hexfloat::opt_scalar")]
    pub min_cone_margin: Option<f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub tolerances: Tolerances,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failed_kinds(&self) -> Vec<CheckKind> {
        let mut kinds: Vec<CheckKind> = Vec::new();
        for c in self.failed() {
            if !kinds.contains(&c.kind) {
                kinds.push(c.kind);
            }
        }
        kinds
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family {}: {}", self.family, if self.passed { "passed" } else { "FAILED" })?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

/// Accumulates checks and the headline quantities.
struct Builder {
    family: Family,
    tol: Tolerances,
    checks: Vec<Check>,
    primal: f64,
    dual: f64,
    gap: f64,
    margin: Option<f64>,
}

impl Builder {
    fn new(family: Family, tol: Tolerances) -> Self {
        Self {
            family,
            tol,
            checks: Vec::new(),
            primal: 0.0,
            dual: 0.0,
            gap: 0.0,
            margin: None,
        }
    }

    fn push(&mut self, name: impl Into<String>, kind: CheckKind, value: f64, compare: Compare, threshold: f64) {
        let passed = match compare {
            Compare::AtMost => value <= threshold,
            Compare::Above => value > threshold,
            Compare::AtLeast => value >= threshold,
            Compare::Equal => value == threshold,
        };
        self.checks.push(Check {
            name: name.into(),
            kind,
            value,
            compare,
            threshold,
            passed,
        });
    }

    fn at_most(&mut self, name: impl Into<String>, kind: CheckKind, value: f64, threshold: f64) {
        self.push(name, kind, value, Compare::AtMost, threshold);
    }

    fn flag(&mut self, name: impl Into<String>, kind: CheckKind, ok: bool) {
        self.push(name, kind, f64::from(u8::from(ok)), Compare::Equal, 1.0);
    }

    fn primal(&mut self, label: &str, residual: f64, rhs_norm: f64) {
        self.primal = self.primal.max(residual);
        let t = self.tol.residual * (1.0 + rhs_norm);
        self.at_most(format!("{label}.primal-residual"), CheckKind::Primal, residual, t);
    }

    fn dual(&mut self, label: &str, residual: f64, rhs_norm: f64) {
        self.dual = self.dual.max(residual);
        let t = self.tol.residual * (1.0 + rhs_norm);
        self.at_most(format!("{label}.dual-residual"), CheckKind::Dual, residual, t);
    }

    fn complementarity(&mut self, name: &str, value: f64, scale: f64) {
        self.gap = self.gap.max(value);
        let t = self.tol.complementarity * (1.0 + scale);
        self.at_most(name, CheckKind::Complementarity, value, t);
    }

    fn interior(&mut self, name: String, margin: f64) {
        self.margin = Some(self.margin.map_or(margin, |m| m.min(margin)));
        self.push(name, CheckKind::Cone, margin, Compare::Above, 0.0);
    }

    fn member(&mut self, name: String, margin: f64, scale: f64) {
        self.margin = Some(self.margin.map_or(margin, |m| m.min(margin)));
        let t = -self.tol.psd * (1.0 + scale);
        self.push(name, CheckKind::Cone, margin, Compare::AtLeast, t);
    }

    fn rank(&mut self, name: &str, value: usize, expected: usize) {
        self.push(name, CheckKind::Structure, value as f64, Compare::Equal, expected as f64);
    }

    fn finish(self) -> VerifyReport {
        let passed = self.checks.iter().all(|c| c.passed);
        VerifyReport {
            family: self.family,
            primal_residual: self.primal,
            dual_residual: self.dual,
            complementarity_gap: self.gap,
            min_cone_margin: self.margin,
            checks: self.checks,
            passed,
            tolerances: self.tol,
        }
    }
}

fn min_entry(v: &DVector<f64>) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max_abs_over(v: &DVector<f64>, idx: &[usize]) -> f64 {
    idx.iter().map(|&i| v[i].abs()).fold(0.0, f64::max)
}

pub fn verify_lo(inst: &LinearInstance, cert: &LoCertificate, tol: &Tolerances) -> Result<VerifyReport> {
    let (m, n) = (inst.rows(), inst.cols());
    if inst.b.len() != m || inst.c.len() != n {
        return arg("LO instance shapes are inconsistent");
    }
    let mut r = Builder::new(Family::Lo, *tol);
    r.rank("rank(A)", numerical_rank(&inst.a, tol.rank), m);
    let shape_ok = |p: &PrimalDual| p.x.len() == n && p.s.len() == n && p.y.len() == m;

    let lo_point = |r: &mut Builder, label: &str, p: &PrimalDual, strict: bool| {
        r.primal(label, (&inst.a * &p.x - &inst.b).norm(), inst.b.norm());
        r.dual(label, (inst.a.tr_mul(&p.y) + &p.s - &inst.c).norm(), inst.c.norm());
        let (mx, ms) = (min_entry(&p.x), min_entry(&p.s));
        if strict {
            r.interior(format!("{label}.min(x)"), mx);
            r.interior(format!("{label}.min(s)"), ms);
        } else {
            r.member(format!("{label}.min(x)"), mx, p.x.amax());
            r.member(format!("{label}.min(s)"), ms, p.s.amax());
        }
    };

    if let Some(p) = &cert.interior {
        if !shape_ok(p) {
            return arg("interior solution shape mismatch");
        }
        lo_point(&mut r, "interior", p, true);
        if let Some(mu) = cert.mu {
            let dev = p.x.component_mul(&p.s).iter().map(|v| (v - mu).abs()).fold(0.0, f64::max);
            r.at_most("interior.centrality", CheckKind::Complementarity, dev, tol.complementarity * (1.0 + mu));
        }
    }
    if let Some(p) = &cert.optimal {
        if !shape_ok(p) {
            return arg("optimal solution shape mismatch");
        }
        lo_point(&mut r, "optimal", p, false);
        let prod = p.x.component_mul(&p.s);
        r.complementarity("optimal.complementarity", prod.amax(), p.x.norm() * p.s.norm());
        if let Some(part) = &cert.partition {
            part.validate(n)?;
            r.at_most("partition.x-outside-B", CheckKind::Partition, max_abs_over(&p.x, &part.nonbasic), 0.0);
            r.at_most("partition.s-outside-N", CheckKind::Partition, max_abs_over(&p.s, &part.basic), 0.0);
            if cert.flags.unique_basis {
                let cols = inst.a.select_columns(&part.basic);
                r.rank("rank(A_B)", numerical_rank(&cols, tol.rank), m);
                r.push("|B|", CheckKind::Partition, part.basic.len() as f64, Compare::Equal, m as f64);
            }
        }
        if cert.flags.strictly_complementary {
            r.interior("optimal.min(x+s)".into(), min_entry(&(&p.x + &p.s)));
        }
        if let Some(p0) = &cert.interior {
            let dx = &p0.x - &p.x;
            let ds = &p0.s - &p.s;
            r.complementarity("orthogonality", dx.dot(&ds).abs(), dx.norm() * ds.norm());
        }
    }
    Ok(r.finish())
}

fn check_sym(m: &DMatrix<f64>, what: &str, tol: &Tolerances) -> Result<()> {
    if !m.is_square() {
        return arg(format!("{what} is not square"));
    }
    if asymmetry(m) > tol.asymmetry * (1.0 + m.amax()) {
        return arg(format!("{what} is asymmetric beyond tolerance"));
    }
    Ok(())
}

fn extreme_eigs(m: &DMatrix<f64>) -> (f64, f64) {
    let e = sym_eigenvalues(m);
    match (e.first(), e.last()) {
        (Some(lo), Some(hi)) => (*lo, hi.abs().max(lo.abs())),
        _ => (0.0, 0.0),
    }
}

pub fn verify_sdo(inst: &SdoInstance, cert: &SdoCertificate, tol: &Tolerances) -> Result<VerifyReport> {
    let (m, n) = (inst.m(), inst.n());
    if inst.b.len() != m {
        return arg("b length must equal the number of constraints");
    }
    check_sym(&inst.c, "C", tol)?;
    for (i, a) in inst.a.iter().enumerate() {
        check_sym(a, &format!("A{}", i + 1), tol)?;
        if a.nrows() != n {
            return arg(format!("A{} has the wrong size", i + 1));
        }
    }
    let mut r = Builder::new(Family::Sdo, *tol);
    r.rank("independence(A_i)", numerical_rank(&stack_vectorized(&inst.a), tol.rank), m);

    let point = |r: &mut Builder, label: &str, p: &SdoSolution, strict: bool| -> Result<()> {
        if p.x.nrows() != n || p.s.nrows() != n || p.y.len() != m {
            return arg(format!("{label} solution shape mismatch"));
        }
        check_sym(&p.x, &format!("{label} X"), tol)?;
        check_sym(&p.s, &format!("{label} S"), tol)?;
        let res = DVector::from_iterator(m, inst.a.iter().zip(inst.b.iter()).map(|(a, b)| frob(a, &p.x) - b));
        r.primal(label, res.norm(), inst.b.norm());
        let mut d = &p.s - &inst.c;
        for (a, y) in inst.a.iter().zip(p.y.iter()) {
            d += a * *y;
        }
        r.dual(label, d.norm(), inst.c.norm());
        let (xl, xs) = extreme_eigs(&p.x);
        let (sl, ss) = extreme_eigs(&p.s);
        if strict {
            r.interior(format!("{label}.lambda-min(X)"), xl);
            r.interior(format!("{label}.lambda-min(S)"), sl);
        } else {
            r.member(format!("{label}.lambda-min(X)"), xl, xs);
            r.member(format!("{label}.lambda-min(S)"), sl, ss);
        }
        Ok(())
    };

    if let Some(p) = &cert.interior {
        point(&mut r, "interior", p, true)?;
        if let Some(mu) = cert.mu {
            let dev = (&p.x * &p.s - DMatrix::identity(n, n) * mu).norm();
            r.at_most("interior.centrality", CheckKind::Complementarity, dev, tol.complementarity * (1.0 + mu));
        }
    }
    let Some(opt) = &cert.optimal else {
        return Ok(r.finish());
    };
    point(&mut r, "optimal", opt, false)?;
    let scale = opt.x.norm() * opt.s.norm();
    r.complementarity("optimal.||XS||", (&opt.x * &opt.s).norm(), scale);
    if let Some(p0) = &cert.interior {
        let dx = &p0.x - &opt.x;
        let ds = &p0.s - &opt.s;
        r.complementarity("orthogonality", frob(&dx, &ds).abs(), dx.norm() * ds.norm());
    }
    if cert.flags.strictly_complementary {
        r.interior("optimal.lambda-min(X+S)".into(), extreme_eigs(&(&opt.x + &opt.s)).0);
    }

    let (Some(dims), Some(q)) = (&cert.dims, &cert.basis) else {
        return Ok(r.finish());
    };
    if dims.n() != n || q.nrows() != n || q.ncols() != n {
        return arg("partition dims or basis do not match the instance size");
    }
    let ortho = (q.tr_mul(q) - DMatrix::<f64>::identity(n, n)).norm();
    r.at_most("basis.orthonormality", CheckKind::Structure, ortho, tol.structure * n as f64);
    let q_b = q.columns(0, dims.n_b).clone_owned();
    let q_rest = q.columns(dims.n_b, n - dims.n_b).clone_owned();
    let q_n = q.columns(dims.n_start(), dims.n_n).clone_owned();
    let q_bt = q.columns(0, dims.n_start()).clone_owned();
    let zero_tol = tol.structure * (1.0 + opt.x.norm() + opt.s.norm());
    r.at_most("partition.X-outside-B", CheckKind::Partition, (&opt.x * &q_rest).norm(), zero_tol);
    r.at_most("partition.S-outside-N", CheckKind::Partition, (&opt.s * &q_bt).norm(), zero_tol);
    if dims.n_b > 0 {
        let xb = q_b.tr_mul(&opt.x) * &q_b;
        r.interior("partition.lambda-min(X_B)".into(), extreme_eigs(&xb).0);
    }
    if dims.n_n > 0 {
        let sn = q_n.tr_mul(&opt.s) * &q_n;
        r.interior("partition.lambda-min(S_N)".into(), extreme_eigs(&sn).0);
    }

    match &cert.structure {
        SdoStructure::General => {}
        SdoStructure::MaxComp { gamma } => {
            let a1 = &inst.a[0];
            let g = q.tr_mul(a1) * q;
            let a_scale = 1.0 + a1.norm();
            let diag = g.diagonal();
            let off = (&g - DMatrix::from_diagonal(&diag)).amax();
            r.at_most("maxcomp.offdiag(Q'A1Q)", CheckKind::Structure, off, tol.structure * a_scale);
            let stored = DVector::from_column_slice(gamma);
            let drift = if stored.len() == n { (&stored - &diag).amax() } else { f64::INFINITY };
            r.at_most("maxcomp.gamma-consistency", CheckKind::Structure, drift, tol.structure * a_scale);
            let gb = diag.rows(0, dims.n_b).amax();
            r.at_most("maxcomp.gamma_B=0", CheckKind::Structure, gb, tol.structure * a_scale);
            if dims.n_t > 0 {
                let t = dims.t_start()..dims.n_start();
                let recomputed = t.clone().map(|i| diag[i]).fold(f64::INFINITY, f64::min);
                let declared = t.map(|i| stored.get(i).copied().unwrap_or(0.0)).fold(f64::INFINITY, f64::min);
                r.push("maxcomp.gamma_T>0", CheckKind::Structure, recomputed.min(declared), Compare::Above, tol.structure * a_scale);
            }
            r.at_most("maxcomp.A1*Q_B=0", CheckKind::Structure, (a1 * &q_b).norm(), tol.structure * a_scale);
            if m > 1 {
                r.rank("maxcomp.rank{A_i*Q_B : i>=2}", restricted_rank(&inst.a, &q_b, 1..m), m - 1);
            }
        }
        SdoStructure::EmptyB => {
            let worst = inst
                .a
                .iter()
                .map(|a| {
                    let g = q.tr_mul(a) * q;
                    let off = (&g - DMatrix::from_diagonal(&g.diagonal())).amax();
                    let t = (dims.t_start()..dims.n_start()).map(|i| g[(i, i)].abs()).fold(0.0, f64::max);
                    off.max(t) / (1.0 + a.norm())
                })
                .fold(0.0, f64::max);
            r.at_most("empty-B.diagonal-profiles", CheckKind::Structure, worst, tol.structure);
            r.at_most("empty-B.X*=0", CheckKind::Partition, opt.x.amax(), 0.0);
        }
    }
    Ok(r.finish())
}

pub fn verify_soco(inst: &SocoInstance, cert: &SocoCertificate, tol: &Tolerances) -> Result<VerifyReport> {
    let (m, n) = (inst.rows(), inst.cols());
    if inst.cone_dims.iter().sum::<usize>() != n || inst.cone_dims.contains(&0) {
        return arg("cone dimensions do not match the column count");
    }
    if inst.b.len() != m || inst.c.len() != n {
        return arg("SOCO instance shapes are inconsistent");
    }
    let ranges = cone_ranges(&inst.cone_dims);
    let mut r = Builder::new(Family::Soco, *tol);
    r.rank("rank(A)", numerical_rank(&inst.a, tol.rank), m);

    let point = |r: &mut Builder, label: &str, p: &SocoSolution, strict: bool| -> Result<()> {
        if p.x.len() != n || p.s.len() != n || p.y.len() != m {
            return arg(format!("{label} solution shape mismatch"));
        }
        r.primal(label, (&inst.a * &p.x - &inst.b).norm(), inst.b.norm());
        r.dual(label, (inst.a.tr_mul(&p.y) + &p.s - &inst.c).norm(), inst.c.norm());
        let worst = |v: &DVector<f64>| {
            ranges
                .iter()
                .map(|rg| cone_margin(&v.as_slice()[rg.clone()]))
                .fold(f64::INFINITY, f64::min)
        };
        let (mx, ms) = (worst(&p.x), worst(&p.s));
        if strict {
            r.interior(format!("{label}.cone-margin(x)"), mx);
            r.interior(format!("{label}.cone-margin(s)"), ms);
        } else {
            r.member(format!("{label}.cone-margin(x)"), mx, p.x.amax());
            r.member(format!("{label}.cone-margin(s)"), ms, p.s.amax());
        }
        Ok(())
    };

    if let Some(p) = &cert.interior {
        point(&mut r, "interior", p, true)?;
        if let Some(mu) = cert.mu {
            let mut dev: f64 = 0.0;
            for rg in &ranges {
                let mut j = jordan_product(&p.x.as_slice()[rg.clone()], &p.s.as_slice()[rg.clone()])?;
                j[0] -= mu;
                dev = dev.max(j.amax());
            }
            r.at_most("interior.centrality", CheckKind::Complementarity, dev, tol.complementarity * (1.0 + mu));
        }
    }
    let Some(opt) = &cert.optimal else {
        return Ok(r.finish());
    };
    point(&mut r, "optimal", opt, false)?;
    let mut jordan: f64 = 0.0;
    for rg in &ranges {
        jordan = jordan.max(jordan_product(&opt.x.as_slice()[rg.clone()], &opt.s.as_slice()[rg.clone()])?.amax());
    }
    r.complementarity("optimal.jordan", jordan, opt.x.norm() * opt.s.norm());
    if let Some(p0) = &cert.interior {
        let dx = &p0.x - &opt.x;
        let ds = &p0.s - &opt.s;
        r.complementarity("orthogonality", dx.dot(&ds).abs(), dx.norm() * ds.norm());
    }

    let Some(labels) = &cert.partition else {
        return Ok(r.finish());
    };
    if labels.len() != ranges.len() {
        return arg("partition length does not match the number of cones");
    }
    let mut label_ok = true;
    let mut worst = String::new();
    for (k, (rg, l)) in ranges.iter().zip(labels).enumerate() {
        let x = &opt.x.as_slice()[rg.clone()];
        let s = &opt.s.as_slice()[rg.clone()];
        if !label_semantics(*l, x, s, tol) {
            label_ok = false;
            if worst.is_empty() {
                worst = format!("cone {k} ({l})");
            }
        }
    }
    let name = if label_ok { "partition.labels".to_string() } else { format!("partition.labels[{worst}]") };
    r.flag(name, CheckKind::Partition, label_ok);

    if cert.flags.maximally_complementary {
        maxcomp_structure(&mut r, inst, cert, opt, labels, tol);
    }
    Ok(r.finish())
}

fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|t| *t == 0.0)
}

fn on_boundary(v: &[f64], tol: &Tolerances) -> bool {
    let h = v[0];
    h > 0.0 && cone_margin(v).abs() <= tol.structure * (1.0 + h) && !is_zero(&v[1..])
}

fn label_semantics(l: ConeLabel, x: &[f64], s: &[f64], tol: &Tolerances) -> bool {
    match l {
        ConeLabel::B => is_zero(s) && cone_margin(x) > 0.0,
        ConeLabel::N => is_zero(x) && cone_margin(s) > 0.0,
        ConeLabel::T1 => is_zero(x) && is_zero(s),
        ConeLabel::T2 => is_zero(s) && x.len() > 1 && on_boundary(x, tol),
        ConeLabel::T3 => is_zero(x) && s.len() > 1 && on_boundary(s, tol),
        ConeLabel::R => {
            if x.len() < 2 || !on_boundary(x, tol) || !on_boundary(s, tol) {
                return false;
            }
            let ratio = s[0] / x[0];
            x[1..]
                .iter()
                .zip(&s[1..])
                .all(|(xi, si)| (si + ratio * xi).abs() <= tol.structure * (1.0 + s[0]))
        }
    }
}

fn maxcomp_structure(r: &mut Builder, inst: &SocoInstance, cert: &SocoCertificate, opt: &SocoSolution, labels: &[ConeLabel], tol: &Tolerances) {
    use ConeLabel::*;
    let (m, a) = (inst.rows(), &inst.a);
    let ranges = cone_ranges(&inst.cone_dims);
    let skip = cert.appended_column;
    let a_scale = 1.0 + a.amax();

    let mut row1_ok = true;
    for (rg, l) in ranges.iter().zip(labels) {
        for j in rg.clone().filter(|j| Some(*j) != skip) {
            let v = a[(0, j)];
            let ok = match l {
                T1 | T3 if j == rg.start => v > 0.0,
                T1 | T3 | B | R | T2 => v == 0.0,
                N => true,
            };
            row1_ok &= ok;
        }
    }
    r.flag("maxcomp.row1-pattern", CheckKind::Structure, row1_ok);
    let b1 = (a.row(0) * &opt.x)[0].abs();
    r.at_most("maxcomp.b1=0", CheckKind::Structure, b1, 1e-12 * a_scale * (1.0 + opt.x.norm()));

    let t2: Vec<usize> = (0..labels.len()).filter(|k| labels[*k] == T2).collect();
    let mut pattern_ok = t2.len() + 1 < m;
    let mut boundary: f64 = 0.0;
    for (k, &p) in t2.iter().enumerate() {
        let row = k + 1;
        if row >= m {
            break;
        }
        let rg = &ranges[p];
        let x = &opt.x.as_slice()[rg.clone()];
        let t = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        for j in (0..a.ncols()).filter(|j| Some(*j) != skip) {
            let expected = if j == rg.start {
                -1.0
            } else if rg.contains(&j) {
                x[j - rg.start] / t
            } else {
                0.0
            };
            pattern_ok &= (a[(row, j)] - expected).abs() <= tol.structure;
        }
        let dot: f64 = rg.clone().map(|j| a[(row, j)] * opt.x[j]).sum();
        boundary = boundary.max(dot.abs() / (1.0 + x[0]));
    }
    r.flag("maxcomp.T2-row-pattern", CheckKind::Structure, pattern_ok);
    r.at_most("maxcomp.T2-boundary-identity", CheckKind::Structure, boundary, 1e-12);

    let support = label_columns(&inst.cone_dims, labels, &[B, R, T2]);
    r.rank("maxcomp.rank[A^B A^R A^T2](rows>=2)", sub_rank(a, 1..m, &support, None), m - 1);
    r.rank("maxcomp.rank(diag(x*)A')(rows>=2)", sub_rank(a, 1..m, &support, Some(&opt.x)), m - 1);
}

/// Result of exhaustive vertex enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    /// `+∞` when no feasible basis exists, `−∞` when a feasible basis has an improving ray.
    pub value: f64,
    pub vertex: DVector<f64>,
}

pub const BRUTE_FORCE_MAX_N: usize = 12;

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Optimum of `min cᵀx, Ax = b, x ≥ 0` by enumerating every basis.
///
/// Unboundedness is detected only through a negative reduced cost with a
/// nonnegative edge direction at some feasible basis.
pub fn lo_bruteforce_optimal(inst: &LinearInstance) -> Result<BruteForce> {
    let (m, n) = (inst.rows(), inst.cols());
    if n > BRUTE_FORCE_MAX_N {
        return arg(format!("brute-force enumeration is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}"));
    }
    if m == 0 || m > n {
        return arg("brute force needs 1 <= m <= n");
    }
    let feas_tol = 1e-9 * (1.0 + inst.b.amax());
    let mut best = BruteForce {
        value: f64::INFINITY,
        vertex: DVector::zeros(n),
    };
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let a_b = inst.a.select_columns(&idx);
        let lu = a_b.clone().lu();
        let sv = a_b.singular_values();
        let nonsingular = sv.min() > 1e-10 * sv.max().max(1.0);
        if nonsingular {
            if let Some(x_b) = lu.solve(&inst.b) {
                if x_b.iter().all(|v| *v >= -feas_tol) {
                    let mut x = DVector::zeros(n);
                    for (k, &j) in idx.iter().enumerate() {
                        x[j] = x_b[k].max(0.0);
                    }
                    let value = inst.c.dot(&x);
                    if value < best.value {
                        best = BruteForce { value, vertex: x };
                    }
                    if improving_ray(inst, &idx, &a_b) {
                        return Ok(BruteForce {
                            value: f64::NEG_INFINITY,
                            vertex: best.vertex,
                        });
                    }
                }
            }
        }
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    Ok(best)
}

fn improving_ray(inst: &LinearInstance, basis: &[usize], a_b: &DMatrix<f64>) -> bool {
    let Some(y) = a_b.transpose().lu().solve(&inst.c.select_rows(basis)) else {
        return false;
    };
    let lu = a_b.clone().lu();
    (0..inst.cols()).filter(|j| !basis.contains(j)).any(|j| {
        let col = inst.a.column(j).clone_owned();
        let reduced = inst.c[j] - col.dot(&y);
        if reduced >= -1e-12 * (1.0 + inst.c.amax()) {
            return false;
        }
        match lu.solve(&col) {
            Some(d) => d.iter().all(|v| *v <= 1e-12),
            None => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controls::GenControls;
    use crate::linalg::{dmat, dvec};
    use crate::lo::{gen_lo_both, gen_lo_optimal, LoPartition};
    use crate::sdo::{assemble_interior, gen_sdo_maxcomp};
    use crate::soco::{gen_soco_maxcomp, gen_soco_optimal};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn brute_force_toy() {
        let inst = LinearInstance {
            a: dmat(1, 2, &[1.0, 1.0]),
            b: dvec(&[2.0]),
            c: dvec(&[1.0, 4.0]),
        };
        let bf = lo_bruteforce_optimal(&inst).unwrap();
        assert_eq!(bf.value, 2.0);
        assert_eq!(bf.vertex, dvec(&[2.0, 0.0]));
    }

    #[test]
    fn brute_force_zero_rhs() {
        let inst = LinearInstance {
            a: dmat(1, 3, &[1.0, -1.0, 2.0]),
            b: dvec(&[0.0]),
            c: dvec(&[1.0, 1.0, 0.5]),
        };
        assert_eq!(lo_bruteforce_optimal(&inst).unwrap().value, 0.0);
    }

    #[test]
    fn brute_force_unbounded_and_infeasible() {
        let unb = LinearInstance {
            a: dmat(1, 2, &[1.0, -1.0]),
            b: dvec(&[1.0]),
            c: dvec(&[0.0, -1.0]),
        };
        assert_eq!(lo_bruteforce_optimal(&unb).unwrap().value, f64::NEG_INFINITY);
        let inf = LinearInstance {
            a: dmat(1, 2, &[1.0, 1.0]),
            b: dvec(&[-1.0]),
            c: dvec(&[1.0, 1.0]),
        };
        assert_eq!(lo_bruteforce_optimal(&inf).unwrap().value, f64::INFINITY);
        let big = LinearInstance {
            a: DMatrix::zeros(1, 13),
            b: dvec(&[0.0]),
            c: DVector::zeros(13),
        };
        assert!(lo_bruteforce_optimal(&big).is_err());
    }

    #[test]
    fn lo_both_passes_and_faults_are_localized() {
        let (inst, cert) = gen_lo_both(3, 6, &LoPartition::leading(6, 3), &GenControls::seeded(1), false).unwrap();
        let rep = verify_lo(&inst, &cert, &tol()).unwrap();
        assert!(rep.passed, "{rep}");
        let mut bad = inst.clone();
        bad.b[0] += 1e-3;
        assert_eq!(verify_lo(&bad, &cert, &tol()).unwrap().failed_kinds(), vec![CheckKind::Primal]);
        let mut bad = inst;
        bad.c[2] += 1e-3;
        assert_eq!(verify_lo(&bad, &cert, &tol()).unwrap().failed_kinds(), vec![CheckKind::Dual]);
    }

    #[test]
    fn lo_complementarity_violation() {
        let (inst, mut cert) = gen_lo_optimal(2, 4, &LoPartition::leading(4, 2), &GenControls::seeded(3), true).unwrap();
        let opt = cert.optimal.as_mut().unwrap();
        opt.s[0] = 1.0 / opt.x[0];
        let rep = verify_lo(&inst, &cert, &tol()).unwrap();
        assert!(!rep.passed);
        assert!(!rep.check("optimal.complementarity").unwrap().passed);
    }

    #[test]
    fn sdo_interior_toy_and_indefinite_point() {
        let (inst, cert) = assemble_interior(
            vec![dmat(2, 2, &[1.0, 0.0, 0.0, 2.0])],
            DMatrix::identity(2, 2),
            dvec(&[1.0]),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        assert!(verify_sdo(&inst, &cert, &tol()).unwrap().passed);
        let mut bad = cert.clone();
        bad.interior.as_mut().unwrap().x[(1, 1)] = -1e-6;
        let rep = verify_sdo(&inst, &bad, &tol()).unwrap();
        assert!(!rep.check("interior.lambda-min(X)").unwrap().passed);
    }

    #[test]
    fn sdo_asymmetric_input_rejected() {
        let (mut inst, cert) = gen_sdo_maxcomp(3, 4, 1, 1, &GenControls::seeded(2)).unwrap();
        inst.c[(0, 1)] += 1e-6;
        assert!(verify_sdo(&inst, &cert, &tol()).is_err());
    }

    #[test]
    fn sdo_maxcomp_gamma_t_zero_fails() {
        let (inst, mut cert) = gen_sdo_maxcomp(3, 4, 1, 1, &GenControls::seeded(2)).unwrap();
        assert!(verify_sdo(&inst, &cert, &tol()).unwrap().passed);
        if let SdoStructure::MaxComp { gamma } = &mut cert.structure {
            gamma[1] = 0.0;
        }
        let rep = verify_sdo(&inst, &cert, &tol()).unwrap();
        assert_eq!(rep.failed_kinds(), vec![CheckKind::Structure]);
    }

    #[test]
    fn soco_label_check_detects_interior_t2() {
        use ConeLabel::*;
        let (inst, mut cert) = gen_soco_optimal(2, &[3, 2, 2], &[T2, B, N], &GenControls::seeded(5)).unwrap();
        assert!(verify_soco(&inst, &cert, &tol()).unwrap().passed);
        cert.optimal.as_mut().unwrap().x[0] += 0.5;
        let rep = verify_soco(&inst, &cert, &tol()).unwrap();
        assert!(rep.failed().any(|c| c.name.starts_with("partition.labels")));
    }

    #[test]
    fn soco_maxcomp_passes() {
        use ConeLabel::*;
        let (inst, cert) = gen_soco_maxcomp(3, &[3, 3, 2, 2, 1], &[T2, B, R, T3, N], &GenControls::seeded(7)).unwrap();
        let rep = verify_soco(&inst, &cert, &tol()).unwrap();
        assert!(rep.passed, "{rep}");
    }
}
