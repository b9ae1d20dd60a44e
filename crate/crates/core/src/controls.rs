use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::randkit::{MatrixRecipe, RngStream};

/// Knobs shared by every generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenControls {
    pub seed: u64,
    pub stream: u32,
    /// Target fraction of nonzero entries in the constraint data.
    pub density: Option<f64>,
    /// Condition number of `A` (LO, SOCO) or of the positive definite solution blocks (SDO).
    pub cond: Option<f64>,
    /// Euclidean norm of `b` after post-scaling the primal quantities.
    pub norm_b: Option<f64>,
    /// Norm of `c` (Frobenius norm of `C` for SDO) after post-scaling the dual quantities.
    pub norm_c: Option<f64>,
    /// Central path parameter for interior solutions: `x⁰ᵢ s⁰ᵢ = μ`.
    pub mu: Option<f64>,
    /// Floor of every strict-inequality margin.
    pub margin: f64,
    /// Lower bound on the eigenvalues of generated positive definite blocks.
    pub eigen_floor: f64,
}

impl Default for GenControls {
    fn default() -> Self {
        Self {
            seed: 0,
            stream: 0,
            density: None,
            cond: None,
            norm_b: None,
            norm_c: None,
            mu: None,
            margin: 0.1,
            eigen_floor: 0.0,
        }
    }
}

impl GenControls {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn rng(&self) -> RngStream {
        RngStream::new(self.seed, self.stream)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.density {
            if !(d > 0.0 && d <= 1.0) {
                return arg(format!("density must lie in (0, 1], got {d}"));
            }
        }
        if let Some(c) = self.cond {
            if !(c >= 1.0) || !c.is_finite() {
                return arg(format!("condition target must be >= 1, got {c}"));
            }
        }
        for (name, v) in [("norm-b", self.norm_b), ("norm-c", self.norm_c)] {
            if let Some(t) = v {
                if !(t > 0.0) || !t.is_finite() {
                    return arg(format!("{name} must be > 0, got {t}"));
                }
            }
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0) || !mu.is_finite() {
                return arg(format!("mu must be > 0, got {mu}"));
            }
            if self.norm_b.is_some() || self.norm_c.is_some() {
                return arg("mu cannot be combined with a norm target: rescaling changes the gap");
            }
        }
        if !(self.margin > 0.0) || !self.margin.is_finite() {
            return arg(format!("margin must be > 0, got {}", self.margin));
        }
        if !(self.eigen_floor >= 0.0) || !self.eigen_floor.is_finite() {
            return arg(format!("eigen floor must be >= 0, got {}", self.eigen_floor));
        }
        Ok(())
    }

    pub(crate) fn reject_mu(&self, generator: &str) -> Result<()> {
        if self.mu.is_some() {
            return arg(format!("mu applies to interior-only generation, not {generator}"));
        }
        Ok(())
    }

    pub(crate) fn recipe(&self, rows: usize, cols: usize) -> MatrixRecipe {
        let mut r = MatrixRecipe::dense(rows, cols).with_cond(self.cond);
        if let Some(d) = self.density {
            r = r.with_density(d);
        }
        r
    }

    /// Value strictly above `(−ratio)⁺`: `(−ratio)⁺ + max(margin, margin·|ratio|)`.
    pub(crate) fn above_positive_part(&self, ratio: f64) -> f64 {
        (-ratio).max(0.0) + self.margin.max(self.margin * ratio.abs())
    }
}

/// Factors applied to primal (`x`, `b`) and dual (`y`, `s`, `c`) data after assembly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub primal: f64,
    pub dual: f64,
}

impl Default for Scaling {
    fn default() -> Self {
        Self {
            primal: 1.0,
            dual: 1.0,
        }
    }
}

impl Scaling {
    pub(crate) fn for_targets(controls: &GenControls, b_norm: f64, c_norm: f64) -> Result<Self> {
        let factor = |target: Option<f64>, norm: f64, what: &str| -> Result<f64> {
            match target {
                None => Ok(1.0),
                Some(_) if norm == 0.0 => Err(Error::Generation(format!(
                    "{what} is identically zero and cannot be scaled to a norm target"
                ))),
                Some(t) => Ok(t / norm),
            }
        };
        Ok(Self {
            primal: factor(controls.norm_b, b_norm, "b")?,
            dual: factor(controls.norm_c, c_norm, "c")?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.primal == 1.0 && self.dual == 1.0
    }
}
