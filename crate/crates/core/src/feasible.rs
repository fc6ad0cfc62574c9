//! Convex compact feasible sets with exact Euclidean projection, and the
//! proximal subproblem
//!
//! ```text
//! ȳ(x,z) = argmin_{y ∈ X} ⟨z, y − x⟩ + (c/2)‖y − x‖²
//! η(x,z) = ⟨z, ȳ − x⟩ + (c/2)‖ȳ − x‖²  ≤ 0
//! ```
//!
//! whose minimizer is the projection of `x − z/c` onto `X`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Tolerance for the `x ∈ X` precondition of the proximal step.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Half-width of the default box used as an effectively unconstrained set.
pub const DEFAULT_BOX_RADIUS: f64 = 1e3;

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    /// `{y : lower ≤ y ≤ upper}`
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// `{y : ‖y − center‖ ≤ radius}`
    Ball { center: Vec<f64>, radius: f64 },
    /// `{y ≥ 0 : Σ yᵢ = scale}`
    Simplex { dim: usize, scale: f64 },
}

/// Result of the proximal subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDiagnostic {
    /// Gap value `η(x, z)`, never positive.
    pub eta: f64,
    /// Minimizer `ȳ(x, z)`.
    pub y_bar: Vec<f64>,
}

impl FeasibleSet {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Error::check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::InvalidSet("dimension must be positive".into()));
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite())
        {
            return Err(Error::InvalidSet("box needs finite lower ≤ upper".into()));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// The cube `[−radius, radius]^dim`.
    pub fn cube(dim: usize, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidSet(format!(
                "cube radius {radius} is negative"
            )));
        }
        Self::boxed(vec![-radius; dim], vec![radius; dim])
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidSet("dimension must be positive".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidSet("ball radius must be positive".into()));
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSet("dimension must be positive".into()));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidSet("simplex scale must be positive".into()));
        }
        Ok(FeasibleSet::Simplex { dim, scale })
    }

    pub fn dimension(&self) -> usize {
        match self {
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Simplex { dim, .. } => *dim,
        }
    }

    /// Largest constraint violation of `x` (0 inside the set).
    pub fn violation(&self, x: &[f64]) -> Result<f64> {
        Error::check_dim(self.dimension(), x.len())?;
        Ok(match self {
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (l, u))| (l - v).max(v - u).max(0.0))
                .fold(0.0, f64::max),
            FeasibleSet::Ball { center, radius } => (math::dist(x, center) - radius).max(0.0),
            FeasibleSet::Simplex { scale, .. } => {
                let neg = x.iter().map(|v| -v).fold(0.0, f64::max);
                let s: f64 = crate::sum::sum(x.iter().copied());
                neg.max((s - scale).abs())
            }
        })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.violation(x).map(|v| v <= tol).unwrap_or(false)
    }

    /// Euclidean projection `argmin_{y ∈ X} ‖y − p‖`.
    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mut y = p.to_vec();
        self.project_in_place(&mut y)?;
        Ok(y)
    }

    pub fn project_in_place(&self, y: &mut [f64]) -> Result<()> {
        Error::check_dim(self.dimension(), y.len())?;
        match self {
            FeasibleSet::Box { lower, upper } => {
                for (v, (l, u)) in y.iter_mut().zip(lower.iter().zip(upper)) {
                    *v = v.clamp(*l, *u);
                }
            }
            FeasibleSet::Ball { center, radius } => {
                let d = math::dist(y, center);
                if d > *radius {
                    let t = radius / d;
                    for (v, c) in y.iter_mut().zip(center) {
                        *v = c + t * (*v - c);
                    }
                }
            }
            FeasibleSet::Simplex { scale, .. } => project_simplex(y, *scale),
        }
        Ok(())
    }

    /// Solves the proximal subproblem at `(x, z)` with coefficient `c`.
    pub fn solve_prox_step(&self, x: &[f64], z: &[f64], c: f64) -> Result<GapDiagnostic> {
        if !(c > 0.0) {
            return Err(Error::param("prox coefficient c must be positive"));
        }
        Error::check_dim(self.dimension(), z.len())?;
        let violation = self.violation(x)?;
        if violation > FEASIBILITY_TOL {
            return Err(Error::Infeasible { violation });
        }
        let mut y_bar: Vec<f64> = x.iter().zip(z).map(|(xi, zi)| xi - zi / c).collect();
        self.project_in_place(&mut y_bar)?;
        let mut lin = 0.0;
        let mut sq = 0.0;
        for ((yi, xi), zi) in y_bar.iter().zip(x).zip(z) {
            let d = yi - xi;
            lin += zi * d;
            sq += d * d;
        }
        let eta = (lin + 0.5 * c * sq).min(0.0);
        Ok(GapDiagnostic { eta, y_bar })
    }
}

/// Sort-based projection onto `{y ≥ 0 : Σ y = scale}`.
fn project_simplex(y: &mut [f64], scale: f64) {
    let mut sorted = y.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - scale) / (j + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    for v in y.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}
