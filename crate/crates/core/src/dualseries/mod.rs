//! Dual series equations of the mixed boundary-value problem on a circle with
//! one absorbing window of angular half-width ε centred at θ = π:
//!
//! c₀/2 + Σ c_n/(1+H_n) cos nθ = 0   on (π−ε, π]
//! Σ n c_n cos nθ = F                 on [0, π−ε)
//!
//! Two independent solvers are provided: the Abel/Fredholm route with a
//! two-term Neumann series ([`solve_h1_neumann`]) and a collocation solver
//! with an edge-singular window-flux basis ([`solve_collocation`]).

mod abel;
mod collocation;
mod identities;
mod neumann;

pub use abel::abel_check_integral;
pub use collocation::solve_collocation;
pub use identities::{heaviside_identity_residual, heaviside_partial_sum, log_integral_identity};
pub use neumann::{neumann_first_order, solve_h1_neumann};

use crate::quadrature::chebyshev_nodes;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;
use thiserror::Error;

/// Truncation order used when none is given.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualSeriesError {
    #[error("{name} = {value} is outside its domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("perturbation sequence is invalid: {0}")]
    Sequence(String),
    #[error("Neumann series does not contract: operator norm estimate {operator_norm:.4} >= 1")]
    Contraction { operator_norm: f64 },
    #[error("collocation system is ill-conditioned: condition number {condition:.3e}")]
    IllConditioned { condition: f64 },
    #[error("singular point: {0}")]
    Singular(&'static str),
}

fn require(
    ok: bool,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<(), DualSeriesError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(DualSeriesError::Domain {
            name,
            value,
            requirement,
        })
    }
}

/// The sequence H_n of the dual series problem (H₀ = 0).
#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation {
    /// H_n ≡ 0: the disk.
    None,
    /// H_n = −2β²ⁿ/(1+β²ⁿ). This is the annulus with β = R1/R2 and also the
    /// rectangle, where tanh(πnb/a) − 1 takes this form with β = exp(−πb/a).
    Geometric { beta: f64 },
    /// Explicit H_1, H_2, …; later terms are zero.
    Sequence(Vec<f64>),
}

impl Perturbation {
    pub fn h(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self {
            Perturbation::None => 0.0,
            Perturbation::Geometric { beta } => {
                let q = beta.powi(2 * n as i32);
                -2.0 * q / (1.0 + q)
            }
            Perturbation::Sequence(h) => h.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// Coefficient κ of the truncated kernel κ cos²(s/2) sin t.
    pub(crate) fn kernel_coefficient(&self) -> f64 {
        match self {
            Perturbation::None => 0.0,
            Perturbation::Geometric { beta } => 2.0 * beta * beta,
            Perturbation::Sequence(_) => -self.h(1),
        }
    }

    /// β of the geometric form, or the value implied by H_1 for an explicit sequence.
    pub fn beta(&self) -> f64 {
        match self {
            Perturbation::None => 0.0,
            Perturbation::Geometric { beta } => *beta,
            Perturbation::Sequence(_) => (0.5 * self.h(1).abs()).sqrt(),
        }
    }

    /// Number of leading terms with |H_n| above 1e-18.
    pub fn significant_terms(&self) -> usize {
        match self {
            Perturbation::None => 0,
            Perturbation::Geometric { beta } => {
                if *beta == 0.0 {
                    0
                } else {
                    ((1e-18f64).ln() / (2.0 * beta.ln())).ceil().max(1.0) as usize
                }
            }
            Perturbation::Sequence(h) => h.len(),
        }
    }

    /// Geometric decay rate exp(slope) of a least-squares fit of log|H_n|.
    pub fn decay_rate(&self) -> f64 {
        let pts: Vec<(f64, f64)> = (1..=self.significant_terms().max(1))
            .map(|n| (n as f64, self.h(n).abs()))
            .filter(|(_, h)| *h > 0.0)
            .map(|(n, h)| (n, h.ln()))
            .collect();
        if pts.len() < 2 {
            return 0.0;
        }
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        (sxy / sxx).exp()
    }

    fn validate(&self) -> Result<(), DualSeriesError> {
        match self {
            Perturbation::None => Ok(()),
            Perturbation::Geometric { beta } => {
                require((0.0..1.0).contains(beta), "beta", *beta, "must lie in [0, 1)")
            }
            Perturbation::Sequence(h) => {
                if let Some(bad) = h.iter().find(|v| !v.is_finite() || **v <= -1.0) {
                    return Err(DualSeriesError::Sequence(format!(
                        "H_n = {bad} must be finite and exceed -1"
                    )));
                }
                let rate = self.decay_rate();
                if rate >= 1.0 {
                    return Err(DualSeriesError::Sequence(format!(
                        "fitted geometric decay rate {rate:.4} is not below 1"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// A dual series problem: perturbation H, flux constant F, window half-width ε
/// and truncation order N of the reported coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSeriesProblem {
    perturbation: Perturbation,
    rhs: f64,
    eps: f64,
    order: usize,
}

impl DualSeriesProblem {
    pub fn new(
        perturbation: Perturbation,
        rhs: f64,
        eps: f64,
        order: usize,
    ) -> Result<Self, DualSeriesError> {
        perturbation.validate()?;
        require(rhs > 0.0, "rhs", rhs, "flux constant must be positive")?;
        require(eps > 0.0 && eps < PI, "eps", eps, "window half-width must lie in (0, π)")?;
        if order < 8 {
            return Err(DualSeriesError::Domain {
                name: "order",
                value: order as f64,
                requirement: "truncation order must be at least 8",
            });
        }
        Ok(Self {
            perturbation,
            rhs,
            eps,
            order,
        })
    }

    /// Annulus R1 < r < R2 with a window of angular half-width ε on the inner circle.
    pub fn annulus(r1: f64, r2: f64, eps: f64, order: usize) -> Result<Self, DualSeriesError> {
        require(r1 > 0.0 && r2 > r1, "R1", r1, "need 0 < R1 < R2")?;
        Self::new(
            Perturbation::Geometric { beta: r1 / r2 },
            0.5 * (r2 * r2 - r1 * r1),
            eps,
            order,
        )
    }

    /// Rectangle (0,a)×(0,b) with a corner window of length ε on the top edge,
    /// after stretching x ↦ πx/a: half-width πε/a and F = ab/π.
    pub fn rectangle(a: f64, b: f64, eps: f64, order: usize) -> Result<Self, DualSeriesError> {
        require(a > 0.0 && b > 0.0, "a", a, "sides must be positive")?;
        require(eps > 0.0 && eps < a, "eps", eps, "window length must lie in (0, a)")?;
        Self::new(
            Perturbation::Geometric {
                beta: (-PI * b / a).exp(),
            },
            a * b / PI,
            PI * eps / a,
            order,
        )
    }

    /// Disk-type problem with H ≡ 0.
    pub fn unperturbed(rhs: f64, eps: f64, order: usize) -> Result<Self, DualSeriesError> {
        Self::new(Perturbation::None, rhs, eps, order)
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Total window flux −2πF demanded by compatibility (−|Ω| for the annulus).
    pub fn total_flux(&self) -> f64 {
        -2.0 * PI * self.rhs
    }

    fn summary(&self) -> ProblemSummary {
        ProblemSummary {
            rhs: self.rhs,
            eps: self.eps,
            beta: self.perturbation.beta(),
            order: self.order,
        }
    }
}

/// The truncated kernel κ̃(t, s) = 2β² cos²(s/2) sin t; its O(β⁴) remainder is
/// dropped by construction.
pub fn kernel_tilde(t: f64, s: f64, beta: f64) -> f64 {
    let c = (0.5 * s).cos();
    2.0 * beta * beta * c * c * t.sin()
}

/// Right-hand side z(t) of the annulus Fredholm equation,
/// z(t) = ((R2²−R1²)/π)·d/dt ∫₀ᵗ u sin(u/2)/√(cos u − cos t) du.
pub fn abel_rhs(t: f64, r1: f64, r2: f64) -> Result<f64, DualSeriesError> {
    require(t > 0.0 && t < PI, "t", t, "must lie in (0, π)")?;
    require(r1 > 0.0 && r2 > r1, "R1", r1, "need 0 < R1 < R2")?;
    Ok(abel_source(t, 0.5 * (r2 * r2 - r1 * r1)))
}

/// z(t) = (2F/π) I′(t) for a general flux constant F.
pub(crate) fn abel_source(t: f64, rhs: f64) -> f64 {
    2.0 * rhs / PI * abel::abel_integral(t).1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NeumannSeries,
    Collocation,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::NeumannSeries => "neumann-series",
            Method::Collocation => "collocation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub rhs: f64,
    pub eps: f64,
    pub beta: f64,
    pub order: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Largest Dirichlet residual on the collocation points, relative to c₀.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirichlet: Option<f64>,
    /// |Σ c_n sin n(π−ε) − F(π−ε)|/(πF): the integrated flux condition at the
    /// window edge, evaluated with the full (untruncated) kernel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_balance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub problem: ProblemSummary,
    /// c₀ ..= c_N.
    pub c: Vec<f64>,
    pub c0: f64,
    /// (t, h₁(t)) on the quadrature grid over (0, π−ε); empty for collocation.
    pub h1: Vec<[f64; 2]>,
    /// (θ, f(θ) − F) at Chebyshev points of the whole window (π−ε, π+ε),
    /// where f is the flux density Σ n c_n cos nθ.
    pub flux_profile: Vec<[f64; 2]>,
    /// |∫_window (f − F) dθ + 2πF| / (2πF).
    pub compatibility_residual: f64,
    pub method: Method,
    pub residuals: Residuals,
}

/// Number of Chebyshev points at which flux profiles are sampled.
pub(crate) const FLUX_SAMPLES: usize = 32;

/// Window positions x_j ∈ (−1, 1), θ = π + εx, used for flux profiles.
pub(crate) fn flux_nodes() -> Vec<f64> {
    let mut x = chebyshev_nodes(FLUX_SAMPLES);
    x.reverse();
    x
}

/// Product Gauss–Chebyshev estimate of the compatibility residual from flux
/// samples taken at [`flux_nodes`].
pub(crate) fn compatibility_from_profile(profile: &[[f64; 2]], eps: f64, rhs: f64) -> f64 {
    let m = profile.len() as f64;
    let integral: f64 = profile
        .iter()
        .map(|[theta, g]| {
            let x = (theta - PI) / eps;
            g * (1.0 - x * x).sqrt()
        })
        .sum::<f64>()
        * PI
        / m
        * eps;
    (integral + 2.0 * PI * rhs).abs() / (2.0 * PI * rhs)
}

impl SeriesSolution {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series solution serializes")
    }

    /// Writes the flux profile as `angle,flux` CSV rows with a header.
    pub fn write_flux_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "angle,flux")?;
        for [a, f] in &self.flux_profile {
            writeln!(out, "{a},{f}")?;
        }
        Ok(())
    }

    /// Σ_{n ≤ N} c_n/(1+H_n) cos nθ + c₀/2, the truncated solution on the circle.
    pub fn evaluate(&self, perturbation: &Perturbation, theta: f64) -> f64 {
        0.5 * self.c[0]
            + self
                .c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c / (1.0 + perturbation.h(n)) * (n as f64 * theta).cos())
                .sum::<f64>()
    }
}
