//! Reflected Brownian motion on the planar and spherical domains, used as a
//! ground truth for the mean first passage time formulas.
//!
//! Paths are simulated with Euler steps of per-coordinate variance 2D·δt. In
//! adaptive mode the step length follows the distance to the absorbing set
//! and to curved walls, down to the floor set by `dt`; steps that cross the
//! boundary outside the window are reflected, and a step that ends next to
//! the window is tested against the Brownian-bridge hitting probability.
//!
//! Every path draws from its own ChaCha8 stream (seed, stream = path index),
//! so an estimate is bit-identical for any number of rayon workers.

mod driver;
mod planar;
mod sphere;
mod sweep;

use narrow_escape::geometry::{BoundaryComponent, GeometryError, Window};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use planar::simulate_planar;
pub use sphere::simulate_sphere;
pub use sweep::{inverse_eps_constants, log_slope, sweep, SweepRow};

/// Largest accepted fraction of censored paths.
pub const MAX_CENSORED_FRACTION: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("{n_censored} of {n_paths} paths hit max_steps (limit {limit:.1e} of the paths)", limit = MAX_CENSORED_FRACTION)]
    Censored {
        n_censored: u64,
        n_paths: u64,
        /// The estimate over the paths that were absorbed.
        estimate: Box<McEstimate>,
    },
    #[error("step length {step:.3e} is not small against the {what} ({scale:.3e})")]
    Resolution {
        step: f64,
        scale: f64,
        what: &'static str,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Initial distribution of the paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Start {
    /// Cartesian (x, y) in the plane, (θ, φ) on the sphere.
    Point { coords: [f64; 2] },
    /// Uniform with respect to area.
    Uniform,
    /// Uniform over the part of the domain with lo ≤ s ≤ hi, where s is the
    /// radius (disk, annulus), the height y (rectangle) or the colatitude θ
    /// (sphere).
    Band { lo: f64, hi: f64 },
}

/// What absorbs on a planar domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Absorber {
    /// A window on one boundary component.
    Window(Window),
    /// A whole boundary component.
    Component(BoundaryComponent),
    /// Nothing: every path reflects forever and is censored.
    None,
}

impl From<Window> for Absorber {
    fn from(w: Window) -> Self {
        Absorber::Window(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    /// Finest time step: the step used next to the absorbing set, and
    /// everywhere when `adaptive` is off.
    pub dt: f64,
    /// Coarsest time step far from the boundary; a geometry-based default
    /// applies when absent.
    pub dt_max: Option<f64>,
    pub n_paths: u64,
    pub seed: u64,
    /// Steps after which a path is censored.
    pub max_steps: u64,
    pub start: Start,
    /// Distance-controlled steps near windows, curved walls and the cusp.
    #[serde(alias = "adaptive_near_singularity")]
    pub adaptive: bool,
    /// Step length over distance to the absorbing set.
    pub window_factor: f64,
    /// Step length over distance to a curved reflecting wall.
    pub wall_factor: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            dt: 1e-5,
            dt_max: None,
            n_paths: 10_000,
            seed: 0,
            max_steps: 50_000_000,
            start: Start::Uniform,
            adaptive: true,
            window_factor: 0.25,
            wall_factor: 0.5,
        }
    }
}

impl McConfig {
    pub fn new(n_paths: u64, dt: f64, seed: u64) -> Self {
        Self {
            n_paths,
            dt,
            seed,
            ..Self::default()
        }
    }

    pub fn with_start(mut self, start: Start) -> Self {
        self.start = start;
        self
    }

    /// The same run with every step length divided by √factor (all time steps
    /// divided by `factor`).
    pub fn refined(&self, factor: f64) -> Self {
        let s = factor.sqrt();
        Self {
            dt: self.dt / factor,
            dt_max: self.dt_max.map(|d| d / factor),
            window_factor: self.window_factor / s,
            wall_factor: self.wall_factor / s,
            max_steps: (self.max_steps as f64 * factor).min(u64::MAX as f64) as u64,
            ..self.clone()
        }
    }

    pub(crate) fn validate(&self) -> Result<(), McError> {
        let bad = |m: String| Err(McError::InvalidConfig(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if let Some(m) = self.dt_max {
            if !(m >= self.dt && m.is_finite()) {
                return bad(format!("dt_max = {m} must be at least dt"));
            }
        }
        if self.n_paths < 100 {
            return bad(format!("n_paths = {} must be at least 100", self.n_paths));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        for (name, v) in [
            ("window_factor", self.window_factor),
            ("wall_factor", self.wall_factor),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(format!("{name} = {v} must lie in (0, 1]"));
            }
        }
        if let Start::Band { lo, hi } = self.start {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return bad(format!("band [{lo}, {hi}] is empty"));
            }
        }
        Ok(())
    }

    /// Warning text when the step budget may be too short for a run whose
    /// MFPT is about `target`: max_steps·dt should exceed 50·target.
    pub fn horizon_warning(&self, target: f64) -> Option<String> {
        let horizon = self.max_steps as f64 * self.dt;
        (horizon < 50.0 * target).then(|| {
            format!("max_steps*dt = {horizon:.3e} is below 50x the expected MFPT {target:.3e}; expect censoring")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    /// Mean first passage time over absorbed paths.
    pub mean: f64,
    /// Sample standard deviation over √n_absorbed.
    pub stderr: f64,
    pub n_absorbed: u64,
    pub n_censored: u64,
    /// Finest time step used.
    pub dt_used: f64,
    /// Average number of steps per path.
    pub mean_steps: f64,
}
