use crate::spec::RunSpec;
use crate::{CliError, CommandKind, SolverChoice};
use narrow_escape::asymptotics::*;
use narrow_escape::dualseries::{
    solve_collocation, solve_h1_neumann, DualSeriesProblem, SeriesSolution,
};
use narrow_escape::geometry::{BoundaryComponent, Domain, PlanarShape, Window};
use narrow_escape_mc::{
    log_slope, simulate_planar, simulate_sphere, sweep, Absorber, McEstimate, Start, SweepRow,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

const TOLERANCES: &str = include_str!("tolerances.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelativeTo {
    Formula,
    Simulation,
}

/// Pass rule: |MC − formula| ≤ max(relative·|reference|, sigmas·stderr).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub relative: f64,
    #[serde(default)]
    pub sigmas: f64,
    pub relative_to: RelativeTo,
}

pub fn tolerances() -> BTreeMap<String, Tolerance> {
    serde_json::from_str(TOLERANCES).expect("embedded tolerance table parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Asymptotic(AsymptoticReport),
    Series(SeriesReport),
    Simulate(SimulateReport),
    Sweep(SweepReport),
    Compare(CompareReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub case: String,
    pub result: AsymptoticResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub case: String,
    pub solution: SeriesSolution,
    /// Average MFPT rebuilt from the solved c₀, where available.
    pub mfpt: Option<AsymptoticResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub epsilon: Option<f64>,
    pub estimate: McEstimate,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Fit mean ≈ slope·log(1/ε) + intercept.
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub case: String,
    pub formula: f64,
    pub error_order: String,
    pub simulation: McEstimate,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub warnings: Vec<String>,
}

pub fn run(spec: &RunSpec) -> Result<Report, CliError> {
    Ok(match spec.command {
        CommandKind::Asymptotic => {
            let (case, result) = formula(spec)?;
            Report::Asymptotic(AsymptoticReport {
                case: case.into(),
                result,
            })
        }
        CommandKind::Series => Report::Series(series(spec)?),
        CommandKind::Simulate => {
            let (estimate, epsilon) = simulate(spec)?;
            let target = formula(spec).map(|(_, r)| r.value).unwrap_or(0.0);
            Report::Simulate(SimulateReport {
                epsilon,
                warnings: spec.mc.horizon_warning(target).into_iter().collect(),
                estimate,
            })
        }
        CommandKind::Sweep => {
            let template = spec
                .geometry
                .window
                .ok_or_else(|| CliError::Usage("sweep needs --eps or a window".into()))?;
            let rows = sweep(&spec.geometry.domain, &template, &spec.eps, &spec.mc, spec.d)?;
            let (slope, intercept) = log_slope(&rows);
            Report::Sweep(SweepReport {
                rows,
                slope,
                intercept,
            })
        }
        CommandKind::Compare => Report::Compare(compare(spec)?),
    })
}

fn window(spec: &RunSpec) -> Result<Window, CliError> {
    spec.geometry
        .window
        .ok_or_else(|| CliError::Usage("this geometry needs a window (or --eps)".into()))
}

/// True when a top-edge window reaches a corner of the rectangle.
fn at_corner(w: &Window, width: f64, angular: f64) -> bool {
    let half = angular * width / PI;
    w.center - half <= 0.0 || w.center + half >= width
}

/// The formula that applies to the geometry, with its tolerance key.
pub fn formula(spec: &RunSpec) -> Result<(&'static str, AsymptoticResult), CliError> {
    let d = spec.d;
    let domain = &spec.geometry.domain;
    Ok(match domain {
        Domain::Planar(p) => {
            let w = window(spec)?;
            let m = w.measures(domain)?;
            let smooth = || mfpt_leading_smooth(p.area(), d, m.ratio);
            match p.shape() {
                PlanarShape::Annulus { inner, outer } if w.component == BoundaryComponent::Inner => {
                    ("annulus", mfpt_annulus_avg(inner, outer, m.angular, d)?)
                }
                PlanarShape::Rectangle { width, height } if at_corner(&w, width, m.angular) => {
                    ("rectangle-corner", mfpt_rectangle_avg(width, height, m.arclength, d)?)
                }
                PlanarShape::TangentCircles { .. } => ("cusp", mfpt_cusp_leading(p, m.ratio, d)?),
                _ => ("smooth", smooth()?),
            }
        }
        Domain::Spherical(s) => {
            let delta = s
                .cap_angle()
                .ok_or_else(|| CliError::Usage("the full sphere has no absorbing boundary".into()))?;
            match spec.geometry.window {
                Some(w) if spec.absorb.is_none() => {
                    let m = w.measures(domain)?;
                    ("sphere-window", sphere_window_mfpt_avg(s.radius(), delta, m.angular, d)?)
                }
                _ => ("sphere-cap", sphere_cap_mfpt_avg(s.radius(), delta, d)?),
            }
        }
    })
}

fn series(spec: &RunSpec) -> Result<SeriesReport, CliError> {
    let domain = &spec.geometry.domain;
    let w = window(spec)?;
    let m = w.measures(domain)?;
    let n = spec.order;
    let (case, problem) = match domain {
        Domain::Planar(p) => match p.shape() {
            PlanarShape::Disk { radius } => (
                "disk",
                DualSeriesProblem::unperturbed(0.5 * radius * radius, m.angular, n)?,
            ),
            PlanarShape::Annulus { inner, outer } if w.component == BoundaryComponent::Inner => {
                ("annulus", DualSeriesProblem::annulus(inner, outer, m.angular, n)?)
            }
            PlanarShape::Rectangle { width, height } if at_corner(&w, width, m.angular) => (
                "rectangle-corner",
                DualSeriesProblem::rectangle(width, height, m.arclength, n)?,
            ),
            _ => {
                return Err(CliError::Usage(
                    "no dual series problem for this geometry and window".into(),
                ))
            }
        },
        Domain::Spherical(s) => {
            let delta = s
                .cap_angle()
                .ok_or_else(|| CliError::Usage("the full sphere has no rim window".into()))?;
            (
                "sphere-window",
                DualSeriesProblem::unperturbed(sphere_window_series_rhs(delta), m.angular, n)?,
            )
        }
    };
    let solution = match spec.method {
        SolverChoice::Collocation => solve_collocation(&problem)?,
        SolverChoice::Neumann => solve_h1_neumann(&problem)?,
    };
    let mfpt = match (case, domain) {
        ("annulus", Domain::Planar(p)) => match p.shape() {
            PlanarShape::Annulus { inner, outer } => {
                Some(mfpt_annulus_avg_from_c0(inner, outer, solution.c0, spec.d)?)
            }
            _ => None,
        },
        _ => None,
    };
    Ok(SeriesReport {
        case: case.into(),
        solution,
        mfpt,
    })
}

/// Runs the simulation; also returns the window half-width used, if any.
fn simulate(spec: &RunSpec) -> Result<(McEstimate, Option<f64>), CliError> {
    let window = spec.geometry.window.filter(|_| spec.absorb.is_none());
    let est = match &spec.geometry.domain {
        Domain::Planar(p) => {
            let absorber = match (spec.absorb, window) {
                (Some(c), _) => Absorber::Component(c),
                (None, Some(w)) => Absorber::Window(w),
                (None, None) => {
                    return Err(CliError::Usage(
                        "planar simulations need a window, --eps or --absorb".into(),
                    ))
                }
            };
            simulate_planar(p, &absorber, &spec.mc, spec.d)?
        }
        Domain::Spherical(s) => {
            if let Some(c) = spec.absorb.filter(|c| *c != BoundaryComponent::CapRim) {
                return Err(CliError::Usage(format!("cannot absorb on {c} of a sphere")));
            }
            simulate_sphere(s, window.as_ref(), &spec.mc, spec.d)?
        }
    };
    Ok((est, window.map(|w| w.half_width)))
}

fn compare(spec: &RunSpec) -> Result<CompareReport, CliError> {
    if spec.absorb.is_some() {
        return Err(CliError::Usage(
            "no formula for whole-component absorption".into(),
        ));
    }
    let (case, result) = formula(spec)?;
    let (value, order, warnings) = match (case, spec.mc.start, &spec.geometry.domain) {
        ("sphere-cap", Start::Point { coords: [theta, _] }, Domain::Spherical(s)) => {
            let delta = s.cap_angle().expect("capped");
            (
                sphere_cap_mfpt_point(s.radius(), delta, theta, spec.d)?,
                ErrorOrder::Exact.to_string(),
                vec![],
            )
        }
        (_, Start::Uniform, _) => (result.value, result.error_order.to_string(), result.warnings),
        _ => {
            return Err(CliError::Usage(
                "the formulas average over a uniform start".into(),
            ))
        }
    };
    let (estimate, _) = simulate(spec)?;
    let tol = tolerances()[case];
    let reference = match tol.relative_to {
        RelativeTo::Formula => value,
        RelativeTo::Simulation => estimate.mean,
    };
    let diff = (estimate.mean - value).abs();
    let allowed = (tol.relative * reference.abs()).max(tol.sigmas * estimate.stderr);
    Ok(CompareReport {
        case: case.into(),
        formula: value,
        error_order: order,
        relative_error: diff / reference.abs(),
        tolerance: allowed / reference.abs(),
        pass: diff <= allowed,
        simulation: estimate,
        warnings,
    })
}
