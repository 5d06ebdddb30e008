//! Domains, absorbing windows and the conformal maps between canonical geometries.
//!
//! Sphere coordinates are colatitude θ ∈ [0, π] and azimuth φ ∈ [0, 2π); a
//! removed cap is centred on the north pole and rim windows are centred at φ = π
//! unless stated otherwise.

mod maps;
mod schema;

pub use maps::{ConformalMap, MapPoint, SpherePoint};
pub use schema::GeometryConfig;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("parameter {name} = {value} is invalid: {requirement}")]
    InvalidParameter {
        name: String,
        value: f64,
        requirement: &'static str,
    },
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("unknown geometry type `{0}`")]
    UnknownType(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("window component `{component}` does not exist on a {domain}")]
    WindowComponent {
        component: BoundaryComponent,
        domain: &'static str,
    },
    #[error("window half-width {half_width} ({convention}) must lie in (0, {limit})")]
    WindowWidth {
        half_width: f64,
        limit: f64,
        convention: Convention,
    },
    #[error("{map} is singular at this point")]
    Singular { map: &'static str },
    #[error("point lies outside the domain of {map}")]
    OutsideDomain { map: &'static str },
    #[error("{0}")]
    Parse(String),
}

fn positive(name: &str, value: f64) -> Result<(), GeometryError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::InvalidParameter {
            name: name.to_string(),
            value,
            requirement: "must be finite and strictly positive",
        })
    }
}

/// Shape parameters of a planar domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarShape {
    Disk { radius: f64 },
    /// Annulus `inner < r < outer`.
    Annulus { inner: f64, outer: f64 },
    /// Rectangle (0, width) × (0, height).
    Rectangle { width: f64, height: f64 },
    /// Region between a circle of radius `radius` and an internally tangent
    /// circle of radius `ratio·radius`, the tangency being a cusp.
    TangentCircles { radius: f64, ratio: f64 },
}

/// A validated planar domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarDomain {
    shape: PlanarShape,
}

impl PlanarDomain {
    pub fn new(shape: PlanarShape) -> Result<Self, GeometryError> {
        match shape {
            PlanarShape::Disk { radius } => positive("R", radius)?,
            PlanarShape::Annulus { inner, outer } => {
                positive("R1", inner)?;
                positive("R2", outer)?;
                if inner >= outer {
                    return Err(GeometryError::InvalidParameter {
                        name: "R1".into(),
                        value: inner,
                        requirement: "must be smaller than R2",
                    });
                }
            }
            PlanarShape::Rectangle { width, height } => {
                positive("a", width)?;
                positive("b", height)?;
            }
            PlanarShape::TangentCircles { radius, ratio } => {
                positive("R", radius)?;
                if !(ratio > 0.0 && ratio < 1.0) {
                    return Err(GeometryError::InvalidParameter {
                        name: "d".into(),
                        value: ratio,
                        requirement: "radii ratio must lie in (0, 1)",
                    });
                }
            }
        }
        Ok(Self { shape })
    }

    pub fn disk(radius: f64) -> Result<Self, GeometryError> {
        Self::new(PlanarShape::Disk { radius })
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self, GeometryError> {
        Self::new(PlanarShape::Annulus { inner, outer })
    }

    pub fn rectangle(width: f64, height: f64) -> Result<Self, GeometryError> {
        Self::new(PlanarShape::Rectangle { width, height })
    }

    pub fn tangent_circles(radius: f64, ratio: f64) -> Result<Self, GeometryError> {
        Self::new(PlanarShape::TangentCircles { radius, ratio })
    }

    pub fn shape(&self) -> PlanarShape {
        self.shape
    }

    pub fn area(&self) -> f64 {
        match self.shape {
            PlanarShape::Disk { radius } => PI * radius * radius,
            PlanarShape::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
            PlanarShape::Rectangle { width, height } => width * height,
            PlanarShape::TangentCircles { radius, ratio } => {
                PI * radius * radius * (1.0 - ratio * ratio)
            }
        }
    }

    /// Total boundary length.
    pub fn perimeter(&self) -> f64 {
        match self.shape {
            PlanarShape::Disk { radius } => 2.0 * PI * radius,
            PlanarShape::Annulus { inner, outer } => 2.0 * PI * (inner + outer),
            PlanarShape::Rectangle { width, height } => 2.0 * (width + height),
            PlanarShape::TangentCircles { radius, ratio } => 2.0 * PI * radius * (1.0 + ratio),
        }
    }

    fn kind(&self) -> &'static str {
        match self.shape {
            PlanarShape::Disk { .. } => "disk",
            PlanarShape::Annulus { .. } => "annulus",
            PlanarShape::Rectangle { .. } => "rectangle",
            PlanarShape::TangentCircles { .. } => "tangent-circles domain",
        }
    }
}

/// A sphere, or a sphere with the polar cap θ < delta removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalDomain {
    radius: f64,
    cap: Option<f64>,
}

impl SphericalDomain {
    pub fn full_sphere(radius: f64) -> Result<Self, GeometryError> {
        positive("R", radius)?;
        Ok(Self { radius, cap: None })
    }

    pub fn decapitated(radius: f64, delta: f64) -> Result<Self, GeometryError> {
        positive("R", radius)?;
        if !(delta > 0.0 && delta < PI) {
            return Err(GeometryError::InvalidParameter {
                name: "delta".into(),
                value: delta,
                requirement: "cap angle must lie in (0, π)",
            });
        }
        Ok(Self {
            radius,
            cap: Some(delta),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Central angle of the removed cap, if any.
    pub fn cap_angle(&self) -> Option<f64> {
        self.cap
    }

    pub fn area(&self) -> f64 {
        let r2 = self.radius * self.radius;
        match self.cap {
            None => 4.0 * PI * r2,
            Some(delta) => 2.0 * PI * r2 * (1.0 + delta.cos()),
        }
    }

    /// Length of the cap rim (zero for the full sphere).
    pub fn rim_length(&self) -> f64 {
        self.cap
            .map_or(0.0, |delta| 2.0 * PI * self.radius * delta.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Planar(PlanarDomain),
    Spherical(SphericalDomain),
}

impl Domain {
    pub fn area(&self) -> f64 {
        match self {
            Domain::Planar(p) => p.area(),
            Domain::Spherical(s) => s.area(),
        }
    }
}

impl From<PlanarDomain> for Domain {
    fn from(d: PlanarDomain) -> Self {
        Domain::Planar(d)
    }
}

impl From<SphericalDomain> for Domain {
    fn from(d: SphericalDomain) -> Self {
        Domain::Spherical(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryComponent {
    /// Outer circle of a disk or annulus.
    Outer,
    /// Inner circle of an annulus.
    Inner,
    /// Edge y = b of a rectangle; the centre is an x coordinate.
    TopEdge,
    /// Rim of the removed cap; the centre is an azimuth.
    CapRim,
    /// Both arcs bounding the prong y > 0 of a tangent-circles domain, next
    /// to the tangency point.
    Cusp,
}

impl std::fmt::Display for BoundaryComponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Outer => "outer",
            Self::Inner => "inner",
            Self::TopEdge => "top-edge",
            Self::CapRim => "cap-rim",
            Self::Cusp => "cusp",
        })
    }
}

/// How a window's `half_width` is measured.
///
/// * `AngularHalfWidth`: half the opening angle in the component's angular
///   coordinate. Circles use the polar angle, the cap rim the azimuth, the top
///   edge of a rectangle the stretched angle θ = πx/a, and the cusp the
///   central angle 2·atan(ε) subtended on the outer circle.
/// * `Arclength`: half the window length along the boundary before clipping.
///   For one-sided windows (a rectangle window centred on a corner, the cusp)
///   this is the whole absorbing length.
/// * `LengthRatio`: absorbing length divided by the total boundary length.
///   For the cusp it is instead the map parameter ε: the absorbing set is the
///   part of the boundary inside the disk of diameter 2Rε centred at iRε,
///   i.e. Im(2R/z) ≤ −1/ε. It covers both circles in the prong y > 0 only;
///   the lower prong reflects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    AngularHalfWidth,
    Arclength,
    LengthRatio,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::AngularHalfWidth => "angular-half-width",
            Self::Arclength => "arclength",
            Self::LengthRatio => "length-ratio",
        })
    }
}

/// An absorbing arc on one boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub component: BoundaryComponent,
    pub center: f64,
    pub half_width: f64,
    pub convention: Convention,
}

/// The same window expressed in all three conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowMeasures {
    /// Angular half-width.
    pub angular: f64,
    /// Total absorbing arclength.
    pub arclength: f64,
    /// Absorbing length over total boundary length (cusp: map parameter ε).
    pub ratio: f64,
}

/// Per-component conversion data.
#[derive(Debug, Clone, Copy)]
enum Frame {
    /// Circle-like component: arclength per radian and total boundary length.
    Circle { rho: f64, perimeter: f64 },
    /// Straight edge of length `width`, window centred at `center`.
    Edge {
        width: f64,
        center: f64,
        perimeter: f64,
    },
    Cusp { radius: f64, ratio: f64 },
}

impl Frame {
    fn for_window(window: &Window, domain: &Domain) -> Result<Self, GeometryError> {
        let mismatch = |domain: &'static str| GeometryError::WindowComponent {
            component: window.component,
            domain,
        };
        match (domain, window.component) {
            (Domain::Planar(p), c) => {
                let perimeter = p.perimeter();
                match (p.shape(), c) {
                    (PlanarShape::Disk { radius }, BoundaryComponent::Outer)
                    | (PlanarShape::Annulus { outer: radius, .. }, BoundaryComponent::Outer)
                    | (PlanarShape::Annulus { inner: radius, .. }, BoundaryComponent::Inner) => {
                        Ok(Frame::Circle {
                            rho: radius,
                            perimeter,
                        })
                    }
                    (PlanarShape::Rectangle { width, .. }, BoundaryComponent::TopEdge) => {
                        if !(0.0..=width).contains(&window.center) {
                            return Err(GeometryError::InvalidParameter {
                                name: "window.center".into(),
                                value: window.center,
                                requirement: "top-edge window centre must lie in [0, a]",
                            });
                        }
                        Ok(Frame::Edge {
                            width,
                            center: window.center,
                            perimeter,
                        })
                    }
                    (PlanarShape::TangentCircles { radius, ratio }, BoundaryComponent::Cusp) => {
                        Ok(Frame::Cusp { radius, ratio })
                    }
                    _ => Err(mismatch(p.kind())),
                }
            }
            (Domain::Spherical(s), BoundaryComponent::CapRim) => match s.cap_angle() {
                Some(delta) => Ok(Frame::Circle {
                    rho: s.radius() * delta.sin(),
                    perimeter: s.rim_length(),
                }),
                None => Err(mismatch("full sphere")),
            },
            (Domain::Spherical(s), _) => Err(mismatch(if s.cap_angle().is_some() {
                "decapitated sphere"
            } else {
                "full sphere"
            })),
        }
    }

    /// Upper bound on the angular half-width.
    fn angular_limit(&self) -> f64 {
        match *self {
            Frame::Circle { .. } => PI,
            Frame::Edge { .. } => 0.5 * PI,
            Frame::Cusp { .. } => 0.5 * PI,
        }
    }

    fn to_angular(&self, value: f64, convention: Convention) -> f64 {
        match (*self, convention) {
            (_, Convention::AngularHalfWidth) => value,
            (Frame::Circle { rho, .. }, Convention::Arclength) => value / rho,
            (Frame::Circle { rho, perimeter }, Convention::LengthRatio) => {
                value * perimeter / (2.0 * rho)
            }
            (Frame::Edge { width, .. }, Convention::Arclength) => PI * value / width,
            (
                Frame::Edge {
                    width,
                    center,
                    perimeter,
                },
                Convention::LengthRatio,
            ) => {
                let absorbed = value * perimeter;
                let near = center.min(width - center);
                let far = center.max(width - center);
                let half = if absorbed <= 2.0 * near {
                    0.5 * absorbed
                } else if absorbed <= near + far {
                    absorbed - near
                } else {
                    f64::INFINITY
                };
                PI * half / width
            }
            (Frame::Cusp { .. }, Convention::LengthRatio) => 2.0 * value.atan(),
            (Frame::Cusp { radius, ratio }, Convention::Arclength) => {
                // arclength is increasing in ε; invert by bisection on ε ∈ (0, 1)
                let f = |e: f64| cusp_arclength(radius, ratio, e);
                if value >= f(1.0) {
                    return f64::INFINITY;
                }
                let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < value {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                2.0 * (0.5 * (lo + hi)).atan()
            }
        }
    }

    fn measures(&self, angular: f64) -> WindowMeasures {
        match *self {
            Frame::Circle { rho, perimeter } => WindowMeasures {
                angular,
                arclength: 2.0 * angular * rho,
                ratio: 2.0 * angular * rho / perimeter,
            },
            Frame::Edge {
                width,
                center,
                perimeter,
            } => {
                let half = angular * width / PI;
                let absorbed = (center + half).min(width) - (center - half).max(0.0);
                WindowMeasures {
                    angular,
                    arclength: absorbed,
                    ratio: absorbed / perimeter,
                }
            }
            Frame::Cusp { radius, ratio } => {
                let eps = (0.5 * angular).tan();
                WindowMeasures {
                    angular,
                    arclength: cusp_arclength(radius, ratio, eps),
                    ratio: eps,
                }
            }
        }
    }

    fn from_angular(&self, angular: f64, convention: Convention) -> f64 {
        let m = self.measures(angular);
        match (*self, convention) {
            (_, Convention::AngularHalfWidth) => angular,
            (_, Convention::LengthRatio) => m.ratio,
            (Frame::Circle { rho, .. }, Convention::Arclength) => angular * rho,
            (Frame::Edge { width, .. }, Convention::Arclength) => angular * width / PI,
            (Frame::Cusp { .. }, Convention::Arclength) => m.arclength,
        }
    }
}

/// Boundary length inside the cusp window of parameter ε, both circles together.
fn cusp_arclength(radius: f64, ratio: f64, eps: f64) -> f64 {
    2.0 * radius * (eps.atan() + ratio * (eps / ratio).atan())
}

impl Window {
    pub fn new(
        component: BoundaryComponent,
        center: f64,
        half_width: f64,
        convention: Convention,
    ) -> Self {
        Self {
            component,
            center,
            half_width,
            convention,
        }
    }

    /// The canonical window of a domain family: centred at θ = π on the inner
    /// circle (annulus) or outer circle (disk), at the corner x = a of the top
    /// edge (rectangle), at φ = π on the cap rim, or at the cusp.
    pub fn canonical(
        domain: &Domain,
        half_width: f64,
        convention: Convention,
    ) -> Result<Self, GeometryError> {
        let w = Self::canonical_unchecked(domain, half_width, convention);
        w.measures(domain)?;
        Ok(w)
    }

    pub(crate) fn canonical_unchecked(
        domain: &Domain,
        half_width: f64,
        convention: Convention,
    ) -> Self {
        let (component, center) = match domain {
            Domain::Planar(p) => match p.shape() {
                PlanarShape::Disk { .. } => (BoundaryComponent::Outer, PI),
                PlanarShape::Annulus { .. } => (BoundaryComponent::Inner, PI),
                PlanarShape::Rectangle { width, .. } => (BoundaryComponent::TopEdge, width),
                PlanarShape::TangentCircles { .. } => (BoundaryComponent::Cusp, 0.0),
            },
            Domain::Spherical(_) => (BoundaryComponent::CapRim, PI),
        };
        Self::new(component, center, half_width, convention)
    }

    /// All three measures of the window; rejects windows that do not fit on
    /// their component.
    pub fn measures(&self, domain: &Domain) -> Result<WindowMeasures, GeometryError> {
        let frame = Frame::for_window(self, domain)?;
        if !self.center.is_finite() {
            return Err(GeometryError::InvalidParameter {
                name: "window.center".into(),
                value: self.center,
                requirement: "must be finite",
            });
        }
        let angular = frame.to_angular(self.half_width, self.convention);
        let limit = frame.angular_limit();
        if !(self.half_width > 0.0 && angular > 0.0 && angular < limit) {
            return Err(GeometryError::WindowWidth {
                half_width: self.half_width,
                limit: frame.from_angular(limit, self.convention),
                convention: self.convention,
            });
        }
        Ok(frame.measures(angular))
    }

    /// The same window with `half_width` re-expressed in another convention.
    pub fn with_convention(
        &self,
        convention: Convention,
        domain: &Domain,
    ) -> Result<Self, GeometryError> {
        let frame = Frame::for_window(self, domain)?;
        let m = self.measures(domain)?;
        Ok(Self {
            half_width: frame.from_angular(m.angular, convention),
            convention,
            ..*self
        })
    }
}
