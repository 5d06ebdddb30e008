use super::GeometryError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// A point on a sphere in colatitude/azimuth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapPoint {
    Plane(Complex64),
    Sphere(SpherePoint),
}

impl MapPoint {
    pub fn plane(self) -> Option<Complex64> {
        match self {
            MapPoint::Plane(z) => Some(z),
            MapPoint::Sphere(_) => None,
        }
    }

    pub fn sphere(self) -> Option<SpherePoint> {
        match self {
            MapPoint::Sphere(p) => Some(p),
            MapPoint::Plane(_) => None,
        }
    }
}

impl From<Complex64> for MapPoint {
    fn from(z: Complex64) -> Self {
        MapPoint::Plane(z)
    }
}

impl From<SpherePoint> for MapPoint {
    fn from(p: SpherePoint) -> Self {
        MapPoint::Sphere(p)
    }
}

/// Conformal maps between the canonical geometries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConformalMap {
    /// z ↦ 1/z.
    Inversion,
    /// z ↦ z^{π/α}, flattening the sector 0 ≤ arg z ≤ α onto the upper half-plane.
    /// The argument is taken in [0, 2π) so re-entrant corners (α > π) work too.
    CornerFlatten { alpha: f64 },
    /// w = exp{iπ/(d⁻¹−1)·(1/z − 1)} for circles of diameters 1 and d tangent
    /// at the origin (centres 1/2 and d/2 on the real axis); sends the region
    /// between them onto the upper half-plane.
    CuspMap { ratio: f64 },
    /// Stereographic projection from the north pole, θ ↦ r = cot(θ/2), φ kept.
    /// The image is that of a sphere of diameter 1; `radius` only enters the
    /// conformal factor.
    Stereographic { radius: f64 },
}

fn arg_0_2pi(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl ConformalMap {
    fn name(&self) -> &'static str {
        match self {
            ConformalMap::Inversion => "inversion",
            ConformalMap::CornerFlatten { .. } => "corner flattening",
            ConformalMap::CuspMap { .. } => "cusp map",
            ConformalMap::Stereographic { .. } => "stereographic projection",
        }
    }

    fn check(&self) -> Result<(), GeometryError> {
        let bad = |name: &str, value: f64, requirement| {
            Err(GeometryError::InvalidParameter {
                name: name.into(),
                value,
                requirement,
            })
        };
        match *self {
            ConformalMap::CornerFlatten { alpha } if !(alpha > 0.0 && alpha < TAU) => {
                bad("alpha", alpha, "corner angle must lie in (0, 2π)")
            }
            ConformalMap::CuspMap { ratio } if !(ratio > 0.0 && ratio < 1.0) => {
                bad("d", ratio, "radii ratio must lie in (0, 1)")
            }
            ConformalMap::Stereographic { radius } if !(radius > 0.0 && radius.is_finite()) => {
                bad("R", radius, "sphere radius must be positive")
            }
            _ => Ok(()),
        }
    }

    fn planar(&self, p: MapPoint) -> Result<Complex64, GeometryError> {
        let z = p.plane().ok_or(GeometryError::OutsideDomain { map: self.name() })?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(GeometryError::OutsideDomain { map: self.name() });
        }
        Ok(z)
    }

    fn sphere_point(&self, p: MapPoint) -> Result<SpherePoint, GeometryError> {
        let s = p.sphere().ok_or(GeometryError::OutsideDomain { map: self.name() })?;
        if !(0.0..=PI).contains(&s.theta) || !s.phi.is_finite() {
            return Err(GeometryError::OutsideDomain { map: self.name() });
        }
        if s.theta == 0.0 {
            return Err(GeometryError::Singular { map: self.name() });
        }
        Ok(s)
    }

    /// Image of a point.
    pub fn apply(&self, p: MapPoint) -> Result<MapPoint, GeometryError> {
        self.check()?;
        let singular = Err(GeometryError::Singular { map: self.name() });
        match *self {
            ConformalMap::Inversion => {
                let z = self.planar(p)?;
                if z == Complex64::new(0.0, 0.0) {
                    return singular;
                }
                Ok(MapPoint::Plane(z.inv()))
            }
            ConformalMap::CornerFlatten { alpha } => {
                let z = self.planar(p)?;
                if z.norm() == 0.0 {
                    return singular;
                }
                let arg = arg_0_2pi(z);
                if arg > alpha * (1.0 + 1e-12) {
                    return Err(GeometryError::OutsideDomain { map: self.name() });
                }
                let k = PI / alpha;
                Ok(MapPoint::Plane(Complex64::from_polar(z.norm().powf(k), k * arg)))
            }
            ConformalMap::CuspMap { ratio } => {
                let z = self.planar(p)?;
                if z.norm() == 0.0 {
                    return singular;
                }
                let k = ratio / (1.0 - ratio);
                let e = Complex64::new(0.0, PI * k) * (z.inv() - 1.0);
                Ok(MapPoint::Plane(e.exp()))
            }
            ConformalMap::Stereographic { .. } => {
                let s = self.sphere_point(p)?;
                let r = 1.0 / (0.5 * s.theta).tan();
                Ok(MapPoint::Plane(Complex64::from_polar(r, s.phi)))
            }
        }
    }

    /// Preimage of a point.
    pub fn invert(&self, p: MapPoint) -> Result<MapPoint, GeometryError> {
        self.check()?;
        let singular = Err(GeometryError::Singular { map: self.name() });
        match *self {
            ConformalMap::Inversion => {
                let w = self.planar(p)?;
                if w == Complex64::new(0.0, 0.0) {
                    return singular;
                }
                Ok(MapPoint::Plane(w.inv()))
            }
            ConformalMap::CornerFlatten { alpha } => {
                let w = self.planar(p)?;
                if w.norm() == 0.0 {
                    return singular;
                }
                let k = alpha / PI;
                Ok(MapPoint::Plane(Complex64::from_polar(
                    w.norm().powf(k),
                    k * arg_0_2pi(w),
                )))
            }
            ConformalMap::CuspMap { ratio } => {
                let w = self.planar(p)?;
                if w.norm() == 0.0 {
                    return singular;
                }
                let k = ratio / (1.0 - ratio);
                let inv_z = 1.0 + w.ln() / Complex64::new(0.0, PI * k);
                if inv_z.norm() == 0.0 {
                    return singular;
                }
                Ok(MapPoint::Plane(inv_z.inv()))
            }
            ConformalMap::Stereographic { .. } => {
                let w = self.planar(p)?;
                let r = w.norm();
                let theta = 2.0 * (1.0 / r).atan();
                let phi = if r == 0.0 { 0.0 } else { arg_0_2pi(w) };
                Ok(MapPoint::Sphere(SpherePoint { theta, phi }))
            }
        }
    }

    /// Local area magnification |f′(z)|². For the stereographic projection this
    /// is (1+r²)²/(4R²), so the Laplace–Beltrami operator of the sphere equals
    /// the jacobian times the flat Laplacian in the image plane.
    pub fn jacobian(&self, p: MapPoint) -> Result<f64, GeometryError> {
        self.check()?;
        let singular = Err(GeometryError::Singular { map: self.name() });
        match *self {
            ConformalMap::Inversion => {
                let z = self.planar(p)?;
                let r2 = z.norm_sqr();
                if r2 == 0.0 {
                    return singular;
                }
                Ok(1.0 / (r2 * r2))
            }
            ConformalMap::CornerFlatten { alpha } => {
                let z = self.planar(p)?;
                if z.norm() == 0.0 {
                    return singular;
                }
                if arg_0_2pi(z) > alpha * (1.0 + 1e-12) {
                    return Err(GeometryError::OutsideDomain { map: self.name() });
                }
                let k = PI / alpha;
                Ok(k * k * z.norm().powf(2.0 * (k - 1.0)))
            }
            ConformalMap::CuspMap { ratio } => {
                let w = self.apply(p)?.plane().expect("planar image");
                let z = self.planar(p)?;
                let k = ratio / (1.0 - ratio);
                let r2 = z.norm_sqr();
                Ok(w.norm_sqr() * PI * PI * k * k / (r2 * r2))
            }
            ConformalMap::Stereographic { radius } => {
                let s = self.sphere_point(p)?;
                let r = 1.0 / (0.5 * s.theta).tan();
                let f = 1.0 + r * r;
                Ok(f * f / (4.0 * radius * radius))
            }
        }
    }
}
