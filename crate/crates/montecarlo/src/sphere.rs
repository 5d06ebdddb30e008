use crate::driver::{bridge_hit, bridge_offset, run, PathRng, Step, StepControl, Walker};
use crate::{McConfig, McError, McEstimate, Start};
use narrow_escape::geometry::{BoundaryComponent, Domain, SphericalDomain, Window};
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{PI, TAU};

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: V3) -> V3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn polar(theta: f64, phi: f64) -> V3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

fn colatitude(u: V3) -> f64 {
    u[0].hypot(u[1]).atan2(u[2])
}

fn azimuth_offset(phi: f64, center: f64) -> f64 {
    ((phi - center + PI).rem_euclid(TAU) - PI).abs()
}

/// Brownian motion on the sphere of radius R with the polar cap θ < δ
/// removed. The state is the unit position vector.
struct Sphere {
    radius: f64,
    delta: f64,
    /// (centre azimuth, half-width); `None` absorbs on the whole rim.
    window: Option<(f64, f64)>,
    ctrl: StepControl,
    d: f64,
    start: Start,
}

impl Sphere {
    fn in_window(&self, phi: f64) -> bool {
        self.window.is_none_or(|(c, h)| azimuth_offset(phi, c) <= h)
    }

    fn window_distance(&self, u: V3, theta: f64) -> f64 {
        let rim = self.radius * (theta - self.delta);
        match self.window {
            None => rim,
            Some((c, h)) => {
                if azimuth_offset(u[1].atan2(u[0]), c) <= h {
                    rim
                } else {
                    let chord = |phi: f64| {
                        let e = polar(self.delta, phi);
                        let v = [u[0] - e[0], u[1] - e[1], u[2] - e[2]];
                        dot(v, v).sqrt()
                    };
                    self.radius * chord(c + h).min(chord(c - h))
                }
            }
        }
    }
}

impl Walker for Sphere {
    type State = V3;

    fn start(&self, rng: &mut PathRng) -> V3 {
        let (lo, hi) = match self.start {
            Start::Point { coords } => return polar(coords[0], coords[1]),
            Start::Uniform => (self.delta, PI),
            Start::Band { lo, hi } => (lo.max(self.delta), hi.min(PI)),
        };
        let c = rng.random_range(hi.cos()..lo.cos());
        polar(c.acos(), rng.random_range(0.0..TAU))
    }

    fn step(&self, u: &mut V3, rng: &mut PathRng) -> Step {
        let u0 = *u;
        let theta0 = colatitude(u0);
        let d_rim = self.radius * (theta0 - self.delta);
        let sigma = self.ctrl.sigma(self.window_distance(u0, theta0), d_rim);
        let dt = sigma * sigma / (2.0 * self.d);
        let xi: V3 = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        // tangent Gaussian step mapped onto the sphere along its great circle
        let radial = dot(xi, u0);
        let t = [
            xi[0] - radial * u0[0],
            xi[1] - radial * u0[1],
            xi[2] - radial * u0[2],
        ];
        let len = dot(t, t).sqrt();
        let alpha = sigma * len / self.radius;
        let (sa, ca) = alpha.sin_cos();
        let mut u1 = normalize([
            u0[0] * ca + t[0] / len * sa,
            u0[1] * ca + t[1] / len * sa,
            u0[2] * ca + t[2] / len * sa,
        ]);
        let mut theta1 = colatitude(u1);
        let rim_scale = self.radius * self.delta.sin();
        // azimuth of u0 + t(u1 − u0), spread like the bridge along the rim
        let hit_azimuth = |t: f64, rng: &mut PathRng| {
            let c = [u0[0] + t * (u1[0] - u0[0]), u0[1] + t * (u1[1] - u0[1])];
            c[1].atan2(c[0]) + bridge_offset(t, sigma, rng) / rim_scale
        };
        let crossed = theta1 < self.delta;
        if crossed {
            let f = (theta0 - self.delta) / (theta0 - theta1);
            if self.in_window(hit_azimuth(f, rng)) {
                return Step::Absorbed(f * dt);
            }
            theta1 = (2.0 * self.delta - theta1).min(PI);
            u1 = polar(theta1, u1[1].atan2(u1[0]));
        } else {
            let (da, db) = (d_rim, self.radius * (theta1 - self.delta));
            if da * db < 8.0 * sigma * sigma
                && rng.random::<f64>() < bridge_hit(da, db, sigma)
                && self.in_window(hit_azimuth(da / (da + db), rng))
            {
                *u = u1;
                return Step::Absorbed(dt);
            }
        }
        *u = u1;
        Step::Moved(dt)
    }
}

/// Simulates Brownian motion with diffusivity `d` on a decapitated sphere,
/// absorbed on `window` (a `CapRim` window) or, when it is `None`, on the
/// whole rim.
pub fn simulate_sphere(
    domain: &SphericalDomain,
    window: Option<&Window>,
    config: &McConfig,
    d: f64,
) -> Result<McEstimate, McError> {
    config.validate()?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(McError::InvalidConfig(format!("D = {d} must be positive")));
    }
    let Some(delta) = domain.cap_angle() else {
        return Err(McError::InvalidConfig(
            "the full sphere has no absorbing boundary".into(),
        ));
    };
    let radius = domain.radius();
    let window = match window {
        None => None,
        Some(w) => {
            if w.component != BoundaryComponent::CapRim {
                return Err(McError::InvalidConfig(format!(
                    "{} is not a boundary component of the sphere",
                    w.component
                )));
            }
            let m = w.measures(&Domain::Spherical(*domain))?;
            Some((w.center, m.angular))
        }
    };
    let rim_radius = radius * delta.sin();
    let ctrl = StepControl::new(config, d, 0.1 * radius, 0.02 * radius * delta.tan());
    let half_window = window.map_or(PI * rim_radius, |(_, h)| rim_radius * h);
    if ctrl.fine >= half_window {
        return Err(McError::Resolution {
            step: ctrl.fine,
            scale: half_window,
            what: "window half-length",
        });
    }
    if ctrl.fine >= 0.25 * rim_radius {
        return Err(McError::Resolution {
            step: ctrl.fine,
            scale: rim_radius,
            what: "rim radius",
        });
    }
    match config.start {
        Start::Point { coords: [theta, _] } if !(theta > delta && theta <= PI) => {
            return Err(McError::InvalidConfig(format!(
                "start colatitude {theta} is not in (δ, π]"
            )));
        }
        Start::Band { lo, hi } if hi.min(PI) <= lo.max(delta) => {
            return Err(McError::InvalidConfig(format!(
                "band [{lo}, {hi}] misses the domain"
            )));
        }
        _ => {}
    }
    run(
        &Sphere {
            radius,
            delta,
            window,
            ctrl,
            d,
            start: config.start,
        },
        config,
        config.dt,
    )
}
