use crate::driver::{bridge_hit, bridge_offset, normal2, run, PathRng, Step, StepControl, Walker};
use crate::{Absorber, McConfig, McError, McEstimate, Start};
use narrow_escape::geometry::{BoundaryComponent, Domain, PlanarDomain, PlanarShape};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{PI, TAU};

/// Simulates reflected Brownian motion with diffusivity `d` in a planar
/// domain until it is absorbed.
pub fn simulate_planar(
    domain: &PlanarDomain,
    absorber: &Absorber,
    config: &McConfig,
    d: f64,
) -> Result<McEstimate, McError> {
    config.validate()?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(McError::InvalidConfig(format!("D = {d} must be positive")));
    }
    check_component(domain, absorber)?;
    match domain.shape() {
        PlanarShape::Disk { radius } => {
            let outer = Circle::new(
                [0.0, 0.0],
                radius,
                circle_absorb(domain, absorber, BoundaryComponent::Outer)?,
            );
            circles(outer, None, config, d)
        }
        PlanarShape::Annulus { inner, outer } => {
            let o = Circle::new(
                [0.0, 0.0],
                outer,
                circle_absorb(domain, absorber, BoundaryComponent::Outer)?,
            );
            let i = Circle::new(
                [0.0, 0.0],
                inner,
                circle_absorb(domain, absorber, BoundaryComponent::Inner)?,
            );
            circles(o, Some(i), config, d)
        }
        PlanarShape::Rectangle { width, height } => {
            rectangle(domain, width, height, absorber, config, d)
        }
        PlanarShape::TangentCircles { radius, ratio } => {
            cusp(domain, radius, ratio, absorber, config, d)
        }
    }
}

/// Smallest signed angle from `b` to `a`, in (−π, π].
fn angle_diff(a: f64, b: f64) -> f64 {
    let x = (a - b + PI).rem_euclid(TAU) - PI;
    if x == -PI {
        PI
    } else {
        x
    }
}

/// Absorbing part of a circular wall.
#[derive(Debug, Clone, Copy)]
enum Absorb {
    Never,
    Always,
    /// Polar angle about the circle's centre within `half` of `center`.
    Arc {
        center: f64,
        half: f64,
    },
    /// Points z with Im(2R/z) ≤ −v0: the cusp window on either circle.
    Cusp {
        two_r: f64,
        v0: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Circle {
    c: [f64; 2],
    rho: f64,
    absorb: Absorb,
}

impl Circle {
    fn new(c: [f64; 2], rho: f64, absorb: Absorb) -> Self {
        Self { c, rho, absorb }
    }

    fn local(&self, p: [f64; 2]) -> [f64; 2] {
        [p[0] - self.c[0], p[1] - self.c[1]]
    }

    fn radius_of(&self, p: [f64; 2]) -> f64 {
        let l = self.local(p);
        l[0].hypot(l[1])
    }

    fn absorbs(&self, p: [f64; 2]) -> bool {
        match self.absorb {
            Absorb::Never => false,
            Absorb::Always => true,
            Absorb::Arc { center, half } => {
                let l = self.local(p);
                angle_diff(l[1].atan2(l[0]), center).abs() <= half
            }
            Absorb::Cusp { two_r, v0 } => (two_r / Complex64::new(p[0], p[1])).im <= -v0,
        }
    }

    /// Whether p moved by `offset` along the circle's tangent absorbs.
    fn absorbs_shifted(&self, p: [f64; 2], offset: f64) -> bool {
        let l = self.local(p);
        let r = l[0].hypot(l[1]);
        self.absorbs([p[0] - offset * l[1] / r, p[1] + offset * l[0] / r])
    }

    /// Distance from p to the absorbing part (0 where not tracked).
    fn window_distance(&self, p: [f64; 2]) -> f64 {
        let l = self.local(p);
        let r = l[0].hypot(l[1]);
        match self.absorb {
            Absorb::Never => f64::INFINITY,
            Absorb::Always => (r - self.rho).abs(),
            Absorb::Arc { center, half } => {
                let off = angle_diff(l[1].atan2(l[0]), center).abs();
                if off <= half {
                    (r - self.rho).abs()
                } else {
                    let edge = |a: f64| {
                        let (s, c) = a.sin_cos();
                        (l[0] - self.rho * c).hypot(l[1] - self.rho * s)
                    };
                    edge(center + half).min(edge(center - half))
                }
            }
            Absorb::Cusp { .. } => 0.0,
        }
    }

    /// Parameter f ∈ [0, 1] where a + f(b − a) meets the circle, given that a
    /// and b lie on opposite sides.
    fn crossing(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let la = self.local(a);
        let v = [b[0] - a[0], b[1] - a[1]];
        let qa = v[0] * v[0] + v[1] * v[1];
        let qb = 2.0 * (la[0] * v[0] + la[1] * v[1]);
        let qc = la[0] * la[0] + la[1] * la[1] - self.rho * self.rho;
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        // exiting (qc < 0) takes the larger root, entering the smaller one
        let f = if qc < 0.0 {
            (-qb + disc) / (2.0 * qa)
        } else {
            (-qb - disc) / (2.0 * qa)
        };
        f.clamp(0.0, 1.0)
    }

    /// Mirror image of p in the circle along its radial ray: r ↦ 2ρ − r.
    fn reflect(&self, p: [f64; 2]) -> [f64; 2] {
        let l = self.local(p);
        let r = l[0].hypot(l[1]);
        let s = (2.0 * self.rho - r) / r;
        [self.c[0] + l[0] * s, self.c[1] + l[1] * s]
    }
}

fn circle_absorb(
    domain: &PlanarDomain,
    absorber: &Absorber,
    component: BoundaryComponent,
) -> Result<Absorb, McError> {
    Ok(match absorber {
        Absorber::None => Absorb::Never,
        Absorber::Component(c) if *c == component => Absorb::Always,
        Absorber::Component(_) => Absorb::Never,
        Absorber::Window(w) => {
            let m = w.measures(&Domain::Planar(*domain))?;
            if w.component == component {
                Absorb::Arc {
                    center: w.center,
                    half: m.angular,
                }
            } else {
                Absorb::Never
            }
        }
    })
}

fn check_component(domain: &PlanarDomain, absorber: &Absorber) -> Result<(), McError> {
    use BoundaryComponent::*;
    if let Absorber::Component(c) = absorber {
        let ok = matches!(
            (domain.shape(), c),
            (PlanarShape::Disk { .. }, Outer)
                | (PlanarShape::Annulus { .. }, Outer | Inner)
                | (PlanarShape::Rectangle { .. }, TopEdge)
                | (PlanarShape::TangentCircles { .. }, Outer | Inner)
        );
        if !ok {
            return Err(McError::InvalidConfig(format!(
                "{c:?} is not a boundary component of this domain"
            )));
        }
    }
    Ok(())
}

struct Circles {
    outer: Circle,
    inner: Option<Circle>,
    ctrl: StepControl,
    d: f64,
    start: Start,
}

fn inside(outer: &Circle, inner: &Option<Circle>, p: [f64; 2]) -> bool {
    outer.radius_of(p) < outer.rho && inner.as_ref().is_none_or(|c| c.radius_of(p) > c.rho)
}

impl Walker for Circles {
    type State = [f64; 2];

    fn start(&self, rng: &mut PathRng) -> [f64; 2] {
        let r_in = self.inner.map_or(0.0, |c| c.rho);
        let (lo, hi) = match self.start {
            Start::Point { coords } => return coords,
            Start::Uniform => (r_in, self.outer.rho),
            Start::Band { lo, hi } => (lo.max(r_in), hi.min(self.outer.rho)),
        };
        let r = rng.random_range(lo * lo..hi * hi).sqrt();
        let a = rng.random_range(0.0..TAU);
        [r * a.cos(), r * a.sin()]
    }

    fn step(&self, p: &mut [f64; 2], rng: &mut PathRng) -> Step {
        let a0 = *p;
        let r_out = self.outer.radius_of(a0);
        let mut d_wall = self.outer.rho - r_out;
        let mut d_win = self.outer.window_distance(a0);
        if let Some(inner) = &self.inner {
            d_wall = d_wall.min(inner.radius_of(a0) - inner.rho);
            d_win = d_win.min(inner.window_distance(a0));
        }
        let sigma = self.ctrl.sigma(d_win, d_wall);
        let dt = sigma * sigma / (2.0 * self.d);
        let xi = normal2(rng);
        let mut a = a0;
        let mut b = [a0[0] + sigma * xi[0], a0[1] + sigma * xi[1]];
        let mut reflected = false;
        for _ in 0..8 {
            let wall = if self.outer.radius_of(b) > self.outer.rho {
                &self.outer
            } else if let Some(inner) = self.inner.as_ref().filter(|c| c.radius_of(b) < c.rho) {
                inner
            } else {
                break;
            };
            let f = wall.crossing(a, b);
            let c = [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])];
            if wall.absorbs_shifted(c, bridge_offset(f, sigma, rng)) {
                return Step::Absorbed(if reflected { dt } else { f * dt });
            }
            b = wall.reflect(b);
            a = c;
            reflected = true;
        }
        if !inside(&self.outer, &self.inner, b) {
            // pathological multiple bounce: stay put for this step
            b = a0;
        }
        *p = b;
        if !reflected {
            for wall in std::iter::once(&self.outer).chain(self.inner.as_ref()) {
                if matches!(wall.absorb, Absorb::Never) {
                    continue;
                }
                let da = (wall.radius_of(a0) - wall.rho).abs();
                let db = (wall.radius_of(b) - wall.rho).abs();
                if da * db < 8.0 * sigma * sigma && rng.random::<f64>() < bridge_hit(da, db, sigma)
                {
                    let t = da / (da + db);
                    let c = [a0[0] + t * (b[0] - a0[0]), a0[1] + t * (b[1] - a0[1])];
                    if wall.absorbs_shifted(c, bridge_offset(t, sigma, rng)) {
                        return Step::Absorbed(dt);
                    }
                }
            }
        }
        Step::Moved(dt)
    }
}

fn check_start_point(ok: bool, start: &Start) -> Result<(), McError> {
    if let Start::Point { coords } = start {
        if !ok {
            return Err(McError::InvalidConfig(format!(
                "start point {coords:?} is not strictly inside the domain"
            )));
        }
    }
    Ok(())
}

fn window_length(absorb: &Absorb, rho: f64) -> f64 {
    match absorb {
        Absorb::Arc { half, .. } => rho * half,
        _ => f64::INFINITY,
    }
}

fn circles(
    outer: Circle,
    inner: Option<Circle>,
    config: &McConfig,
    d: f64,
) -> Result<McEstimate, McError> {
    let r_in = inner.map_or(0.0, |c| c.rho);
    let width = outer.rho - r_in;
    let curvature = inner.map_or(outer.rho, |c| c.rho);
    let scale = width.min(curvature);
    let ctrl = StepControl::new(config, d, 0.2 * scale, 0.02 * curvature);
    let half_window = window_length(&outer.absorb, outer.rho)
        .min(inner.map_or(f64::INFINITY, |c| window_length(&c.absorb, c.rho)));
    if ctrl.fine >= half_window {
        return Err(McError::Resolution {
            step: ctrl.fine,
            scale: half_window,
            what: "window half-length",
        });
    }
    if ctrl.fine >= 0.25 * scale {
        return Err(McError::Resolution {
            step: ctrl.fine,
            scale,
            what: "domain",
        });
    }
    check_start_point(
        match config.start {
            Start::Point { coords } => inside(&outer, &inner, coords),
            _ => true,
        },
        &config.start,
    )?;
    if let Start::Band { lo, hi } = config.start {
        if hi.min(outer.rho) <= lo.max(r_in) {
            return Err(McError::InvalidConfig(format!(
                "band [{lo}, {hi}] misses the domain"
            )));
        }
    }
    let walker = Circles {
        outer,
        inner,
        ctrl,
        d,
        start: config.start,
    };
    run(&walker, config, config.dt)
}

/// Reflects x into [0, a].
fn fold(x: f64, a: f64) -> f64 {
    let m = x.rem_euclid(2.0 * a);
    if m > a {
        2.0 * a - m
    } else {
        m
    }
}

struct Rectangle {
    a: f64,
    b: f64,
    /// Absorbing interval of the top edge, if any.
    window: Option<(f64, f64)>,
    ctrl: StepControl,
    d: f64,
    start: Start,
}

impl Rectangle {
    fn in_window(&self, x: f64) -> bool {
        self.window.is_some_and(|(lo, hi)| x >= lo && x <= hi)
    }
}

impl Walker for Rectangle {
    type State = [f64; 2];

    fn start(&self, rng: &mut PathRng) -> [f64; 2] {
        let (lo, hi) = match self.start {
            Start::Point { coords } => return coords,
            Start::Uniform => (0.0, self.b),
            Start::Band { lo, hi } => (lo.max(0.0), hi.min(self.b)),
        };
        [rng.random_range(0.0..self.a), rng.random_range(lo..hi)]
    }

    fn step(&self, p: &mut [f64; 2], rng: &mut PathRng) -> Step {
        let [x, y] = *p;
        let d_win = match self.window {
            Some((lo, hi)) => (x - x.clamp(lo, hi)).hypot(self.b - y),
            None => f64::INFINITY,
        };
        // flat walls: folding is exact for any step, so only the window limits it
        let sigma = self.ctrl.sigma(d_win, f64::INFINITY);
        let dt = sigma * sigma / (2.0 * self.d);
        let xi = normal2(rng);
        let (dx, dy) = (sigma * xi[0], sigma * xi[1]);
        let mut y1 = y + dy;
        let crossed = y1 > self.b;
        if crossed {
            let f = (self.b - y) / dy;
            if self.in_window(fold(x + f * dx + bridge_offset(f, sigma, rng), self.a)) {
                return Step::Absorbed(f * dt);
            }
            y1 = 2.0 * self.b - y1;
        }
        let x1 = fold(x + dx, self.a);
        let y1 = fold(y1, self.b);
        *p = [x1, y1];
        if !crossed && self.window.is_some() {
            let (da, db) = (self.b - y, self.b - y1);
            if da * db < 8.0 * sigma * sigma && rng.random::<f64>() < bridge_hit(da, db, sigma) {
                let t = da / (da + db);
                if self.in_window(fold(x + t * dx + bridge_offset(t, sigma, rng), self.a)) {
                    return Step::Absorbed(dt);
                }
            }
        }
        Step::Moved(dt)
    }
}

fn rectangle(
    domain: &PlanarDomain,
    a: f64,
    b: f64,
    absorber: &Absorber,
    config: &McConfig,
    d: f64,
) -> Result<McEstimate, McError> {
    let window = match absorber {
        Absorber::None => None,
        Absorber::Component(_) => Some((0.0, a)),
        Absorber::Window(w) => {
            let m = w.measures(&Domain::Planar(*domain))?;
            let half = m.angular * a / PI;
            Some(((w.center - half).max(0.0), (w.center + half).min(a)))
        }
    };
    let ctrl = StepControl::new(config, d, 0.1 * a.min(b), 0.0);
    if let Some((lo, hi)) = window {
        if ctrl.fine >= 0.5 * (hi - lo) {
            return Err(McError::Resolution {
                step: ctrl.fine,
                scale: 0.5 * (hi - lo),
                what: "window half-length",
            });
        }
    }
    if ctrl.fine >= 0.25 * a.min(b) {
        return Err(McError::Resolution {
            step: ctrl.fine,
            scale: a.min(b),
            what: "domain",
        });
    }
    check_start_point(
        match config.start {
            Start::Point { coords: [x, y] } => x > 0.0 && x < a && y > 0.0 && y < b,
            _ => true,
        },
        &config.start,
    )?;
    if let Start::Band { lo, hi } = config.start {
        if hi.min(b) <= lo.max(0.0) {
            return Err(McError::InvalidConfig(format!(
                "band [{lo}, {hi}] misses the domain"
            )));
        }
    }
    run(
        &Rectangle {
            a,
            b,
            window,
            ctrl,
            d,
            start: config.start,
        },
        config,
        config.dt,
    )
}

/// Absorbing part of one wall of the strip 1 < Re ζ < 1/d.
#[derive(Debug, Clone, Copy)]
enum StripWall {
    Never,
    Always,
    /// Im ζ ≤ −v0, the prong y > 0.
    Beyond(f64),
}

impl StripWall {
    fn absorbs(&self, v: f64) -> bool {
        match *self {
            StripWall::Never => false,
            StripWall::Always => true,
            StripWall::Beyond(v0) => v <= -v0,
        }
    }

    fn distance(&self, du: f64, v: f64) -> f64 {
        match *self {
            StripWall::Never => f64::INFINITY,
            StripWall::Always => du,
            StripWall::Beyond(v0) => {
                if v <= -v0 {
                    du
                } else {
                    du.hypot(v + v0)
                }
            }
        }
    }
}

/// The tangent-circles domain after ζ = 2R/z, which maps the outer circle to
/// Re ζ = 1, the inner one to Re ζ = 1/d and the cusp to infinity. Physical
/// time advances by |dz/dζ|² = 4R²/|ζ|⁴ per unit of strip time.
struct CuspStrip {
    two_r: f64,
    u_max: f64,
    walls: [StripWall; 2],
    ctrl: StepControl,
    /// Physical step bound far from the cusp.
    phys_max: f64,
    d: f64,
    start: Start,
    ratio: f64,
}

fn in_crescent(z: Complex64, radius: f64, ratio: f64) -> bool {
    (z - radius).norm() < radius && (z - radius * ratio).norm() > radius * ratio
}

fn sample_crescent(rng: &mut PathRng, radius: f64, ratio: f64) -> Complex64 {
    loop {
        let z = Complex64::new(
            rng.random_range(0.0..2.0 * radius),
            rng.random_range(-radius..radius),
        );
        if in_crescent(z, radius, ratio) {
            return z;
        }
    }
}

impl Walker for CuspStrip {
    type State = Complex64;

    fn start(&self, rng: &mut PathRng) -> Complex64 {
        let z = match self.start {
            Start::Point { coords } => Complex64::new(coords[0], coords[1]),
            _ => sample_crescent(rng, 0.5 * self.two_r, self.ratio),
        };
        self.two_r / z
    }

    fn step(&self, zeta: &mut Complex64, rng: &mut PathRng) -> Step {
        let (u, v) = (zeta.re, zeta.im);
        let width = self.u_max - 1.0;
        let du = [u - 1.0, self.u_max - u];
        let d_win = self.walls[0]
            .distance(du[0], v)
            .min(self.walls[1].distance(du[1], v));
        let m = zeta.norm();
        let jac = m * m / self.two_r; // strip length per physical length
                                      // flat walls fold exactly, so away from the window only the time
                                      // change limits the step
        let cap = (0.1 * m).min(self.phys_max * jac);
        let floor = (width / 400.0).min(self.ctrl.fine * jac).min(cap);
        let sigma = (self.ctrl.window_factor * d_win).min(cap).max(floor);
        let dt_strip = sigma * sigma / (2.0 * self.d);
        let speed = |z: Complex64| {
            let n2 = z.norm_sqr();
            self.two_r * self.two_r / (n2 * n2)
        };
        let xi = normal2(rng);
        let mut next = Complex64::new(u + sigma * xi[0], v + sigma * xi[1]);
        let first = if next.re < 1.0 {
            Some((0, 1.0))
        } else if next.re > self.u_max {
            Some((1, self.u_max))
        } else {
            None
        };
        if let Some((k, edge)) = first {
            let f = (u - edge) / (u - next.re);
            let vc = v + f * (next.im - v) + bridge_offset(f, sigma, rng);
            if self.walls[k].absorbs(vc) {
                return Step::Absorbed(f * dt_strip * speed(*zeta));
            }
            next.re = 1.0 + fold(next.re - 1.0, width);
        }
        let dt = dt_strip * 0.5 * (speed(*zeta) + speed(next));
        let du1 = [next.re - 1.0, self.u_max - next.re];
        for k in 0..2 {
            if first.is_none()
                && !matches!(self.walls[k], StripWall::Never)
                && du[k] * du1[k] < 8.0 * sigma * sigma
                && rng.random::<f64>() < bridge_hit(du[k], du1[k], sigma)
            {
                let t = du[k] / (du[k] + du1[k]);
                if self.walls[k].absorbs(v + t * (next.im - v) + bridge_offset(t, sigma, rng)) {
                    *zeta = next;
                    return Step::Absorbed(dt);
                }
            }
        }
        *zeta = next;
        Step::Moved(dt)
    }
}

fn cusp(
    domain: &PlanarDomain,
    radius: f64,
    ratio: f64,
    absorber: &Absorber,
    config: &McConfig,
    d: f64,
) -> Result<McEstimate, McError> {
    let two_r = 2.0 * radius;
    // (outer wall, inner wall)
    let (outer, inner, eps) = match absorber {
        Absorber::None => (StripWall::Never, StripWall::Never, None),
        Absorber::Component(BoundaryComponent::Outer) => {
            (StripWall::Always, StripWall::Never, None)
        }
        Absorber::Component(_) => (StripWall::Never, StripWall::Always, None),
        Absorber::Window(w) => {
            let m = w.measures(&Domain::Planar(*domain))?;
            let v0 = 1.0 / m.ratio;
            (StripWall::Beyond(v0), StripWall::Beyond(v0), Some(m.ratio))
        }
    };
    check_start_point(
        match config.start {
            Start::Point { coords } => {
                in_crescent(Complex64::new(coords[0], coords[1]), radius, ratio)
            }
            _ => true,
        },
        &config.start,
    )?;
    if let Start::Band { .. } = config.start {
        return Err(McError::InvalidConfig(
            "band starts are not defined for the tangent-circles domain".into(),
        ));
    }
    let fine = (2.0 * d * config.dt).sqrt();
    if config.adaptive {
        let ctrl = StepControl::new(config, d, 0.1 * radius, 0.0);
        let walker = CuspStrip {
            two_r,
            u_max: 1.0 / ratio,
            walls: [outer, inner],
            ctrl,
            phys_max: ctrl.max,
            d,
            start: config.start,
            ratio,
        };
        return run(&walker, config, config.dt);
    }
    if let Some(eps) = eps {
        // channel width where the window begins: (1/d − 1)·|z|²/(2R) at |ζ| = √(1 + 1/ε²)
        let width = (1.0 / ratio - 1.0) * two_r / (1.0 + 1.0 / (eps * eps));
        if fine >= 0.5 * width {
            return Err(McError::Resolution {
                step: fine,
                scale: width,
                what: "cusp channel at the window edge",
            });
        }
    }
    let to_absorb = |w: StripWall| match w {
        StripWall::Never => Absorb::Never,
        StripWall::Always => Absorb::Always,
        StripWall::Beyond(v0) => Absorb::Cusp { two_r, v0 },
    };
    let walker = Circles {
        outer: Circle::new([radius, 0.0], radius, to_absorb(outer)),
        inner: Some(Circle::new(
            [radius * ratio, 0.0],
            radius * ratio,
            to_absorb(inner),
        )),
        ctrl: StepControl::new(config, d, fine, 0.0),
        d,
        start: config.start,
    };
    run(&CuspDirect(walker, radius, ratio), config, config.dt)
}

/// Fixed-step simulation directly in the z-plane.
struct CuspDirect(Circles, f64, f64);

impl Walker for CuspDirect {
    type State = [f64; 2];

    fn start(&self, rng: &mut PathRng) -> [f64; 2] {
        match self.0.start {
            Start::Point { coords } => coords,
            _ => {
                let z = sample_crescent(rng, self.1, self.2);
                [z.re, z.im]
            }
        }
    }

    fn step(&self, p: &mut [f64; 2], rng: &mut PathRng) -> Step {
        self.0.step(p, rng)
    }
}
