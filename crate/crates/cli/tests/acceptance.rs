//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use narrow_escape::asymptotics::*;
use narrow_escape::dualseries::{
    log_integral_identity, solve_collocation, solve_h1_neumann, DualSeriesProblem,
};
use narrow_escape::geometry::{
    Convention, Domain, MapPoint, PlanarDomain, SpherePoint, SphericalDomain, Window,
};
use narrow_escape::geometry::ConformalMap;
use narrow_escape_mc::{
    inverse_eps_constants, log_slope, simulate_planar, simulate_sphere, sweep, McConfig,
    McEstimate, Start,
};
use narrow_escape_oracles::{log_moment, polar_integral};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn show(e: &McEstimate) -> String {
    format!("{:.4} ± {:.4} ({} paths)", e.mean, e.stderr, e.n_absorbed)
}

/// Relative deviation |MC − formula| / MC.
fn rel_to_mc(e: &McEstimate, formula: f64) -> f64 {
    (e.mean - formula).abs() / e.mean
}

fn planar_window(p: PlanarDomain, eps: f64, convention: Convention) -> Window {
    Window::canonical(&Domain::Planar(p), eps, convention).unwrap()
}

fn sphere_cap() -> Outcome {
    let s = SphericalDomain::decapitated(1.0, 0.3).unwrap();
    let cfg = McConfig::new(100_000, 1e-5, 1).with_start(Start::Point { coords: [PI, 0.0] });
    let e = simulate_sphere(&s, None, &cfg, 1.0).unwrap();
    // closed form at the south pole, computed here independently of the library
    let want = 2.0 * (1.0 / 0.15f64.sin()).ln();
    let lib = sphere_cap_mfpt_point(1.0, 0.3, PI, 1.0).unwrap();
    let allowed = (3.0 * e.stderr).max(0.02 * want);
    outcome(
        (e.mean - want).abs() <= allowed && (lib - want).abs() < 1e-12,
        format!("MC {} vs 2 log(1/sin 0.15) = {want:.5}, allowed ±{allowed:.4}", show(&e)),
    )
}

fn annulus() -> Outcome {
    let p = PlanarDomain::annulus(1.0, 2.0).unwrap();
    let w = planar_window(p, 0.05, Convention::AngularHalfWidth);
    let e = simulate_planar(&p, &w.into(), &McConfig::new(100_000, 1e-5, 2), 1.0).unwrap();
    let f = mfpt_annulus_avg(1.0, 2.0, 0.05, 1.0).unwrap().value;
    let r = rel_to_mc(&e, f);
    outcome(r <= 0.10, format!("MC {} vs formula {f:.4}, relative {r:.4} (≤ 0.10)", show(&e)))
}

fn rectangle() -> Outcome {
    let p = PlanarDomain::rectangle(1.0, 1.0).unwrap();
    let w = planar_window(p, 0.02, Convention::Arclength);
    let e = simulate_planar(&p, &w.into(), &McConfig::new(100_000, 1e-5, 3), 1.0).unwrap();
    let f = mfpt_rectangle_avg(1.0, 1.0, 0.02, 1.0).unwrap().value;
    let r = rel_to_mc(&e, f);
    outcome(r <= 0.07, format!("MC {} vs formula {f:.4}, relative {r:.4} (≤ 0.07)", show(&e)))
}

fn cusp() -> Outcome {
    let p = PlanarDomain::tangent_circles(0.5, 0.5).unwrap();
    let template = planar_window(p, 0.2, Convention::LengthRatio);
    let eps = [0.2, 0.1, 0.05];
    let rows = sweep(&Domain::Planar(p), &template, &eps, &McConfig::new(20_000, 1e-5, 4), 1.0)
        .unwrap();
    let law = 3.0 * PI / 16.0;
    let lib = mfpt_cusp_leading(&p, 0.05, 1.0).unwrap().value * 0.05;
    let devs: Vec<f64> = inverse_eps_constants(&rows)
        .iter()
        .map(|c| (c - law).abs() / law)
        .collect();
    let last = *devs.last().unwrap();
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let consts: Vec<String> = inverse_eps_constants(&rows)
        .iter()
        .map(|c| format!("{c:.4}"))
        .collect();
    outcome(
        last <= 0.15 && decreasing && (lib - law).abs() < 1e-12,
        format!(
            "mean·ε at ε = 0.2, 0.1, 0.05: [{}] vs 3π/16 = {law:.4}; deviations {:.3?}",
            consts.join(", "),
            devs
        ),
    )
}

fn sphere_window() -> Outcome {
    let s = SphericalDomain::decapitated(1.0, 0.3).unwrap();
    let w = Window::canonical(&Domain::Spherical(s), 0.05, Convention::AngularHalfWidth).unwrap();
    let e = simulate_sphere(&s, Some(&w), &McConfig::new(20_000, 1e-5, 5), 1.0).unwrap();
    let f = sphere_window_mfpt_avg(1.0, 0.3, 0.05, 1.0).unwrap().value;
    let r = rel_to_mc(&e, f);
    outcome(r <= 0.10, format!("MC {} vs formula {f:.4}, relative {r:.4} (≤ 0.10)", show(&e)))
}

fn solvers() -> Outcome {
    let p = DualSeriesProblem::annulus(0.3, 1.0, 0.01, 64).unwrap();
    let c = solve_collocation(&p).unwrap().c0;
    let closed = c0_annulus(0.3, 1.0, 0.01).unwrap().value;
    let first = (c - closed).abs() / closed;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut all = true;
    for _ in 0..10 {
        let beta: f64 = rng.random_range(0.05..0.4);
        let eps: f64 = rng.random_range(0.005..0.05);
        let r2 = 1.0 + rng.random::<f64>();
        let q = DualSeriesProblem::annulus(beta * r2, r2, eps, 64).unwrap();
        let n = solve_h1_neumann(&q).unwrap().c0;
        let c = solve_collocation(&q).unwrap().c0;
        let r = (n - c).abs() / c.abs();
        let tol = (3.0 * eps).max(5.0 * beta.powi(4));
        all &= r <= tol;
        worst = worst.max(r / tol);
    }
    outcome(
        first <= 0.02 && all,
        format!(
            "collocation c₀ {c:.5} vs closed form {closed:.5} (relative {first:.2e}); \
             Neumann vs collocation worst ratio to tolerance {worst:.3}"
        ),
    )
}

fn log_identity() -> Outcome {
    let mut worst = 0.0f64;
    for eps in [0.5, 1.0] {
        for n in 0..4u32 {
            for s in [0.0, 0.5 * eps, -0.5 * eps] {
                let got = log_integral_identity(n, s, eps).unwrap();
                worst = worst.max((got - log_moment(n, s, eps)).abs());
            }
        }
    }
    outcome(worst < 1e-8, format!("worst absolute error {worst:.2e} over 24 cases"))
}

fn slopes() -> Outcome {
    let eps = [0.1, 0.05, 0.025];
    let annulus = PlanarDomain::annulus(1.0, 2.0).unwrap();
    let rows = sweep(
        &Domain::Planar(annulus),
        &planar_window(annulus, 0.1, Convention::AngularHalfWidth),
        &eps,
        &McConfig::new(10_000, 1e-5, 8),
        1.0,
    )
    .unwrap();
    let (smooth, _) = log_slope(&rows);
    let smooth_want = annulus.area() / PI;
    let rect = PlanarDomain::rectangle(1.0, 1.0).unwrap();
    let rows = sweep(
        &Domain::Planar(rect),
        &planar_window(rect, 0.1, Convention::Arclength),
        &eps,
        &McConfig::new(40_000, 1e-5, 9),
        1.0,
    )
    .unwrap();
    let (corner, _) = log_slope(&rows);
    let corner_want = 2.0 * rect.area() / PI;
    let a = (smooth - smooth_want).abs() / smooth_want;
    let b = (corner - corner_want).abs() / corner_want;
    outcome(
        a <= 0.15 && b <= 0.15,
        format!(
            "annulus slope {smooth:.4} vs |Ω|/π = {smooth_want:.4} ({a:.3}); \
             rectangle corner slope {corner:.4} vs 2|Ω|/π = {corner_want:.4} ({b:.3})"
        ),
    )
}

fn plane_round_trip(map: ConformalMap, z: Complex64) -> f64 {
    let back = map.invert(map.apply(z.into()).unwrap()).unwrap().plane().unwrap();
    (back - z).norm() / z.norm()
}

fn conformal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut trip = 0.0f64;
    for _ in 0..1000 {
        let z = Complex64::from_polar(rng.random_range(0.1..10.0), rng.random_range(-PI..PI));
        trip = trip.max(plane_round_trip(ConformalMap::Inversion, z));
        let alpha = rng.random_range(0.2..1.9) * PI;
        let z = Complex64::from_polar(rng.random_range(0.01..3.0), rng.random_range(0.0..alpha));
        trip = trip.max(plane_round_trip(ConformalMap::CornerFlatten { alpha }, z));
        let d = rng.random_range(0.2..0.8);
        let z = loop {
            let z = Complex64::new(rng.random_range(0.0..1.0), rng.random_range(-0.5..0.5));
            if (z - 0.5).norm() < 0.5 && (z - 0.5 * d).norm() > 0.5 * d && z.norm() > 0.05 {
                break z;
            }
        };
        trip = trip.max(plane_round_trip(ConformalMap::CuspMap { ratio: d }, z));
        let st = ConformalMap::Stereographic { radius: rng.random_range(0.5..2.0) };
        let p = SpherePoint {
            theta: rng.random_range(0.01..PI - 0.01),
            phi: rng.random_range(0.01..2.0 * PI),
        };
        let back = st.invert(st.apply(p.into()).unwrap()).unwrap().sphere().unwrap();
        trip = trip
            .max((back.theta - p.theta).abs() / p.theta)
            .max((back.phi - p.phi).abs() / p.phi);
    }

    // transported areas against the exact areas of the images
    let jac = |m: ConformalMap| move |r: f64, phi: f64| {
        m.jacobian(MapPoint::Plane(Complex64::from_polar(r, phi))).unwrap()
    };
    let mut area = 0.0f64;
    let inv = polar_integral(jac(ConformalMap::Inversion), 1.0, 2.0, 0.0, 2.0 * PI);
    area = area.max((inv - 0.75 * PI).abs() / (0.75 * PI));
    let quarter = polar_integral(
        jac(ConformalMap::CornerFlatten { alpha: PI / 2.0 }),
        0.0,
        0.8,
        0.0,
        PI / 2.0,
    );
    let half_disk = 0.5 * PI * 0.8f64.powi(4);
    area = area.max((quarter - half_disk).abs() / half_disk);
    let (radius, delta) = (1.7, 0.4f64);
    let st = ConformalMap::Stereographic { radius };
    let sphere_area = polar_integral(
        |r, _| {
            let theta = 2.0 * (1.0 / r).atan();
            1.0 / st.jacobian(SpherePoint { theta, phi: 0.0 }.into()).unwrap()
        },
        0.0,
        1.0 / (0.5 * delta).tan(),
        0.0,
        2.0 * PI,
    );
    let cap = SphericalDomain::decapitated(radius, delta).unwrap().area();
    area = area.max((sphere_area - cap).abs() / cap);

    // radial planar solution carried to the sphere against the cap solution
    let mut pointwise = 0.0f64;
    for (radius, delta) in [(1.0, 0.3), (0.5, 0.2), (2.5, 1.1)] {
        let st = ConformalMap::Stereographic { radius };
        let r_of = |theta: f64| {
            st.apply(SpherePoint { theta, phi: 0.7 }.into()).unwrap().plane().unwrap().norm()
        };
        let rd = r_of(delta);
        for k in 0..=100 {
            let theta = (delta + (PI - delta) * k as f64 / 100.0).min(PI);
            let r = r_of(theta);
            let carried = radius * radius * ((1.0 + rd * rd) / (1.0 + r * r)).ln();
            let direct = sphere_cap_mfpt_point(radius, delta, theta, 1.0).unwrap();
            pointwise = pointwise.max((carried - direct).abs() / direct.abs().max(1.0));
        }
    }
    outcome(
        trip < 1e-12 && area < 1e-6 && pointwise < 1e-12,
        format!("round trip {trip:.1e}, area transport {area:.1e}, stereographic transport {pointwise:.1e}"),
    )
}

fn laplace_beltrami() -> Outcome {
    let h = 1e-4;
    let mut worst = 0.0f64;
    for (radius, delta) in [(1.0, 0.3), (1.7, 0.8)] {
        let v = |theta: f64| sphere_cap_mfpt_point(radius, delta, theta, 1.0).unwrap();
        for k in 1..=50 {
            let theta = delta + 2.0 * h + (PI - 0.05 - delta - 2.0 * h) * k as f64 / 50.0;
            let d1 = (v(theta + h) - v(theta - h)) / (2.0 * h);
            let d2 = (v(theta + h) - 2.0 * v(theta) + v(theta - h)) / (h * h);
            let lb = (d2 + d1 / theta.tan()) / (radius * radius);
            worst = worst.max((lb + 1.0).abs());
        }
    }
    outcome(worst < 1e-5, format!("worst residual {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("sphere cap, exact solution", sphere_cap),
        ("annulus expansion", annulus),
        ("rectangle corner", rectangle),
        ("cusp algebraic law", cusp),
        ("sphere with rim window", sphere_window),
        ("series solvers", solvers),
        ("logarithmic moment identity", log_identity),
        ("log(1/ε) slopes", slopes),
        ("conformal maps", conformal),
        ("Laplace–Beltrami residual", laplace_beltrami),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        println!(
            "criterion {}: {} {name}: {} [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
