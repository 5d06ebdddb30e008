use narrow_escape::geometry::{
    BoundaryComponent, ConformalMap, Convention, Domain, MapPoint, PlanarDomain, SpherePoint,
    SphericalDomain, Window,
};
use narrow_escape_oracles::polar_integral;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn round_trip_plane(map: ConformalMap, sample: impl Fn(&mut ChaCha8Rng) -> Complex64) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = sample(&mut rng);
        let w = map.apply(z.into()).unwrap();
        let back = map.invert(w).unwrap().plane().unwrap();
        worst = worst.max(rel(back, z));
    }
    assert!(worst < 1e-12, "{map:?}: worst relative round-trip error {worst:e}");
}

#[test]
fn inversion_round_trip() {
    round_trip_plane(ConformalMap::Inversion, |rng| {
        Complex64::from_polar(rng.random_range(0.1..10.0), rng.random_range(-PI..PI))
    });
}

#[test]
fn corner_flatten_round_trip() {
    for alpha in [PI / 3.0, PI / 2.0, 0.9 * PI, 1.5 * PI] {
        round_trip_plane(ConformalMap::CornerFlatten { alpha }, |rng| {
            Complex64::from_polar(rng.random_range(0.01..3.0), rng.random_range(0.0..alpha))
        });
    }
}

#[test]
fn cusp_map_round_trip() {
    for d in [0.25, 0.5, 0.8] {
        round_trip_plane(ConformalMap::CuspMap { ratio: d }, |rng| loop {
            // rejection sample the region between |z − 1/2| = 1/2 and |z − d/2| = d/2,
            // away from the cusp so that exp(…) stays representable
            let z = Complex64::new(rng.random_range(0.0..1.0), rng.random_range(-0.5..0.5));
            let outer = (z - 0.5).norm() < 0.5;
            let inner = (z - 0.5 * d).norm() < 0.5 * d;
            if outer && !inner && z.norm() > 0.05 {
                break z;
            }
        });
    }
}

#[test]
fn stereographic_round_trip() {
    let map = ConformalMap::Stereographic { radius: 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = SpherePoint {
            theta: rng.random_range(0.01..PI - 0.01),
            phi: rng.random_range(0.0..2.0 * PI),
        };
        let back = map.invert(map.apply(p.into()).unwrap()).unwrap().sphere().unwrap();
        worst = worst
            .max((back.theta - p.theta).abs() / p.theta)
            .max((back.phi - p.phi).abs() / p.phi);
    }
    assert!(worst < 1e-12, "{worst:e}");
}

fn to_cartesian(p: SpherePoint) -> [f64; 3] {
    [
        p.theta.sin() * p.phi.cos(),
        p.theta.sin() * p.phi.sin(),
        p.theta.cos(),
    ]
}

fn angle3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let na = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos()
}

#[test]
fn stereographic_preserves_angles() {
    let map = ConformalMap::Stereographic { radius: 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-6;
    for _ in 0..200 {
        let p = SpherePoint {
            theta: rng.random_range(0.3..PI - 0.3),
            phi: rng.random_range(0.0..2.0 * PI),
        };
        let d1: (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let d2: (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let shift = |d: (f64, f64), s: f64| SpherePoint {
            theta: p.theta + s * d.0,
            phi: p.phi + s * d.1,
        };
        let tangent3 = |d| {
            let a = to_cartesian(shift(d, h));
            let b = to_cartesian(shift(d, -h));
            [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
        };
        let image = |q: SpherePoint| map.apply(q.into()).unwrap().plane().unwrap();
        let tangent2 = |d| image(shift(d, h)) - image(shift(d, -h));
        let on_sphere = angle3(tangent3(d1), tangent3(d2));
        let (u, v) = (tangent2(d1), tangent2(d2));
        let in_plane = ((u.conj() * v).arg()).abs();
        assert!(
            (on_sphere - in_plane).abs() < 1e-9,
            "angle {on_sphere} on sphere vs {in_plane} in plane"
        );
    }
}

#[test]
fn corner_flatten_transports_area() {
    // z² maps the quarter disk of radius ρ onto the upper half disk of radius ρ²
    let map = ConformalMap::CornerFlatten { alpha: PI / 2.0 };
    let rho: f64 = 0.8;
    let j = polar_integral(
        |r, phi| map.jacobian(Complex64::from_polar(r, phi).into()).unwrap(),
        0.0,
        rho,
        0.0,
        PI / 2.0,
    );
    let image = 0.5 * PI * rho.powi(4);
    assert!((j - image).abs() / image < 1e-6, "{j} vs {image}");
}

#[test]
fn inversion_transports_area() {
    // 1/z maps 1 < |z| < 2 onto 1/2 < |w| < 1
    let j = polar_integral(
        |r, phi| ConformalMap::Inversion.jacobian(Complex64::from_polar(r, phi).into()).unwrap(),
        1.0,
        2.0,
        0.0,
        2.0 * PI,
    );
    let image = PI * (1.0 - 0.25);
    assert!((j - image).abs() / image < 1e-6, "{j} vs {image}");
}

#[test]
fn stereographic_transports_area() {
    // disk of radius cot(δ/2) in the plane ↔ cap complement θ > δ of the sphere
    let radius = 1.7;
    let delta: f64 = 0.4;
    let map = ConformalMap::Stereographic { radius };
    let r_max = 1.0 / (0.5 * delta).tan();
    let sphere_area = polar_integral(
        |r, _| {
            let theta = 2.0 * (1.0 / r).atan();
            1.0 / map.jacobian(SpherePoint { theta, phi: 0.0 }.into()).unwrap()
        },
        0.0,
        r_max,
        0.0,
        2.0 * PI,
    );
    let want = SphericalDomain::decapitated(radius, delta).unwrap().area();
    assert!((sphere_area - want).abs() / want < 1e-6, "{sphere_area} vs {want}");
}

#[test]
fn cusp_map_sends_both_circles_to_the_real_axis() {
    for d in [0.3, 0.5, 0.7] {
        let map = ConformalMap::CuspMap { ratio: d };
        for k in 1..200 {
            // angles bounded away from the cusp at ψ = π
            let psi = -2.5 + 5.0 * k as f64 / 200.0;
            for (c, r) in [(0.5, 0.5), (0.5 * d, 0.5 * d)] {
                let z = Complex64::new(c, 0.0) + Complex64::from_polar(r, psi);
                let w = map.apply(z.into()).unwrap().plane().unwrap();
                assert!(w.im.abs() < 1e-9 * w.norm().max(1.0), "d={d} psi={psi}: {w}");
            }
        }
        // an interior point lands in the upper half-plane
        let mid = Complex64::new(0.5 * (1.0 + d), 0.0);
        assert!(map.apply(mid.into()).unwrap().plane().unwrap().im > 0.0);
    }
}

#[test]
fn singular_points_are_rejected() {
    let zero = MapPoint::Plane(Complex64::new(0.0, 0.0));
    assert!(ConformalMap::Inversion.apply(zero).is_err());
    assert!(ConformalMap::CuspMap { ratio: 0.5 }.apply(zero).is_err());
    assert!(ConformalMap::CornerFlatten { alpha: 1.0 }.jacobian(zero).is_err());
}

#[test]
fn jacobians_are_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let z = Complex64::from_polar(rng.random_range(0.1..2.0), rng.random_range(0.0..1.0));
        assert!(ConformalMap::Inversion.jacobian(z.into()).unwrap() > 0.0);
        assert!(ConformalMap::CornerFlatten { alpha: 1.2 }.jacobian(z.into()).unwrap() > 0.0);
    }
}

fn window_cases() -> Vec<(Domain, BoundaryComponent, f64, f64)> {
    // (domain, component, centre, largest angular half-width)
    vec![
        (PlanarDomain::disk(1.3).unwrap().into(), BoundaryComponent::Outer, 0.4, PI),
        (PlanarDomain::annulus(0.5, 2.0).unwrap().into(), BoundaryComponent::Inner, PI, PI),
        (PlanarDomain::annulus(0.5, 2.0).unwrap().into(), BoundaryComponent::Outer, 1.0, PI),
        (PlanarDomain::rectangle(2.0, 1.0).unwrap().into(), BoundaryComponent::TopEdge, 2.0, PI / 2.0),
        (PlanarDomain::rectangle(2.0, 1.0).unwrap().into(), BoundaryComponent::TopEdge, 0.7, PI / 2.0),
        (PlanarDomain::tangent_circles(0.5, 0.5).unwrap().into(), BoundaryComponent::Cusp, 0.0, PI / 2.0),
        (SphericalDomain::decapitated(1.0, 0.3).unwrap().into(), BoundaryComponent::CapRim, PI, PI),
    ]
}

proptest! {
    #[test]
    fn convention_round_trip(case in 0usize..7, frac in 0.001f64..0.99) {
        let (domain, component, center, limit) = window_cases()[case];
        let w = Window::new(component, center, frac * limit, Convention::AngularHalfWidth);
        let back = w
            .with_convention(Convention::Arclength, &domain).unwrap()
            .with_convention(Convention::LengthRatio, &domain).unwrap()
            .with_convention(Convention::AngularHalfWidth, &domain).unwrap();
        prop_assert!((back.half_width - w.half_width).abs() <= 1e-12 * w.half_width);
        let m = w.measures(&domain).unwrap();
        prop_assert!(m.arclength > 0.0 && m.ratio > 0.0);
    }

    #[test]
    fn windows_at_half_the_component_fail(case in 0usize..7, over in 1.0f64..2.0) {
        let (domain, component, center, limit) = window_cases()[case];
        let w = Window::new(component, center, over * limit, Convention::AngularHalfWidth);
        prop_assert!(w.measures(&domain).is_err());
    }
}
