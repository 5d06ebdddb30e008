//! Reference computations for tests. Nothing here depends on the library
//! crates: values are produced by brute-force quadrature or direct summation.

use std::f64::consts::{FRAC_PI_2, PI};

/// Double-exponential (tanh-sinh) quadrature on [a, b] with level doubling
/// until two successive estimates differ by less than `tol`.
///
/// `f(x, x − a, b − x)` receives the distances to both endpoints computed
/// without cancellation, so endpoint singularities can be evaluated accurately.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
        if w < 1e-300 {
            return 0.0;
        }
        let da = (b - a) / (1.0 + (-2.0 * u).exp());
        let db = (b - a) / (1.0 + (2.0 * u).exp());
        if da <= 0.0 || db <= 0.0 {
            return 0.0;
        }
        let x = if u < 0.0 { a + da } else { b - db };
        w * f(x, da, db)
    };
    let t_max = 6.5;
    let mut h = 0.5;
    let mut sum: f64 = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() < tol {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// I(t) = ∫₀ᵗ u sin(u/2)/√(cos u − cos t) du by direct quadrature.
pub fn abel_integral(t: f64) -> f64 {
    tanh_sinh(
        |u, _, dt| {
            // cos u − cos t = 2 sin((t+u)/2) sin((t−u)/2)
            let gap = 2.0 * (0.5 * (t + u)).sin() * (0.5 * dt).sin();
            u * (0.5 * u).sin() / gap.sqrt()
        },
        0.0,
        t,
        1e-15,
    )
}

/// I′(t) by a Richardson-extrapolated central difference of [`abel_integral`].
pub fn abel_integral_derivative(t: f64) -> f64 {
    let h = 1e-2 * t.min(PI - t);
    let d = |h: f64| (abel_integral(t + h) - abel_integral(t - h)) / (2.0 * h);
    let d1 = d(h);
    let d2 = d(0.5 * h);
    let d3 = d(0.25 * h);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// ∫_{−ε}^{ε} xⁿ log (s − x)² dx, split at the logarithmic singularity.
pub fn log_moment(n: u32, s: f64, eps: f64) -> f64 {
    let f = |x: f64, dist: f64| x.powi(n as i32) * 2.0 * dist.ln();
    tanh_sinh(|x, _, db| f(x, db), -eps, s, 1e-14)
        + tanh_sinh(|x, da, _| f(x, da), s, eps, 1e-14)
}

/// ∫∫ f over the polar rectangle ρ ∈ [r0, r1], φ ∈ [p0, p1] (area element ρ dρ dφ).
pub fn polar_integral<F: Fn(f64, f64) -> f64>(f: F, r0: f64, r1: f64, p0: f64, p1: f64) -> f64 {
    tanh_sinh(
        |rho, _, _| rho * tanh_sinh(|phi, _, _| f(rho, phi), p0, p1, 1e-14),
        r0,
        r1,
        1e-13,
    )
}

/// Direct (unsummed) partial sum (1/√2) Σ rⁿ [P_n(cos t) + P_{n−1}(cos t)] sin nθ,
/// with Legendre values from Bonnet's formula evaluated afresh.
pub fn heaviside_series(theta: f64, t: f64, n: usize, r: f64) -> f64 {
    let x = t.cos();
    let mut p_prev = 1.0;
    let mut p = x;
    let mut sum = r * (p + p_prev) * theta.sin();
    let mut rk = r;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
        rk *= r;
        sum += rk * (p + p_prev) * (kf * theta).sin();
    }
    sum / 2f64.sqrt()
}
