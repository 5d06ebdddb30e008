//! The Abel-type integral I(t) = ∫₀ᵗ u sin(u/2)/√(cos u − cos t) du and its
//! t-derivative, evaluated after the substitution sin(u/2) = sin(t/2)·sin φ,
//! which turns the square-root endpoint singularity into a smooth integrand:
//!
//! I(t) = √2 S ∫₀^{π/2} u sin φ / cos(u/2) dφ,  S = sin(t/2), u = 2 asin(S sin φ).
//!
//! For t near π the integrand peaks at φ = π/2 with width ≈ cos(t/2), so the
//! φ-rule is graded toward π/2.

use crate::quadrature::{CompositeRule, GaussLegendre, Refine};
use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::sync::OnceLock;

pub(crate) fn base_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

fn phi_rule(c: f64, s: f64) -> CompositeRule {
    let finest = (0.25 * c / s.max(1e-300)).clamp(1e-14, FRAC_PI_2 / 4.0);
    CompositeRule::graded(0.0, FRAC_PI_2, Refine::Upper, finest, FRAC_PI_2 / 4.0, base_rule())
}

/// (I(t), I′(t)) for 0 < t < π.
pub(crate) fn abel_integral(t: f64) -> (f64, f64) {
    let s_big = (0.5 * t).sin();
    let c_big = (0.5 * t).cos();
    let rule = phi_rule(c_big, s_big);
    let mut value = 0.0;
    let mut deriv = 0.0;
    for (&phi, &w) in rule.nodes().iter().zip(rule.weights()) {
        let (sp, cp) = phi.sin_cos();
        let s = s_big * sp;
        // cos(u/2) = √(1 − s²) written without cancellation
        let c = (c_big * c_big + s_big * s_big * cp * cp).sqrt();
        let u = 2.0 * s.atan2(c);
        value += w * u * sp / c;
        deriv += w * sp * (u / c + 2.0 * s / (c * c) + u * s * s / (c * c * c));
    }
    (SQRT_2 * s_big * value, 0.5 * c_big * SQRT_2 * deriv)
}

/// ∫₀ᵗ sin(u/2) sin u/√(cos u − cos t) du by the same substitution; equals
/// (π/√2) sin²(t/2) exactly and serves as a check of the quadrature.
pub fn abel_check_integral(t: f64) -> f64 {
    let s_big = (0.5 * t).sin();
    let c_big = (0.5 * t).cos();
    let rule = phi_rule(c_big, s_big);
    2.0 * SQRT_2
        * s_big
        * s_big
        * rule.integrate(|phi| {
            let sp = phi.sin();
            sp * sp
        })
}
