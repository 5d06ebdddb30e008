//! Abel/Fredholm route: h₁ = z + K̃z with the O(β²) kernel, then
//! c₀ = √2 ∫ h₁ and c_n = (1+H_n)/√2 ∫ h₁ [P_n + P_{n−1}](cos t) dt over (0, π−ε).

use super::abel::base_rule;
use super::{
    abel_source, compatibility_from_profile, flux_nodes, DualSeriesError, DualSeriesProblem,
    Method, Residuals, SeriesSolution,
};
use crate::legendre::legendre_table;
use crate::quadrature::{CompositeRule, Refine};
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

struct Grid {
    rule: CompositeRule,
    z: Vec<f64>,
}

fn grid(problem: &DualSeriesProblem, n_max: usize) -> Grid {
    let end = PI - problem.eps();
    let max_width = (2.0 * PI / n_max as f64).min(0.25);
    let rule = CompositeRule::graded(
        0.0,
        end,
        Refine::Upper,
        0.25 * problem.eps(),
        max_width,
        base_rule(),
    );
    let z = rule
        .nodes()
        .iter()
        .map(|&t| abel_source(t, problem.rhs()))
        .collect();
    Grid { rule, z }
}

/// ∫₀^{π−ε} cos²(s/2) z(s) ds.
fn kernel_moment(g: &Grid) -> f64 {
    let weighted: Vec<f64> = g
        .rule
        .nodes()
        .iter()
        .zip(&g.z)
        .map(|(&t, &z)| (0.5 * t).cos().powi(2) * z)
        .collect();
    g.rule.sum_samples(&weighted)
}

/// First-order correction ⟨K̃z, 1⟩ = ∫∫ K̃(t,s) z(s) ds dt over (0, π−ε)²,
/// by quadrature. Tends to 2√2β²(R2² − R1²) for the annulus as ε → 0.
pub fn neumann_first_order(problem: &DualSeriesProblem) -> f64 {
    let g = grid(problem, problem.order());
    let kappa = problem.perturbation().kernel_coefficient();
    kappa * kernel_moment(&g) * (1.0 + problem.eps().cos())
}

/// A(θ) = ∫₀^{π−ε} h(t)/√(cos t − cos θ) dt for θ ≥ π−ε, after the
/// substitution sin(t/2) = sin(θ/2) sin φ.
fn abel_transform<F: Fn(f64) -> f64>(h: &F, eps: f64, theta: f64) -> f64 {
    let s_end = (0.5 * (PI - eps)).sin();
    let (s, c_theta) = (0.5 * theta).sin_cos();
    let phi_max = if s <= s_end {
        FRAC_PI_2
    } else {
        (s_end / s).asin()
    };
    let finest = 0.1 * (0.5 * eps).sin();
    let rule = CompositeRule::graded(0.0, phi_max, Refine::Upper, finest, FRAC_PI_2 / 4.0, base_rule());
    SQRT_2
        * rule.integrate(|phi| {
            let (sin_phi, cos_phi) = phi.sin_cos();
            let sp = s * sin_phi;
            let c = (c_theta * c_theta + s * s * cos_phi * cos_phi).sqrt();
            let t = 2.0 * sp.atan2(c);
            h(t) / c
        })
}

pub fn solve_h1_neumann(problem: &DualSeriesProblem) -> Result<SeriesSolution, DualSeriesError> {
    let eps = problem.eps();
    let rhs = problem.rhs();
    let pert = problem.perturbation();
    let kappa = pert.kernel_coefficient();
    let n_h = pert.significant_terms();
    let n_max = problem.order().max(n_h);
    let g = grid(problem, n_max);
    let nodes = g.rule.nodes();

    let sin_norm = g.rule.integrate(|t| t.sin().powi(2)).sqrt();
    let cos_norm = g.rule.integrate(|t| (0.5 * t).cos().powi(4)).sqrt();
    let operator_norm = kappa.abs() * sin_norm * cos_norm;
    if operator_norm >= 1.0 {
        return Err(DualSeriesError::Contraction { operator_norm });
    }

    let moment = kernel_moment(&g);
    let h1: Vec<f64> = nodes
        .iter()
        .zip(&g.z)
        .map(|(&t, &z)| z + kappa * moment * t.sin())
        .collect();

    let mut c = vec![0.0; n_max + 1];
    c[0] = SQRT_2 * g.rule.sum_samples(&h1);
    for ((&t, &w), &h) in nodes.iter().zip(g.rule.weights()).zip(&h1) {
        let p = legendre_table(n_max, t.cos());
        for n in 1..=n_max {
            c[n] += w * h * (p[n] + p[n - 1]);
        }
    }
    for (n, cn) in c.iter_mut().enumerate().skip(1) {
        *cn *= (1.0 + pert.h(n)) / SQRT_2;
    }

    // Σ c_n H_n/(1+H_n) sin nθ and its θ-derivative: the full-kernel part of
    // the integrated flux, summed over every non-negligible H_n.
    let tilde: Vec<f64> = (0..=n_h.min(n_max))
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                let h = pert.h(n);
                c[n] * h / (1.0 + h)
            }
        })
        .collect();
    let kernel_sum = |theta: f64| -> f64 {
        tilde
            .iter()
            .enumerate()
            .map(|(n, a)| a * (n as f64 * theta).sin())
            .sum()
    };
    let kernel_sum_deriv = |theta: f64| -> f64 {
        tilde
            .iter()
            .enumerate()
            .map(|(n, a)| a * n as f64 * (n as f64 * theta).cos())
            .sum()
    };

    let h1_at = |t: f64| abel_source(t, rhs) + kappa * moment * t.sin();
    let integrated = |theta: f64| (0.5 * theta).cos() * abel_transform(&h1_at, eps, theta);

    let edge = PI - eps;
    let edge_value = integrated(edge) + kernel_sum(edge);
    let edge_balance = (edge_value - rhs * edge).abs() / (PI * rhs);

    // nodes are symmetric about θ = π, so only the left half is computed
    let xs = flux_nodes();
    let m = xs.len();
    let left: Vec<f64> = xs[..m / 2]
        .iter()
        .map(|&x| {
            let theta = PI + eps * x;
            let h = (0.25 * (theta - edge)).min(0.1 * eps);
            let diff = |h: f64| (integrated(theta + h) - integrated(theta - h)) / (2.0 * h);
            let d = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
            d + kernel_sum_deriv(theta) - rhs
        })
        .collect();
    let flux_profile: Vec<[f64; 2]> = xs
        .iter()
        .enumerate()
        .map(|(j, &x)| [PI + eps * x, left[j.min(m - 1 - j)]])
        .collect();

    c.truncate(problem.order() + 1);
    Ok(SeriesSolution {
        problem: problem.summary(),
        c0: c[0],
        c,
        h1: nodes.iter().zip(&h1).map(|(&t, &h)| [t, h]).collect(),
        compatibility_residual: compatibility_from_profile(&flux_profile, eps, rhs),
        flux_profile,
        method: Method::NeumannSeries,
        residuals: Residuals {
            edge_balance: Some(edge_balance),
            operator_norm: Some(operator_norm),
            ..Residuals::default()
        },
    })
}
