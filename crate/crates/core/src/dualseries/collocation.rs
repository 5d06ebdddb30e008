//! Collocation solver used as an independent check of the Abel/Fredholm route.
//!
//! The unknown is the flux density on the window, θ = π + εx, written as
//! g(x) = Σ_{k ≤ K} b_k T_k(x)/√(1−x²). The inverse-square-root weight carries
//! the edge singularity. Outside the window the flux equals F. b₀ is fixed by
//! compatibility; the Fourier coefficients of the flux are then linear in b,
//! and the unperturbed part of the potential is summed in closed form through
//! the kernel −log|2 sin((θ−s)/2)|. The Dirichlet condition on the window is
//! imposed in the least-squares sense at Chebyshev points, and the unknowns
//! (c₀, b₁..b_K) come from a minimal-norm SVD solve.

use super::{
    compatibility_from_profile, flux_nodes, DualSeriesError, DualSeriesProblem, Method,
    Residuals, SeriesSolution,
};
use crate::quadrature::{chebyshev_nodes, GaussLegendre};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::{LN_2, PI};

/// Largest acceptable ratio of extreme singular values.
const MAX_CONDITION: f64 = 1e10;
/// Gauss–Chebyshev nodes for integrals against the window flux.
const FLUX_QUADRATURE: usize = 256;

fn log_sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        -u2 / 6.0 - u2 * u2 / 180.0
    } else {
        (u.sin() / u).ln()
    }
}

fn chebyshev_t(k: usize, x: f64) -> f64 {
    (k as f64 * x.clamp(-1.0, 1.0).acos()).cos()
}

fn bessel_j(k: usize, x: f64) -> f64 {
    libm::jn(k as i32, x)
}

/// Chebyshev order of the window-flux basis for a truncation order N.
fn basis_size(order: usize) -> usize {
    (order / 4).clamp(8, 32)
}

pub fn solve_collocation(problem: &DualSeriesProblem) -> Result<SeriesSolution, DualSeriesError> {
    let eps = problem.eps();
    let f = problem.rhs();
    let pert = problem.perturbation();
    let order = problem.order();
    let k_max = basis_size(order);
    let rows = 2 * order;
    let n_h = pert.significant_terms();

    let b0 = -2.0 * f * (PI - eps) / (eps * PI);

    let xq = chebyshev_nodes(FLUX_QUADRATURE);
    let wq = PI / FLUX_QUADRATURE as f64;
    let gl = GaussLegendre::new(128);
    let t_table: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| xq.iter().map(|&x| chebyshev_t(k, x)).collect())
        .collect();

    // c_n = cn_const[n] + Σ_k cb[n][k] b_k and d_n = Σ_k db[n][k] b_k
    let coeff_rows = |n: usize| -> (f64, Vec<f64>, Vec<f64>) {
        let nf = n as f64;
        let ne = nf * eps;
        let pre = if n % 2 == 0 { 1.0 } else { -1.0 } / (nf * PI);
        let constant = pre * (-2.0 * f * ne.sin() / nf + eps * PI * b0 * bessel_j(0, ne));
        let mut cb = vec![0.0; k_max + 1];
        let mut db = vec![0.0; k_max + 1];
        for k in 1..=k_max {
            let j = pre * eps * PI * bessel_j(k, ne);
            if k % 2 == 0 {
                cb[k] = if (k / 2) % 2 == 0 { j } else { -j };
            } else {
                db[k] = if ((k - 1) / 2) % 2 == 0 { j } else { -j };
            }
        }
        (constant, cb, db)
    };
    let pert_rows: Vec<(f64, f64, Vec<f64>, Vec<f64>)> = (1..=n_h)
        .map(|n| {
            let h = pert.h(n);
            let (c, cb, db) = coeff_rows(n);
            (-h / (1.0 + h), c, cb, db)
        })
        .collect();

    let ys: Vec<f64> = chebyshev_nodes(rows).into_iter().rev().collect();
    let mut a = DMatrix::<f64>::zeros(rows, k_max + 1);
    let mut rhs = DVector::<f64>::zeros(rows);
    let scale = -eps / PI;
    for (i, &y) in ys.iter().enumerate() {
        let theta = PI + eps * y;
        let edge_log = (1.0 + y) * (1.0 + y).ln() + (1.0 - y) * (1.0 - y).ln() - 2.0;
        let s_flux: Vec<f64> = xq.iter().map(|&x| log_sinc(0.5 * eps * (y - x))).collect();
        let s_const = gl.integrate(-1.0, 1.0, |x| log_sinc(0.5 * eps * (y - x)));
        let mut constant = scale
            * ((PI * b0 - 2.0 * f) * eps.ln() - PI * LN_2 * b0 - f * edge_log
                + b0 * wq * s_flux.iter().sum::<f64>()
                - f * s_const);
        a[(i, 0)] = 0.5;
        for k in 1..=k_max {
            let quad: f64 = t_table[k].iter().zip(&s_flux).map(|(t, s)| t * s).sum();
            a[(i, k)] = scale * (-(PI / k as f64) * chebyshev_t(k, y) + wq * quad);
        }
        for (n, (g, c, cb, db)) in pert_rows.iter().enumerate() {
            let (sn, cn) = ((n + 1) as f64 * theta).sin_cos();
            constant += g * c * cn;
            for k in 1..=k_max {
                a[(i, k)] += g * (cb[k] * cn + db[k] * sn);
            }
        }
        rhs[i] = -constant;
    }

    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition.is_finite() && condition <= MAX_CONDITION) {
        return Err(DualSeriesError::IllConditioned { condition });
    }
    let sol = svd
        .solve(&rhs, 1e-14 * sv.max())
        .map_err(|_| DualSeriesError::IllConditioned { condition })?;
    let residual = (&a * &sol - &rhs).amax();

    let mut b = vec![b0];
    b.extend(sol.iter().skip(1));
    let c0 = sol[0];
    let mut c = vec![c0];
    for n in 1..=order {
        let (constant, cb, _) = coeff_rows(n);
        c.push(constant + cb.iter().zip(&b).skip(1).map(|(x, y)| x * y).sum::<f64>());
    }

    let flux_profile: Vec<[f64; 2]> = flux_nodes()
        .into_iter()
        .map(|x| {
            let g: f64 = b.iter().enumerate().map(|(k, bk)| bk * chebyshev_t(k, x)).sum::<f64>()
                / (1.0 - x * x).sqrt();
            [PI + eps * x, g - f]
        })
        .collect();

    Ok(SeriesSolution {
        problem: problem.summary(),
        c0,
        c,
        h1: Vec::new(),
        compatibility_residual: compatibility_from_profile(&flux_profile, eps, f),
        flux_profile,
        method: Method::Collocation,
        residuals: Residuals {
            dirichlet: Some(residual / c0.abs()),
            condition_number: Some(condition),
            ..Residuals::default()
        },
    })
}
