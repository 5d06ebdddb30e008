use super::DualSeriesError;
use crate::legendre::legendre_table;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const MAX_TERMS: usize = 1_000_000;

/// ∫_{−ε}^{ε} (s′)ⁿ log (s − s′)² ds′ for |s| < ε, by its power series in s/ε.
///
/// Even n: 4[εⁿ⁺¹ log ε/(n+1) − εⁿ⁺¹/(n+1)²] − 2 Σ_{j≥1} s²ʲ εⁿ⁻²ʲ⁺¹/(j(n−2j+1)).
/// Odd n: −4 Σ_{j≥0} s²ʲ⁺¹ εⁿ⁻²ʲ/((2j+1)(n−2j)).
/// Summation stops once a term falls below 1e-14 of the running sum.
pub fn log_integral_identity(n: u32, s: f64, eps: f64) -> Result<f64, DualSeriesError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DualSeriesError::Domain {
            name: "eps",
            value: eps,
            requirement: "must be positive",
        });
    }
    if !(s.abs() < eps) {
        return Err(DualSeriesError::Domain {
            name: "s",
            value: s,
            requirement: "series needs |s| < eps",
        });
    }
    let nf = n as f64;
    // terms are written as εⁿ⁺¹ (s/ε)^m/… to avoid overflow in negative powers of ε
    let base = eps.powi(n as i32 + 1);
    let q = s / eps;
    let mut sum = 0.0;
    let mut j = if n % 2 == 0 { 1usize } else { 0usize };
    if n % 2 == 0 {
        sum = 4.0 * base * (eps.ln() / (nf + 1.0) - 1.0 / ((nf + 1.0) * (nf + 1.0)));
    }
    let mut count = 0;
    loop {
        let jf = j as f64;
        let term = if n % 2 == 0 {
            -2.0 * base * q.powi(2 * j as i32) / (jf * (nf - 2.0 * jf + 1.0))
        } else {
            -4.0 * base * q.powi(2 * j as i32 + 1) / ((2.0 * jf + 1.0) * (nf - 2.0 * jf))
        };
        sum += term;
        count += 1;
        if term.abs() <= 1e-14 * sum.abs() || term == 0.0 || count >= MAX_TERMS {
            break;
        }
        j += 1;
    }
    Ok(sum)
}

fn check_angles(theta: f64, t: f64) -> Result<(), DualSeriesError> {
    for (name, v) in [("theta", theta), ("t", t)] {
        if !(v > 0.0 && v < PI) {
            return Err(DualSeriesError::Domain {
                name,
                value: v,
                requirement: "must lie in (0, π)",
            });
        }
    }
    if theta == t {
        return Err(DualSeriesError::Singular("theta = t"));
    }
    Ok(())
}

/// Abel-summed partial sum (1/√2) Σ_{n=1}^{N} rⁿ [P_n(cos t) + P_{n−1}(cos t)] sin nθ.
pub fn heaviside_partial_sum(theta: f64, t: f64, n: usize, r: f64) -> Result<f64, DualSeriesError> {
    check_angles(theta, t)?;
    let p = legendre_table(n, t.cos());
    let mut rn = 1.0;
    let mut sum = 0.0;
    for k in 1..=n {
        rn *= r;
        sum += rn * (p[k] + p[k - 1]) * (k as f64 * theta).sin();
    }
    Ok(FRAC_1_SQRT_2 * sum)
}

/// |Abel-summed partial sum − cos(θ/2) H(θ−t)/√(cos t − cos θ)| with N terms
/// and Abel factor r = 1 − 2/N.
pub fn heaviside_identity_residual(theta: f64, t: f64, n: usize) -> Result<f64, DualSeriesError> {
    check_angles(theta, t)?;
    if n < 3 {
        return Err(DualSeriesError::Domain {
            name: "N",
            value: n as f64,
            requirement: "need at least 3 terms",
        });
    }
    let r = 1.0 - 2.0 / n as f64;
    let closed = if theta > t {
        (0.5 * theta).cos() / (t.cos() - theta.cos()).sqrt()
    } else {
        0.0
    };
    Ok((heaviside_partial_sum(theta, t, n, r)? - closed).abs())
}
