use crate::{simulate_planar, simulate_sphere, Absorber, McConfig, McError, McEstimate};
use narrow_escape::geometry::{Domain, Window};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub estimate: McEstimate,
}

/// Runs the simulation once per window size. `template` fixes the window's
/// component, centre and convention; its half-width is replaced by each
/// entry of `eps`, which must hold at least three strictly decreasing values.
/// Every run uses the same seed.
pub fn sweep(
    domain: &Domain,
    template: &Window,
    eps: &[f64],
    config: &McConfig,
    d: f64,
) -> Result<Vec<SweepRow>, McError> {
    if eps.len() < 3 {
        return Err(McError::InvalidConfig(format!(
            "a sweep needs at least 3 window sizes, got {}",
            eps.len()
        )));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(McError::InvalidConfig(
            "window sizes must be strictly decreasing".into(),
        ));
    }
    eps.iter()
        .map(|&e| {
            let window = Window {
                half_width: e,
                ..*template
            };
            let estimate = match domain {
                Domain::Planar(p) => simulate_planar(p, &Absorber::Window(window), config, d)?,
                Domain::Spherical(s) => simulate_sphere(s, Some(&window), config, d)?,
            };
            Ok(SweepRow { eps: e, estimate })
        })
        .collect()
}

/// Least-squares fit mean ≈ slope·log(1/ε) + intercept.
pub fn log_slope(rows: &[SweepRow]) -> (f64, f64) {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.eps).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.estimate.mean).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// mean·ε for each row; tends to a constant for windows at a cusp.
pub fn inverse_eps_constants(rows: &[SweepRow]) -> Vec<f64> {
    rows.iter().map(|r| r.estimate.mean * r.eps).collect()
}
