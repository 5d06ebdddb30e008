//! Closed-form mean first passage times with a term-by-term breakdown.
//!
//! Every function takes an explicit diffusivity `d` and returns times in
//! length²/diffusivity. Inputs outside the asymptotic regime are evaluated
//! anyway and flagged in `warnings`.

use crate::dualseries::SeriesSolution;
use crate::geometry::{Convention, PlanarDomain, PlanarShape};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("{name} = {value} is outside its domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("series solution does not belong to this problem: {0}")]
    SeriesMismatch(String),
}

fn require(
    ok: bool,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<(), AsymptoticsError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(AsymptoticsError::Domain {
            name,
            value,
            requirement,
        })
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), AsymptoticsError> {
    require(value > 0.0, name, value, "must be strictly positive")
}

/// Declared remainder of an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorOrder {
    /// Leading term only; an unknown O(1) sits inside the bracket.
    #[serde(rename = "O(1) inside brackets")]
    LeadingLog,
    /// Algebraic leading term with an unknown O(1) next to 1/ε.
    #[serde(rename = "O(1) next to 1/eps")]
    LeadingAlgebraic,
    #[serde(rename = "O(eps, beta^4)")]
    EpsBeta4,
    #[serde(rename = "O(eps/a, beta^4)")]
    EpsOverABeta4,
    #[serde(rename = "O(delta^2 log delta)")]
    Delta2LogDelta,
    #[serde(rename = "O(eps, delta^2 log delta, delta^2 log eps)")]
    EpsDelta2Log,
    #[serde(rename = "O(eps)")]
    Eps,
    #[serde(rename = "exact")]
    Exact,
}

impl ErrorOrder {
    pub fn tag(&self) -> &'static str {
        match self {
            ErrorOrder::LeadingLog => "O(1) inside brackets",
            ErrorOrder::LeadingAlgebraic => "O(1) next to 1/eps",
            ErrorOrder::EpsBeta4 => "O(eps, beta^4)",
            ErrorOrder::EpsOverABeta4 => "O(eps/a, beta^4)",
            ErrorOrder::Delta2LogDelta => "O(delta^2 log delta)",
            ErrorOrder::EpsDelta2Log => "O(eps, delta^2 log delta, delta^2 log eps)",
            ErrorOrder::Eps => "O(eps)",
            ErrorOrder::Exact => "exact",
        }
    }
}

impl std::fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResult {
    pub value: f64,
    pub terms: Vec<Term>,
    pub error_order: ErrorOrder,
    /// Window convention of the size parameter consumed, if any.
    pub convention: Option<Convention>,
    pub warnings: Vec<String>,
    /// A second form of the same quantity (asymptotic companion of an exact
    /// value, or the exact-in-δ variant of an expansion).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternative: Option<Box<AsymptoticResult>>,
}

impl AsymptoticResult {
    fn from_terms(
        terms: Vec<(&str, f64)>,
        error_order: ErrorOrder,
        convention: Option<Convention>,
        d: f64,
    ) -> Self {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(name, value)| Term {
                name: name.to_string(),
                value: value / d,
            })
            .collect();
        Self {
            value: terms.iter().map(|t| t.value).sum(),
            terms,
            error_order,
            convention,
            warnings: Vec::new(),
            alternative: None,
        }
    }

    fn warn_if(mut self, cond: bool, msg: impl Into<String>) -> Self {
        if cond {
            self.warnings.push(msg.into());
        }
        self
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

fn check_ratio(eps: f64) -> Result<(), AsymptoticsError> {
    require(eps > 0.0 && eps <= 1.0, "eps", eps, "window ratio must lie in (0, 1]")
}

/// (|Ω|/(πD))·log(1/ε) for a window on a smooth boundary, ε the boundary fraction.
pub fn mfpt_leading_smooth(area: f64, d: f64, eps: f64) -> Result<AsymptoticResult, AsymptoticsError> {
    positive("area", area)?;
    positive("D", d)?;
    check_ratio(eps)?;
    Ok(AsymptoticResult::from_terms(
        vec![("narrow-escape-log", area / PI * (1.0 / eps).ln())],
        ErrorOrder::LeadingLog,
        Some(Convention::LengthRatio),
        d,
    )
    .warn_if(eps > 0.1, "eps > 0.1: leading-order term is not asymptotically accurate"))
}

/// (|Ω|/(Dα))·log(1/ε) for a window at a corner of interior angle α.
pub fn mfpt_corner_leading(
    area: f64,
    alpha: f64,
    d: f64,
    eps: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    positive("area", area)?;
    positive("D", d)?;
    require(
        alpha > 0.0 && alpha < 2.0 * PI,
        "alpha",
        alpha,
        "corner angle must lie in (0, 2π); use the cusp law for α = 0",
    )?;
    check_ratio(eps)?;
    Ok(AsymptoticResult::from_terms(
        vec![("corner-log", area / alpha * (1.0 / eps).ln())],
        ErrorOrder::LeadingLog,
        Some(Convention::LengthRatio),
        d,
    )
    .warn_if(eps > 0.1, "eps > 0.1: leading-order term is not asymptotically accurate"))
}

fn check_annulus(r1: f64, r2: f64, eps: f64) -> Result<f64, AsymptoticsError> {
    positive("R1", r1)?;
    require(r2 > r1, "R2", r2, "must exceed R1")?;
    require(eps > 0.0 && eps < PI, "eps", eps, "angular half-width must lie in (0, π)")?;
    Ok(r1 / r2)
}

fn annulus_warnings(res: AsymptoticResult, eps: f64, beta: f64) -> AsymptoticResult {
    res.warn_if(eps > 0.1, "eps > 0.1: O(eps) remainder is not small")
        .warn_if(beta.powi(4) > 0.01, "beta^4 > 0.01: O(beta^4) remainder is not small")
}

/// Uniform-start average MFPT for the annulus R1 < r < R2 with a window of
/// angular half-width ε on the inner circle.
pub fn mfpt_annulus_avg(
    r1: f64,
    r2: f64,
    eps: f64,
    d: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    let beta = check_annulus(r1, r2, eps)?;
    positive("D", d)?;
    let w = r2 * r2 - r1 * r1;
    let res = AsymptoticResult::from_terms(
        vec![
            ("narrow-escape-log", w * (1.0 / eps).ln()),
            ("log2", w * LN_2),
            ("beta-correction", 2.0 * beta * beta * w),
            (
                "green-singularity-log",
                0.5 * r2 * r2 / (1.0 - beta * beta) * (1.0 / beta).ln(),
            ),
            ("constant", -0.25 * r2 * r2),
        ],
        ErrorOrder::EpsBeta4,
        Some(Convention::AngularHalfWidth),
        d,
    );
    Ok(annulus_warnings(res, eps, beta))
}

/// Closed-form leading coefficient c₀ of the annulus dual series problem.
pub fn c0_annulus(r1: f64, r2: f64, eps: f64) -> Result<AsymptoticResult, AsymptoticsError> {
    let beta = check_annulus(r1, r2, eps)?;
    let w = r2 * r2 - r1 * r1;
    let res = AsymptoticResult::from_terms(
        vec![
            ("narrow-escape-log", 2.0 * w * (1.0 / eps).ln()),
            ("log2", 2.0 * w * LN_2),
            ("beta-correction", 4.0 * beta * beta * w),
        ],
        ErrorOrder::EpsBeta4,
        Some(Convention::AngularHalfWidth),
        1.0,
    );
    Ok(annulus_warnings(res, eps, beta))
}

/// Uniform-start average MFPT of the annulus computed from a known c₀.
///
/// The MFPT is v = c₀/2 + Σ(…) + w(r) with w = (R1² − r²)/4 + (R2²/2) log(r/R1);
/// the oscillating part averages to zero, leaving c₀/2 plus the mean of w.
/// The log contribution is exact; the mean of (R1² − r²)/4 is
/// −(R2² − R1²)/8, which the expanded formula of [`mfpt_annulus_avg`] leaves out.
pub fn mfpt_annulus_avg_from_c0(
    r1: f64,
    r2: f64,
    c0: f64,
    d: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    positive("R1", r1)?;
    require(r2 > r1, "R2", r2, "must exceed R1")?;
    positive("D", d)?;
    let w = r2 * r2 - r1 * r1;
    let beta = r1 / r2;
    Ok(AsymptoticResult::from_terms(
        vec![
            ("series-constant", 0.5 * c0),
            (
                "green-singularity-log",
                0.5 * r2.powi(4) / w * (1.0 / beta).ln(),
            ),
            ("constant", -0.25 * r2 * r2),
            ("quadratic-mean", -0.125 * w),
        ],
        ErrorOrder::Exact,
        None,
        d,
    ))
}

fn check_rectangle(a: f64, b: f64, eps: f64) -> Result<f64, AsymptoticsError> {
    positive("a", a)?;
    positive("b", b)?;
    require(eps > 0.0 && eps < a, "eps", eps, "window length must lie in (0, a)")?;
    Ok((-PI * b / a).exp())
}

/// Uniform-start average MFPT of the rectangle (0,a)×(0,b) with the window
/// [a−ε, a]×{b} at a corner, ε a length.
pub fn mfpt_rectangle_avg(
    a: f64,
    b: f64,
    eps: f64,
    d: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    let beta = check_rectangle(a, b, eps)?;
    positive("D", d)?;
    let k = 2.0 * a * b / PI;
    let res = AsymptoticResult::from_terms(
        vec![
            ("corner-log", k * (a / eps).ln()),
            ("log-2-over-pi", k * (2.0 / PI).ln()),
            ("aspect", k * PI / 6.0 * b / a),
            ("beta-correction", k * 2.0 * beta * beta),
        ],
        ErrorOrder::EpsOverABeta4,
        Some(Convention::Arclength),
        d,
    );
    Ok(res
        .warn_if(eps / a > 0.1, "eps/a > 0.1: O(eps/a) remainder is not small")
        .warn_if(beta.powi(4) > 0.01, "beta^4 > 0.01: O(beta^4) remainder is not small"))
}

/// Closed-form c₀ of the rectangle dual series problem (window length ε at a corner).
pub fn c0_rectangle(a: f64, b: f64, eps: f64) -> Result<AsymptoticResult, AsymptoticsError> {
    let beta = check_rectangle(a, b, eps)?;
    let k = 4.0 * a * b / PI;
    Ok(AsymptoticResult::from_terms(
        vec![
            ("corner-log", k * (a / eps).ln()),
            ("log-2-over-pi", k * (2.0 / PI).ln()),
            ("beta-correction", k * 2.0 * beta * beta),
        ],
        ErrorOrder::EpsOverABeta4,
        Some(Convention::Arclength),
        1.0,
    ))
}

/// Leading algebraic MFPT |Ω|/((d⁻¹−1)Dε) for a window of parameter ε at the
/// cusp between tangent circles; see [`crate::geometry::Convention`] for ε.
pub fn mfpt_cusp_leading(
    domain: &PlanarDomain,
    eps: f64,
    d: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    let PlanarShape::TangentCircles { radius, ratio } = domain.shape() else {
        return Err(AsymptoticsError::Domain {
            name: "domain",
            value: f64::NAN,
            requirement: "cusp law needs a tangent-circles domain",
        });
    };
    require(ratio < 1.0, "d", ratio, "radii ratio must be below 1")?;
    require(eps > 0.0 && eps < 1.0, "eps", eps, "cusp window parameter must lie in (0, 1)")?;
    positive("D", d)?;
    let from_area = domain.area() / (1.0 / ratio - 1.0);
    let from_ratio = PI * radius * radius * ratio * (1.0 + ratio);
    debug_assert!((from_area - from_ratio).abs() <= 1e-12 * from_ratio);
    Ok(AsymptoticResult::from_terms(
        vec![("cusp-inverse-eps", from_area / eps)],
        ErrorOrder::LeadingAlgebraic,
        Some(Convention::LengthRatio),
        d,
    )
    .warn_if(eps > 0.1, "eps > 0.1: the O(1) correction is comparable to 1/eps"))
}

/// Exact MFPT from colatitude θ when the whole rim of the cap θ < δ absorbs.
pub fn sphere_cap_mfpt_point(r: f64, delta: f64, theta: f64, d: f64) -> Result<f64, AsymptoticsError> {
    positive("R", r)?;
    positive("D", d)?;
    require(delta > 0.0 && delta < PI, "delta", delta, "cap angle must lie in (0, π)")?;
    require(
        theta >= delta && theta <= PI,
        "theta",
        theta,
        "point must lie in δ ≤ θ ≤ π",
    )?;
    Ok(2.0 * r * r * ((0.5 * theta).sin() / (0.5 * delta).sin()).ln() / d)
}

/// Uniform-start average for the fully absorbing cap rim: the exact value,
/// with the small-δ expansion as `alternative`.
pub fn sphere_cap_mfpt_avg(r: f64, delta: f64, d: f64) -> Result<AsymptoticResult, AsymptoticsError> {
    positive("R", r)?;
    positive("D", d)?;
    require(delta > 0.0 && delta < PI, "delta", delta, "cap angle must lie in (0, π)")?;
    let r2 = r * r;
    let half = 0.5 * delta;
    let mut exact = AsymptoticResult::from_terms(
        vec![
            ("cap-log", -2.0 * r2 * half.sin().ln() / (half.cos() * half.cos())),
            ("constant", -r2),
        ],
        ErrorOrder::Exact,
        Some(Convention::AngularHalfWidth),
        d,
    );
    let asymptotic = AsymptoticResult::from_terms(
        vec![
            ("cap-log", 2.0 * r2 * (1.0 / delta).ln()),
            ("log2", 2.0 * r2 * LN_2),
            ("constant", -r2),
        ],
        ErrorOrder::Delta2LogDelta,
        Some(Convention::AngularHalfWidth),
        d,
    )
    .warn_if(delta > 0.5, "delta > 0.5: small-cap expansion is inaccurate");
    exact.alternative = Some(Box::new(asymptotic));
    Ok(exact)
}

fn check_sphere_window(r: f64, delta: f64, eps: f64, d: f64) -> Result<(), AsymptoticsError> {
    positive("R", r)?;
    positive("D", d)?;
    require(delta > 0.0 && delta < 0.5 * PI, "delta", delta, "cap angle must lie in (0, π/2)")?;
    require(eps > 0.0 && eps < PI, "eps", eps, "angular half-width must lie in (0, π)")
}

/// Uniform-start average MFPT on the decapitated sphere with a rim window of
/// azimuthal half-width ε. The primary value is the expansion in both δ and
/// ε; `alternative` keeps the δ-dependence exact.
pub fn sphere_window_mfpt_avg(
    r: f64,
    delta: f64,
    eps: f64,
    d: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    check_sphere_window(r, delta, eps, d)?;
    let r2 = r * r;
    let mut primary = AsymptoticResult::from_terms(
        vec![
            ("cap-log", 2.0 * r2 * (1.0 / delta).ln()),
            ("window-log", 4.0 * r2 * (1.0 / eps).ln()),
            ("3log2", 6.0 * r2 * LN_2),
            ("constant", -r2),
        ],
        ErrorOrder::EpsDelta2Log,
        Some(Convention::AngularHalfWidth),
        d,
    )
    .warn_if(eps > 0.1, "eps > 0.1: O(eps) remainder is not small")
    .warn_if(delta > 0.5, "delta > 0.5: small-cap expansion is inaccurate");
    let half = 0.5 * delta;
    let cos2 = half.cos() * half.cos();
    let exact_in_delta = AsymptoticResult::from_terms(
        vec![
            ("cap-log", -2.0 * r2 * half.sin().ln() / cos2),
            ("window-log", 4.0 * r2 * cos2 * (2.0 / eps).ln()),
            ("constant", -r2),
        ],
        ErrorOrder::Eps,
        Some(Convention::AngularHalfWidth),
        d,
    );
    primary.alternative = Some(Box::new(exact_in_delta));
    Ok(primary)
}

/// Parameters of the dual series problem whose solution supplies the
/// azimuthal coefficients in [`sphere_window_mfpt_point`].
pub fn sphere_window_series_rhs(delta: f64) -> f64 {
    let c = (0.5 * delta).cos();
    0.5 * c * c
}

/// MFPT from (θ, φ) on the decapitated sphere with a rim window.
///
/// Without `series` the azimuthal sum is dropped and the constant uses its
/// leading form −cos²(δ/2)·log(ε/2); the result then carries an O(1) flag.
/// With a solution of the problem (H ≡ 0, rhs = cos²(δ/2)/2, same ε), the
/// constant is c₀/2 and the sum Σ c_n ρⁿ cos nφ, ρ = cot(θ/2)/cot(δ/2),
/// is included. The series window (π−ε, π] is the rim window centred at φ = π.
pub fn sphere_window_mfpt_point(
    r: f64,
    delta: f64,
    eps: f64,
    theta: f64,
    phi: f64,
    d: f64,
    series: Option<&SeriesSolution>,
) -> Result<AsymptoticResult, AsymptoticsError> {
    check_sphere_window(r, delta, eps, d)?;
    require(
        theta >= delta && theta <= PI,
        "theta",
        theta,
        "point must lie in δ ≤ θ ≤ π",
    )?;
    let scale = 4.0 * r * r;
    let half = 0.5 * delta;
    let cos2 = half.cos() * half.cos();
    let cap = 0.5 * ((0.5 * theta).sin() / half.sin()).ln();
    let mut res = match series {
        None => AsymptoticResult::from_terms(
            vec![
                ("cap-log", scale * cap),
                ("window-constant", -scale * cos2 * (0.5 * eps).ln()),
            ],
            ErrorOrder::LeadingLog,
            Some(Convention::AngularHalfWidth),
            d,
        )
        .warn_if(true, "azimuthal series omitted: O(1) error inside brackets"),
        Some(sol) => {
            let rhs = sphere_window_series_rhs(delta);
            if (sol.problem.eps - eps).abs() > 1e-12 * eps
                || (sol.problem.rhs - rhs).abs() > 1e-12 * rhs
                || sol.problem.beta != 0.0
            {
                return Err(AsymptoticsError::SeriesMismatch(format!(
                    "expected eps = {eps}, rhs = {rhs}, no perturbation; got eps = {}, rhs = {}, beta = {}",
                    sol.problem.eps, sol.problem.rhs, sol.problem.beta
                )));
            }
            let rho = (0.5 * theta).tan().recip() / half.tan().recip();
            let mut sum = 0.0;
            let mut pow = 1.0;
            for (n, c) in sol.c.iter().enumerate().skip(1) {
                pow *= rho;
                sum += c * pow * (n as f64 * phi).cos();
            }
            AsymptoticResult::from_terms(
                vec![
                    ("cap-log", scale * cap),
                    ("window-constant", scale * 0.5 * sol.c[0]),
                    ("azimuthal-series", scale * sum),
                ],
                ErrorOrder::Eps,
                Some(Convention::AngularHalfWidth),
                d,
            )
        }
    };
    if eps > 0.1 {
        res.warnings.push("eps > 0.1: O(eps) remainder is not small".into());
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sum_terms(r: &AsymptoticResult) -> f64 {
        r.terms.iter().map(|t| t.value).sum()
    }

    #[test]
    fn leading_smooth_examples() {
        let r = mfpt_leading_smooth(4.0 * PI, 1.0, 0.01).unwrap();
        assert_relative_eq!(r.value, 4.0 * 100f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(r.value, 18.4207, max_relative = 1e-5);
        assert_eq!(mfpt_leading_smooth(1.0, 1.0, 1.0).unwrap().value, 0.0);
        let r = mfpt_leading_smooth(PI, 2.0, 0.1).unwrap();
        assert_relative_eq!(r.value, 1.15129, max_relative = 1e-5);
        assert!(mfpt_leading_smooth(1.0, 1.0, 1.5).is_err());
        assert!(mfpt_leading_smooth(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn corner_examples() {
        let r = mfpt_corner_leading(1.0, PI / 2.0, 1.0, 0.01).unwrap();
        assert_relative_eq!(r.value, 2.93174, max_relative = 1e-5);
        let flat = mfpt_corner_leading(1.0, PI, 1.0, 0.01).unwrap();
        assert_eq!(flat.value, mfpt_leading_smooth(1.0, 1.0, 0.01).unwrap().value);
        assert_relative_eq!(r.value / flat.value, 2.0, max_relative = 1e-15);
        assert!(mfpt_corner_leading(1.0, 0.0, 1.0, 0.01).is_err());
    }

    #[test]
    fn annulus_examples() {
        let r = mfpt_annulus_avg(1.0, 2.0, 0.01, 1.0).unwrap();
        let want = 3.0 * (100f64.ln() + LN_2 + 0.5) + (2.0 / 0.75) * LN_2 - 1.0;
        assert_relative_eq!(r.value, want, max_relative = 1e-14);
        assert_relative_eq!(r.value, 18.2434, max_relative = 1e-5);
        assert_relative_eq!(r.value, sum_terms(&r), max_relative = 1e-12);
        assert_eq!(r.error_order, ErrorOrder::EpsBeta4);
        // coefficient of log(1/ε) is R2² − R1²
        let lo = mfpt_annulus_avg(1.0, 2.0, 0.02, 1.0).unwrap();
        assert_relative_eq!((r.value - lo.value) / 2f64.ln(), 3.0, max_relative = 1e-12);
        let c0 = c0_annulus(1.0, 2.0, 0.01).unwrap();
        assert_relative_eq!(c0.value, 34.7899, max_relative = 1e-5);
        let disk_limit = c0_annulus(1e-9, 2.0, 0.01).unwrap();
        assert_relative_eq!(
            disk_limit.value,
            4.0 * (2.0 * 100f64.ln() + 2.0 * LN_2),
            max_relative = 1e-12
        );
    }

    #[test]
    fn annulus_green_log_diverges_as_hole_shrinks() {
        let mut last = f64::NEG_INFINITY;
        for r1 in [1e-1, 1e-2, 1e-4, 1e-8] {
            let r = mfpt_annulus_avg(r1, 2.0, 0.01, 1.0).unwrap();
            let g = r.term("green-singularity-log").unwrap();
            assert!(g > last);
            last = g;
            assert!(r.term("beta-correction").unwrap() <= 2.0 * r1 * r1);
        }
    }

    #[test]
    fn annulus_from_c0_matches_expansion_up_to_mean_term() {
        let c0 = c0_annulus(1.0, 2.0, 0.01).unwrap().value;
        let a = mfpt_annulus_avg_from_c0(1.0, 2.0, c0, 1.0).unwrap();
        let b = mfpt_annulus_avg(1.0, 2.0, 0.01, 1.0).unwrap();
        // green log: R2⁴/(2(R2²−R1²)) = R2²/(2(1−β²))
        assert_relative_eq!(a.value - b.value, -3.0 / 8.0, max_relative = 1e-12);
    }

    #[test]
    fn rectangle_examples() {
        let r = mfpt_rectangle_avg(1.0, 1.0, 0.01, 1.0).unwrap();
        let beta2 = (-2.0 * PI).exp();
        let want = 2.0 / PI * (100f64.ln() + (2.0 / PI).ln() + PI / 6.0 + 2.0 * beta2);
        assert_relative_eq!(r.value, want, max_relative = 1e-14);
        assert_relative_eq!(r.value, 2.97997, max_relative = 1e-5);
        assert!((-PI).exp().powi(4) < 4e-6);
        assert!(mfpt_rectangle_avg(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rectangle_c0_is_the_annulus_c0_under_substitution() {
        for (a, b, eps) in [(1.0, 1.0, 0.01), (2.0, 0.7, 0.03), (0.5, 1.5, 0.002)] {
            let beta = (-PI * b / a).exp();
            let rect = c0_rectangle(a, b, eps).unwrap().value;
            // R2² − R1² → 2ab/π, ε → πε/a, β → exp(−πb/a)
            let w = 2.0 * a * b / PI;
            let delta = PI * eps / a;
            let ann = w * (2.0 * (1.0 / delta).ln() + 2.0 * LN_2 + 4.0 * beta * beta);
            assert_relative_eq!(rect, ann, max_relative = 1e-13);
        }
    }

    #[test]
    fn cusp_examples() {
        let dom = PlanarDomain::tangent_circles(0.5, 0.5).unwrap();
        let r = mfpt_cusp_leading(&dom, 0.05, 1.0).unwrap();
        assert_relative_eq!(r.value, 3.0 * PI / 16.0 / 0.05, max_relative = 1e-14);
        assert_relative_eq!(r.value, 11.7810, max_relative = 1e-5);
        let mut last = 0.0;
        for d in [0.1, 0.3, 0.5, 0.9, 0.999] {
            let v = mfpt_cusp_leading(&PlanarDomain::tangent_circles(1.0, d).unwrap(), 0.1, 1.0)
                .unwrap()
                .value;
            assert!(v > last);
            assert!(v < 2.0 * PI / 0.1);
            last = v;
        }
        assert_relative_eq!(last, 2.0 * PI / 0.1, max_relative = 2e-3);
        let disk = PlanarDomain::disk(1.0).unwrap();
        assert!(mfpt_cusp_leading(&disk, 0.1, 1.0).is_err());
    }

    #[test]
    fn sphere_cap_examples() {
        assert_eq!(sphere_cap_mfpt_point(1.0, 0.2, 0.2, 1.0).unwrap(), 0.0);
        let v = sphere_cap_mfpt_point(1.0, 0.2, PI, 1.0).unwrap();
        assert_relative_eq!(v, 2.0 * (1.0 / 0.1f64.sin()).ln(), max_relative = 1e-14);
        assert_relative_eq!(v, 4.60851, max_relative = 1e-5);
        assert!(sphere_cap_mfpt_point(1.0, 0.2, 0.1, 1.0).is_err());
        let avg = sphere_cap_mfpt_avg(1.0, 0.2, 1.0).unwrap();
        assert_relative_eq!(avg.value, 3.6548987, max_relative = 1e-7);
        assert_relative_eq!(avg.value, sum_terms(&avg), max_relative = 1e-12);
        let asym = avg.alternative.as_ref().unwrap();
        assert_relative_eq!(asym.value, 3.605170, max_relative = 1e-6);
    }

    #[test]
    fn sphere_window_examples() {
        let r = sphere_window_mfpt_avg(1.0, 0.2, 0.01, 1.0).unwrap();
        assert_relative_eq!(r.value, 24.798440, max_relative = 1e-6);
        assert_relative_eq!(
            r.term("window-log").unwrap() / 100f64.ln() / (r.term("cap-log").unwrap() / 5f64.ln()),
            2.0,
            max_relative = 1e-14
        );
        let alt = r.alternative.as_ref().unwrap();
        assert_relative_eq!(alt.value, sum_terms(alt), max_relative = 1e-12);
        let south = sphere_window_mfpt_point(1.0, 0.2, 0.01, PI, 0.0, 1.0, None).unwrap();
        assert!(south.value >= r.value);
        assert!(!south.warnings.is_empty());
    }
}
