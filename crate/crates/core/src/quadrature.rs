//! Gauss–Legendre rules, composite and geometrically graded panels.

use std::f64::consts::PI;

/// An n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(m + h * x);
        }
        sum * h
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// Which end of an interval a graded rule refines toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refine {
    Lower,
    Upper,
    Both,
}

/// A flattened composite rule: explicit nodes and weights on a fixed interval.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    /// Panels shrink geometrically (ratio 2) toward the refined end(s) until
    /// the smallest has width `finest`; no panel is wider than `max_width`.
    pub fn graded(
        a: f64,
        b: f64,
        refine: Refine,
        finest: f64,
        max_width: f64,
        base: &GaussLegendre,
    ) -> Self {
        let mut cuts = match refine {
            Refine::Upper => graded_cuts(a, b, finest, false),
            Refine::Lower => graded_cuts(a, b, finest, true),
            Refine::Both => {
                let mid = 0.5 * (a + b);
                let mut left = graded_cuts(a, mid, finest, true);
                let right = graded_cuts(mid, b, finest, false);
                left.pop();
                left.extend(right);
                left
            }
        };
        cuts = split_wide(&cuts, max_width);
        Self::from_cuts(&cuts, base)
    }

    /// Uniform panels of width at most `max_width`.
    pub fn uniform(a: f64, b: f64, max_width: f64, base: &GaussLegendre) -> Self {
        Self::from_cuts(&split_wide(&[a, b], max_width), base)
    }

    pub fn from_cuts(cuts: &[f64], base: &GaussLegendre) -> Self {
        let mut nodes = Vec::with_capacity(cuts.len() * base.len());
        let mut weights = Vec::with_capacity(cuts.len() * base.len());
        for w in cuts.windows(2) {
            let h = 0.5 * (w[1] - w[0]);
            let m = 0.5 * (w[1] + w[0]);
            for (x, wt) in base.nodes().iter().zip(base.weights()) {
                nodes.push(m + h * x);
                weights.push(h * wt);
            }
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weighted sum of precomputed samples taken at `nodes()`.
    pub fn sum_samples(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.nodes.len());
        samples.iter().zip(&self.weights).map(|(s, w)| s * w).sum()
    }
}

fn graded_cuts(a: f64, b: f64, finest: f64, toward_lower: bool) -> Vec<f64> {
    let len = b - a;
    let mut offsets = vec![0.0];
    let mut w = finest.max(len * 1e-15);
    while w < len {
        offsets.push(w);
        w *= 2.0;
    }
    // merge a sliver at the coarse end into its neighbour
    if offsets.len() > 1 && len - offsets[offsets.len() - 1] < 0.5 * offsets[offsets.len() - 1] {
        offsets.pop();
    }
    offsets.push(len);
    if toward_lower {
        offsets.iter().map(|o| a + o).collect()
    } else {
        offsets.iter().rev().map(|o| b - o).collect()
    }
}

fn split_wide(cuts: &[f64], max_width: f64) -> Vec<f64> {
    let mut out = vec![cuts[0]];
    for w in cuts.windows(2) {
        let span = w[1] - w[0];
        let pieces = (span / max_width).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            out.push(w[0] + span * k as f64 / pieces as f64);
        }
    }
    out
}

/// Gauss–Chebyshev (first kind) nodes x_j = cos((2j+1)π/(2m)), j = 0..m.
/// The rule ∫ f(x)/√(1−x²) dx ≈ (π/m) Σ f(x_j) is exact for degree < 2m.
pub fn chebyshev_nodes(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| ((2 * j + 1) as f64 * PI / (2 * m) as f64).cos())
        .collect()
}
