//! Legendre polynomials by the three-term recurrence.

/// P_n(x).
pub fn legendre_p(n: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// P_0(x) ..= P_n(x).
pub fn legendre_table(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(x);
    for k in 2..=n {
        let kf = k as f64;
        let p = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(p);
    }
    out
}

/// Largest |(k+1)P_{k+1} − (2k+1)xP_k + kP_{k−1}| over k < n for a table from [`legendre_table`].
pub fn recurrence_residual(table: &[f64], x: f64) -> f64 {
    table
        .windows(3)
        .enumerate()
        .map(|(j, w)| {
            let k = (j + 1) as f64;
            ((k + 1.0) * w[2] - (2.0 * k + 1.0) * x * w[1] + k * w[0]).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_match_closed_forms() {
        for &x in &[-1.0, -0.3, 0.0, 0.5, 1.0] {
            assert_eq!(legendre_p(0, x), 1.0);
            assert_eq!(legendre_p(1, x), x);
            assert!((legendre_p(2, x) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
            assert!((legendre_p(3, x) - 0.5 * (5.0 * x * x * x - 3.0 * x)).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoint_values() {
        for n in 0..50 {
            assert!((legendre_p(n, 1.0) - 1.0).abs() < 1e-13);
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((legendre_p(n, -1.0) - s).abs() < 1e-13);
        }
    }

    #[test]
    fn table_agrees_with_single_evaluation() {
        let t = legendre_table(40, 0.37);
        for (n, v) in t.iter().enumerate() {
            assert_eq!(*v, legendre_p(n, 0.37));
        }
    }
}
