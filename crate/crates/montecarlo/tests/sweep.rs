use narrow_escape::geometry::{Convention, Domain, PlanarDomain, Window};
use narrow_escape_mc::*;

fn row(eps: f64, mean: f64) -> SweepRow {
    SweepRow {
        eps,
        estimate: McEstimate {
            mean,
            stderr: 0.0,
            n_absorbed: 1,
            n_censored: 0,
            dt_used: 1e-5,
            mean_steps: 1.0,
        },
    }
}

#[test]
fn log_slope_recovers_an_exact_law() {
    let rows: Vec<SweepRow> = [0.1, 0.05, 0.025, 0.01]
        .iter()
        .map(|&e| row(e, 3.0 * (1.0 / e).ln() + 0.7))
        .collect();
    let (slope, intercept) = log_slope(&rows);
    assert!((slope - 3.0).abs() < 1e-12 && (intercept - 0.7).abs() < 1e-12);
}

#[test]
fn inverse_eps_constants_multiply_by_eps() {
    let rows = [row(0.2, 5.0), row(0.1, 10.0)];
    assert_eq!(inverse_eps_constants(&rows), vec![1.0, 1.0]);
}

#[test]
fn sweep_shares_the_seed_and_orders_rows() {
    let rect = PlanarDomain::rectangle(1.0, 1.0).unwrap();
    let domain = Domain::Planar(rect);
    let template = Window::canonical(&domain, 0.1, Convention::Arclength).unwrap();
    let cfg = McConfig::new(400, 1e-5, 3);
    let eps = [0.2, 0.1, 0.05];
    let rows = sweep(&domain, &template, &eps, &cfg, 1.0).unwrap();
    assert_eq!(rows.iter().map(|r| r.eps).collect::<Vec<_>>(), eps);
    let single = simulate_planar(
        &rect,
        &Window {
            half_width: 0.1,
            ..template
        }
        .into(),
        &cfg,
        1.0,
    )
    .unwrap();
    assert_eq!(rows[1].estimate, single);
    assert!(rows[0].estimate.mean < rows[2].estimate.mean);
}

#[test]
fn sweep_rejects_short_or_unsorted_lists() {
    let domain = Domain::Planar(PlanarDomain::rectangle(1.0, 1.0).unwrap());
    let template = Window::canonical(&domain, 0.1, Convention::Arclength).unwrap();
    let cfg = McConfig::new(100, 1e-5, 0);
    for eps in [&[0.1, 0.05][..], &[0.1, 0.2, 0.05], &[0.1, 0.1, 0.05]] {
        assert!(matches!(
            sweep(&domain, &template, eps, &cfg, 1.0),
            Err(McError::InvalidConfig(_))
        ));
    }
}
