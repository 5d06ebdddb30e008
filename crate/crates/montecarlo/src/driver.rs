use crate::{McConfig, McError, McEstimate, MAX_CENSORED_FRACTION};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub(crate) type PathRng = ChaCha8Rng;

/// Result of one step.
pub(crate) enum Step {
    /// Still inside; elapsed time.
    Moved(f64),
    /// Absorbed after this much of the step's time.
    Absorbed(f64),
}

/// One geometry's dynamics.
pub(crate) trait Walker: Sync {
    type State;
    fn start(&self, rng: &mut PathRng) -> Self::State;
    fn step(&self, state: &mut Self::State, rng: &mut PathRng) -> Step;
}

/// Step length control shared by the walkers. All lengths are per-coordinate
/// standard deviations of the Gaussian increment.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepControl {
    pub fine: f64,
    pub max: f64,
    pub window_factor: f64,
    pub wall_factor: f64,
    /// Offset of the wall bound, proportional to the wall's curvature radius.
    pub wall_floor: f64,
    pub adaptive: bool,
}

impl StepControl {
    /// `wall_floor` is used for the curved-wall bound σ ≤ floor + k·d_wall.
    pub fn new(config: &McConfig, d: f64, default_max: f64, wall_floor: f64) -> Self {
        let fine = (2.0 * d * config.dt).sqrt();
        let max = match config.dt_max {
            Some(m) => (2.0 * d * m).sqrt(),
            None => default_max,
        }
        .max(fine);
        Self {
            fine,
            max,
            window_factor: config.window_factor,
            wall_factor: config.wall_factor,
            wall_floor,
            adaptive: config.adaptive,
        }
    }

    pub fn sigma(&self, d_window: f64, d_wall: f64) -> f64 {
        if !self.adaptive {
            return self.fine;
        }
        (self.window_factor * d_window)
            .min(self.wall_floor + self.wall_factor * d_wall)
            .min(self.max)
            .max(self.fine)
    }
}

/// Probability that a Brownian bridge of per-coordinate variance σ² between
/// points at distances a, b ≥ 0 from a straight absorbing line touches it.
pub(crate) fn bridge_hit(a: f64, b: f64, sigma: f64) -> f64 {
    (-2.0 * a * b / (sigma * sigma)).exp()
}

/// Tangential offset of a bridge at the fraction `t` of a step, for locating
/// where it meets the wall: σ·√(t(1−t))·N(0, 1).
pub(crate) fn bridge_offset(t: f64, sigma: f64, rng: &mut PathRng) -> f64 {
    let z: f64 = rng.sample(rand_distr::StandardNormal);
    sigma * (t * (1.0 - t)).max(0.0).sqrt() * z
}

pub(crate) fn normal2(rng: &mut PathRng) -> [f64; 2] {
    [
        rng.sample(rand_distr::StandardNormal),
        rng.sample(rand_distr::StandardNormal),
    ]
}

enum Outcome {
    Absorbed { time: f64, steps: u64 },
    Censored { steps: u64 },
}

fn path_rng(seed: u64, index: u64) -> PathRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn run_path<W: Walker>(walker: &W, config: &McConfig, index: u64) -> Outcome {
    let mut rng = path_rng(config.seed, index);
    let mut state = walker.start(&mut rng);
    let mut t = 0.0;
    for steps in 1..=config.max_steps {
        match walker.step(&mut state, &mut rng) {
            Step::Moved(dt) => t += dt,
            Step::Absorbed(dt) => {
                return Outcome::Absorbed {
                    time: t + dt,
                    steps,
                }
            }
        }
    }
    Outcome::Censored {
        steps: config.max_steps,
    }
}

/// Runs all paths in parallel and reduces in path order.
pub(crate) fn run<W: Walker>(
    walker: &W,
    config: &McConfig,
    dt_used: f64,
) -> Result<McEstimate, McError> {
    let outcomes: Vec<Outcome> = (0..config.n_paths)
        .into_par_iter()
        .map(|i| run_path(walker, config, i))
        .collect();

    // Welford accumulation in index order
    let (mut n, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
    let (mut censored, mut steps) = (0u64, 0u64);
    for o in &outcomes {
        match *o {
            Outcome::Absorbed { time, steps: s } => {
                n += 1;
                let delta = time - mean;
                mean += delta / n as f64;
                m2 += delta * (time - mean);
                steps += s;
            }
            Outcome::Censored { steps: s } => {
                censored += 1;
                steps += s;
            }
        }
    }
    let stderr = if n > 1 {
        (m2 / (n - 1) as f64 / n as f64).sqrt()
    } else {
        f64::NAN
    };
    let estimate = McEstimate {
        mean: if n > 0 { mean } else { f64::NAN },
        stderr,
        n_absorbed: n,
        n_censored: censored,
        dt_used,
        mean_steps: steps as f64 / config.n_paths as f64,
    };
    if censored as f64 > MAX_CENSORED_FRACTION * config.n_paths as f64 {
        return Err(McError::Censored {
            n_censored: censored,
            n_paths: config.n_paths,
            estimate: Box::new(estimate),
        });
    }
    Ok(estimate)
}
