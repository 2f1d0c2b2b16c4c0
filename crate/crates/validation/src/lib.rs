//! Shared pieces of the end-to-end acceptance run.

use std::f64::consts::FRAC_PI_2;

use gravwit::linalg::{c, CMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

/// Result of one acceptance criterion.
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

/// Runs each criterion, prints one PASS/FAIL line per criterion and returns
/// the number of failures.
pub fn run_criteria(criteria: &[(&str, fn() -> Outcome)]) -> usize {
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} ({name}): {} - {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    failed
}

/// `n` equally spaced angles covering `[0, π/2]`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * FRAC_PI_2 / (n - 1) as f64).collect()
}

/// Normalized complex Gaussian ket.
pub fn random_ket(rng: &mut impl Rng, n: usize) -> CMatrix {
    let amps: Vec<_> = (0..n).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    CMatrix::ket(&amps.iter().map(|a| a / norm).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn grid_endpoints() {
        let g = theta_grid(50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.0);
        assert!((g[49] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn random_kets_are_normalized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert!((random_ket(&mut rng, 4).norm() - 1.0).abs() < 1e-14);
    }
}
