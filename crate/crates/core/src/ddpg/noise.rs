//! Ornstein-Uhlenbeck exploration noise: temporally correlated jitter
//! added to the pre-clamp action.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::math::stream_rng;

#[derive(Debug, Clone)]
pub struct OuNoise {
    x: Vec<f64>,
    mu: Vec<f64>,
    theta: f64,
    sigma: f64,
    rng: ChaCha8Rng,
}

impl OuNoise {
    /// Per-dimension neutral process: `mu` is the additive resting level
    /// (zero for unbiased exploration).
    pub fn new(mu: Vec<f64>, theta: f64, sigma: f64, seed: u64, tag: u64) -> Self {
        assert!(sigma >= 0.0, "sigma must be non-negative");
        OuNoise {
            x: mu.clone(),
            mu,
            theta,
            sigma,
            rng: stream_rng(seed, tag),
        }
    }

    pub fn zero_centered(dim: usize, theta: f64, sigma: f64, seed: u64, tag: u64) -> Self {
        Self::new(vec![0.0; dim], theta, sigma, seed, tag)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Anneal the diffusion scale (exploration schedule).
    pub fn set_sigma(&mut self, sigma: f64) {
        assert!(sigma >= 0.0);
        self.sigma = sigma;
    }

    /// Reset the state to the resting level (start of an episode).
    pub fn reset(&mut self) {
        self.x.copy_from_slice(&self.mu);
    }

    /// `x' = x + theta*(mu - x) + sigma*N(0,1)` per dimension; returns the
    /// new state.
    pub fn step(&mut self) -> Vec<f64> {
        for (x, mu) in self.x.iter_mut().zip(&self.mu) {
            let n: f64 = self.rng.sample(StandardNormal);
            *x += self.theta * (mu - *x) + self.sigma * n;
        }
        self.x.clone()
    }
}
