//! Bounded FIFO replay store with uniform with-replacement sampling.
//!
//! Transitions carry no agent tag: once stored, experience from every
//! agent is indistinguishable, which is what lets one buffer serve all of
//! them.

use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ddpg::bundle::DdpgError;
use crate::math::stream_rng;
use crate::sim::Observation;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub s: Observation,
    pub a: [f64; 3],
    pub r: f64,
    pub s_next: Observation,
    pub done: bool,
}

#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    data: VecDeque<Transition>,
    rng: ChaCha8Rng,
}

impl ReplayBuffer {
    /// `seed`/`tag` feed the sampling stream; see [`stream_rng`].
    pub fn new(capacity: usize, seed: u64, tag: u64) -> Self {
        assert!(capacity >= 1, "replay buffer capacity must be positive");
        ReplayBuffer {
            capacity,
            data: VecDeque::with_capacity(capacity.min(1 << 20)),
            rng: stream_rng(seed, tag),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Append, evicting the oldest transition at capacity.
    pub fn push(&mut self, t: Transition) {
        if self.data.len() == self.capacity {
            self.data.pop_front();
        }
        self.data.push_back(t);
    }

    /// `n` independent uniform draws with replacement. Requires at least
    /// `n` stored transitions.
    pub fn sample(&mut self, n: usize) -> Result<Vec<&Transition>, DdpgError> {
        let len = self.data.len();
        if len < n {
            return Err(DdpgError::InsufficientSamples { have: len, want: n });
        }
        let indices: Vec<usize> = (0..n).map(|_| self.rng.gen_range(0..len)).collect();
        Ok(indices.into_iter().map(|i| &self.data[i]).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.data.iter()
    }
}
