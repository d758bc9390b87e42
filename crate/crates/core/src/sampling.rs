//! Finite-shot sampling with stochastic Pauli noise and readout flips.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{self, apply_in_place, outcome_of, Circuit, Distribution};
use crate::error::{Error, Result};
use crate::linalg::{self, gates, StateVector};

/// Shots drawn per RNG stream. Fixed so counts do not depend on the number
/// of worker threads.
pub const SHARD_SIZE: u64 = 4096;

/// Depolarizing and readout error rates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    p1: f64,
    p2: f64,
    readout_flip: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        p1: 0.0,
        p2: 0.0,
        readout_flip: 0.0,
    };

    /// `p1` applies after one-qubit gates, `p2` after gates on two or more
    /// qubits. With that probability a uniformly random Pauli string
    /// (identity included) hits the gate's qubits.
    pub fn new(p1: f64, p2: f64, readout_flip: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2), ("readout_flip", readout_flip)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        Ok(Self {
            p1,
            p2,
            readout_flip,
        })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn readout_flip(&self) -> f64 {
        self.readout_flip
    }

    pub fn is_noiseless(&self) -> bool {
        !self.has_gate_noise() && self.readout_flip == 0.0
    }

    fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }

    fn gate_rate(&self, n_qubits: usize) -> f64 {
        if n_qubits == 1 {
            self.p1
        } else {
            self.p2
        }
    }
}

/// Outcome histogram keyed by bitstring, highest classical bit first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotResult {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl ShotResult {
    pub fn count(&self, bitstring: &str) -> u64 {
        self.counts.get(bitstring).copied().unwrap_or(0)
    }

    pub fn frequency(&self, bitstring: &str) -> f64 {
        self.count(bitstring) as f64 / self.shots as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("shot result serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Fraction of shots that read all zeros.
pub fn acceptance_from_counts(r: &ShotResult) -> f64 {
    if r.shots == 0 {
        return 0.0;
    }
    let zeros: u64 = r
        .counts
        .iter()
        .filter(|(k, _)| k.bytes().all(|b| b == b'0'))
        .map(|(_, n)| n)
        .sum();
    zeros as f64 / r.shots as f64
}

/// Samples `shots` measurement records of `c`. A circuit without
/// measurements is read out on every qubit.
///
/// Deterministic in `(c, shots, noise, seed)`.
pub fn sample(c: &Circuit, shots: u64, noise: &NoiseModel, seed: u64) -> Result<ShotResult> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let measured: Vec<usize> = if c.measured().is_empty() {
        (0..c.n_qubits()).collect()
    } else {
        c.measured().to_vec()
    };
    let n_bits = measured.len();

    if c.n_qubits() > circuit::MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits: c.n_qubits(),
            limit: circuit::MAX_SIM_QUBITS,
        });
    }
    let exact = if noise.has_gate_noise() {
        None
    } else {
        let state = c.final_state()?;
        Some(cumulative(
            Distribution::from_state(&state, &measured).probabilities(),
        ))
    };

    let n_shards = shots.div_ceil(SHARD_SIZE);
    let merged = (0..n_shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let n = SHARD_SIZE.min(shots - shard * SHARD_SIZE);
            let mut hist = vec![0u64; 1 << n_bits];
            for _ in 0..n {
                let outcome = match &exact {
                    Some(cdf) => draw(cdf, &mut rng),
                    None => trajectory(c, &measured, noise, &mut rng),
                };
                hist[readout(outcome, n_bits, noise.readout_flip, &mut rng)] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; 1 << n_bits],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let counts = merged
        .into_iter()
        .enumerate()
        .filter(|&(_, n)| n > 0)
        .map(|(o, n)| (circuit::bitstring(o, n_bits), n))
        .collect();
    Ok(ShotResult { shots, counts })
}

fn cumulative<'a>(probs: impl IntoIterator<Item = &'a f64>) -> Vec<f64> {
    probs
        .into_iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

fn draw(cdf: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = cdf.last().copied().unwrap_or(1.0);
    let u = rng.random::<f64>() * total;
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

fn trajectory(c: &Circuit, measured: &[usize], noise: &NoiseModel, rng: &mut ChaCha8Rng) -> usize {
    let mut state = StateVector::zero_state(c.n_qubits());
    for g in c.gates() {
        apply_in_place(&mut state, g);
        let rate = noise.gate_rate(g.num_qubits());
        if rate > 0.0 && rng.random_bool(rate) {
            for q in g.qubits() {
                let pauli = match rng.random_range(0..4u8) {
                    0 => continue,
                    1 => gates::X,
                    2 => gates::Y,
                    _ => gates::Z,
                };
                linalg::apply_matrix_in_place(state.amplitudes_mut(), &pauli, &[q], 0);
            }
        }
    }
    let cdf = cumulative(&state.probabilities());
    outcome_of(draw(&cdf, rng), measured)
}

fn readout(outcome: usize, n_bits: usize, flip: f64, rng: &mut ChaCha8Rng) -> usize {
    if flip == 0.0 {
        return outcome;
    }
    (0..n_bits).fold(outcome, |o, b| {
        if rng.random_bool(flip) {
            o ^ (1 << b)
        } else {
            o
        }
    })
}
