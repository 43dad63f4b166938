//! Shift orbits under the Bernoulli measure `μ̃ = ⊗ (Σ r_i^s ε_i)`.
//!
//! A random word is the letter stream `ℓ_k = F⁻¹(U_k)`, `U_k` the `k`-th
//! output of SplitMix64 in counter form for the given seed, so any window of
//! the stream can be generated independently and in parallel.

use serde::{Deserialize, Serialize};

use crate::error::{input_err, Result};
use crate::ifs::Ifs;
use crate::par;
use crate::rng::{self, LetterSampler};
use crate::symbolic::{word_prob, Cylinder, Letter, Word};

/// Prefix of a `μ̃`-random word, long enough to test `σ^k(w) ∈ [v]` for
/// every `k < n` and every target of length at most `window`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub seed: u64,
    pub n: usize,
    pub letters: Vec<Letter>,
    pub targets: Vec<Cylinder>,
}

impl OrbitSample {
    pub fn generate(ifs: &Ifs, n: usize, window: usize, seed: u64) -> OrbitSample {
        let sampler = LetterSampler::new(ifs.weights());
        let len = n + window.saturating_sub(1);
        let letters = par::map_range(len, |k| sampler.letter(rng::unit(rng::at(seed, k as u64))));
        OrbitSample { seed, n, letters, targets: Vec::new() }
    }

    /// All `k < n` with `σ^k(w) ∈ [v]`, increasing.
    pub fn hits(&self, v: &Word) -> Vec<usize> {
        let v = v.letters();
        (0..self.n).filter(|&k| self.letters.get(k..k + v.len()) == Some(v)).collect()
    }

    /// Hits among `k ∈ [start, end)`.
    pub fn count_in(&self, v: &Word, start: usize, end: usize) -> usize {
        let v = v.letters();
        (start..end.min(self.n)).filter(|&k| self.letters.get(k..k + v.len()) == Some(v)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffReport {
    pub freq: f64,
    pub expected: f64,
    /// Binomial standard error, doubled for targets longer than one letter
    /// to cover the correlation of overlapping windows.
    pub stderr: f64,
    pub n_steps: usize,
    pub hits: usize,
}

impl BirkhoffReport {
    /// `|freq − expected| ≤ z · stderr`.
    pub fn within(&self, z: f64) -> bool {
        (self.freq - self.expected).abs() <= z * self.stderr
    }
}

fn check_target(ifs: &Ifs, target: &Word, n_steps: usize) -> Result<()> {
    if n_steps == 0 {
        return Err(input_err!("need at least one step"));
    }
    ifs.check_word(target)
}

fn binomial_stderr(p: f64, n: usize, len: usize) -> f64 {
    let base = (p * (1.0 - p) / n as f64).sqrt();
    if len > 1 {
        2.0 * base
    } else {
        base
    }
}

/// Fraction of `k < n_steps` with `σ^k(w) ∈ [target]`.
pub fn birkhoff_frequency(ifs: &Ifs, target: &Word, n_steps: usize, seed: u64) -> Result<BirkhoffReport> {
    check_target(ifs, target, n_steps)?;
    let expected = word_prob(ifs.weights(), target);
    if target.is_empty() {
        return Ok(BirkhoffReport { freq: 1.0, expected: 1.0, stderr: 0.0, n_steps, hits: n_steps });
    }
    let orbit = OrbitSample::generate(ifs, n_steps, target.len(), seed);
    let hits = orbit.count_in(target, 0, n_steps);
    Ok(BirkhoffReport {
        freq: hits as f64 / n_steps as f64,
        expected,
        stderr: binomial_stderr(expected, n_steps, target.len()),
        n_steps,
        hits,
    })
}

/// The visit times `G = {k < n_steps : σ^k(w) ∈ [target]}`.
pub fn hitting_times(ifs: &Ifs, target: &Word, n_steps: usize, seed: u64) -> Result<Vec<usize>> {
    check_target(ifs, target, n_steps)?;
    if target.is_empty() {
        return Ok((0..n_steps).collect());
    }
    Ok(OrbitSample::generate(ifs, n_steps, target.len(), seed).hits(target))
}

/// Mean gap between consecutive hitting times; `None` with fewer than two hits.
pub fn mean_gap(times: &[usize]) -> Option<f64> {
    (times.len() >= 2).then(|| (times[times.len() - 1] - times[0]) as f64 / (times.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub first: f64,
    pub second: f64,
    pub stderr: f64,
    pub agree: bool,
}

/// Frequencies of `[target]` over `k ∈ [0, n)` and `k ∈ [n, 2n)` of one orbit.
pub fn stationarity(ifs: &Ifs, target: &Word, n: usize, seed: u64) -> Result<StationarityReport> {
    check_target(ifs, target, n)?;
    let orbit = OrbitSample::generate(ifs, 2 * n, target.len(), seed);
    let first = orbit.count_in(target, 0, n) as f64 / n as f64;
    let second = orbit.count_in(target, n, 2 * n) as f64 / n as f64;
    let stderr = binomial_stderr(word_prob(ifs.weights(), target), n, target.len());
    Ok(StationarityReport { first, second, stderr, agree: (first - second).abs() <= 4.0 * stderr })
}
