//! Poisson coincidence counts with a counter-based random stream.
//!
//! Point `i` of a curve draws from a ChaCha stream selected by
//! `stream_base + i` under the run seed, so the draws do not depend on
//! evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Draws one Poisson count per probability with mean
/// `pair_rate · duration · probability`.
pub fn sample_counts(
    probabilities: &[f64],
    pair_rate: f64,
    duration: f64,
    seed: u64,
) -> Result<Vec<u64>> {
    sample_counts_on_stream(probabilities, pair_rate, duration, seed, 0)
}

pub fn sample_counts_on_stream(
    probabilities: &[f64],
    pair_rate: f64,
    duration: f64,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<u64>> {
    let means: Vec<f64> = probabilities
        .iter()
        .map(|p| pair_rate * duration * p)
        .collect();
    if let Some(bad) = means.iter().find(|m| !(**m >= 0.0) || !m.is_finite()) {
        return Err(Error::Validation(format!(
            "Poisson mean {bad} must be finite and non-negative"
        )));
    }
    means
        .par_iter()
        .enumerate()
        .map(|(i, &mean)| draw(mean, seed, stream_base.wrapping_add(i as u64)))
        .collect()
}

fn draw(mean: f64, seed: u64, stream: u64) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let dist = Poisson::new(mean).map_err(|e| Error::Validation(e.to_string()))?;
    Ok(dist.sample(&mut rng) as u64)
}
