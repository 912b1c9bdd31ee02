//! Chunk-parallel Monte Carlo. Totals are integer agreement counts, so the
//! result is bit-identical to the sequential estimate for any thread count.

use exoframe_core::bell::{
    self, estimate_from_agreements, mc_chunk_agreements, mc_chunk_count, AnalyzerSettings,
    CorrelationEstimate, Vec3,
};
use rayon::prelude::*;

pub fn classical_correlation_mc(
    a: Vec3,
    b: Vec3,
    n_samples: u64,
    seed: u64,
) -> exoframe_core::Result<CorrelationEstimate> {
    // validates inputs on one sample before fanning out
    bell::classical_correlation_mc(a, b, 1, seed)?;
    let norm = |v: Vec3| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|c| c / n)
    };
    let (a, b) = (norm(a), norm(b));
    let agreements = (0..mc_chunk_count(n_samples))
        .into_par_iter()
        .map(|c| mc_chunk_agreements(a, b, seed, c, n_samples))
        .sum();
    Ok(estimate_from_agreements(agreements, n_samples))
}

/// Monte Carlo estimates for the four CHSH pairs, seeded per pair.
pub fn chsh_mc(
    settings: &AnalyzerSettings,
    n_samples: u64,
    seed: u64,
) -> exoframe_core::Result<[CorrelationEstimate; 4]> {
    let pairs = settings.pairs();
    let mut out = [CorrelationEstimate {
        value: 0.0,
        standard_error: None,
        n_samples,
    }; 4];
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        out[i] = classical_correlation_mc(a, b, n_samples, bell::pair_seed(seed, i as u64))?;
    }
    Ok(out)
}
