use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};

/// Measurement counts keyed by bitstring (qubit 0 leftmost).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleHistogram {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
}

impl SampleHistogram {
    /// The `k` most frequent bitstrings, ties broken lexicographically.
    pub fn top_k(&self, k: usize) -> Vec<(String, u64)> {
        let mut v: Vec<(String, u64)> = self.counts.iter().map(|(b, &c)| (b.clone(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v.truncate(k);
        v
    }

    pub fn frequency(&self, bits: &str) -> f64 {
        self.counts.get(bits).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Total-variation distance to a distribution over basis indices.
    pub fn total_variation(&self, probabilities: &[f64]) -> f64 {
        let n = probabilities.len().trailing_zeros() as usize;
        let mut tv = 0.0;
        for (i, p) in probabilities.iter().enumerate() {
            let bits = format!("{:0width$b}", i, width = n);
            tv += (self.frequency(&bits) - p).abs();
        }
        tv / 2.0
    }
}

/// Draws `shots` independent computational-basis measurements.
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> Result<SampleHistogram> {
    if shots == 0 {
        return Err(Error::Parameter("shots must be >= 1".into()));
    }
    let probs = state.probabilities();
    let dist = WeightedIndex::new(&probs)
        .map_err(|e| Error::Numeric(format!("cannot sample state: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = vec![0u64; probs.len()];
    for _ in 0..shots {
        raw[dist.sample(&mut rng)] += 1;
    }
    let counts = raw
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (state.bitstring(i), c))
        .collect();
    Ok(SampleHistogram { counts, shots })
}
