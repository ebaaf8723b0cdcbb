//! Measurement-count tables and seeded outcome sampling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Convention tag stored in every counts table: the leftmost character of a
/// key is classical bit 1 (`c[0]` in emitted QASM).
pub const BIT_ORDER_TAG: &str = "leftmost=c[0]";

/// Histogram of measured bitstrings.
///
/// Keys have length `n_measured`; the character at position `j` is the
/// outcome recorded in classical bit `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    pub n_measured: usize,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
    pub bit_order: String,
}

impl CountsTable {
    pub fn new(n_measured: usize, shots: u64, counts: BTreeMap<String, u64>) -> Self {
        CountsTable {
            n_measured,
            shots,
            counts,
            bit_order: BIT_ORDER_TAG.to_string(),
        }
    }

    /// Check the structural invariants: totals match and keys are well formed.
    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.counts.values().sum();
        if total != self.shots {
            return Err(Error::DimensionMismatch {
                left: total as usize,
                right: self.shots as usize,
            });
        }
        for key in self.counts.keys() {
            if key.len() != self.n_measured || !key.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::BadBitstring(key.clone()));
            }
        }
        Ok(())
    }

    /// Key with the highest count; ties broken toward the lexicographically
    /// smallest key so the result is deterministic.
    pub fn modal_key(&self) -> Option<&str> {
        self.counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(k, _)| k.as_str())
    }

    /// Empirical frequency of `key`.
    pub fn frequency(&self, key: &str) -> f64 {
        *self.counts.get(key).unwrap_or(&0) as f64 / self.shots as f64
    }
}

/// Render an outcome index as a bitstring of `len` characters, most
/// significant bit first.
pub fn index_to_bitstring(index: usize, len: usize) -> String {
    (0..len)
        .map(|j| {
            if (index >> (len - 1 - j)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn bitstring_to_index(bits: &str) -> Result<usize> {
    let mut idx = 0usize;
    for c in bits.chars() {
        idx <<= 1;
        match c {
            '0' => {}
            '1' => idx |= 1,
            _ => return Err(Error::BadBitstring(bits.to_string())),
        }
    }
    Ok(idx)
}

/// splitmix64 mixing step, used to derive independent seed streams.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `stream`-th independent stream of a run seeded by `seed`.
///
/// Streams are decorrelated so parallel work (for example tomography
/// settings) gives results independent of execution order.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(1)))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draw `shots` i.i.d. outcomes from an explicit probability table over
/// `2^n_measured` outcomes, optionally flipping each reported bit with
/// probability `readout_flip`. Deterministic for a fixed seed.
pub fn sample_probabilities(
    probs: &[f64],
    n_measured: usize,
    shots: u64,
    seed: u64,
    readout_flip: f64,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if probs.len() != 1 << n_measured {
        return Err(Error::DimensionMismatch {
            left: probs.len(),
            right: 1 << n_measured,
        });
    }
    let mut rng = seeded_rng(seed);
    Ok(sample_table(probs, n_measured, shots, &mut rng, readout_flip))
}

/// Discrete distribution over outcome indices with cumulative-sum sampling.
pub(crate) struct ProbabilityTable {
    cumulative: Vec<f64>,
}

impl ProbabilityTable {
    pub fn new(probs: &[f64]) -> Self {
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in probs {
            acc += p.max(0.0);
            cumulative.push(acc);
        }
        // guard the final bucket against rounding of the running sum
        if let Some(last) = cumulative.last_mut() {
            *last = last.max(1.0);
        }
        ProbabilityTable { cumulative }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        // smallest index whose cumulative weight strictly exceeds u, so a
        // boundary draw can never land in a zero-probability bucket
        let mut i = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let last = self.cumulative.len() - 1;
        while i < last && self.cumulative[i] <= u {
            i += 1;
        }
        i.min(last)
    }
}

/// Draw `shots` i.i.d. outcomes from `probs` and tabulate them.
pub(crate) fn sample_table<R: Rng>(
    probs: &[f64],
    n_measured: usize,
    shots: u64,
    rng: &mut R,
    readout_flip: f64,
) -> CountsTable {
    let table = ProbabilityTable::new(probs);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let mut outcome = table.sample(rng);
        if readout_flip > 0.0 {
            for bit in 0..n_measured {
                if rng.gen::<f64>() < readout_flip {
                    outcome ^= 1 << (n_measured - 1 - bit);
                }
            }
        }
        *counts
            .entry(index_to_bitstring(outcome, n_measured))
            .or_insert(0) += 1;
    }
    CountsTable::new(n_measured, shots, counts)
}
