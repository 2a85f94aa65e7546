//! Deterministic random-stream derivation.
//!
//! Every source of randomness in an experiment is a ChaCha stream derived
//! from the master seed plus a purpose tag and optional indices (client,
//! round, user). Streams are independent of each other and of scheduling,
//! so results do not depend on how work is distributed across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags keep unrelated streams from colliding.
#[derive(Debug, Clone, Copy)]
pub enum StreamKind {
    Split,
    Partition,
    UserInit,
    ItemInit,
    LocalTrain,
    LdpNoise,
    Synthetic,
}

impl StreamKind {
    fn tag(self) -> u64 {
        match self {
            StreamKind::Split => 0x5350_4c49_5400,
            StreamKind::Partition => 0x5041_5254_5400,
            StreamKind::UserInit => 0x5553_4552_4900,
            StreamKind::ItemInit => 0x4954_454d_4900,
            StreamKind::LocalTrain => 0x5452_4149_4e00,
            StreamKind::LdpNoise => 0x4c44_5000,
            StreamKind::Synthetic => 0x53_594e_5400,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent stream from `(seed, kind, indices)`.
pub fn stream(seed: u64, kind: StreamKind, indices: &[u64]) -> ChaCha8Rng {
    let mut state = seed ^ kind.tag();
    for &ix in indices {
        state ^= splitmix64(&mut state) ^ ix.wrapping_mul(0xff51_afd7_ed55_8ccd);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
