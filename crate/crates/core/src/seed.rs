//! Sub-seed derivation for reproducible stochastic stages.
//!
//! Every random stage draws from its own generator seeded by
//! `derive_seed(master, stage, index)`. The rule is: FNV-1a (64-bit) over the
//! UTF-8 bytes of `stage`, XOR-folded with `master` and `index` and passed
//! through the SplitMix64 finalizer after each fold. It depends only on its
//! inputs, so runs replay identically across machines and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stage: &str, index: u64) -> u64 {
    let mut h = FNV_OFFSET;
    for b in stage.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    let h = splitmix64(h ^ master);
    splitmix64(h ^ index.rotate_left(32))
}

/// Generator used by all stochastic stages.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
