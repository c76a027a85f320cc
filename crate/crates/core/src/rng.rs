//! Named random substreams derived from a single run seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Clusters,
    Demand,
    Mobility,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Clusters => 0x636c_7573_7465_7273,
            Stream::Demand => 0x6465_6d61_6e64_0000,
            Stream::Mobility => 0x6d6f_6269_6c69_7479,
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for substream `(stream, index)` of `seed`. Distinct triples give
/// independent-looking streams; the same triple always gives the same one.
pub fn substream(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let a = splitmix(seed);
    let b = splitmix(a ^ stream.tag());
    let c = splitmix(b ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93));
    let mut key = [0u8; 32];
    for (i, word) in [a, b, c, splitmix(c)].iter().enumerate() {
        key[8 * i..8 * i + 8].copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
