//! Seeded, splittable randomness.
//!
//! Every randomized routine takes a `u64` seed. Independent substreams are
//! ChaCha streams under the same key, so trial `i` draws from stream `i`
//! regardless of how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
