//! Counter-based random streams.
//!
//! Every random decision is drawn from a ChaCha8 stream keyed by
//! `(seed, domain)` and selected by an index (trial number, word number).
//! Results therefore do not depend on how work is split across threads.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// Independent purposes that must never share a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Codebook = 1,
    Trial = 2,
    Redraw = 3,
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Stream for the `attempt`-th redraw of word `index` (distinct codebooks).
pub fn redraw_stream(seed: u64, index: u64, attempt: u32) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(Domain::Redraw as u64).to_le_bytes());
    key[16..20].copy_from_slice(&attempt.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
