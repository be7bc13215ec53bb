//! Deterministic random streams keyed by a tag and integer coordinates.
//!
//! Every random draw in the crate comes from a stream derived from
//! `(tag, parts...)`, so adding a new consumer never shifts the samples an
//! existing consumer sees, and evaluation order does not matter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::algebra::Vector;

pub fn stream(tag: &str, parts: &[u64]) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag.as_bytes());
    for p in parts {
        h.update(p.to_le_bytes());
    }
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Entries uniform in `[-1, 1]`.
pub fn uniform_vector(rng: &mut impl Rng, n: usize) -> Vector {
    Vector::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
}
