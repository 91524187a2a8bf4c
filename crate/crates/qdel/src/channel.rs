//! Seeded deletion channel.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorruptSpec {
    /// k deletions at distinct uniformly chosen positions.
    Deletions(usize),
    /// One burst whose length is uniform in 1..=t (nothing when t = 0).
    Burst(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot delete {want} symbols from a string of length {len}")]
pub struct SpecTooLong {
    pub want: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corrupted<T> {
    pub word: Vec<T>,
    /// Deleted positions, 1-based and increasing.
    pub deleted: Vec<usize>,
}

pub fn corrupt_with<T: Clone>(s: &[T], spec: CorruptSpec, rng: &mut impl Rng) -> Result<Corrupted<T>, SpecTooLong> {
    let n = s.len();
    let deleted: Vec<usize> = match spec {
        CorruptSpec::Deletions(k) => {
            if k > n {
                return Err(SpecTooLong { want: k, len: n });
            }
            let mut v: Vec<usize> = sample(rng, n, k).into_iter().map(|i| i + 1).collect();
            v.sort_unstable();
            v
        }
        CorruptSpec::Burst(0) => Vec::new(),
        CorruptSpec::Burst(t) => {
            if t > n {
                return Err(SpecTooLong { want: t, len: n });
            }
            let len = rng.gen_range(1..=t);
            let lo = rng.gen_range(1..=n + 1 - len);
            (lo..lo + len).collect()
        }
    };
    let mut word = Vec::with_capacity(n - deleted.len());
    let mut next = deleted.iter().peekable();
    for (i, x) in s.iter().enumerate() {
        if next.peek() == Some(&&(i + 1)) {
            next.next();
        } else {
            word.push(x.clone());
        }
    }
    Ok(Corrupted { word, deleted })
}

pub fn corrupt<T: Clone>(s: &[T], spec: CorruptSpec, seed: u64) -> Result<Corrupted<T>, SpecTooLong> {
    corrupt_with(s, spec, &mut ChaCha8Rng::seed_from_u64(seed))
}
