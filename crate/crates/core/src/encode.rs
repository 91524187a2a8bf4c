//! Component encoders: the binary-to-q-ary lift, q-ary representation of
//! bit strings, repetition codes, and forced-block regular/dense encoders.

use alloc::vec::Vec;

use crate::intmath::floor_log2;
use crate::locator::pattern;
use crate::strings::{first_row, regular_window};
use crate::{Error, Result};

/// One-to-one map from fixed-length bit strings to longer bit strings.
pub trait BinaryEncoder {
    fn input_len(&self) -> usize;
    fn output_len(&self) -> usize;
    fn encode(&self, a: &[u8]) -> Result<Vec<u8>>;
    fn decode(&self, c: &[u8]) -> Result<Vec<u8>>;
}

/// Lift of a binary encoder to Z_q for even q: the encoder runs on row 1
/// of the matrix view, the other rows are copied and padded with zeros.
#[derive(Debug, Clone)]
pub struct LiftedEncoder<E> {
    pub inner: E,
    pub q: u32,
}

impl<E: BinaryEncoder> LiftedEncoder<E> {
    pub fn new(inner: E, q: u32) -> Result<Self> {
        if q < 2 || q % 2 == 1 {
            return Err(Error::OddAlphabet(q));
        }
        Ok(LiftedEncoder { inner, q })
    }

    pub fn apply(&self, u: &[u32]) -> Result<Vec<u32>> {
        let k = self.inner.input_len();
        if u.len() != k {
            return Err(Error::BadLength { expected: k, got: u.len() });
        }
        if let Some(&s) = u.iter().find(|&&s| s >= self.q) {
            return Err(Error::BadSymbol { symbol: s, q: self.q });
        }
        let c = self.inner.encode(&first_row(u))?;
        let x: Vec<u32> = c
            .iter()
            .enumerate()
            .map(|(j, &cj)| if j < k { (u[j] & !1) | cj as u32 } else { cj as u32 })
            .collect();
        debug_assert!(x.iter().all(|&s| s < self.q));
        Ok(x)
    }

    pub fn invert(&self, x: &[u32]) -> Result<Vec<u32>> {
        let k = self.inner.input_len();
        let n = self.inner.output_len();
        if x.len() != n {
            return Err(Error::BadLength { expected: n, got: x.len() });
        }
        if x[k..].iter().any(|&s| s > 1) || x.iter().any(|&s| s >= self.q) {
            return Err(Error::DecodeFailure("lift"));
        }
        let a = self.inner.decode(&first_row(x))?;
        Ok(a.iter().zip(x).map(|(&aj, &xj)| (xj & !1) | aj as u32).collect())
    }
}

/// Bits per q-ary symbol in the q-ary representation.
pub fn qary_chunk(q: u32) -> usize {
    floor_log2(q as usize)
}

/// Number of q-ary symbols representing `bits` bits.
pub fn qary_len(bits: usize, q: u32) -> usize {
    bits.div_ceil(qary_chunk(q))
}

/// Split into chunks of floor(log2 q) bits (last one shorter), each read
/// most significant bit first.
pub fn qary_repr(a: &[u8], q: u32) -> Vec<u32> {
    a.chunks(qary_chunk(q))
        .map(|ch| ch.iter().fold(0u32, |acc, &b| acc << 1 | b as u32))
        .collect()
}

pub fn qary_unrepr(x: &[u32], bits: usize, q: u32) -> Result<Vec<u8>> {
    let s = qary_chunk(q);
    if x.len() != bits.div_ceil(s) {
        return Err(Error::BadLength { expected: bits.div_ceil(s), got: x.len() });
    }
    let mut out = Vec::with_capacity(bits);
    for (i, &v) in x.iter().enumerate() {
        let len = s.min(bits - i * s);
        if v >> len != 0 {
            return Err(Error::DecodeFailure("q-ary representation"));
        }
        out.extend((0..len).rev().map(|k| (v >> k & 1) as u8));
    }
    Ok(out)
}

pub fn rep_encode<T: Clone>(u: &[T], t: usize) -> Vec<T> {
    u.iter().flat_map(|s| core::iter::repeat_n(s.clone(), t + 1)).collect()
}

/// Symbol k is read at position (k-1)(t+1)+1; any t' <= t deletions shift
/// that position by at most t', which stays inside block k.
pub fn rep_decode<T: Clone>(b: &[T], m: usize, t: usize) -> Result<Vec<T>> {
    let full = m * (t + 1);
    if b.len() > full || b.len() + t < full {
        return Err(Error::BadLength { expected: full, got: b.len() });
    }
    Ok((0..m).map(|k| b[k * (t + 1)].clone()).collect())
}

/// Inserts a fixed block after every `chunk` data bits (none after the
/// last chunk).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEncoder {
    k: usize,
    chunk: usize,
    block: Vec<u8>,
}

impl BlockEncoder {
    fn identity(k: usize) -> Self {
        BlockEncoder { k, chunk: k.max(1), block: Vec::new() }
    }

    /// Regular encoder: every window of floor(d log2 n) bits of the output
    /// holds a full 0011 block.
    pub fn regular(k: usize, d: u32) -> Result<Self> {
        let w = regular_window(d, k);
        // too short for a block schedule; the run bound is then k itself
        if w > k || w < 8 {
            return Ok(Self::identity(k));
        }
        // period chunk+4; any window of chunk+7 bits holds a whole block
        Ok(BlockEncoder { k, chunk: w - 7, block: alloc::vec![0, 0, 1, 1] })
    }

    /// Dense encoder: every window of delta bits holds a full 0^t1^t.
    pub fn dense(k: usize, t: usize, delta: usize) -> Result<Self> {
        if delta > k {
            return Ok(Self::identity(k));
        }
        if delta < 4 * t {
            return Err(Error::Schedule("density window below 4t"));
        }
        Ok(BlockEncoder { k, chunk: delta + 1 - 4 * t, block: pattern(t) })
    }

    fn blocks(&self) -> usize {
        if self.block.is_empty() {
            0
        } else {
            self.k.div_ceil(self.chunk).saturating_sub(1)
        }
    }

    /// Redundancy in bits.
    pub fn redundancy(&self) -> usize {
        self.blocks() * self.block.len()
    }

    /// Longest run or alternating substring any output can contain.
    pub fn run_bound(&self) -> usize {
        if self.blocks() == 0 {
            self.k
        } else {
            self.chunk + 2
        }
    }

    pub fn chunk(&self) -> usize {
        self.chunk
    }

    pub fn block(&self) -> &[u8] {
        &self.block
    }
}

impl BinaryEncoder for BlockEncoder {
    fn input_len(&self) -> usize {
        self.k
    }

    fn output_len(&self) -> usize {
        self.k + self.redundancy()
    }

    fn encode(&self, a: &[u8]) -> Result<Vec<u8>> {
        if a.len() != self.k {
            return Err(Error::BadLength { expected: self.k, got: a.len() });
        }
        let mut out = Vec::with_capacity(self.output_len());
        for (i, ch) in a.chunks(self.chunk).enumerate() {
            if i > 0 {
                out.extend_from_slice(&self.block);
            }
            out.extend_from_slice(ch);
        }
        Ok(out)
    }

    fn decode(&self, c: &[u8]) -> Result<Vec<u8>> {
        if c.len() != self.output_len() {
            return Err(Error::BadLength { expected: self.output_len(), got: c.len() });
        }
        let mut out = Vec::with_capacity(self.k);
        let mut pos = 0;
        while pos < c.len() {
            if pos > 0 {
                if c[pos..pos + self.block.len()] != self.block[..] {
                    return Err(Error::DecodeFailure("forced block"));
                }
                pos += self.block.len();
            }
            let end = (pos + self.chunk).min(c.len());
            out.extend_from_slice(&c[pos..end]);
            pos = end;
        }
        Ok(out)
    }
}
