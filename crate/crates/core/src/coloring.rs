//! Greedy coloring of the two-deletion confusability graph on {0,1}^w.
//!
//! Two strings are adjacent when their D_2 balls intersect. Colors are
//! assigned in canonical string order (the index with bit 1 of the string
//! as most significant bit), so the table is reproducible.

use alloc::vec;
use alloc::vec::Vec;

use crate::intmath::ceil_log2;
use crate::{Error, Result};

/// Largest length a table may be built for.
pub const W_MAX_LIMIT: usize = 14;

/// Color counts of the greedy tables for w = 0..=W_MAX_LIMIT, so widths
/// are known without building a table. A test rebuilds and compares.
pub const COLORED_COUNTS: [u32; W_MAX_LIMIT + 1] =
    [1, 1, 4, 7, 13, 22, 34, 51, 74, 110, 149, 197, 259, 340, 429];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredTable {
    w: usize,
    count: u32,
    colors: Vec<u32>,
}

/// Canonical index of a bit string: first bit most significant.
pub fn string_index(c: &[u8]) -> u32 {
    c.iter().fold(0u32, |acc, &b| acc << 1 | b as u32)
}

/// Indices of D_2(x) for a length-w string x (w >= 2), deduplicated.
fn ball2(x: u32, w: usize, out: &mut Vec<u32>) {
    out.clear();
    for i in 0..w {
        let y = delete_bit(x, i);
        for j in 0..i {
            out.push(delete_bit(y, j));
        }
    }
    out.sort_unstable();
    out.dedup();
}

/// Remove bit k (counted from the least significant end).
fn delete_bit(x: u32, k: usize) -> u32 {
    ((x >> (k + 1)) << k) | (x & ((1u32 << k) - 1))
}

impl ColoredTable {
    pub fn build(w: usize, w_max: usize) -> Result<Self> {
        if w > w_max || w > W_MAX_LIMIT {
            return Err(Error::ProviderOutOfRange { len: w, w_max: w_max.min(W_MAX_LIMIT) });
        }
        let size = 1usize << w;
        if w < 2 {
            return Ok(ColoredTable { w, count: 1, colors: vec![0; size] });
        }
        let (offsets, members) = inverted_lists(w);
        let mut colors = vec![u32::MAX; size];
        let mut stamp: Vec<u32> = Vec::new();
        let mut ball = Vec::new();
        let mut count = 0u32;
        for x in 0..size as u32 {
            ball2(x, w, &mut ball);
            for &y in &ball {
                for &z in &members[offsets[y as usize]..offsets[y as usize + 1]] {
                    if z < x {
                        stamp[colors[z as usize] as usize] = x + 1;
                    }
                }
            }
            let c = (0..).find(|&c| c >= stamp.len() || stamp[c] != x + 1).unwrap();
            if c == stamp.len() {
                stamp.push(0);
            }
            colors[x as usize] = c as u32;
            count = count.max(c as u32 + 1);
        }
        Ok(ColoredTable { w, count, colors })
    }

    /// Rebuild from persisted parts, checking shape only.
    pub fn from_parts(w: usize, count: u32, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != 1usize << w || colors.iter().any(|&c| c >= count) {
            return Err(Error::OutOfRange("color table"));
        }
        Ok(ColoredTable { w, count, colors })
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn color_count(&self) -> u32 {
        self.count
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, index: u32) -> u32 {
        self.colors[index as usize]
    }

    /// Sketch width in bits.
    pub fn width(&self) -> usize {
        ceil_log2(self.count as usize)
    }

    /// Largest number of distinct neighbours of any string.
    pub fn max_degree(&self) -> usize {
        if self.w < 2 {
            return 0;
        }
        let (offsets, members) = inverted_lists(self.w);
        let mut seen = vec![u32::MAX; 1 << self.w];
        let mut ball = Vec::new();
        let mut best = 0;
        for x in 0..(1u32 << self.w) {
            ball2(x, self.w, &mut ball);
            let mut deg = 0;
            for &y in &ball {
                for &z in &members[offsets[y as usize]..offsets[y as usize + 1]] {
                    if z != x && seen[z as usize] != x {
                        seen[z as usize] = x;
                        deg += 1;
                    }
                }
            }
            best = best.max(deg);
        }
        best
    }

    /// Every pair of distinct confusable strings gets distinct colors.
    pub fn is_proper(&self) -> bool {
        if self.w < 2 {
            return true;
        }
        let (offsets, members) = inverted_lists(self.w);
        (0..offsets.len() - 1).all(|y| {
            let group = &members[offsets[y]..offsets[y + 1]];
            let mut cs: Vec<u32> = group.iter().map(|&z| self.colors[z as usize]).collect();
            cs.sort_unstable();
            cs.windows(2).all(|p| p[0] != p[1])
        })
    }
}

/// For every y in {0,1}^(w-2), the strings x whose D_2 ball contains y,
/// as a CSR pair (offsets, members).
fn inverted_lists(w: usize) -> (Vec<usize>, Vec<u32>) {
    let size = 1usize << w;
    let mut ball = Vec::new();
    let mut counts = vec![0usize; (1 << (w - 2)) + 1];
    for x in 0..size as u32 {
        ball2(x, w, &mut ball);
        for &y in &ball {
            counts[y as usize + 1] += 1;
        }
    }
    for i in 1..counts.len() {
        counts[i] += counts[i - 1];
    }
    let mut fill = counts.clone();
    let mut members = vec![0u32; counts[counts.len() - 1]];
    for x in 0..size as u32 {
        ball2(x, w, &mut ball);
        for &y in &ball {
            members[fill[y as usize]] = x;
            fill[y as usize] += 1;
        }
    }
    (counts, members)
}
