//! Sketch primitives: VT syndromes, the interleaved-VT burst sketch and the
//! two-deletion sketch provider.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::coloring::{string_index, ColoredTable};
use crate::intmath::bit_len;
use crate::strings::is_subsequence;
use crate::{Error, Result};

/// Nonnegative integer with a declared bit width; `value < 2^width`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PackedSketch {
    pub value: BigUint,
    pub width: usize,
}

impl PackedSketch {
    pub fn new(value: BigUint, width: usize) -> Self {
        debug_assert!(value.bits() as usize <= width);
        PackedSketch { value, width }
    }

    /// Like `new`, but a value wider than `width` is a sketch mismatch.
    pub fn new_checked(value: BigUint, width: usize) -> Result<Self> {
        if value.bits() as usize > width {
            return Err(Error::SketchMismatch);
        }
        Ok(PackedSketch { value, width })
    }

    pub fn from_u64(value: u64, width: usize) -> Self {
        PackedSketch::new(BigUint::from(value), width)
    }

    pub fn empty() -> Self {
        PackedSketch { value: BigUint::zero(), width: 0 }
    }

    /// Concatenate components, first component most significant.
    pub fn pack(parts: &[PackedSketch]) -> Self {
        let mut value = BigUint::zero();
        let mut width = 0;
        for p in parts {
            value = (value << p.width) | &p.value;
            width += p.width;
        }
        PackedSketch { value, width }
    }

    /// Split into components of the given widths (most significant first).
    pub fn unpack(&self, widths: &[usize]) -> Result<Vec<PackedSketch>> {
        let total: usize = widths.iter().sum();
        if total != self.width || self.value.bits() as usize > total {
            return Err(Error::SketchMismatch);
        }
        let mut out = Vec::with_capacity(widths.len());
        let mut rest = total;
        for &w in widths {
            rest -= w;
            let mask = (BigUint::from(1u8) << w) - 1u8;
            out.push(PackedSketch { value: (&self.value >> rest) & mask, width: w });
        }
        Ok(out)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// Bits, most significant first, exactly `width` long.
    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.width).rev().map(|i| self.value.bit(i as u64) as u8).collect()
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut value = BigUint::zero();
        for &b in bits {
            value <<= 1;
            if b != 0 {
                value |= BigUint::from(1u8);
            }
        }
        PackedSketch { value, width: bits.len() }
    }
}

/// Width of the VT syndrome of a length-m string.
pub fn vt_width(m: usize) -> usize {
    if m < 3 {
        m
    } else {
        bit_len(m)
    }
}

/// VT syndrome value; strings shorter than 3 are their own sketch.
pub fn vt_value(c: &[u8]) -> u64 {
    let m = c.len() as u64;
    if m < 3 {
        return c.iter().fold(0, |acc, &b| acc << 1 | b as u64);
    }
    let s: u64 = c.iter().enumerate().map(|(i, &b)| (i as u64 + 1) * b as u64).sum();
    s % (m + 1)
}

pub fn vt_syndrome(c: &[u8]) -> PackedSketch {
    PackedSketch::from_u64(vt_value(c), vt_width(c.len()))
}

pub fn vt_decode(b: &[u8], s: &PackedSketch, m: usize) -> Result<Vec<u8>> {
    if s.width != vt_width(m) {
        return Err(Error::SketchMismatch);
    }
    vt_decode_value(b, s.to_u64().ok_or(Error::SketchMismatch)?, m)
}

/// Single-deletion VT decoding: insert the missing bit by the deficiency rule.
pub fn vt_decode_value(b: &[u8], s: u64, m: usize) -> Result<Vec<u8>> {
    if m == 0 || b.len() + 1 != m {
        return Err(Error::BadLength { expected: m.saturating_sub(1), got: b.len() });
    }
    if m < 3 {
        let c: Vec<u8> = (0..m).rev().map(|i| (s >> i & 1) as u8).collect();
        if s >> m != 0 || !is_subsequence(b, &c) {
            return Err(Error::SketchMismatch);
        }
        return Ok(c);
    }
    let modulus = m as u64 + 1;
    if s >= modulus {
        return Err(Error::SketchMismatch);
    }
    let w = b.iter().filter(|&&x| x == 1).count() as u64;
    let sb: u64 = b.iter().enumerate().map(|(i, &x)| (i as u64 + 1) * x as u64).sum();
    let def = (s + modulus - sb % modulus) % modulus;
    let mut c = Vec::with_capacity(m);
    if def <= w {
        // a 0 with `def` ones to its right
        let mut ones_right = 0;
        let mut pos = b.len();
        while ones_right < def {
            pos -= 1;
            ones_right += b[pos] as u64;
        }
        c.extend_from_slice(&b[..pos]);
        c.push(0);
        c.extend_from_slice(&b[pos..]);
    } else {
        // a 1 with def - w - 1 zeros to its left
        let want = def - w - 1;
        let mut zeros = 0;
        let mut pos = 0;
        while zeros < want {
            zeros += (b[pos] == 0) as u64;
            pos += 1;
        }
        c.extend_from_slice(&b[..pos]);
        c.push(1);
        c.extend_from_slice(&b[pos..]);
    }
    if vt_value(&c) != s {
        return Err(Error::SketchMismatch);
    }
    Ok(c)
}

/// Length of interleaved row j (1-based) when a length-m string is split
/// into `k` rows by position mod k.
pub fn interleave_len(m: usize, k: usize, j: usize) -> usize {
    if j > m {
        0
    } else {
        (m - j) / k + 1
    }
}

fn interleave_row(c: &[u8], k: usize, j: usize) -> Vec<u8> {
    c.iter().skip(j - 1).step_by(k).copied().collect()
}

/// Component widths of the burst sketch for length m and max burst t.
pub fn burst_widths(m: usize, t: usize) -> Vec<usize> {
    let mut w = Vec::new();
    for k in 1..=t {
        for j in 1..=k {
            w.push(vt_width(interleave_len(m, k, j)));
        }
    }
    w
}

pub fn burst_width(m: usize, t: usize) -> usize {
    burst_widths(m, t).iter().sum()
}

/// Interleaved VT: for each k = 1..t, the VT syndrome of each of the k rows
/// formed by positions congruent to j mod k.
pub fn burst_sketch(c: &[u8], t: usize) -> PackedSketch {
    let mut parts = Vec::new();
    for k in 1..=t {
        for j in 1..=k {
            let row = interleave_row(c, k, j);
            parts.push(PackedSketch::from_u64(vt_value(&row), vt_width(row.len())));
        }
    }
    PackedSketch::pack(&parts)
}

pub fn burst_decode(b: &[u8], s: &PackedSketch, m: usize, t: usize) -> Result<Vec<u8>> {
    if b.len() > m || m - b.len() > t {
        return Err(Error::BadLength { expected: m, got: b.len() });
    }
    let tp = m - b.len();
    let widths = burst_widths(m, t);
    let parts = s.unpack(&widths)?;
    if tp == 0 {
        return Ok(b.to_vec());
    }
    let first = (tp - 1) * tp / 2;
    let mut c = alloc::vec![0u8; m];
    for j in 1..=tp {
        let row_b = interleave_row(b, tp, j);
        let s_j = parts[first + j - 1].to_u64().ok_or(Error::SketchMismatch)?;
        let row_c = vt_decode_value(&row_b, s_j, interleave_len(m, tp, j))?;
        for (k, v) in row_c.into_iter().enumerate() {
            c[j - 1 + k * tp] = v;
        }
    }
    if burst_sketch(&c, t) != *s {
        return Err(Error::SketchMismatch);
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SketchProviderId {
    Verbatim,
    Colored,
}

/// Two-deletion sketch provider: verbatim, or a color from a greedy
/// coloring of the D_2-confusability graph.
#[derive(Debug, Clone)]
pub struct TwoDelProvider {
    id: SketchProviderId,
    w_max: usize,
    tables: BTreeMap<usize, Arc<ColoredTable>>,
}

impl TwoDelProvider {
    pub fn verbatim() -> Self {
        TwoDelProvider { id: SketchProviderId::Verbatim, w_max: 0, tables: BTreeMap::new() }
    }

    /// Colored provider using the supplied tables (one per string length).
    pub fn colored(w_max: usize, tables: impl IntoIterator<Item = Arc<ColoredTable>>) -> Self {
        let tables = tables.into_iter().map(|t| (t.w(), t)).collect();
        TwoDelProvider { id: SketchProviderId::Colored, w_max, tables }
    }

    /// Colored provider building the tables for `lengths` in memory.
    pub fn colored_for(w_max: usize, lengths: &[usize]) -> Result<Self> {
        let mut tables = Vec::new();
        for &w in lengths {
            if w >= 3 {
                tables.push(Arc::new(ColoredTable::build(w, w_max)?));
            }
        }
        Ok(Self::colored(w_max, tables))
    }

    pub fn id(&self) -> SketchProviderId {
        self.id
    }

    pub fn w_max(&self) -> usize {
        self.w_max
    }

    fn table(&self, m: usize) -> Result<&ColoredTable> {
        if m > self.w_max {
            return Err(Error::ProviderOutOfRange { len: m, w_max: self.w_max });
        }
        self.tables.get(&m).map(|t| &**t).ok_or(Error::ProviderOutOfRange { len: m, w_max: self.w_max })
    }

    pub fn width(&self, m: usize) -> Result<usize> {
        if m < 3 || self.id == SketchProviderId::Verbatim {
            return Ok(m);
        }
        Ok(self.table(m)?.width())
    }

    pub fn sketch(&self, c: &[u8]) -> Result<PackedSketch> {
        if c.len() < 3 || self.id == SketchProviderId::Verbatim {
            return Ok(PackedSketch::from_bits(c));
        }
        let t = self.table(c.len())?;
        Ok(PackedSketch::from_u64(t.color(string_index(c)) as u64, t.width()))
    }

    pub fn decode(&self, b: &[u8], s: &PackedSketch, m: usize) -> Result<Vec<u8>> {
        if m < 2 || b.len() + 2 != m {
            return Err(Error::BadLength { expected: m.saturating_sub(2), got: b.len() });
        }
        if s.width != self.width(m)? {
            return Err(Error::SketchMismatch);
        }
        if m < 3 || self.id == SketchProviderId::Verbatim {
            let c = s.to_bits();
            return if is_subsequence(b, &c) { Ok(c) } else { Err(Error::SketchMismatch) };
        }
        let table = self.table(m)?;
        let want = s.to_u64().ok_or(Error::SketchMismatch)? as u32;
        let mut found = None;
        for cand in supersequences2(b) {
            if table.color(cand) == want {
                if found.is_some() {
                    return Err(Error::ProviderContract);
                }
                found = Some(cand);
            }
        }
        let idx = found.ok_or(Error::SketchMismatch)?;
        Ok((0..m).rev().map(|i| (idx >> i & 1) as u8).collect())
    }
}

/// Sketch width of a provider for length m, without consulting tables.
pub fn provider_width(id: SketchProviderId, m: usize) -> Result<usize> {
    if m < 3 || id == SketchProviderId::Verbatim {
        return Ok(m);
    }
    match crate::coloring::COLORED_COUNTS.get(m) {
        Some(&count) => Ok(crate::intmath::ceil_log2(count as usize)),
        None => Err(Error::ProviderOutOfRange { len: m, w_max: crate::coloring::W_MAX_LIMIT }),
    }
}

pub fn twodel_sketch(c: &[u8], provider: &TwoDelProvider) -> Result<PackedSketch> {
    provider.sketch(c)
}

pub fn twodel_decode(b: &[u8], s: &PackedSketch, m: usize, provider: &TwoDelProvider) -> Result<Vec<u8>> {
    provider.decode(b, s, m)
}

/// All distinct strings (as canonical indices) obtained by inserting two
/// bits into `b`; `|b| + 2 <= 32`.
fn supersequences2(b: &[u8]) -> Vec<u32> {
    let x = string_index(b);
    let mut one = insert_bit_all(x, b.len());
    one.sort_unstable();
    one.dedup();
    let mut two = Vec::with_capacity(one.len() * (b.len() + 2) * 2);
    for &y in &one {
        two.extend(insert_bit_all(y, b.len() + 1));
    }
    two.sort_unstable();
    two.dedup();
    two
}

fn insert_bit_all(x: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(2 * (len + 1));
    for k in 0..=len {
        // k low bits stay, the rest shifts up by one
        let low = x & ((1u32 << k) - 1);
        let high = (x >> k) << (k + 1);
        out.push(high | low);
        out.push(high | 1 << k | low);
    }
    out
}
