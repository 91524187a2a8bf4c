//! QDEL codeword files and CLRT colored-table files.
//!
//! QDEL layout (little-endian):
//!
//! ```text
//! "QDEL" | version u8 | params block | pad u8 | payload
//! ```
//!
//! The params block is mode u8, n u32, q u32, t u16, d u16, rho u32,
//! delta u32, delta' u32, w_max u16, provider u8, lambda u16 and the four
//! modulus widths n1, n2, nb, nbar as u32. Payload symbols are packed at
//! ceil(log2 q) bits each, most significant bit first; `pad` counts the
//! zero bits filling the last byte.

use std::io::{self, Read, Write};

use qdel_core::burst_q::BurstQWidths;
use qdel_core::params::{CodeParams, Mode, SegmentWidths, ValidParams};
use qdel_core::sketch::SketchProviderId;
use thiserror::Error;

pub const QDEL_MAGIC: &[u8; 4] = b"QDEL";
pub const CLRT_MAGIC: &[u8; 4] = b"CLRT";
pub const VERSION: u8 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic")]
    Magic,
    #[error("unsupported version {0}")]
    Version(u8),
    #[error("bad header field: {0}")]
    Field(&'static str),
    #[error("header widths disagree with the parameters")]
    Widths,
    #[error("payload length inconsistent with header")]
    Payload,
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Modulus bit-widths of segment 1, zero where the mode has none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModulusWidths {
    pub n1: u32,
    pub n2: u32,
    pub nb: u32,
    pub nbar: u32,
}

impl ModulusWidths {
    pub fn of(vp: &ValidParams) -> Self {
        let mut w = ModulusWidths::default();
        match vp.layout.seg1.widths {
            SegmentWidths::TwoDel(t) => {
                w.n1 = t.n1 as u32;
                w.n2 = t.n2 as u32;
            }
            SegmentWidths::BurstBin(b) => w.nb = b.nb as u32,
            SegmentWidths::BurstQ(BurstQWidths { fb, nbar, .. }) => {
                w.nb = fb.nb as u32;
                w.nbar = nbar as u32;
            }
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecFile {
    pub params: CodeParams,
    pub widths: ModulusWidths,
    pub symbols: Vec<u32>,
}

pub fn symbol_bits(q: u32) -> usize {
    (u32::BITS - (q - 1).leading_zeros()).max(1) as usize
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8], FormatError> {
        if self.buf.len() < k {
            return Err(FormatError::Field("truncated header"));
        }
        let (head, rest) = self.buf.split_at(k);
        self.buf = rest;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

fn provider_code(p: SketchProviderId) -> u8 {
    match p {
        SketchProviderId::Verbatim => 0,
        SketchProviderId::Colored => 1,
    }
}

fn narrow<T: TryFrom<usize>>(v: usize, what: &'static str) -> Result<T, FormatError> {
    T::try_from(v).map_err(|_| FormatError::Field(what))
}

impl CodecFile {
    pub fn new(vp: &ValidParams, symbols: Vec<u32>) -> Self {
        CodecFile { params: vp.params, widths: ModulusWidths::of(vp), symbols }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, FormatError> {
        let p = &self.params;
        let mut out = Vec::new();
        out.extend_from_slice(QDEL_MAGIC);
        out.push(VERSION);
        out.push(p.mode.code());
        out.extend_from_slice(&narrow::<u32>(p.n, "n")?.to_le_bytes());
        out.extend_from_slice(&p.q.to_le_bytes());
        out.extend_from_slice(&narrow::<u16>(p.t, "t")?.to_le_bytes());
        out.extend_from_slice(&narrow::<u16>(p.d as usize, "d")?.to_le_bytes());
        out.extend_from_slice(&narrow::<u32>(p.rho, "rho")?.to_le_bytes());
        out.extend_from_slice(&narrow::<u32>(p.delta, "delta")?.to_le_bytes());
        out.extend_from_slice(&narrow::<u32>(p.delta_prime, "delta'")?.to_le_bytes());
        out.extend_from_slice(&narrow::<u16>(p.w_max, "w_max")?.to_le_bytes());
        out.push(provider_code(p.provider));
        out.extend_from_slice(&narrow::<u16>(p.lambda, "lambda")?.to_le_bytes());
        for w in [self.widths.n1, self.widths.n2, self.widths.nb, self.widths.nbar] {
            out.extend_from_slice(&w.to_le_bytes());
        }
        let bits = symbol_bits(p.code_q());
        let total = bits * self.symbols.len();
        let pad = (8 - total % 8) % 8;
        out.push(pad as u8);
        let mut acc = 0u16;
        let mut filled = 0;
        for &s in &self.symbols {
            if s >= p.code_q() {
                return Err(FormatError::Payload);
            }
            for i in (0..bits).rev() {
                acc = acc << 1 | (s >> i & 1) as u16;
                filled += 1;
                if filled == 8 {
                    out.push(acc as u8);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (8 - filled)) as u8);
        }
        Ok(out)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, FormatError> {
        let mut r = Reader { buf };
        if r.take(4)? != QDEL_MAGIC {
            return Err(FormatError::Magic);
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(FormatError::Version(version));
        }
        let mode = Mode::from_code(r.u8()?).ok_or(FormatError::Field("mode"))?;
        let n = r.u32()? as usize;
        let q = r.u32()?;
        let t = r.u16()? as usize;
        let d = r.u16()? as u32;
        let rho = r.u32()? as usize;
        let delta = r.u32()? as usize;
        let delta_prime = r.u32()? as usize;
        let w_max = r.u16()? as usize;
        let provider = match r.u8()? {
            0 => SketchProviderId::Verbatim,
            1 => SketchProviderId::Colored,
            _ => return Err(FormatError::Field("provider")),
        };
        let lambda = r.u16()? as usize;
        let widths = ModulusWidths { n1: r.u32()?, n2: r.u32()?, nb: r.u32()?, nbar: r.u32()? };
        let params = CodeParams { mode, n, q, t, d, rho, delta, delta_prime, w_max, provider, lambda };
        let vp = ValidParams::new(&params).map_err(|e| FormatError::Params(e.to_string()))?;
        if ModulusWidths::of(&vp) != widths {
            return Err(FormatError::Widths);
        }
        let pad = r.u8()? as usize;
        let payload = r.buf;
        let bits = symbol_bits(params.code_q());
        let total = (payload.len() * 8).checked_sub(pad).ok_or(FormatError::Payload)?;
        if pad > 7 || total % bits != 0 {
            return Err(FormatError::Payload);
        }
        let bit = |i: usize| (payload[i / 8] >> (7 - i % 8) & 1) as u32;
        if (total..payload.len() * 8).any(|i| bit(i) != 0) {
            return Err(FormatError::Payload);
        }
        let mut symbols = Vec::with_capacity(total / bits);
        for k in 0..total / bits {
            let s = (0..bits).fold(0, |acc, i| acc << 1 | bit(k * bits + i));
            if s >= params.code_q() {
                return Err(FormatError::Payload);
            }
            symbols.push(s);
        }
        Ok(CodecFile { params, widths, symbols })
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<(), FormatError> {
        w.write_all(&self.to_bytes()?)?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self, FormatError> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }
}

/// A colored table as stored on disk: w, color count and 2^w colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFile {
    pub w: usize,
    pub count: u32,
    pub colors: Vec<u32>,
}

impl TableFile {
    /// Bytes per stored color.
    fn color_bytes(count: u32) -> usize {
        match count {
            0..=0x100 => 1,
            0x101..=0x1_0000 => 2,
            _ => 4,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.colors.len() * 2);
        out.extend_from_slice(CLRT_MAGIC);
        out.push(VERSION);
        out.push(self.w as u8);
        out.extend_from_slice(&self.count.to_le_bytes());
        let k = Self::color_bytes(self.count);
        for &c in &self.colors {
            out.extend_from_slice(&c.to_le_bytes()[..k]);
        }
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, FormatError> {
        let mut r = Reader { buf };
        if r.take(4)? != CLRT_MAGIC {
            return Err(FormatError::Magic);
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(FormatError::Version(version));
        }
        let w = r.u8()? as usize;
        if w > 31 {
            return Err(FormatError::Field("w"));
        }
        let count = r.u32()?;
        let k = Self::color_bytes(count);
        if r.buf.len() != k << w {
            return Err(FormatError::Payload);
        }
        let colors = r
            .buf
            .chunks(k)
            .map(|ch| {
                let mut b = [0u8; 4];
                b[..k].copy_from_slice(ch);
                u32::from_le_bytes(b)
            })
            .collect();
        Ok(TableFile { w, count, colors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_widths() {
        assert_eq!(symbol_bits(2), 1);
        assert_eq!(symbol_bits(4), 2);
        assert_eq!(symbol_bits(6), 3);
        assert_eq!(symbol_bits(8), 3);
    }

    #[test]
    fn header_is_checked() {
        let vp = ValidParams::new(&CodeParams::new(Mode::BurstBin, 16, 2, 2)).unwrap();
        let f = CodecFile::new(&vp, vec![1, 0, 1]);
        let bytes = f.to_bytes().unwrap();
        assert_eq!(bytes[bytes.len() - 2], 5);
        assert_eq!(bytes[bytes.len() - 1], 0b1010_0000);
        assert_eq!(CodecFile::from_bytes(&bytes).unwrap(), f);
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(CodecFile::from_bytes(&bad), Err(FormatError::Magic)));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(CodecFile::from_bytes(&bad), Err(FormatError::Version(2))));
        let mut bad = bytes.clone();
        *bad.last_mut().unwrap() |= 1;
        assert!(matches!(CodecFile::from_bytes(&bad), Err(FormatError::Payload)));
    }
}
