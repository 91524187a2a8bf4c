//! The three-segment systematic codes.
//!
//! A codeword is (v, v', v''): v is the encoded message, v' the encoded
//! q-ary form of the sketch of v, and v'' the (t+1)-fold repetition of the
//! q-ary form of the sketch of v'. Decoding runs from the tail backwards;
//! segment [A+1, B] of the codeword is read from y[A+1, B-t'], which always
//! lies in the deletion ball of that segment.

use alloc::boxed::Box;
use core::ops::Range;
use alloc::vec::Vec;

use crate::burst_bin::{BurstBinSegment, BurstBinSketch};
use crate::burst_q::{BurstQSegment, BurstQSketch};
use crate::encode::{qary_repr, qary_unrepr, rep_decode, rep_encode, BlockEncoder, LiftedEncoder};
use crate::params::{Mode, Segment, ValidParams};
use crate::sketch::{PackedSketch, SketchProviderId, TwoDelProvider};
use crate::strings::row_count;
use crate::twodel::{TwoDelSegment, TwoDelSketch};
use crate::window::windows_clamped;
use crate::{Error, Result};

/// A sketch function on one segment length, with its recovery.
pub trait SegmentCode {
    fn len(&self) -> usize;
    /// Most deletions `recover` accepts.
    fn max_deletions(&self) -> usize;
    fn sketch_bits(&self, x: &[u32]) -> Result<Vec<u8>>;
    fn recover(&self, y: &[u32], bits: &[u8]) -> Result<Vec<u32>>;
}

impl SegmentCode for TwoDelSegment {
    fn len(&self) -> usize {
        self.m
    }

    fn max_deletions(&self) -> usize {
        2
    }

    fn sketch_bits(&self, x: &[u32]) -> Result<Vec<u8>> {
        Ok(self.sketch(x)?.to_packed(self.widths()).to_bits())
    }

    fn recover(&self, y: &[u32], bits: &[u8]) -> Result<Vec<u32>> {
        let sk = TwoDelSketch::from_packed(&PackedSketch::from_bits(bits), self.widths())?;
        match self.m - y.len() {
            2 => TwoDelSegment::recover(self, y, &sk),
            // one deletion: dropping the last symbol makes it two
            1 => TwoDelSegment::recover(self, &y[..y.len() - 1], &sk),
            _ => Err(Error::BadLength { expected: self.m - 2, got: y.len() }),
        }
    }
}

fn to_bits(x: &[u32]) -> Result<Vec<u8>> {
    x.iter()
        .map(|&s| if s < 2 { Ok(s as u8) } else { Err(Error::BadSymbol { symbol: s, q: 2 }) })
        .collect()
}

impl SegmentCode for BurstBinSegment {
    fn len(&self) -> usize {
        self.m
    }

    fn max_deletions(&self) -> usize {
        self.t
    }

    fn sketch_bits(&self, x: &[u32]) -> Result<Vec<u8>> {
        Ok(self.sketch(&to_bits(x)?)?.to_packed(self.widths()).to_bits())
    }

    fn recover(&self, y: &[u32], bits: &[u8]) -> Result<Vec<u32>> {
        let sk = BurstBinSketch::from_packed(&PackedSketch::from_bits(bits), self.widths(), self.m, self.t)?;
        let c = BurstBinSegment::recover(self, &to_bits(y)?, &sk)?;
        Ok(c.into_iter().map(u32::from).collect())
    }
}

impl SegmentCode for BurstQSegment {
    fn len(&self) -> usize {
        self.m
    }

    fn max_deletions(&self) -> usize {
        self.t
    }

    fn sketch_bits(&self, x: &[u32]) -> Result<Vec<u8>> {
        Ok(self.sketch(x)?.to_packed(self.widths()).to_bits())
    }

    fn recover(&self, y: &[u32], bits: &[u8]) -> Result<Vec<u32>> {
        let sk = BurstQSketch::from_packed(&PackedSketch::from_bits(bits), self.widths(), self.m, self.t)?;
        BurstQSegment::recover(self, y, &sk)
    }
}

/// Encoder and decoder of a full codeword.
pub trait Codec: Send + Sync {
    fn params(&self) -> &ValidParams;
    fn encode(&self, u: &[u32]) -> Result<Vec<u32>>;
    fn decode(&self, y: &[u32]) -> Result<Vec<u32>>;
}

#[derive(Debug, Clone)]
pub struct SystematicCode<S> {
    vp: ValidParams,
    q: u32,
    seg1: S,
    seg2: S,
    enc1: LiftedEncoder<BlockEncoder>,
    enc2: LiftedEncoder<BlockEncoder>,
}

/// Slices of y read as the three segments.
pub struct Parts<'a> {
    pub head: &'a [u32],
    pub mid: &'a [u32],
    pub tail: &'a [u32],
}

impl<S: SegmentCode> SystematicCode<S> {
    pub fn new(vp: ValidParams, seg1: S, seg2: S) -> Result<Self> {
        let q = vp.params.code_q();
        let l = &vp.layout;
        if seg1.len() != l.seg1.m || seg2.len() != l.seg2.m {
            return Err(Error::InvalidParams("segment lengths disagree with the layout".into()));
        }
        let enc1 = LiftedEncoder::new(l.seg1.encoder.clone(), q)?;
        let enc2 = LiftedEncoder::new(l.seg2.encoder.clone(), q)?;
        Ok(SystematicCode { vp, q, seg1, seg2, enc1, enc2 })
    }

    pub fn seg1(&self) -> &S {
        &self.seg1
    }

    pub fn seg2(&self) -> &S {
        &self.seg2
    }

    fn copies(&self) -> usize {
        self.vp.layout.copies
    }

    /// Encoded message v.
    pub fn encode_head(&self, u: &[u32]) -> Result<Vec<u32>> {
        self.enc1.apply(u)
    }

    /// v' from v.
    pub fn encode_mid(&self, v: &[u32]) -> Result<Vec<u32>> {
        self.enc2.apply(&qary_repr(&self.seg1.sketch_bits(v)?, self.q))
    }

    /// v'' from v'.
    pub fn encode_tail(&self, v2: &[u32]) -> Result<Vec<u32>> {
        Ok(rep_encode(&qary_repr(&self.seg2.sketch_bits(v2)?, self.q), self.copies() - 1))
    }

    pub fn encode_parts(&self, u: &[u32]) -> Result<[Vec<u32>; 3]> {
        let v = self.encode_head(u)?;
        let v2 = self.encode_mid(&v)?;
        let v3 = self.encode_tail(&v2)?;
        Ok([v, v2, v3])
    }

    /// 0-based ranges of a received word of length `len` read as the
    /// three segments.
    pub fn split_ranges(&self, len: usize) -> Result<[Range<usize>; 3]> {
        let l = &self.vp.layout;
        let max = self.vp.params.max_deletions();
        if len > l.total || l.total - len > max {
            return Err(Error::BadLength { expected: l.total, got: len });
        }
        let tp = l.total - len;
        let (a, b) = (l.seg1.m, l.seg1.m + l.seg2.m);
        Ok([0..a - tp, a..b - tp, b..len])
    }

    /// Split y into the three segment reads.
    pub fn split<'a>(&self, y: &'a [u32]) -> Result<Parts<'a>> {
        let [h, m, t] = self.split_ranges(y.len())?;
        if let Some(&s) = y.iter().find(|&&s| s >= self.q) {
            return Err(Error::BadSymbol { symbol: s, q: self.q });
        }
        Ok(Parts { head: &y[h], mid: &y[m], tail: &y[t] })
    }

    /// Sketch bits of v' from the tail read.
    pub fn decode_tail(&self, tail: &[u32]) -> Result<Vec<u8>> {
        let l = &self.vp.layout;
        let a = rep_decode(tail, l.tail_symbols, self.copies() - 1)?;
        qary_unrepr(&a, l.seg2.sketch_bits(), self.q)
    }

    fn recover_segment(seg: &S, layout: &Segment, y: &[u32], bits: &[u8]) -> Result<Vec<u32>> {
        if y.len() == layout.m {
            if seg.sketch_bits(y)? != bits {
                return Err(Error::SketchMismatch);
            }
            return Ok(y.to_vec());
        }
        seg.recover(y, bits)
    }

    /// Sketch bits of v from the middle read and the sketch of v'.
    pub fn decode_mid(&self, mid: &[u32], bits2: &[u8]) -> Result<Vec<u8>> {
        let v2 = Self::recover_segment(&self.seg2, &self.vp.layout.seg2, mid, bits2)?;
        let a = self.enc2.invert(&v2)?;
        qary_unrepr(&a, self.vp.layout.seg1.sketch_bits(), self.q)
    }

    /// The message from the head read and the sketch of v.
    pub fn decode_head(&self, head: &[u32], bits1: &[u8]) -> Result<Vec<u32>> {
        let v = Self::recover_segment(&self.seg1, &self.vp.layout.seg1, head, bits1)?;
        self.enc1.invert(&v)
    }
}

fn stage(e: Error, which: &'static str) -> Error {
    match e {
        Error::BadLength { .. } | Error::BadSymbol { .. } => e,
        _ => Error::DecodeFailure(which),
    }
}

impl<S: SegmentCode + Send + Sync> Codec for SystematicCode<S> {
    fn params(&self) -> &ValidParams {
        &self.vp
    }

    fn encode(&self, u: &[u32]) -> Result<Vec<u32>> {
        let [mut v, v2, v3] = self.encode_parts(u)?;
        v.extend(v2);
        v.extend(v3);
        Ok(v)
    }

    fn decode(&self, y: &[u32]) -> Result<Vec<u32>> {
        let p = self.split(y)?;
        let bits2 = self.decode_tail(p.tail).map_err(|e| stage(e, "tail"))?;
        let bits1 = self.decode_mid(p.mid, &bits2).map_err(|e| stage(e, "segment 2"))?;
        self.decode_head(p.head, &bits1).map_err(|e| stage(e, "segment 1"))
    }
}

pub type TwoDelCode = SystematicCode<TwoDelSegment>;
pub type BurstBinCode = SystematicCode<BurstBinSegment>;
pub type BurstQCode = SystematicCode<BurstQSegment>;

/// String lengths the colored provider needs tables for.
pub fn provider_lengths(vp: &ValidParams) -> Vec<usize> {
    let p = &vp.params;
    let mut out = Vec::new();
    if p.mode != Mode::TwoDel || p.provider != SketchProviderId::Colored {
        return out;
    }
    for seg in [&vp.layout.seg1, &vp.layout.seg2] {
        out.push(seg.m);
        if row_count(p.q) > 1 {
            out.extend(windows_clamped(seg.m, p.rho).windows.iter().map(|w| w.len()));
        }
    }
    out.retain(|&w| w >= 3);
    out.sort_unstable();
    out.dedup();
    out
}

pub fn twodel_code(vp: &ValidParams, provider: TwoDelProvider) -> Result<TwoDelCode> {
    let p = &vp.params;
    let seg = |s: &Segment| TwoDelSegment::new(s.m, p.q, p.rho, s.encoder.run_bound(), provider.clone());
    SystematicCode::new(vp.clone(), seg(&vp.layout.seg1)?, seg(&vp.layout.seg2)?)
}

pub fn burst_bin_code(vp: &ValidParams) -> Result<BurstBinCode> {
    let p = &vp.params;
    let seg = |s: &Segment| BurstBinSegment::new(s.m, p.t, p.delta, p.delta_prime);
    SystematicCode::new(vp.clone(), seg(&vp.layout.seg1)?, seg(&vp.layout.seg2)?)
}

pub fn burst_q_code(vp: &ValidParams) -> Result<BurstQCode> {
    let p = &vp.params;
    let seg = |s: &Segment| BurstQSegment::new(s.m, p.q, p.t, p.delta, p.delta_prime);
    SystematicCode::new(vp.clone(), seg(&vp.layout.seg1)?, seg(&vp.layout.seg2)?)
}

/// Build the code for validated parameters. A colored provider must be
/// supplied for colored two-deletion codes; otherwise pass `None`.
pub fn build_codec(vp: &ValidParams, provider: Option<TwoDelProvider>) -> Result<Box<dyn Codec>> {
    Ok(match vp.params.mode {
        Mode::TwoDel => {
            let provider = match (vp.params.provider, provider) {
                (SketchProviderId::Verbatim, _) => TwoDelProvider::verbatim(),
                (SketchProviderId::Colored, Some(p)) => p,
                (SketchProviderId::Colored, None) => {
                    TwoDelProvider::colored_for(vp.params.w_max, &provider_lengths(vp))?
                }
            };
            Box::new(twodel_code(vp, provider)?)
        }
        Mode::BurstBin => Box::new(burst_bin_code(vp)?),
        Mode::BurstQ => Box::new(burst_q_code(vp)?),
    })
}

/// Binary entry points of the burst-bin code.
impl BurstBinCode {
    pub fn encode_bits(&self, a: &[u8]) -> Result<Vec<u8>> {
        let u: Vec<u32> = a.iter().map(|&b| b as u32).collect();
        Ok(Codec::encode(self, &u)?.into_iter().map(|s| s as u8).collect())
    }

    pub fn decode_bits(&self, d: &[u8]) -> Result<Vec<u8>> {
        let y: Vec<u32> = d.iter().map(|&b| b as u32).collect();
        Ok(Codec::decode(self, &y)?.into_iter().map(|s| s as u8).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{param_validate, CodeParams};
    use crate::strings::{check_property, delete_interval, delete_positions, first_row, Interval, Property};

    fn all_qary(n: usize, q: u32) -> impl Iterator<Item = Vec<u32>> {
        (0..(q as u64).pow(n as u32)).map(move |mut v| {
            (0..n)
                .map(|_| {
                    let s = (v % q as u64) as u32;
                    v /= q as u64;
                    s
                })
                .collect()
        })
    }

    #[test]
    fn twodel_roundtrip_small() {
        let vp = param_validate(&CodeParams::new(Mode::TwoDel, 4, 4, 2)).unwrap();
        let code = build_codec(&vp, None).unwrap();
        let n = vp.layout.total;
        for u in all_qary(4, 4).step_by(7) {
            let x = code.encode(&u).unwrap();
            assert_eq!(x.len(), n);
            assert_eq!(code.decode(&x).unwrap(), u);
            for j1 in 1..=n {
                assert_eq!(code.decode(&delete_positions(&x, &[j1])).unwrap(), u);
                for j2 in j1 + 1..=n {
                    assert_eq!(code.decode(&delete_positions(&x, &[j1, j2])).unwrap(), u, "u={u:?} ({j1},{j2})");
                }
            }
        }
    }

    fn burst_roundtrip(p: CodeParams, step: usize) {
        let vp = param_validate(&p).unwrap();
        let code = build_codec(&vp, None).unwrap();
        let n = vp.layout.total;
        let q = p.code_q();
        for u in all_qary(p.n, q).step_by(step) {
            let x = code.encode(&u).unwrap();
            for tp in 0..=p.t {
                for lo in 1..=n + 1 - tp {
                    let y = delete_interval(&x, Interval::at(lo, tp));
                    assert_eq!(code.decode(&y).unwrap(), u, "u={u:?} lo={lo} tp={tp}");
                }
            }
        }
    }

    #[test]
    fn burst_bin_roundtrip_small() {
        burst_roundtrip(CodeParams::new(Mode::BurstBin, 8, 2, 2).with_delta(8), 5);
        burst_roundtrip(CodeParams::new(Mode::BurstBin, 9, 2, 3).with_delta(12), 11);
    }

    #[test]
    fn burst_q_roundtrip_small() {
        burst_roundtrip(CodeParams::new(Mode::BurstQ, 5, 4, 2).with_delta(8), 13);
    }

    #[test]
    fn segments_carry_predicates() {
        let p = CodeParams::new(Mode::BurstQ, 30, 4, 2).with_delta(10);
        let vp = param_validate(&p).unwrap();
        let code = burst_q_code(&vp).unwrap();
        let pat = crate::locator::pattern(2);
        let u = alloc::vec![0u32; 30];
        let [v, v2, _] = code.encode_parts(&u).unwrap();
        for s in [&v, &v2] {
            assert!(check_property(&first_row(s), &Property::Dense { p: &pat, delta: 10 }));
        }
    }

    #[test]
    fn wrong_lengths_rejected() {
        let vp = param_validate(&CodeParams::new(Mode::BurstBin, 8, 2, 2).with_delta(8)).unwrap();
        let code = build_codec(&vp, None).unwrap();
        let x = code.encode(&[0; 8]).unwrap();
        assert!(matches!(code.decode(&x[..x.len() - 3]), Err(Error::BadLength { .. })));
        let mut long = x.clone();
        long.push(0);
        assert!(code.decode(&long).is_err());
    }

    #[test]
    fn twodel_layout_audit() {
        let vp = param_validate(&CodeParams::new(Mode::TwoDel, 64, 4, 2)).unwrap();
        let code = twodel_code(&vp, TwoDelProvider::verbatim()).unwrap();
        let l = &vp.layout;
        let u: Vec<u32> = (0..64).map(|i| (i * 7 % 4) as u32).collect();
        let [v, v2, v3] = code.encode_parts(&u).unwrap();
        assert_eq!((v.len(), v2.len(), v3.len()), (l.seg1.m, l.seg2.m, l.m3));
        for (s, seg) in [(&v, &l.seg1), (&v2, &l.seg2)] {
            let c = first_row(s);
            assert!(check_property(&c, &Property::Regular { d: 7 }));
            let longest = crate::strings::runs_decompose(&c).unwrap().runs.iter().map(|(iv, _)| iv.len()).max();
            assert!(longest.unwrap() <= seg.encoder.run_bound());
        }
        let x = code.encode(&u).unwrap();
        let n = x.len();
        // both deletions in the tail, and across each boundary
        for del in [[n - 1, n], [n - l.m3 + 1, n - 2], [l.seg1.m, l.seg1.m + 1], [l.seg1.m + l.seg2.m, n - l.m3 + 1]] {
            assert_eq!(Codec::decode(&code, &delete_positions(&x, &del)).unwrap(), u);
        }
    }

    #[test]
    fn burst_across_boundaries() {
        for mode in [Mode::BurstBin, Mode::BurstQ] {
            let q = if mode == Mode::BurstBin { 2 } else { 4 };
            let vp = param_validate(&CodeParams::new(mode, 40, q, 3).with_delta(12)).unwrap();
            let code = build_codec(&vp, None).unwrap();
            let l = &vp.layout;
            let u: Vec<u32> = (0..40).map(|i| (i * i % q as usize) as u32).collect();
            let x = code.encode(&u).unwrap();
            for b in [l.seg1.m, l.seg1.m + l.seg2.m] {
                for lo in b - 1..=b + 1 {
                    let y = delete_interval(&x, Interval::at(lo, 3));
                    assert_eq!(code.decode(&y).unwrap(), u);
                }
            }
        }
    }

    #[test]
    fn all_zero_message() {
        for p in [
            CodeParams::new(Mode::TwoDel, 64, 4, 2),
            CodeParams::new(Mode::BurstBin, 64, 2, 2),
            CodeParams::new(Mode::BurstQ, 64, 4, 2),
        ] {
            let vp = param_validate(&p).unwrap();
            let code = build_codec(&vp, None).unwrap();
            let x = code.encode(&[0; 64]).unwrap();
            assert_eq!(x.len(), vp.layout.total);
            assert_eq!(code.decode(&x).unwrap(), [0; 64]);
        }
    }
}
