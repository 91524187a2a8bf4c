//! Code parameters, their validity conditions and the derived segment
//! layout of a codeword.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::burst_bin::{burst_bin_widths, BurstBinWidths};
use crate::burst_q::{burst_q_widths, BurstQWidths};
use crate::coloring::W_MAX_LIMIT;
use crate::encode::{qary_len, BinaryEncoder, BlockEncoder};
use crate::intmath::floor_log2;
use crate::locator::LOCATOR_GUARANTEE;
use crate::sketch::SketchProviderId;
use crate::strings::{regular_window, row_count};
use crate::twodel::{twodel_widths, TwoDelWidths};
use crate::window::windows_clamped;
use crate::{Error, Result};

pub const DEFAULT_D: u32 = 7;
pub const DEFAULT_W_MAX: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    TwoDel,
    BurstBin,
    BurstQ,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::TwoDel => "twodel",
            Mode::BurstBin => "burst-bin",
            Mode::BurstQ => "burst-q",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "twodel" => Some(Mode::TwoDel),
            "burst-bin" => Some(Mode::BurstBin),
            "burst-q" => Some(Mode::BurstQ),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Mode> {
        [Mode::TwoDel, Mode::BurstBin, Mode::BurstQ].get(c as usize).copied()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// `n` is the message length in symbols of Z_q (bits for burst-bin).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub mode: Mode,
    pub n: usize,
    pub q: u32,
    pub t: usize,
    pub d: u32,
    pub rho: usize,
    pub delta: usize,
    pub delta_prime: usize,
    pub w_max: usize,
    pub provider: SketchProviderId,
    pub lambda: usize,
}

pub fn default_rho(d: u32, n: usize) -> usize {
    (3 * regular_window(d, n)).max(1)
}

pub fn default_delta(t: usize, n: usize) -> usize {
    (t << (t + 1)) * floor_log2(n).max(1)
}

impl CodeParams {
    /// Defaults: d = 7, rho = 3 d log k for the longer of the two segment
    /// inputs, delta = t 2^(t+1) log n, delta' = lambda (delta + t),
    /// verbatim provider.
    pub fn new(mode: Mode, n: usize, q: u32, t: usize) -> Self {
        let d = DEFAULT_D;
        let delta = default_delta(t, n);
        let lambda = LOCATOR_GUARANTEE;
        CodeParams {
            mode,
            n,
            q,
            t,
            d,
            rho: default_rho(d, n),
            delta,
            delta_prime: lambda * (delta + t),
            w_max: DEFAULT_W_MAX,
            provider: SketchProviderId::Verbatim,
            lambda,
        }
        .with_default_rho()
    }

    /// rho = 3 d log k where k is the longer segment input. Segment 2 holds
    /// the sketch of segment 1 and can be longer than the message.
    pub fn with_default_rho(mut self) -> Self {
        self.rho = default_rho(self.d, self.n);
        if self.mode != Mode::TwoDel {
            return self;
        }
        for _ in 0..8 {
            let Ok(seg1) = segment(&self, self.n) else { break };
            let k2 = qary_len(seg1.sketch_bits(), self.code_q());
            let next = default_rho(self.d, self.n.max(k2));
            if next <= self.rho {
                break;
            }
            self.rho = next;
        }
        self
    }

    /// Override delta and move delta' along with it.
    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta = delta;
        self.delta_prime = self.lambda * (delta + self.t);
        self
    }

    pub fn with_rho(mut self, rho: usize) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_provider(mut self, provider: SketchProviderId) -> Self {
        self.provider = provider;
        self
    }

    /// Alphabet of the codeword symbols.
    pub fn code_q(&self) -> u32 {
        match self.mode {
            Mode::BurstBin => 2,
            _ => self.q,
        }
    }

    /// Largest number of deletions the code handles.
    pub fn max_deletions(&self) -> usize {
        match self.mode {
            Mode::TwoDel => 2,
            _ => self.t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentWidths {
    TwoDel(TwoDelWidths),
    BurstBin(BurstBinWidths),
    BurstQ(BurstQWidths),
}

impl SegmentWidths {
    pub fn total(&self) -> usize {
        match self {
            SegmentWidths::TwoDel(w) => w.total(),
            SegmentWidths::BurstBin(w) => w.total(),
            SegmentWidths::BurstQ(w) => w.total(),
        }
    }
}

/// A sketched segment: `k` message symbols encoded to `m` symbols whose
/// sketch takes `widths.total()` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub k: usize,
    pub m: usize,
    pub encoder: BlockEncoder,
    pub widths: SegmentWidths,
}

impl Segment {
    pub fn sketch_bits(&self) -> usize {
        self.widths.total()
    }
}

/// Codeword = (segment 1, segment 2, repeated tail).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub seg1: Segment,
    pub seg2: Segment,
    pub tail_symbols: usize,
    pub copies: usize,
    pub m3: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidParams {
    pub params: CodeParams,
    pub layout: Layout,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn segment(p: &CodeParams, k: usize) -> Result<Segment> {
    let encoder = match p.mode {
        Mode::TwoDel => BlockEncoder::regular(k, p.d)?,
        _ => BlockEncoder::dense(k, p.t, p.delta)?,
    };
    let m = encoder.output_len();
    let widths = match p.mode {
        Mode::TwoDel => SegmentWidths::TwoDel(twodel_widths(m, p.q, p.rho, encoder.run_bound(), p.provider)?),
        Mode::BurstBin => SegmentWidths::BurstBin(burst_bin_widths(m, p.t, p.delta_prime)),
        Mode::BurstQ => SegmentWidths::BurstQ(burst_q_widths(m, p.q, p.t, p.delta, p.delta_prime)),
    };
    Ok(Segment { k, m, encoder, widths })
}

fn check_segment(p: &CodeParams, seg: &Segment, which: &str, errs: &mut Vec<Error>) {
    if p.mode != Mode::TwoDel {
        return;
    }
    let rb = seg.encoder.run_bound();
    if p.rho < 3 * rb && p.rho < seg.m {
        errs.push(invalid(format!("{which}: rho {} below 3x run bound {rb}", p.rho)));
    }
    if p.provider == SketchProviderId::Colored {
        let mut longest = seg.m;
        if row_count(p.q) > 1 {
            longest = longest.max(windows_clamped(seg.m, p.rho).max_len());
        }
        if longest > p.w_max {
            errs.push(invalid(format!("{which}: colored provider needs length {longest} > w_max {}", p.w_max)));
        }
    }
}

/// Check every side condition and derive the layout.
pub fn param_validate(p: &CodeParams) -> core::result::Result<ValidParams, Vec<Error>> {
    let mut errs = Vec::new();
    if p.q < 2 || p.q % 2 == 1 {
        errs.push(Error::OddAlphabet(p.q));
    }
    if p.mode == Mode::BurstBin && p.q != 2 {
        errs.push(invalid("burst-bin requires q=2"));
    }
    if p.n == 0 {
        errs.push(invalid("empty message"));
    }
    if p.d == 0 {
        errs.push(invalid("d must be positive"));
    }
    match p.mode {
        Mode::TwoDel => {
            if p.t != 2 {
                errs.push(invalid("twodel requires t=2"));
            }
            if p.rho == 0 {
                errs.push(invalid("rho must be positive"));
            }
            if p.provider == SketchProviderId::Colored && p.w_max > W_MAX_LIMIT {
                errs.push(invalid(format!("w_max above {W_MAX_LIMIT}")));
            }
        }
        Mode::BurstBin | Mode::BurstQ => {
            if p.t == 0 {
                errs.push(invalid("t must be positive"));
            }
            if p.delta < 2 * p.t {
                errs.push(invalid("delta shorter than the pattern 0^t1^t"));
            }
            if p.lambda < LOCATOR_GUARANTEE {
                errs.push(invalid("lambda below the locator guarantee"));
            }
            if p.delta_prime < p.lambda * (p.delta + p.t) {
                errs.push(invalid("window too small for locator"));
            }
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let code_q = p.code_q();
    let seg1 = match segment(p, p.n) {
        Ok(s) => s,
        Err(e) => return Err(alloc::vec![e]),
    };
    let seg2 = match segment(p, qary_len(seg1.sketch_bits(), code_q)) {
        Ok(s) => s,
        Err(e) => return Err(alloc::vec![e]),
    };
    check_segment(p, &seg1, "segment 1", &mut errs);
    check_segment(p, &seg2, "segment 2", &mut errs);
    if !errs.is_empty() {
        return Err(errs);
    }
    let tail_symbols = qary_len(seg2.sketch_bits(), code_q);
    let copies = p.max_deletions() + 1;
    let m3 = copies * tail_symbols;
    let total = seg1.m + seg2.m + m3;
    Ok(ValidParams { params: *p, layout: Layout { seg1, seg2, tail_symbols, copies, m3, total } })
}

impl ValidParams {
    pub fn new(p: &CodeParams) -> Result<Self> {
        param_validate(p).map_err(|mut e| e.remove(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_alphabet_rejected() {
        let p = CodeParams::new(Mode::TwoDel, 64, 3, 2);
        let errs = param_validate(&p).unwrap_err();
        assert!(errs.contains(&Error::OddAlphabet(3)));
    }

    #[test]
    fn defaults_valid() {
        for mode in [Mode::TwoDel, Mode::BurstQ] {
            let v = param_validate(&CodeParams::new(mode, 64, 4, 2)).unwrap();
            let l = &v.layout;
            assert_eq!(l.total, l.seg1.m + l.seg2.m + l.m3);
            assert_eq!(l.m3, 3 * l.tail_symbols);
            assert_eq!(l.seg2.k, qary_len(l.seg1.sketch_bits(), 4));
        }
        assert!(param_validate(&CodeParams::new(Mode::BurstBin, 64, 2, 2)).is_ok());
    }

    #[test]
    fn defaults_valid_across_sizes() {
        for n in 1..300 {
            for q in [2, 4, 6, 8, 16] {
                let p = CodeParams::new(Mode::TwoDel, n, q, 2);
                if let Err(e) = param_validate(&p) { panic!("{p:?}: {e:?}") }
                for t in 1..=3 {
                    assert!(param_validate(&CodeParams::new(Mode::BurstQ, n, q, t)).is_ok(), "n={n} q={q} t={t}");
                }
            }
        }
    }

    #[test]
    fn defaults_formula() {
        let p = CodeParams::new(Mode::BurstQ, 1024, 4, 2);
        assert_eq!(p.rho, 3 * 7 * 10);
        assert_eq!(p.delta, 2 * 8 * 10);
        assert_eq!(p.delta_prime, LOCATOR_GUARANTEE * 162);
    }

    #[test]
    fn rho_below_run_bound() {
        let p = CodeParams::new(Mode::TwoDel, 256, 4, 2).with_rho(40);
        let errs = param_validate(&p).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, Error::InvalidParams(s) if s.contains("run bound"))));
    }

    #[test]
    fn locator_window_rule() {
        let mut p = CodeParams::new(Mode::BurstBin, 64, 2, 2);
        p.delta_prime = p.delta + p.t;
        if LOCATOR_GUARANTEE > 1 {
            let errs = param_validate(&p).unwrap_err();
            assert!(errs.contains(&Error::InvalidParams("window too small for locator".into())));
        }
        assert!(param_validate(&CodeParams::new(Mode::BurstBin, 64, 4, 2)).is_err());
    }

    #[test]
    fn colored_length_guard() {
        let p = CodeParams::new(Mode::TwoDel, 64, 4, 2).with_provider(SketchProviderId::Colored);
        assert!(param_validate(&p).is_err());
    }
}
