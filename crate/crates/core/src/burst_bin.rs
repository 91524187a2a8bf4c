//! Binary burst sketch: the locator sketch plus parity-split sums of the
//! burst sketches of the windows L_i, and recovery from a burst of length
//! at most t.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::locator::{locator_width, mu_locate, mu_sketch, pattern, LocatorSketch};
use crate::sketch::{burst_decode, burst_sketch, burst_width, PackedSketch};
use crate::window::{covering_window, windows_clamped, WindowFamily};
use crate::{Error, Result};

/// Bit widths of (mu, g0, g1); `nb` is log2 of the window-sum modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BurstBinWidths {
    pub loc: usize,
    pub nb: usize,
    pub g0: usize,
    pub g1: usize,
}

impl BurstBinWidths {
    pub fn total(&self) -> usize {
        self.loc + self.g0 + self.g1
    }
}

pub fn burst_bin_widths(m: usize, t: usize, delta_prime: usize) -> BurstBinWidths {
    let fam = windows_clamped(m, delta_prime);
    let nb = fam.windows.iter().map(|w| burst_width(w.len(), t)).max().unwrap_or(0);
    let by_parity = |p: usize| if fam.has_parity(p) { nb } else { 0 };
    BurstBinWidths { loc: locator_width(m, t), nb, g0: by_parity(0), g1: by_parity(1) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurstBinSketch {
    pub mu: LocatorSketch,
    pub g0: BigUint,
    pub g1: BigUint,
}

impl BurstBinSketch {
    pub fn to_packed(&self, w: &BurstBinWidths) -> PackedSketch {
        PackedSketch::pack(&[
            self.mu.to_packed(),
            PackedSketch::new(self.g0.clone(), w.g0),
            PackedSketch::new(self.g1.clone(), w.g1),
        ])
    }

    pub fn from_packed(s: &PackedSketch, w: &BurstBinWidths, m: usize, t: usize) -> Result<Self> {
        let parts = s.unpack(&[w.loc, w.g0, w.g1])?;
        Ok(BurstBinSketch {
            mu: LocatorSketch::from_packed(&parts[0], m, t)?,
            g0: parts[1].value.clone(),
            g1: parts[2].value.clone(),
        })
    }
}

pub(crate) fn sub_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    (a + m - (b % m)) % m
}

/// The burst sketch for binary strings of one length m.
#[derive(Debug, Clone)]
pub struct BurstBinSegment {
    pub m: usize,
    pub t: usize,
    pub delta: usize,
    pub delta_prime: usize,
    pattern: Vec<u8>,
    windows: WindowFamily,
    widths: BurstBinWidths,
}

impl BurstBinSegment {
    pub fn new(m: usize, t: usize, delta: usize, delta_prime: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyString);
        }
        if t == 0 {
            return Err(Error::OutOfRange("t"));
        }
        Ok(BurstBinSegment {
            m,
            t,
            delta,
            delta_prime,
            pattern: pattern(t),
            windows: windows_clamped(m, delta_prime),
            widths: burst_bin_widths(m, t, delta_prime),
        })
    }

    pub fn widths(&self) -> &BurstBinWidths {
        &self.widths
    }

    pub fn windows(&self) -> &WindowFamily {
        &self.windows
    }

    fn modulus(&self) -> BigUint {
        BigUint::from(1u8) << self.widths.nb
    }

    pub fn sketch(&self, c: &[u8]) -> Result<BurstBinSketch> {
        if c.len() != self.m {
            return Err(Error::BadLength { expected: self.m, got: c.len() });
        }
        let mut g = [BigUint::zero(), BigUint::zero()];
        for (i, w) in self.windows.windows.iter().enumerate() {
            g[(i + 1) % 2] += burst_sketch(w.slice(c), self.t).value;
        }
        let n = self.modulus();
        let [g0, g1] = g;
        Ok(BurstBinSketch { mu: mu_sketch(c, &self.pattern, self.delta), g0: g0 % &n, g1: g1 % &n })
    }

    /// Recover c from b in B_{<=t}(c) and the sketch of c.
    pub fn recover(&self, b: &[u8], sk: &BurstBinSketch) -> Result<Vec<u8>> {
        let m = self.m;
        if b.len() > m || m - b.len() > self.t {
            return Err(Error::BadLength { expected: m, got: b.len() });
        }
        let tp = m - b.len();
        let c = if tp == 0 { b.to_vec() } else { self.fill(b, sk, tp)? };
        if self.sketch(&c)? != *sk {
            return Err(Error::Unrecoverable("sketch check"));
        }
        Ok(c)
    }

    fn fill(&self, b: &[u8], sk: &BurstBinSketch, tp: usize) -> Result<Vec<u8>> {
        let m = self.m;
        let loc = mu_locate(b, &sk.mu, m, &self.pattern, self.delta, self.t)?;
        let i0 = covering_window(&self.windows, loc)?;
        let win = self.windows.window(i0);
        let mut c = alloc::vec![0u8; m];
        c[..win.lo - 1].copy_from_slice(&b[..win.lo - 1]);
        c[win.hi..].copy_from_slice(&b[win.hi - tp..]);
        let mut others = BigUint::zero();
        for j in 1..=self.windows.len() {
            if j % 2 == i0 % 2 && j != i0 {
                others += burst_sketch(self.windows.window(j).slice(&c), self.t).value;
            }
        }
        let total = if i0 % 2 == 0 { &sk.g0 } else { &sk.g1 };
        let s = sub_mod(total, &others, &self.modulus());
        let s = PackedSketch::new_checked(s, burst_width(win.len(), self.t))?;
        let part = burst_decode(&b[win.lo - 1..win.hi - tp], &s, win.len(), self.t)?;
        c[win.lo - 1..win.hi].copy_from_slice(&part);
        Ok(c)
    }
}

pub fn fb_sketch(c: &[u8], seg: &BurstBinSegment) -> Result<BurstBinSketch> {
    seg.sketch(c)
}

pub fn fb_recover(b: &[u8], sk: &BurstBinSketch, seg: &BurstBinSegment) -> Result<Vec<u8>> {
    seg.recover(b, sk)
}
