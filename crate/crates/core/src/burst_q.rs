//! q-ary burst sketch: the binary burst sketch of row 1 plus parity-split
//! sums over the windows K_j of the burst sketches of rows 2..
//!
//! Recovery finds row 1 first, widens the leftmost burst explaining it to
//! its maximal period-t' interval K (which holds every explanation), and
//! decodes rows 2.. inside the window holding K.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::burst_bin::{sub_mod, BurstBinSegment, BurstBinSketch, BurstBinWidths};
use crate::locator::period_localize;
use crate::sketch::{burst_decode, burst_sketch, burst_width, PackedSketch};
use crate::strings::{from_matrix, row_count, to_matrix, Interval, MatrixView};
use crate::window::{covering_window, windows_clamped, WindowFamily};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BurstQWidths {
    pub fb: BurstBinWidths,
    pub nbar: usize,
    pub h0: usize,
    pub h1: usize,
}

impl BurstQWidths {
    pub fn total(&self) -> usize {
        self.fb.total() + self.h0 + self.h1
    }
}

pub fn burst_q_widths(m: usize, q: u32, t: usize, delta: usize, delta_prime: usize) -> BurstQWidths {
    let fb = crate::burst_bin::burst_bin_widths(m, t, delta_prime);
    let extra = row_count(q) - 1;
    if extra == 0 {
        return BurstQWidths { fb, nbar: 0, h0: 0, h1: 0 };
    }
    let fam = windows_clamped(m, delta);
    let nbar = extra * fam.windows.iter().map(|w| burst_width(w.len(), t)).max().unwrap_or(0);
    let by_parity = |p: usize| if fam.has_parity(p) { nbar } else { 0 };
    BurstQWidths { fb, nbar, h0: by_parity(0), h1: by_parity(1) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurstQSketch {
    pub fb: BurstBinSketch,
    pub h0: BigUint,
    pub h1: BigUint,
}

impl BurstQSketch {
    pub fn to_packed(&self, w: &BurstQWidths) -> PackedSketch {
        PackedSketch::pack(&[
            self.fb.to_packed(&w.fb),
            PackedSketch::new(self.h0.clone(), w.h0),
            PackedSketch::new(self.h1.clone(), w.h1),
        ])
    }

    pub fn from_packed(s: &PackedSketch, w: &BurstQWidths, m: usize, t: usize) -> Result<Self> {
        let parts = s.unpack(&[w.fb.total(), w.h0, w.h1])?;
        Ok(BurstQSketch {
            fb: BurstBinSketch::from_packed(&parts[0], &w.fb, m, t)?,
            h0: parts[1].value.clone(),
            h1: parts[2].value.clone(),
        })
    }
}

/// The q-ary burst sketch for strings of one length m.
#[derive(Debug, Clone)]
pub struct BurstQSegment {
    pub m: usize,
    pub q: u32,
    pub t: usize,
    first: BurstBinSegment,
    windows: WindowFamily,
    widths: BurstQWidths,
}

impl BurstQSegment {
    pub fn new(m: usize, q: u32, t: usize, delta: usize, delta_prime: usize) -> Result<Self> {
        Ok(BurstQSegment {
            m,
            q,
            t,
            first: BurstBinSegment::new(m, t, delta, delta_prime)?,
            windows: windows_clamped(m, delta),
            widths: burst_q_widths(m, q, t, delta, delta_prime),
        })
    }

    pub fn widths(&self) -> &BurstQWidths {
        &self.widths
    }

    pub fn windows(&self) -> &WindowFamily {
        &self.windows
    }

    pub fn first_row_segment(&self) -> &BurstBinSegment {
        &self.first
    }

    fn modulus(&self) -> BigUint {
        BigUint::from(1u8) << self.widths.nbar
    }

    fn h_value(&self, rows: &[Vec<u8>], iv: Interval) -> BigUint {
        let parts: Vec<PackedSketch> = rows[1..].iter().map(|r| burst_sketch(iv.slice(r), self.t)).collect();
        PackedSketch::pack(&parts).value
    }

    pub fn sketch(&self, x: &[u32]) -> Result<BurstQSketch> {
        if x.len() != self.m {
            return Err(Error::BadLength { expected: self.m, got: x.len() });
        }
        let mat = to_matrix(x, self.q);
        let fb = self.first.sketch(&mat.rows[0])?;
        let mut h = [BigUint::zero(), BigUint::zero()];
        if mat.rows.len() > 1 {
            for (j, w) in self.windows.windows.iter().enumerate() {
                h[(j + 1) % 2] += self.h_value(&mat.rows, *w);
            }
        }
        let n = self.modulus();
        let [h0, h1] = h;
        Ok(BurstQSketch { fb, h0: h0 % &n, h1: h1 % &n })
    }

    /// The interval K of row 1 holding every burst that explains y, or
    /// None when nothing was deleted.
    pub fn localize(&self, c: &[u8], d: &[u8]) -> Result<Option<Interval>> {
        if c.len() == d.len() {
            return Ok(None);
        }
        period_localize(c, d).map(Some)
    }

    /// Recover x from y in B_{<=t}(x) and the sketch of x.
    pub fn recover(&self, y: &[u32], sk: &BurstQSketch) -> Result<Vec<u32>> {
        let m = self.m;
        if y.len() > m || m - y.len() > self.t {
            return Err(Error::BadLength { expected: m, got: y.len() });
        }
        let tp = m - y.len();
        let dm = to_matrix(y, self.q);
        let c = self.first.recover(&dm.rows[0], &sk.fb)?;
        let extra = dm.rows.len() - 1;
        let mut rows = alloc::vec![c];
        match self.localize(&rows[0], &dm.rows[0])? {
            None => rows.extend(dm.rows[1..].iter().cloned()),
            Some(k) if extra > 0 => {
                rows.resize(extra + 1, alloc::vec![0u8; m]);
                let j0 = covering_window(&self.windows, k)?;
                let win = self.windows.window(j0);
                for r in 1..=extra {
                    rows[r][..win.lo - 1].copy_from_slice(&dm.rows[r][..win.lo - 1]);
                    rows[r][win.hi..].copy_from_slice(&dm.rows[r][win.hi - tp..]);
                }
                let mut others = BigUint::zero();
                for j in 1..=self.windows.len() {
                    if j % 2 == j0 % 2 && j != j0 {
                        others += self.h_value(&rows, self.windows.window(j));
                    }
                }
                let total = if j0 % 2 == 0 { &sk.h0 } else { &sk.h1 };
                let h = sub_mod(total, &others, &self.modulus());
                let bw = burst_width(win.len(), self.t);
                let parts = PackedSketch::new_checked(h, bw * extra)?.unpack(&alloc::vec![bw; extra])?;
                for r in 1..=extra {
                    let part = burst_decode(&dm.rows[r][win.lo - 1..win.hi - tp], &parts[r - 1], win.len(), self.t)?;
                    rows[r][win.lo - 1..win.hi].copy_from_slice(&part);
                }
            }
            Some(_) => {}
        }
        let x = from_matrix(&MatrixView { rows }, self.q)?;
        if self.sketch(&x)? != *sk {
            return Err(Error::Unrecoverable("sketch check"));
        }
        Ok(x)
    }
}

pub fn fq_sketch(x: &[u32], seg: &BurstQSegment) -> Result<BurstQSketch> {
    seg.sketch(x)
}

pub fn fq_recover(y: &[u32], sk: &BurstQSketch, seg: &BurstQSegment) -> Result<Vec<u32>> {
    seg.recover(y, sk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locator::pattern;
    use crate::strings::{check_property, delete_interval, first_row, Property};

    fn all_bits(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << n).map(move |x| (0..n).rev().map(|i| (x >> i & 1) as u8).collect())
    }

    fn roundtrip(seg: &BurstQSegment, x: &[u32]) {
        let sk = seg.sketch(x).unwrap();
        let w = seg.widths();
        assert_eq!(BurstQSketch::from_packed(&sk.to_packed(w), w, seg.m, seg.t).unwrap(), sk);
        let c = first_row(x);
        for tp in 0..=seg.t {
            for lo in 1..=x.len() + 1 - tp {
                let d = Interval::at(lo, tp);
                let y = delete_interval(x, d);
                if tp > 0 {
                    // true burst inside K, K inside one window
                    let k = seg.localize(&c, &first_row(&y)).unwrap().unwrap();
                    assert!(k.contains(&d));
                    assert!(covering_window(seg.windows(), k).is_ok());
                }
                assert_eq!(seg.recover(&y, &sk).unwrap(), x, "x={x:?} d={d:?}");
            }
        }
    }

    #[test]
    fn q4_dense_first_rows() {
        let (n, t, delta) = (18, 2, 8);
        let seg = BurstQSegment::new(n, 4, t, delta, 2 * (delta + t)).unwrap();
        assert!(seg.windows().len() >= 2);
        let mut seen = 0;
        let p = pattern(t);
        let mut state = 11u64;
        for c in all_bits(n).filter(|c| check_property(c, &Property::Dense { p: &p, delta })) {
            for _ in 0..4 {
                let x: Vec<u32> = c
                    .iter()
                    .map(|&b| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        b as u32 | ((state >> 40) as u32 & 1) << 1
                    })
                    .collect();
                roundtrip(&seg, &x);
                seen += 1;
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn periodic_first_row_around_burst() {
        // row 1 = 0101... around the burst: several bursts explain y
        let seg = BurstQSegment::new(12, 8, 2, 100, 200).unwrap();
        let x = [0, 1, 2, 3, 4, 5, 6, 7, 0, 3, 5, 6];
        assert_eq!(first_row(&x), [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0]);
        roundtrip(&seg, &x);
    }

    #[test]
    fn binary_reduces_to_first_row() {
        let seg = BurstQSegment::new(10, 2, 2, 8, 20).unwrap();
        assert_eq!(seg.widths().total(), seg.widths().fb.total());
    }
}
