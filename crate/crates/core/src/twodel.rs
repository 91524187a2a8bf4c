//! Two-deletion sketch f over Z_q (q even), the analysis of where two
//! deletions sit in the first row, and recovery of x from f(x) and y.
//!
//! f(x) = (eta, g0, g1, h0, h1): eta is the provider sketch of row 1,
//! g_i packs the VT syndromes of rows 2.. over run i of row 1, and h_j packs
//! the provider sketches of rows 2.. over window J_j.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::intmath::ceil_log2;
use crate::sketch::{provider_width, vt_decode_value, vt_syndrome, vt_width, PackedSketch, SketchProviderId, TwoDelProvider};
use crate::strings::{from_matrix, row_count, run_index_map, runs_decompose, to_matrix, Interval, MatrixView};
use crate::window::{covering_window, windows_clamped, WindowFamily};
use crate::{Error, Result};

/// Where two deletions can sit in a binary string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeletionCase {
    /// One deletion in run j1 and one in run j2 (1-based, j1 < j2), and
    /// no other explanation exists.
    TwoRuns { j1: usize, j2: usize },
    /// Every explanation deletes two positions inside this interval.
    Window(Interval),
}

/// Bit widths of the fields of f for one segment length. `n1` and `n2`
/// are log2 of N1 and N2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoDelWidths {
    pub eta: usize,
    pub n1: usize,
    pub g0: usize,
    pub g1: usize,
    pub n2: usize,
    pub h0: usize,
    pub h1: usize,
}

impl TwoDelWidths {
    pub fn total(&self) -> usize {
        self.eta + self.g0 + self.g1 + self.h0 + self.h1
    }

    fn fields(&self) -> [usize; 5] {
        [self.eta, self.g0, self.g1, self.h0, self.h1]
    }
}

/// Widths for length m; runs are at most `run_bound` long.
pub fn twodel_widths(
    m: usize,
    q: u32,
    rho: usize,
    run_bound: usize,
    provider: SketchProviderId,
) -> Result<TwoDelWidths> {
    let eta = provider_width(provider, m)?;
    let extra = row_count(q) - 1;
    if extra == 0 {
        return Ok(TwoDelWidths { eta, n1: 0, g0: 0, g1: 0, n2: 0, h0: 0, h1: 0 });
    }
    let n1 = extra * vt_width(run_bound.min(m));
    let fam = windows_clamped(m, rho);
    let mut widest = 0;
    for w in &fam.windows {
        widest = widest.max(provider_width(provider, w.len())?);
    }
    let n2 = extra * widest;
    let by_parity = |p: usize| if fam.has_parity(p) { n2 } else { 0 };
    Ok(TwoDelWidths {
        eta,
        n1,
        g0: n1 + 1,
        g1: n1 + ceil_log2(2 * m),
        n2,
        h0: by_parity(0),
        h1: by_parity(1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDelSketch {
    pub eta: PackedSketch,
    pub g0: BigUint,
    pub g1: BigUint,
    pub h0: BigUint,
    pub h1: BigUint,
}

impl TwoDelSketch {
    pub fn to_packed(&self, w: &TwoDelWidths) -> PackedSketch {
        let f = w.fields();
        PackedSketch::pack(&[
            self.eta.clone(),
            PackedSketch::new(self.g0.clone(), f[1]),
            PackedSketch::new(self.g1.clone(), f[2]),
            PackedSketch::new(self.h0.clone(), f[3]),
            PackedSketch::new(self.h1.clone(), f[4]),
        ])
    }

    pub fn from_packed(s: &PackedSketch, w: &TwoDelWidths) -> Result<Self> {
        let mut parts = s.unpack(&w.fields())?.into_iter();
        let mut next = || parts.next().expect("five fields");
        let eta = next();
        Ok(TwoDelSketch { eta, g0: next().value, g1: next().value, h0: next().value, h1: next().value })
    }
}

/// f for strings of one length m.
#[derive(Debug, Clone)]
pub struct TwoDelSegment {
    pub m: usize,
    pub q: u32,
    pub rho: usize,
    pub run_bound: usize,
    provider: TwoDelProvider,
    windows: WindowFamily,
    widths: TwoDelWidths,
}

fn pow2(k: usize) -> BigUint {
    BigUint::from(1u8) << k
}

fn sub_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    (a + m - (b % m)) % m
}

impl TwoDelSegment {
    pub fn new(m: usize, q: u32, rho: usize, run_bound: usize, provider: TwoDelProvider) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyString);
        }
        let widths = twodel_widths(m, q, rho, run_bound, provider.id())?;
        if provider.width(m)? != widths.eta {
            return Err(Error::ProviderContract);
        }
        Ok(TwoDelSegment { m, q, rho, run_bound, provider, windows: windows_clamped(m, rho), widths })
    }

    pub fn widths(&self) -> &TwoDelWidths {
        &self.widths
    }

    pub fn windows(&self) -> &WindowFamily {
        &self.windows
    }

    fn mod0(&self) -> BigUint {
        pow2(self.widths.n1 + 1)
    }

    fn mod1(&self) -> BigUint {
        pow2(self.widths.n1) * BigUint::from(2 * self.m)
    }

    /// g over interval `iv` of rows 2..
    fn g_value(rows: &[Vec<u8>], iv: Interval) -> BigUint {
        let parts: Vec<PackedSketch> = rows[1..].iter().map(|r| vt_syndrome(iv.slice(r))).collect();
        PackedSketch::pack(&parts).value
    }

    fn h_value(&self, rows: &[Vec<u8>], iv: Interval) -> Result<BigUint> {
        let mut parts = Vec::with_capacity(rows.len() - 1);
        for r in &rows[1..] {
            parts.push(self.provider.sketch(iv.slice(r))?);
        }
        Ok(PackedSketch::pack(&parts).value)
    }

    pub fn sketch(&self, x: &[u32]) -> Result<TwoDelSketch> {
        if x.len() != self.m {
            return Err(Error::BadLength { expected: self.m, got: x.len() });
        }
        let mat = to_matrix(x, self.q);
        let eta = self.provider.sketch(&mat.rows[0])?;
        let mut sk = TwoDelSketch {
            eta,
            g0: BigUint::zero(),
            g1: BigUint::zero(),
            h0: BigUint::zero(),
            h1: BigUint::zero(),
        };
        if mat.rows.len() == 1 {
            return Ok(sk);
        }
        let runs = runs_decompose(&mat.rows[0])?;
        if runs.runs.iter().any(|(iv, _)| iv.len() > self.run_bound) {
            return Err(Error::OutOfRange("run longer than the run bound"));
        }
        for (i, (iv, _)) in runs.runs.iter().enumerate() {
            let g = Self::g_value(&mat.rows, *iv);
            sk.g1 += &g * BigUint::from(i + 1);
            sk.g0 += g;
        }
        sk.g0 %= self.mod0();
        sk.g1 %= self.mod1();
        let n2 = pow2(self.widths.n2);
        for (j, w) in self.windows.windows.iter().enumerate() {
            let h = self.h_value(&mat.rows, *w)?;
            if (j + 1) % 2 == 0 {
                sk.h0 += h;
            } else {
                sk.h1 += h;
            }
        }
        sk.h0 %= &n2;
        sk.h1 %= &n2;
        Ok(sk)
    }

    /// Recover x of length m from y in D_2(x) and f(x).
    pub fn recover(&self, y: &[u32], sk: &TwoDelSketch) -> Result<Vec<u32>> {
        let m = self.m;
        if y.len() + 2 != m {
            return Err(Error::BadLength { expected: m.saturating_sub(2), got: y.len() });
        }
        let dm = to_matrix(y, self.q);
        let c = self.provider.decode(&dm.rows[0], &sk.eta, m)?;
        let mut rows: Vec<Vec<u8>> = alloc::vec![c];
        if dm.rows.len() > 1 {
            rows.resize(dm.rows.len(), alloc::vec![0u8; m]);
            match analyze_two_deletions(&rows[0], &dm.rows[0])? {
                DeletionCase::TwoRuns { j1, j2 } => self.recover_runs(&mut rows, &dm, sk, j1, j2)?,
                DeletionCase::Window(j) => {
                    if j.len() > self.rho && self.windows.len() > 1 {
                        return Err(Error::Unrecoverable("deletion window longer than rho"));
                    }
                    self.recover_window(&mut rows, &dm, sk, j)?
                }
            }
        }
        let x = from_matrix(&MatrixView { rows }, self.q)?;
        if self.sketch(&x)? != *sk {
            return Err(Error::Unrecoverable("sketch check"));
        }
        Ok(x)
    }

    fn recover_runs(
        &self,
        rows: &mut [Vec<u8>],
        dm: &MatrixView,
        sk: &TwoDelSketch,
        j1: usize,
        j2: usize,
    ) -> Result<()> {
        let runs = runs_decompose(&rows[0])?;
        let p = runs.boundaries();
        let (mut s0, mut s1) = (BigUint::zero(), BigUint::zero());
        for j in 1..=runs.len() {
            if j == j1 || j == j2 {
                continue;
            }
            let shift = if j < j1 { 0 } else if j < j2 { 1 } else { 2 };
            let iv = runs.run(j);
            for r in 1..rows.len() {
                for k in iv.lo..=iv.hi {
                    rows[r][k - 1] = dm.rows[r][k - 1 - shift];
                }
            }
            let g = Self::g_value(rows, iv);
            s1 += &g * BigUint::from(j);
            s0 += g;
        }
        let (mod0, mod1) = (self.mod0(), self.mod1());
        let sum = sub_mod(&sk.g0, &s0, &mod0);
        let weighted = sub_mod(&sk.g1, &s1, &mod1);
        let base = &sum * BigUint::from(j1);
        if weighted < base {
            return Err(Error::Unrecoverable("run sums"));
        }
        let diff = weighted - base;
        let gap = BigUint::from(j2 - j1);
        if !(&diff % &gap).is_zero() {
            return Err(Error::Unrecoverable("inexact division"));
        }
        let g2 = diff / gap;
        if g2 > sum {
            return Err(Error::Unrecoverable("run sums"));
        }
        let g1 = &sum - &g2;
        let n1 = pow2(self.widths.n1);
        if g1 >= n1 || g2 >= n1 {
            return Err(Error::Unrecoverable("run sums"));
        }
        // observation ii: run j1 lost one symbol, the run is read at its own place;
        // observation iv: run j2 lost one symbol and sits one place left
        for (j, g, from) in [(j1, g1, p[j1 - 1]), (j2, g2, p[j2 - 1] - 1)] {
            let len = p[j] - p[j - 1];
            let w = vt_width(len);
            let parts = PackedSketch::new_checked(g, w * (rows.len() - 1))?.unpack(&alloc::vec![w; rows.len() - 1])?;
            for r in 1..rows.len() {
                let s = parts[r - 1].to_u64().ok_or(Error::SketchMismatch)?;
                let seg = vt_decode_value(&dm.rows[r][from..from + len - 1], s, len)?;
                rows[r][p[j - 1]..p[j]].copy_from_slice(&seg);
            }
        }
        Ok(())
    }

    fn recover_window(&self, rows: &mut [Vec<u8>], dm: &MatrixView, sk: &TwoDelSketch, j: Interval) -> Result<()> {
        let j0 = covering_window(&self.windows, j)?;
        let win = self.windows.window(j0);
        let m = self.m;
        for r in 1..rows.len() {
            rows[r][..win.lo - 1].copy_from_slice(&dm.rows[r][..win.lo - 1]);
            rows[r][win.hi..].copy_from_slice(&dm.rows[r][win.hi - 2..m - 2]);
        }
        let n2 = pow2(self.widths.n2);
        let mut others = BigUint::zero();
        for jj in 1..=self.windows.len() {
            if jj % 2 == j0 % 2 && jj != j0 {
                others += self.h_value(rows, self.windows.window(jj))?;
            }
        }
        let total = if j0 % 2 == 0 { &sk.h0 } else { &sk.h1 };
        let h = sub_mod(total, &others, &n2);
        let w = self.provider.width(win.len())?;
        let extra = rows.len() - 1;
        let parts = PackedSketch::new_checked(h, w * extra)?.unpack(&alloc::vec![w; extra])?;
        for r in 1..rows.len() {
            let seg = self.provider.decode(&dm.rows[r][win.lo - 1..win.hi - 2], &parts[r - 1], win.len())?;
            rows[r][win.lo - 1..win.hi].copy_from_slice(&seg);
        }
        Ok(())
    }
}

pub fn f_sketch(x: &[u32], seg: &TwoDelSegment) -> Result<TwoDelSketch> {
    seg.sketch(x)
}

pub fn f_recover(y: &[u32], sk: &TwoDelSketch, seg: &TwoDelSegment) -> Result<Vec<u32>> {
    seg.recover(y, sk)
}

/// All pairs j1 < j2 with c minus {j1, j2} equal to b, as ranges: for each
/// j1 the valid j2 form the interval `lo..=hi`.
fn valid_pairs(c: &[u8], b: &[u8]) -> Result<Vec<(usize, usize, usize)>> {
    let n = c.len();
    if n < 2 || b.len() + 2 != n {
        return Err(Error::NotADeletion);
    }
    let pre = c.iter().zip(b).take_while(|(x, y)| x == y).count();
    let suf = c.iter().rev().zip(b.iter().rev()).take_while(|(x, y)| x == y).count();
    // next_mis[i]: first 1-based i' >= i with c[i'+1] != b[i'], or n - 1
    let mut next_mis = alloc::vec![n - 1; n];
    for i in (1..=n - 2).rev() {
        next_mis[i] = if c[i] != b[i - 1] { i } else { next_mis[i + 1] };
    }
    let mut out = Vec::new();
    for j1 in 1..=(pre + 1).min(n - 1) {
        let lo = (j1 + 1).max(n - suf);
        let hi = (next_mis[j1.min(n - 1)] + 1).min(n);
        if lo <= hi {
            out.push((j1, lo, hi));
        }
    }
    if out.is_empty() {
        return Err(Error::NotADeletion);
    }
    Ok(out)
}

/// Classify two deletions taking c to b.
pub fn analyze_two_deletions(c: &[u8], b: &[u8]) -> Result<DeletionCase> {
    let pairs = valid_pairs(c, b)?;
    let run = run_index_map(c);
    let mut pair_runs = None;
    let mut same = true;
    let mut hull = Interval::EMPTY;
    for &(j1, lo, hi) in &pairs {
        hull = hull.hull(&Interval::new(j1, hi));
        let r = (run[j1 - 1], run[lo - 1]);
        if run[hi - 1] != r.1 || *pair_runs.get_or_insert(r) != r {
            same = false;
        }
    }
    match pair_runs {
        Some((r1, r2)) if same && r1 != r2 => Ok(DeletionCase::TwoRuns { j1: r1, j2: r2 }),
        _ => Ok(DeletionCase::Window(hull)),
    }
}

/// How two explanations {j1, j2}, {j1', j2'} of the same two-deletion
/// result relate (j1 <= j1').
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coincidence {
    /// j1, j1' share a run and j2, j2' share a run.
    SameRuns,
    /// c[s1..=s2] is alternating with length >= 3, j1 shares a run with
    /// s1, j2 = s1 + 1, j1' = s2 - 1 and j2' shares a run with s2.
    Alternating { s1: usize, s2: usize },
}

/// Structure of a coincidence, or None if neither form holds.
pub fn classify_coincidence(c: &[u8], a: (usize, usize), b: (usize, usize)) -> Option<Coincidence> {
    let (a, b) = if a.0 <= b.0 { (a, b) } else { (b, a) };
    let run = run_index_map(c);
    let r = |i: usize| run[i - 1];
    if r(a.0) == r(b.0) && r(a.1) == r(b.1) {
        return Some(Coincidence::SameRuns);
    }
    let (s1, s2) = (a.1.checked_sub(1)?, b.0 + 1);
    if s2 > c.len() || s1 + 2 > s2 {
        return None;
    }
    let alternating = (s1..s2).all(|i| c[i - 1] != c[i]);
    (alternating && r(a.0) == r(s1) && r(b.1) == r(s2)).then_some(Coincidence::Alternating { s1, s2 })
}
