//! Strings, intervals, the matrix view of q-ary strings, runs, periods,
//! the regularity/density predicates and deletion balls.
//!
//! Binary strings are plain `[u8]` slices holding 0/1. Positions and
//! intervals are 1-based.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::intmath::{ceil_log2, floor_d_log2};
use crate::{Error, Result};

/// Closed interval `[lo, hi]` of 1-based positions; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: 1, hi: 0 };

    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    /// Interval of `len` positions starting at `lo`.
    pub fn at(lo: usize, len: usize) -> Self {
        Interval { lo, hi: lo + len - 1 }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn contains(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn contains_pos(&self, pos: usize) -> bool {
        self.lo <= pos && pos <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        !self.is_empty() && !other.is_empty() && self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest interval covering both.
    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            *other
        } else if other.is_empty() {
            *self
        } else {
            Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
        }
    }

    /// The substring `s[lo..=hi]` (1-based).
    pub fn slice<'a, T>(&self, s: &'a [T]) -> &'a [T] {
        if self.is_empty() {
            &s[0..0]
        } else {
            &s[self.lo - 1..self.hi]
        }
    }
}

/// A q-ary string with validated symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QaryString {
    q: u32,
    symbols: Vec<u32>,
}

impl QaryString {
    pub fn new(q: u32, symbols: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::OutOfRange("alphabet size"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::BadSymbol { symbol: s, q });
        }
        Ok(QaryString { q, symbols })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Binary matrix of a q-ary string: row 1 holds the least significant bit
/// of every symbol, so `x_j = sum_i row_i[j] * 2^(i-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixView {
    pub rows: Vec<Vec<u8>>,
}

/// Number of matrix rows for alphabet size q.
pub fn row_count(q: u32) -> usize {
    ceil_log2(q as usize).max(1)
}

pub fn to_matrix(x: &[u32], q: u32) -> MatrixView {
    let r = row_count(q);
    let rows = (0..r)
        .map(|i| x.iter().map(|&s| ((s >> i) & 1) as u8).collect())
        .collect();
    MatrixView { rows }
}

pub fn from_matrix(m: &MatrixView, q: u32) -> Result<Vec<u32>> {
    let n = m.rows.first().map_or(0, |r| r.len());
    if m.rows.iter().any(|r| r.len() != n) {
        return Err(Error::OutOfRange("ragged matrix"));
    }
    let mut x = alloc::vec![0u32; n];
    for (i, row) in m.rows.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            x[j] |= (b as u32) << i;
        }
    }
    if let Some(&s) = x.iter().find(|&&s| s >= q) {
        return Err(Error::BadSymbol { symbol: s, q });
    }
    Ok(x)
}

/// Row 1 of the matrix view (the least significant bits).
pub fn first_row(x: &[u32]) -> Vec<u8> {
    x.iter().map(|&s| (s & 1) as u8).collect()
}

/// Maximal runs of identical symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDecomposition {
    pub runs: Vec<(Interval, u8)>,
}

impl RunDecomposition {
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Run boundaries p_0 = 0 < p_1 < ... < p_{n'} = n.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut p = Vec::with_capacity(self.runs.len() + 1);
        p.push(0);
        p.extend(self.runs.iter().map(|(iv, _)| iv.hi));
        p
    }

    /// 1-based index of the run holding position `pos`.
    pub fn run_of(&self, pos: usize) -> usize {
        self.runs.partition_point(|(iv, _)| iv.hi < pos) + 1
    }

    /// The interval of run `j` (1-based).
    pub fn run(&self, j: usize) -> Interval {
        self.runs[j - 1].0
    }
}

pub fn runs_decompose(c: &[u8]) -> Result<RunDecomposition> {
    if c.is_empty() {
        return Err(Error::EmptyString);
    }
    let mut runs = Vec::new();
    let mut lo = 1;
    for i in 1..c.len() {
        if c[i] != c[i - 1] {
            runs.push((Interval::new(lo, i), c[i - 1]));
            lo = i + 1;
        }
    }
    runs.push((Interval::new(lo, c.len()), c[c.len() - 1]));
    Ok(RunDecomposition { runs })
}

/// Run index (1-based) of every position.
pub fn run_index_map(c: &[u8]) -> Vec<usize> {
    let mut out = Vec::with_capacity(c.len());
    let mut r = 0;
    for i in 0..c.len() {
        if i == 0 || c[i] != c[i - 1] {
            r += 1;
        }
        out.push(r);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property<'a> {
    /// Every window of length floor(d log2 |c|) contains both 00 and 11.
    Regular { d: u32 },
    /// Every window of length delta contains `p`.
    Dense { p: &'a [u8], delta: usize },
}

/// Window length of the regularity predicate for strings of length n.
pub fn regular_window(d: u32, n: usize) -> usize {
    floor_d_log2(d, n)
}

pub fn check_property(c: &[u8], kind: &Property<'_>) -> bool {
    match *kind {
        Property::Regular { d } => {
            let w = regular_window(d, c.len());
            every_window_contains(c, w, &[&[0, 0], &[1, 1]])
        }
        Property::Dense { p, delta } => every_window_contains(c, delta, &[p]),
    }
}

fn every_window_contains(c: &[u8], w: usize, pats: &[&[u8]]) -> bool {
    if w > c.len() {
        return true;
    }
    pats.iter().all(|p| {
        if p.len() > w {
            return false;
        }
        // first occurrence at or after each window start must end inside it
        let starts = occurrences(c, p);
        let span = w - p.len() + 1;
        let mut k = 0;
        for a in 1..=c.len() - w + 1 {
            while k < starts.len() && starts[k] < a {
                k += 1;
            }
            if k == starts.len() || starts[k] >= a + span {
                return false;
            }
        }
        true
    })
}

/// 1-based start positions of every occurrence of `p` in `c`.
pub fn occurrences(c: &[u8], p: &[u8]) -> Vec<usize> {
    if p.is_empty() || p.len() > c.len() {
        return Vec::new();
    }
    c.windows(p.len())
        .enumerate()
        .filter(|(_, w)| *w == p)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Maximal interval K containing `seed` on which `c` has period `tp`.
pub fn max_period_substring(c: &[u8], seed: Interval, tp: usize) -> Result<Interval> {
    if seed.is_empty() || seed.hi > c.len() || seed.lo < 1 {
        return Err(Error::OutOfRange("seed"));
    }
    if tp < 1 || tp > seed.len() {
        return Err(Error::OutOfRange("period"));
    }
    let at = |i: usize| c[i - 1];
    if (seed.lo..=seed.hi - tp).any(|i| at(i) != at(i + tp)) {
        return Err(Error::NotPeriodic);
    }
    let mut lo = seed.lo;
    while lo > 1 && at(lo - 1) == at(lo - 1 + tp) {
        lo -= 1;
    }
    let mut hi = seed.hi;
    while hi < c.len() && at(hi + 1) == at(hi + 1 - tp) {
        hi += 1;
    }
    Ok(Interval::new(lo, hi))
}

/// Deletion and burst-deletion balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ball {
    /// All subsequences of length |s| - t.
    D(usize),
    /// Delete one interval of length exactly t.
    BExact(usize),
    /// Delete one interval of length at most t.
    BAtMost(usize),
}

pub fn enumerate_ball<T: Ord + Clone>(s: &[T], kind: Ball) -> Result<BTreeSet<Vec<T>>> {
    let t = match kind {
        Ball::D(t) | Ball::BExact(t) | Ball::BAtMost(t) => t,
    };
    if t > s.len() {
        return Err(Error::BallTooLarge { t, len: s.len() });
    }
    let mut out = BTreeSet::new();
    match kind {
        Ball::D(t) => {
            let mut keep = Vec::with_capacity(s.len());
            subsequences(s, 0, s.len() - t, &mut keep, &mut out);
        }
        Ball::BExact(t) => {
            for i in 1..=s.len() - t + 1 {
                out.insert(delete_interval(s, Interval::at(i, t)));
            }
            if t == 0 {
                out.insert(s.to_vec());
            }
        }
        Ball::BAtMost(t) => {
            out.insert(s.to_vec());
            for tp in 1..=t {
                for i in 1..=s.len() - tp + 1 {
                    out.insert(delete_interval(s, Interval::at(i, tp)));
                }
            }
        }
    }
    Ok(out)
}

fn subsequences<T: Ord + Clone>(
    s: &[T],
    from: usize,
    want: usize,
    keep: &mut Vec<T>,
    out: &mut BTreeSet<Vec<T>>,
) {
    if keep.len() == want {
        out.insert(keep.clone());
        return;
    }
    let need = want - keep.len();
    let mut seen: Vec<&T> = Vec::new();
    for i in from..=s.len() - need {
        // the leftmost copy of a symbol reaches every completion a later copy does
        if seen.contains(&&s[i]) {
            continue;
        }
        seen.push(&s[i]);
        keep.push(s[i].clone());
        subsequences(s, i + 1, want, keep, out);
        keep.pop();
    }
}

pub fn delete_interval<T: Clone>(s: &[T], d: Interval) -> Vec<T> {
    if d.is_empty() {
        return s.to_vec();
    }
    let mut out = Vec::with_capacity(s.len() - d.len());
    out.extend_from_slice(&s[..d.lo - 1]);
    out.extend_from_slice(&s[d.hi..]);
    out
}

/// Remove the given 1-based positions (any order, no repeats).
pub fn delete_positions<T: Clone>(s: &[T], pos: &[usize]) -> Vec<T> {
    s.iter()
        .enumerate()
        .filter(|(i, _)| !pos.contains(&(i + 1)))
        .map(|(_, v)| v.clone())
        .collect()
}

pub fn is_subsequence<T: PartialEq>(b: &[T], c: &[T]) -> bool {
    let mut it = c.iter();
    b.iter().all(|x| it.any(|y| y == x))
}

/// Maximal alternating substrings (no two equal neighbours), as intervals.
pub fn alternating_runs(c: &[u8]) -> Vec<Interval> {
    let mut out = Vec::new();
    if c.is_empty() {
        return out;
    }
    let mut lo = 1;
    for i in 1..c.len() {
        if c[i] == c[i - 1] {
            out.push(Interval::new(lo, i));
            lo = i + 1;
        }
    }
    out.push(Interval::new(lo, c.len()));
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec;

    pub fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn all_bits(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0..1u32 << n).map(move |v| (0..n).map(|i| ((v >> (n - 1 - i)) & 1) as u8).collect())
    }

    #[test]
    fn matrix_examples() {
        let m = to_matrix(&[3, 2, 0], 4);
        assert_eq!(m.rows, vec![vec![1, 0, 0], vec![1, 1, 0]]);
        let m = to_matrix(&[5], 6);
        assert_eq!(m.rows, vec![vec![1], vec![0], vec![1]]);
        let m = to_matrix(&[0, 0], 4);
        assert!(m.rows.iter().all(|r| r.iter().all(|&b| b == 0)));
    }

    #[test]
    fn matrix_round_trip_exhaustive() {
        for q in [2u32, 4, 6] {
            for n in 0..=6usize {
                let total = (q as usize).pow(n as u32);
                for mut v in 0..total {
                    let x: Vec<u32> = (0..n)
                        .map(|_| {
                            let s = (v % q as usize) as u32;
                            v /= q as usize;
                            s
                        })
                        .collect();
                    let m = to_matrix(&x, q);
                    assert_eq!(m.rows.len(), row_count(q));
                    assert_eq!(from_matrix(&m, q).unwrap(), x);
                }
            }
        }
        // a column encoding 7 is not a Z_6 symbol
        let bad = MatrixView { rows: vec![vec![1], vec![1], vec![1]] };
        assert!(from_matrix(&bad, 6).is_err());
    }

    #[test]
    fn run_examples() {
        assert_eq!(runs_decompose(&bits("000")).unwrap().runs, vec![(Interval::new(1, 3), 0)]);
        let r = runs_decompose(&bits("010")).unwrap();
        assert_eq!(r.len(), 3);
        let r = runs_decompose(&bits("011000101011110100")).unwrap();
        let ivs: Vec<(usize, usize)> = r.runs.iter().map(|(i, _)| (i.lo, i.hi)).collect();
        assert_eq!(
            ivs,
            vec![
                (1, 1), (2, 3), (4, 6), (7, 7), (8, 8), (9, 9),
                (10, 10), (11, 14), (15, 15), (16, 16), (17, 18)
            ]
        );
        assert_eq!(r.boundaries()[3], 6);
        assert_eq!(r.run_of(5), 3);
        assert_eq!(r.run_of(14), 8);
        assert_eq!(runs_decompose(&[]), Err(Error::EmptyString));
    }

    #[test]
    fn property_examples() {
        // window floor(7 log2 10) = 23 > 10
        assert!(check_property(&bits("0101010101"), &Property::Regular { d: 7 }));
        assert!(!check_property(&bits("0101010101010101"), &Property::Regular { d: 1 }));
        let p = bits("0011");
        assert!(check_property(&bits("0011001100110011"), &Property::Dense { p: &p, delta: 8 }));
        assert!(!check_property(&bits("0011000000110011"), &Property::Dense { p: &p, delta: 8 }));
    }

    fn dense_oracle(c: &[u8], p: &[u8], delta: usize) -> bool {
        if delta > c.len() {
            return true;
        }
        c.windows(delta).all(|w| w.windows(p.len()).any(|x| x == p))
    }

    fn regular_oracle(c: &[u8], d: u32) -> bool {
        let n = c.len() as f64;
        let w = (d as f64 * n.log2()).floor() as usize;
        if w > c.len() {
            return true;
        }
        if w == 0 {
            return false;
        }
        c.windows(w).all(|x| {
            x.windows(2).any(|y| y == [0, 0]) && x.windows(2).any(|y| y == [1, 1])
        })
    }

    #[test]
    fn predicates_match_oracles() {
        for n in 1..=12 {
            for c in all_bits(n) {
                for d in 1..=3 {
                    // float floor agrees with the integer form away from exact powers
                    let w = (d as f64 * (n as f64).log2()).floor() as usize;
                    if w == regular_window(d, n) {
                        assert_eq!(
                            check_property(&c, &Property::Regular { d }),
                            regular_oracle(&c, d)
                        );
                    }
                }
                for t in 1..=2 {
                    let mut p = vec![0u8; t];
                    p.extend(vec![1u8; t]);
                    for delta in 2 * t..=n + 1 {
                        assert_eq!(
                            check_property(&c, &Property::Dense { p: &p, delta }),
                            dense_oracle(&c, &p, delta)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn regular_strings_have_short_runs_and_alternations() {
        for n in 1..=14 {
            for d in [1u32, 2, 7] {
                let w = regular_window(d, n);
                for c in all_bits(n) {
                    if !check_property(&c, &Property::Regular { d }) {
                        continue;
                    }
                    let r = runs_decompose(&c).unwrap();
                    assert!(r.runs.iter().all(|(iv, _)| w > n || iv.len() <= w));
                    assert!(alternating_runs(&c).iter().all(|iv| w > n || iv.len() <= w));
                }
            }
        }
    }

    #[test]
    fn period_examples() {
        let c = bits("0111011011010010");
        // direct scan: c_10 = 1 but c_13 = 0, so the extension stops at 12
        assert_eq!(max_period_substring(&c, Interval::new(3, 5), 3), Ok(Interval::new(3, 12)));
        assert_eq!(
            max_period_substring(&bits("000000"), Interval::new(2, 3), 2),
            Ok(Interval::new(1, 6))
        );
        assert_eq!(
            max_period_substring(&bits("0101"), Interval::new(1, 2), 1),
            Err(Error::NotPeriodic)
        );
        assert!(max_period_substring(&bits("0101"), Interval::new(3, 5), 1).is_err());
    }

    #[test]
    fn max_period_contains_every_equivalent_burst() {
        for n in 1..=12 {
            for c in all_bits(n) {
                for tp in 1..=3.min(n) {
                    for i in 1..=n - tp + 1 {
                        let d = Interval::at(i, tp);
                        let b = delete_interval(&c, d);
                        let k = max_period_substring(&c, d, tp).unwrap();
                        for j in 1..=n - tp + 1 {
                            let d2 = Interval::at(j, tp);
                            if delete_interval(&c, d2) == b {
                                assert!(k.contains(&d2), "{c:?} {d:?} {d2:?} {k:?}");
                            }
                        }
                        // maximality
                        let per = |iv: Interval| (iv.lo..=iv.hi.saturating_sub(tp))
                            .all(|x| x + tp > iv.hi || c[x - 1] == c[x + tp - 1]);
                        assert!(per(k));
                        if k.lo > 1 {
                            assert!(!per(Interval::new(k.lo - 1, k.hi)));
                        }
                        if k.hi < n {
                            assert!(!per(Interval::new(k.lo, k.hi + 1)));
                        }
                    }
                }
            }
        }
    }

    fn brute_d(s: &[u8], t: usize) -> BTreeSet<Vec<u8>> {
        let n = s.len();
        let mut out = BTreeSet::new();
        for mask in 0..1u32 << n {
            if mask.count_ones() as usize == t {
                out.insert(
                    (0..n).filter(|i| mask >> i & 1 == 0).map(|i| s[i]).collect::<Vec<_>>(),
                );
            }
        }
        out
    }

    #[test]
    fn ball_examples_and_oracles() {
        let s = bits("0110");
        assert_eq!(enumerate_ball(&s, Ball::D(0)).unwrap().into_iter().collect::<Vec<_>>(), vec![s.clone()]);
        assert_eq!(enumerate_ball(&bits("010"), Ball::D(1)).unwrap().len(), 3);
        assert!(enumerate_ball(&s, Ball::D(5)).is_err());
        for n in 0..=10 {
            for c in all_bits(n) {
                for t in 0..=n.min(3) {
                    assert_eq!(enumerate_ball(&c, Ball::D(t)).unwrap(), brute_d(&c, t));
                }
                if (1..=8).contains(&n) {
                    let d1 = enumerate_ball(&c, Ball::D(1)).unwrap();
                    assert_eq!(d1, enumerate_ball(&c, Ball::BExact(1)).unwrap());
                    assert_eq!(d1, enumerate_ball(&c, Ball::BAtMost(1)).unwrap().into_iter().filter(|x| x.len() == n - 1).collect());
                }
                for t in 2..=n.min(4) {
                    let bx = enumerate_ball(&c, Ball::BExact(t)).unwrap();
                    let d = enumerate_ball(&c, Ball::D(t)).unwrap();
                    let ba = enumerate_ball(&c, Ball::BAtMost(t)).unwrap();
                    assert!(bx.is_subset(&d));
                    assert!(bx.is_subset(&ba));
                }
            }
        }
    }

    #[test]
    fn run_count_is_single_deletion_ball_size() {
        for n in 1..=14 {
            for c in all_bits(n) {
                assert_eq!(enumerate_ball(&c, Ball::D(1)).unwrap().len(), runs_decompose(&c).unwrap().len());
            }
        }
    }

    #[test]
    fn pattern_occurrences_never_overlap() {
        for t in 1..=3usize {
            let mut p = vec![0u8; t];
            p.extend(vec![1u8; t]);
            for n in 1..=20 {
                if n > 16 && t == 1 {
                    continue;
                }
                for c in all_bits(n) {
                    let o = occurrences(&c, &p);
                    assert!(o.windows(2).all(|w| w[1] - w[0] >= 2 * t));
                }
            }
        }
    }
}
