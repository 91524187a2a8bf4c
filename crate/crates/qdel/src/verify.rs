//! Round-trip verification drivers.

use std::collections::HashSet;
use std::fmt;
use std::thread;

use qdel_core::codec::{Codec, SegmentCode, TwoDelCode};
use qdel_core::encode::rep_decode;
use qdel_core::params::Mode;
use qdel_core::strings::delete_positions;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::channel::{corrupt_with, CorruptSpec};

/// Exhaustive drivers refuse message spaces larger than this.
pub const MAX_EXHAUSTIVE_MESSAGES: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Exhaustive,
    Random { trials: u64, seed: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("message space is empty")]
    Empty,
    #[error("message space of {0} words is too large for exhaustive scope")]
    TooLarge(u128),
}

/// A failing case with what is needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub message: Vec<u32>,
    /// Deleted codeword positions, 1-based.
    pub deleted: Vec<usize>,
    /// Trial seed for random scope.
    pub seed: Option<u64>,
    pub error: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "message {:?} deleted {:?}", self.message, self.deleted)?;
        if let Some(s) = self.seed {
            write!(f, " seed {s}")?;
        }
        write!(f, ": {}", self.error)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub messages: u64,
    /// Distinct received words decoded.
    pub cases: u64,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: VerifyReport) {
        self.messages += other.messages;
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }

    fn finish(mut self) -> Self {
        self.failures.sort();
        self
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "messages {} cases {} failures {}", self.messages, self.cases, self.failures.len())?;
        for x in self.failures.iter().take(10) {
            writeln!(f, "  {x}")?;
        }
        Ok(())
    }
}

/// Number of messages of length n over Z_q.
pub fn message_count(n: usize, q: u32) -> u128 {
    (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Message with index `i`, first symbol least significant.
pub fn message(mut i: u64, n: usize, q: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let s = (i % q as u64) as u32;
            i /= q as u64;
            s
        })
        .collect()
}

/// Every deletion pattern the mode corrects on a length-n word, as sorted
/// 1-based positions, the empty pattern included.
pub fn patterns(mode: Mode, n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    match mode {
        Mode::TwoDel => {
            for j1 in 1..=n {
                out.push(vec![j1]);
                for j2 in j1 + 1..=n {
                    out.push(vec![j1, j2]);
                }
            }
        }
        Mode::BurstBin | Mode::BurstQ => {
            for len in 1..=t.min(n) {
                for lo in 1..=n + 1 - len {
                    out.push((lo..lo + len).collect());
                }
            }
        }
    }
    out
}

/// Run `work` over [0, count) split into contiguous chunks, one per
/// available thread, and merge the reports.
pub fn fan_out<F>(count: u64, work: F) -> VerifyReport
where
    F: Fn(u64, u64) -> VerifyReport + Sync,
{
    let threads = thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let chunk = count.div_ceil(threads.max(1)).max(1);
    let mut total = VerifyReport::default();
    thread::scope(|s| {
        let handles: Vec<_> = (0..count)
            .step_by(chunk as usize)
            .map(|lo| {
                let work = &work;
                s.spawn(move || work(lo, (lo + chunk).min(count)))
            })
            .collect();
        for h in handles {
            total.merge(h.join().expect("verification worker panicked"));
        }
    });
    total.finish()
}

fn check(codec: &dyn Codec, u: &[u32], y: &[u32], deleted: &[usize], seed: Option<u64>) -> Option<Failure> {
    let error = match codec.decode(y) {
        Ok(v) if v == u => return None,
        Ok(v) => format!("decoded to {v:?}"),
        Err(e) => e.to_string(),
    };
    Some(Failure { message: u.to_vec(), deleted: deleted.to_vec(), seed, error })
}

/// Decode every distinct word of the correctable ball of `codec.encode(u)`.
pub fn verify_message(codec: &dyn Codec, u: &[u32], pats: &[Vec<usize>]) -> VerifyReport {
    let mut rep = VerifyReport { messages: 1, ..Default::default() };
    let x = match codec.encode(u) {
        Ok(x) => x,
        Err(e) => {
            rep.failures.push(Failure { message: u.to_vec(), deleted: vec![], seed: None, error: e.to_string() });
            return rep;
        }
    };
    let mut seen = HashSet::new();
    for p in pats {
        let y = delete_positions(&x, p);
        if !seen.insert(y.clone()) {
            continue;
        }
        rep.cases += 1;
        rep.failures.extend(check(codec, u, &y, p, None));
    }
    rep
}

/// Drive encode/decode over every message and every correctable
/// deletion pattern, or over seeded random samples.
pub fn roundtrip_verify(codec: &dyn Codec, scope: Scope) -> Result<VerifyReport, VerifyError> {
    let p = &codec.params().params;
    let (n, q) = (p.n, p.code_q());
    let total = codec.params().layout.total;
    match scope {
        Scope::Exhaustive => {
            let count = message_count(n, q);
            if n == 0 || count == 0 {
                return Err(VerifyError::Empty);
            }
            if count > MAX_EXHAUSTIVE_MESSAGES as u128 {
                return Err(VerifyError::TooLarge(count));
            }
            let pats = patterns(p.mode, total, p.t);
            Ok(fan_out(count as u64, |lo, hi| {
                let mut rep = VerifyReport::default();
                for i in lo..hi {
                    rep.merge(verify_message(codec, &message(i, n, q), &pats));
                }
                rep
            }))
        }
        Scope::Random { trials, seed } => {
            if n == 0 {
                return Err(VerifyError::Empty);
            }
            Ok(fan_out(trials, |lo, hi| {
                let mut rep = VerifyReport::default();
                for i in lo..hi {
                    let trial_seed = seed.wrapping_add(i);
                    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
                    let u: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
                    let spec = match p.mode {
                        Mode::TwoDel => CorruptSpec::Deletions(rng.gen_range(0..=2)),
                        _ => CorruptSpec::Burst(p.t),
                    };
                    rep.messages += 1;
                    rep.cases += 1;
                    let x = match codec.encode(&u) {
                        Ok(x) => x,
                        Err(e) => {
                            let error = e.to_string();
                            rep.failures.push(Failure { message: u, deleted: vec![], seed: Some(trial_seed), error });
                            continue;
                        }
                    };
                    let c = corrupt_with(&x, spec, &mut rng).expect("codeword longer than the deletion count");
                    rep.failures.extend(check(codec, &u, &c.word, &c.deleted, Some(trial_seed)));
                }
                rep
            }))
        }
    }
}

/// Stage-by-stage exhaustive check of a two-deletion code.
///
/// `decode` reads segment [A+1, B] of the codeword from y[A+1, B-t'] and
/// recovers the three segments one after another. The check covers:
///
/// * every deletion pattern: each read is a subsequence of its segment of
///   length B-A-t' (checked on position tags);
/// * the tail: the repetition decoder's read positions do not depend on
///   content (checked on position tags for every pattern);
/// * segments 2 and 1: for every message, every word of D_0, D_1, D_2 of
///   v' and of v goes through the same stage decoders `decode` uses.
///
/// Together these imply `decode` inverts every word of the ball.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageReport {
    pub patterns: u64,
    pub tail_cases: u64,
    pub mid: VerifyReport,
    pub head: VerifyReport,
    pub structural: Vec<String>,
}

impl StageReport {
    pub fn ok(&self) -> bool {
        self.structural.is_empty() && self.mid.ok() && self.head.ok()
    }
}

fn ball_words(x: &[u32]) -> Vec<Vec<u32>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in patterns(Mode::TwoDel, x.len(), 2) {
        let y = delete_positions(x, &p);
        if seen.insert(y.clone()) {
            out.push(y);
        }
    }
    out
}

fn stage_structure(code: &TwoDelCode, rep: &mut StageReport) {
    let l = &code.params().layout;
    let bounds = [0, l.seg1.m, l.seg1.m + l.seg2.m, l.total];
    let tags: Vec<usize> = (1..=l.total).collect();
    for p in patterns(Mode::TwoDel, l.total, 2) {
        rep.patterns += 1;
        let y = delete_positions(&tags, &p);
        let ranges = match code.split_ranges(y.len()) {
            Ok(r) => r,
            Err(e) => {
                rep.structural.push(format!("pattern {p:?}: {e}"));
                continue;
            }
        };
        for (k, r) in ranges.into_iter().enumerate() {
            let (a, b) = (bounds[k], bounds[k + 1]);
            let read = &y[r];
            let inside = read.iter().all(|&j| a < j && j <= b) && read.windows(2).all(|w| w[0] < w[1]);
            if !inside || read.len() != b - a - p.len() {
                rep.structural.push(format!("pattern {p:?}: segment {} read {read:?}", k + 1));
            }
            if k == 2 {
                rep.tail_cases += 1;
                let want: Vec<usize> = (0..l.tail_symbols).map(|i| a + 1 + i * l.copies).collect();
                let got = rep_decode(read, l.tail_symbols, l.copies - 1).ok();
                // each repeated symbol is read inside its own block
                let blocks = |v: &[usize]| v.iter().map(|&j| (j - a - 1) / l.copies).collect::<Vec<_>>();
                if got.as_deref().map(blocks) != Some(blocks(&want)) {
                    rep.structural.push(format!("pattern {p:?}: tail read {got:?}"));
                }
            }
        }
    }
}

fn stage_failure(u: &[u32], z: &[u32], stage: &str, e: String) -> Failure {
    Failure { message: u.to_vec(), deleted: vec![], seed: None, error: format!("{stage} read {z:?}: {e}") }
}

/// Run one stage decoder of `decode` over the D_0, D_1, D_2 balls of
/// segment 2 (`mid`) or segment 1 of the encoding of u.
fn check_stage(code: &TwoDelCode, u: &[u32], mid: bool, r: &mut VerifyReport) -> qdel_core::Result<()> {
    let v = code.encode_head(u)?;
    let bits1 = code.seg1().sketch_bits(&v)?;
    if mid {
        let v2 = code.encode_mid(&v)?;
        let bits2 = code.seg2().sketch_bits(&v2)?;
        for z in ball_words(&v2) {
            r.cases += 1;
            match code.decode_mid(&z, &bits2) {
                Ok(b) if b == bits1 => {}
                Ok(_) => r.failures.push(stage_failure(u, &z, "segment 2", "wrong sketch".into())),
                Err(e) => r.failures.push(stage_failure(u, &z, "segment 2", e.to_string())),
            }
        }
    } else {
        for z in ball_words(&v) {
            r.cases += 1;
            match code.decode_head(&z, &bits1) {
                Ok(w) if w == u => {}
                Ok(w) => r.failures.push(stage_failure(u, &z, "segment 1", format!("decoded to {w:?}"))),
                Err(e) => r.failures.push(stage_failure(u, &z, "segment 1", e.to_string())),
            }
        }
    }
    Ok(())
}

pub fn twodel_stage_verify(code: &TwoDelCode) -> Result<StageReport, VerifyError> {
    let p = &code.params().params;
    let (n, q) = (p.n, p.q);
    let count = message_count(n, q);
    if n == 0 || count == 0 {
        return Err(VerifyError::Empty);
    }
    if count > MAX_EXHAUSTIVE_MESSAGES as u128 {
        return Err(VerifyError::TooLarge(count));
    }
    let mut rep = StageReport::default();
    stage_structure(code, &mut rep);
    let [mid, head] = [true, false].map(|is_mid| {
        fan_out(count as u64, |lo, hi| {
            let mut r = VerifyReport::default();
            for i in lo..hi {
                let u = message(i, n, q);
                r.messages += 1;
                if let Err(e) = check_stage(code, &u, is_mid, &mut r) {
                    r.failures.push(stage_failure(&u, &[], "encode", e.to_string()));
                }
            }
            r
        })
    });
    rep.mid = mid;
    rep.head = head;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdel_core::codec::{build_codec, twodel_code};
    use qdel_core::params::{CodeParams, ValidParams};
    use qdel_core::sketch::TwoDelProvider;
    use qdel_core::strings::{enumerate_ball, Ball};

    #[test]
    fn exhaustive_counts_match_ball() {
        let vp = ValidParams::new(&CodeParams::new(Mode::BurstBin, 4, 2, 2).with_delta(8)).unwrap();
        let codec = build_codec(&vp, None).unwrap();
        let rep = roundtrip_verify(codec.as_ref(), Scope::Exhaustive).unwrap();
        assert!(rep.ok());
        let mut want = 0;
        for i in 0..16 {
            let x = codec.encode(&message(i, 4, 2)).unwrap();
            want += enumerate_ball(&x, Ball::BAtMost(2)).unwrap().len() as u64;
        }
        assert_eq!(rep.cases, want);
    }

    #[test]
    fn stages_agree_with_literal_decode() {
        let vp = ValidParams::new(&CodeParams::new(Mode::TwoDel, 3, 4, 2).with_rho(63)).unwrap();
        let code = twodel_code(&vp, TwoDelProvider::verbatim()).unwrap();
        let stages = twodel_stage_verify(&code).unwrap();
        assert!(stages.ok(), "{:?}", stages.structural);
        assert_eq!(stages.head.messages, 64);
        let literal = roundtrip_verify(&code, Scope::Exhaustive).unwrap();
        assert!(literal.ok());
        let mut want = 0;
        for i in 0..64 {
            let x = code.encode(&message(i, 3, 4)).unwrap();
            for t in 0..=2 {
                want += enumerate_ball(&x, Ball::D(t)).unwrap().len() as u64;
            }
        }
        assert_eq!(literal.cases, want);
    }

    #[test]
    fn guards() {
        let vp = ValidParams::new(&CodeParams::new(Mode::BurstQ, 64, 4, 2)).unwrap();
        let codec = build_codec(&vp, None).unwrap();
        assert!(matches!(roundtrip_verify(codec.as_ref(), Scope::Exhaustive), Err(VerifyError::TooLarge(_))));
        let rep = roundtrip_verify(codec.as_ref(), Scope::Random { trials: 50, seed: 1 }).unwrap();
        assert_eq!(rep.messages, 50);
        assert!(rep.ok());
    }
}
