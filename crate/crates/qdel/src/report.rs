//! Redundancy accounting: measured bits per stage against the asymptotic
//! formulas with their unknown constants set to zero.

use std::fmt::{self, Write as _};

use qdel_core::params::{CodeParams, Mode, Segment, SegmentWidths, ValidParams};
use qdel_core::sketch::SketchProviderId;

fn log2(x: f64) -> f64 {
    x.log2()
}

/// Leading terms of the asymptotic redundancy of each code.
pub fn formula(mode: Mode, n: usize, q: u32) -> (&'static str, f64) {
    let (ln, lln, lq) = (log2(n as f64), log2(log2(n as f64)), log2(q as f64));
    match mode {
        Mode::TwoDel => ("5 log n", 5.0 * ln),
        Mode::BurstBin => ("log n + 9 loglog n", ln + 9.0 * lln),
        Mode::BurstQ => ("log n + (8 log q + 9) loglog n", ln + (8.0 * lq + 9.0) * lln),
    }
}

/// Reading q-ary symbols as log q bits and running a binary burst code
/// with burst length t log q.
pub fn naive_baseline(n: usize, q: u32, t: usize) -> f64 {
    let lq = log2(q as f64);
    let nl = n as f64 * lq;
    let tl = t as f64 * lq;
    log2(nl) + tl * (tl + 1.0) / 2.0 * log2(log2(nl))
}

/// Named sketch fields of one segment, in packing order.
pub fn sketch_fields(seg: &Segment) -> Vec<(&'static str, usize)> {
    match seg.widths {
        SegmentWidths::TwoDel(w) => vec![("eta", w.eta), ("g0", w.g0), ("g1", w.g1), ("h0", w.h0), ("h1", w.h1)],
        SegmentWidths::BurstBin(w) => vec![("mu", w.loc), ("g0", w.g0), ("g1", w.g1)],
        SegmentWidths::BurstQ(w) => {
            vec![("mu", w.fb.loc), ("g0", w.fb.g0), ("g1", w.fb.g1), ("hbar0", w.h0), ("hbar1", w.h1)]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribution {
    pub decision: &'static str,
    pub bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub params: CodeParams,
    pub bits_per_symbol: f64,
    /// (stage, bits) in codeword order.
    pub stages: Vec<(&'static str, f64)>,
    pub sketch: Vec<(&'static str, usize)>,
    pub measured: f64,
    pub formula: (&'static str, f64),
    pub naive: f64,
    pub attributions: Vec<Attribution>,
}

impl Report {
    /// Stage and sketch numbers alone, for comparing reports across modes.
    pub fn measured_numbers(&self) -> (Vec<f64>, Vec<usize>) {
        (self.stages.iter().map(|s| s.1).collect(), self.sketch.iter().map(|s| s.1).collect())
    }
}

pub fn redundancy_report(vp: &ValidParams) -> Report {
    let p = &vp.params;
    let l = &vp.layout;
    let q = p.code_q();
    let b = log2(q as f64);
    let enc1 = (l.seg1.m - l.seg1.k) as f64 * b;
    let f1 = l.seg1.sketch_bits() as f64;
    let stages = vec![
        ("message encoder", enc1),
        ("sketch of v", f1),
        ("q-ary padding of v'", l.seg2.k as f64 * b - f1),
        ("encoder of v'", (l.seg2.m - l.seg2.k) as f64 * b),
        ("tail v''", l.m3 as f64 * b),
    ];
    let measured = (l.total - p.n) as f64 * b;
    let sketch = sketch_fields(&l.seg1);
    let field = |name: &str| sketch.iter().find(|f| f.0 == name).map_or(0, |f| f.1) as f64;
    let tail = l.m3 as f64 * b;
    let mut attributions = vec![Attribution {
        decision: match p.mode {
            Mode::TwoDel => "forced-block regular encoder",
            _ => "forced-block dense encoder",
        },
        bits: enc1,
    }];
    match p.mode {
        Mode::TwoDel => {
            let provider = match p.provider {
                SketchProviderId::Verbatim => "verbatim eta/xi",
                SketchProviderId::Colored => "colored eta/xi",
            };
            attributions.push(Attribution { decision: provider, bits: field("eta") + field("h0") + field("h1") });
            attributions.push(Attribution { decision: "N1 from the encoder run bound", bits: field("g0") + field("g1") });
        }
        Mode::BurstBin | Mode::BurstQ => {
            attributions.push(Attribution { decision: "locator as occurrence count and position sum", bits: field("mu") });
            attributions.push(Attribution { decision: "interleaved VT for phi", bits: field("g0") + field("g1") });
            if p.mode == Mode::BurstQ {
                attributions.push(Attribution { decision: "interleaved VT per row for hbar", bits: field("hbar0") + field("hbar1") });
            }
        }
    }
    attributions.push(Attribution {
        decision: "second sketch layer: q-ary padding and encoder",
        bits: (l.seg2.m as f64) * b - f1,
    });
    attributions.push(Attribution { decision: "tail repeated t+1 times", bits: tail });
    Report {
        params: *p,
        bits_per_symbol: b,
        stages,
        sketch,
        measured,
        formula: formula(p.mode, p.n, q),
        naive: naive_baseline(p.n, p.q, p.t),
        attributions,
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "mode {} n={} q={} t={}", p.mode, p.n, p.code_q(), p.t)?;
        match p.mode {
            Mode::TwoDel => writeln!(f, "  d={} rho={} provider={:?}", p.d, p.rho, p.provider)?,
            _ => writeln!(f, "  delta={} delta'={} lambda={}", p.delta, p.delta_prime, p.lambda)?,
        }
        writeln!(f, "  stages (bits):")?;
        for (name, bits) in &self.stages {
            writeln!(f, "    {name:<48} {bits:>9.1}")?;
        }
        let fields: Vec<String> = self.sketch.iter().map(|(n, w)| format!("{n}={w}")).collect();
        writeln!(f, "  sketch fields of v: {}", fields.join(" "))?;
        writeln!(f, "  measured redundancy {:>9.1}", self.measured)?;
        writeln!(f, "  formula {} = {:.1} (O, o and gamma_t terms as 0)", self.formula.0, self.formula.1)?;
        writeln!(f, "  naive baseline log(n log q) + t log q (t log q + 1)/2 loglog(n log q) = {:.1}", self.naive)?;
        writeln!(f, "  excess over formula {:.1}, attributed:", self.measured - self.formula.1)?;
        for a in &self.attributions {
            writeln!(f, "    {:<48} {:>9.1}", a.decision, a.bits)?;
        }
        Ok(())
    }
}

/// Reports for all three codes at (n, q, t); burst-bin is run on
/// binary messages of length n.
pub fn full_report(n: usize, q: u32, t: usize) -> Result<String, qdel_core::Error> {
    let mut out = String::new();
    for (mode, qq, tt) in [(Mode::TwoDel, q, 2), (Mode::BurstBin, 2, t), (Mode::BurstQ, q, t)] {
        let vp = ValidParams::new(&CodeParams::new(mode, n, qq, tt))?;
        write!(out, "{}", redundancy_report(&vp)).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_sum_to_measured() {
        for mode in [Mode::TwoDel, Mode::BurstBin, Mode::BurstQ] {
            let q = if mode == Mode::BurstBin { 2 } else { 4 };
            let r = redundancy_report(&ValidParams::new(&CodeParams::new(mode, 64, q, 2)).unwrap());
            let sum: f64 = r.stages.iter().map(|s| s.1).sum();
            assert!((sum - r.measured).abs() < 1e-9);
            let attributed: f64 = r.attributions.iter().map(|a| a.bits).sum();
            assert!((attributed - r.measured).abs() < 1e-9);
        }
    }

    #[test]
    fn twodel_verbatim_far_above_formula() {
        let r = redundancy_report(&ValidParams::new(&CodeParams::new(Mode::TwoDel, 64, 4, 2)).unwrap());
        assert!(r.measured > 2.0 * r.formula.1);
        assert!(r.attributions.iter().any(|a| a.decision == "verbatim eta/xi" && a.bits > 64.0));
    }

    #[test]
    fn burst_bin_sketch_matches_widths() {
        let vp = ValidParams::new(&CodeParams::new(Mode::BurstBin, 64, 2, 2)).unwrap();
        let r = redundancy_report(&vp);
        let total: usize = r.sketch.iter().map(|f| f.1).sum();
        assert_eq!(total, vp.layout.seg1.sketch_bits());
        let m = vp.layout.seg1.m;
        assert_eq!(r.sketch[0].1, qdel_core::locator::locator_width(m, 2));
    }

    #[test]
    fn binary_burst_q_matches_burst_bin() {
        let a = redundancy_report(&ValidParams::new(&CodeParams::new(Mode::BurstBin, 64, 2, 2)).unwrap());
        let b = redundancy_report(&ValidParams::new(&CodeParams::new(Mode::BurstQ, 64, 2, 2)).unwrap());
        let (sa, fa) = a.measured_numbers();
        let (sb, fb) = b.measured_numbers();
        assert_eq!(sa, sb);
        assert_eq!(fa, fb[..3]);
        assert!(fb[3..].iter().all(|&w| w == 0));
    }
}
