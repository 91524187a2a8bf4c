//! Overlapping window families W_j = [(j-1)s+1, (j+1)s], the last window
//! running to n.

use alloc::vec::Vec;

use crate::strings::Interval;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowFamily {
    pub n: usize,
    pub stride: usize,
    pub windows: Vec<Interval>,
}

pub fn build_windows(n: usize, stride: usize) -> Result<WindowFamily> {
    if stride == 0 || stride >= n {
        return Err(Error::OutOfRange("window stride"));
    }
    let count = n.div_ceil(stride) - 1;
    let windows = (1..=count)
        .map(|j| {
            let hi = if j == count { n } else { (j + 1) * stride };
            Interval::new((j - 1) * stride + 1, hi)
        })
        .collect();
    Ok(WindowFamily { n, stride, windows })
}

/// Window family with the stride clamped below n, so a stride at least as
/// long as the string yields the single window [1, n].
pub fn windows_clamped(n: usize, stride: usize) -> WindowFamily {
    if n <= 1 {
        return WindowFamily { n, stride: n, windows: alloc::vec![Interval::new(1, n)] };
    }
    build_windows(n, stride.clamp(1, n - 1)).expect("clamped stride is valid")
}

impl WindowFamily {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Window j (1-based).
    pub fn window(&self, j: usize) -> Interval {
        self.windows[j - 1]
    }

    pub fn max_len(&self) -> usize {
        self.windows.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Windows with index congruent to `parity` mod 2.
    pub fn has_parity(&self, parity: usize) -> bool {
        (1..=self.len()).any(|j| j % 2 == parity)
    }
}

/// Smallest j with I inside W_j.
pub fn covering_window(fam: &WindowFamily, iv: Interval) -> Result<usize> {
    if iv.is_empty() {
        return Ok(1);
    }
    fam.windows
        .iter()
        .position(|w| w.contains(&iv))
        .map(|j| j + 1)
        .ok_or(Error::Unrecoverable("no window covers the located interval"))
}
