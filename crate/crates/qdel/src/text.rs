//! Text forms of words: `LEN:HEX` for binary, space-separated digits
//! otherwise.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("expected LEN:HEX")]
    HexShape,
    #[error("bad hex digit {0:?}")]
    HexDigit(char),
    #[error("hex string holds {have} bits, LEN says {want}")]
    HexLength { have: usize, want: usize },
    #[error("bad digit {0:?}")]
    Digit(String),
    #[error("digit {0} not below q={1}")]
    Range(u32, u32),
}

/// Bits as `LEN:HEX`, first bit the high bit of the first hex digit.
pub fn to_hex(bits: &[u32]) -> String {
    let mut s = format!("{}:", bits.len());
    for ch in bits.chunks(4) {
        let v = ch.iter().enumerate().fold(0, |acc, (i, &b)| acc | b << (3 - i));
        s.push(char::from_digit(v, 16).unwrap());
    }
    s
}

pub fn from_hex(s: &str) -> Result<Vec<u32>, TextError> {
    let (len, hex) = s.trim().split_once(':').ok_or(TextError::HexShape)?;
    let len: usize = len.parse().map_err(|_| TextError::HexShape)?;
    if hex.len() != len.div_ceil(4) {
        return Err(TextError::HexLength { have: hex.len() * 4, want: len });
    }
    let mut bits = Vec::with_capacity(hex.len() * 4);
    for c in hex.chars() {
        let v = c.to_digit(16).ok_or(TextError::HexDigit(c))?;
        bits.extend((0..4).rev().map(|i| v >> i & 1));
    }
    if bits[len..].iter().any(|&b| b != 0) {
        return Err(TextError::HexLength { have: hex.len() * 4, want: len });
    }
    bits.truncate(len);
    Ok(bits)
}

pub fn to_digits(x: &[u32]) -> String {
    x.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn from_digits(s: &str, q: u32) -> Result<Vec<u32>, TextError> {
    s.split_whitespace()
        .map(|d| {
            let v: u32 = d.parse().map_err(|_| TextError::Digit(d.to_string()))?;
            if v >= q {
                return Err(TextError::Range(v, q));
            }
            Ok(v)
        })
        .collect()
}

/// Hex for binary words, digits otherwise.
pub fn format_word(x: &[u32], q: u32) -> String {
    if q == 2 {
        to_hex(x)
    } else {
        to_digits(x)
    }
}

pub fn parse_word(s: &str, q: u32) -> Result<Vec<u32>, TextError> {
    if q == 2 && s.contains(':') {
        from_hex(s)
    } else {
        from_digits(s, q)
    }
}
