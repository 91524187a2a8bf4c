use num_bigint::BigUint;

/// floor(d * log2(n)) computed exactly as the largest k with 2^k <= n^d.
pub fn floor_d_log2(d: u32, n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let p = BigUint::from(n).pow(d);
    (p.bits() - 1) as usize
}

pub fn floor_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Number of bits needed to write any value in [0, x].
pub fn bit_len(x: usize) -> usize {
    (usize::BITS - x.leading_zeros()) as usize
}

/// ceil(log2(q)) for q >= 1.
pub fn ceil_log2(q: usize) -> usize {
    if q <= 1 {
        0
    } else {
        bit_len(q - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_match_float() {
        for n in 2..5000usize {
            for d in 1..9u32 {
                let f = (d as f64 * (n as f64).log2()).floor() as usize;
                // floats can be off by one at exact powers; the integer form is authoritative
                let e = floor_d_log2(d, n);
                assert!(f == e || (f as i64 - e as i64).abs() == 1, "{n} {d}");
                assert!(BigUint::from(n).pow(d) >= BigUint::from(1u8) << e);
                assert!(BigUint::from(n).pow(d) < BigUint::from(1u8) << (e + 1));
            }
            assert_eq!(floor_log2(n), floor_d_log2(1, n));
        }
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(6), 3);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(bit_len(4), 3);
        assert_eq!(bit_len(0), 0);
    }
}
