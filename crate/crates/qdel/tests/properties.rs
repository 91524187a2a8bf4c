use proptest::prelude::*;

use qdel::channel::{corrupt, CorruptSpec};
use qdel::format::{CodecFile, TableFile};
use qdel::text::{format_word, parse_word};
use qdel_core::codec::build_codec;
use qdel_core::params::{CodeParams, Mode, ValidParams};
use qdel_core::sketch::TwoDelProvider;
use qdel_core::strings::delete_positions;

fn params(mode: Mode, n: usize, q: u32, t: usize) -> ValidParams {
    let p = CodeParams::new(mode, n, q, t);
    ValidParams::new(&p).unwrap_or_else(|e| panic!("{p:?}: {e}"))
}

fn any_params() -> impl Strategy<Value = ValidParams> {
    prop_oneof![
        (16usize..80, prop::sample::select(vec![2u32, 4, 6, 8])).prop_map(|(n, q)| params(Mode::TwoDel, n, q, 2)),
        (16usize..200, 1usize..4).prop_map(|(n, t)| params(Mode::BurstBin, n, 2, t)),
        (16usize..120, prop::sample::select(vec![2u32, 4, 8, 16]), 1usize..4).prop_map(|(n, q, t)| params(Mode::BurstQ, n, q, t)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codec_file_roundtrip(vp in any_params(), seed in any::<u64>(), len in 0usize..300) {
        let q = vp.params.code_q();
        let mut s = seed;
        let symbols: Vec<u32> = (0..len).map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1); (s >> 40) as u32 % q }).collect();
        let f = CodecFile::new(&vp, symbols);
        let bytes = f.to_bytes().unwrap();
        let back = CodecFile::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_bytes().unwrap(), bytes);
    }

    #[test]
    fn table_file_roundtrip(w in 0usize..10, top in prop::sample::select(vec![1u32, 200, 256, 257, 70000]), seed in any::<u64>()) {
        let mut s = seed;
        let colors: Vec<u32> = (0..1u32 << w).map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1); (s >> 33) as u32 % top }).collect();
        let count = top;
        let f = TableFile { w, count, colors };
        let bytes = f.to_bytes();
        let back = TableFile::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn text_roundtrip(x in prop::collection::vec(0u32..4, 0..100), binary in any::<bool>()) {
        let q = if binary { 2 } else { 4 };
        let x: Vec<u32> = x.into_iter().map(|s| s % q).collect();
        prop_assert_eq!(parse_word(&format_word(&x, q), q).unwrap(), x);
    }

    #[test]
    fn corrupt_respects_spec(len in 1usize..200, k in 0usize..4, burst in any::<bool>(), seed in any::<u64>()) {
        let s: Vec<u32> = (0..len as u32).collect();
        let spec = if burst { CorruptSpec::Burst(k) } else { CorruptSpec::Deletions(k) };
        match corrupt(&s, spec, seed) {
            Err(_) => prop_assert!(k > len),
            Ok(c) => {
                prop_assert_eq!(&c.word, &delete_positions(&s, &c.deleted));
                if burst {
                    prop_assert!(c.deleted.len() <= k && (k == 0 || !c.deleted.is_empty()));
                    prop_assert!(c.deleted.windows(2).all(|w| w[1] == w[0] + 1));
                } else {
                    prop_assert_eq!(c.deleted.len(), k);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn codes_roundtrip(vp in any_params(), seed in any::<u64>()) {
        let p = vp.params;
        let provider = (p.mode == Mode::TwoDel).then(TwoDelProvider::verbatim);
        let codec = build_codec(&vp, provider).unwrap();
        let q = p.code_q();
        let mut s = seed;
        let u: Vec<u32> = (0..p.n).map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as u32 % q }).collect();
        let x = codec.encode(&u).unwrap();
        for trial in 0..8 {
            let spec = match p.mode {
                Mode::TwoDel => CorruptSpec::Deletions(trial % 3),
                _ => CorruptSpec::Burst(p.t),
            };
            let y = corrupt(&x, spec, seed ^ trial as u64).unwrap();
            prop_assert_eq!(codec.decode(&y.word).unwrap(), u.clone(), "deleted {:?}", y.deleted);
        }
    }
}
