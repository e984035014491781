use proptest::prelude::*;
use rpim_core::image::{decode_bmp, delinearize, encode_bmp, linearize, LinearizationMode, PixelBuffer};

fn buffer() -> impl Strategy<Value = PixelBuffer> {
    (1u32..=64, 1u32..=64, prop_oneof![Just(1u8), Just(3u8)]).prop_flat_map(|(w, h, c)| {
        prop::collection::vec(any::<u8>(), (w * h * c as u32) as usize)
            .prop_map(move |s| PixelBuffer::new(w, h, c, s).unwrap())
    })
}

fn rgb_buffer() -> impl Strategy<Value = PixelBuffer> {
    (1u32..=40, 1u32..=40).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), (w * h * 3) as usize)
            .prop_map(move |s| PixelBuffer::new(w, h, 3, s).unwrap())
    })
}

fn mode() -> impl Strategy<Value = LinearizationMode> {
    prop::sample::select(LinearizationMode::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delinearize_inverts_linearize(buf in buffer(), mode in mode()) {
        let seq = linearize(&buf, mode);
        let back = delinearize(&seq, mode, buf.width(), buf.height(), buf.channels()).unwrap();
        prop_assert_eq!(back, buf);
    }

    #[test]
    fn linearize_is_a_permutation(buf in buffer(), mode in mode()) {
        let mut out: Vec<u8> = linearize(&buf, mode).iter().map(|s| s.as_byte().unwrap()).collect();
        let mut samples = buf.samples().to_vec();
        out.sort_unstable();
        samples.sort_unstable();
        prop_assert_eq!(out, samples);
    }

    #[test]
    fn bmp_codec_round_trips(buf in rgb_buffer()) {
        let bytes = encode_bmp(&buf);
        let expected_len = 54 + buf.height() as usize * (3 * buf.width() as usize).div_ceil(4) * 4;
        prop_assert_eq!(bytes.len(), expected_len);
        let back = decode_bmp(&bytes).unwrap();
        prop_assert_eq!(encode_bmp(&back), bytes);
        prop_assert_eq!(back, buf);
    }

    #[test]
    fn decoder_never_panics(mut bytes in prop::collection::vec(any::<u8>(), 0..200), tamper in any::<bool>()) {
        if tamper && bytes.len() >= 2 {
            bytes[0] = b'B';
            bytes[1] = b'M';
        }
        let _ = decode_bmp(&bytes);
    }
}
