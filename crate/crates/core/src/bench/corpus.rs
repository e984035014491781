//! Deterministic synthetic test images.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::{encode_bmp, PixelBuffer};

pub const DEFAULT_SEED: u64 = 0x5250_494D;
pub const CORPUS_SIDE: u32 = 512;
pub const CORPUS_NAMES: [&str; 5] = ["solid", "tiles", "gradient", "mono", "noise"];

const SOLID_RGB: [u8; 3] = [0x3A, 0x7D, 0xC4];
const TILE_SIDE: u32 = 16;
const MONO_SHAPES: usize = 40;
const GRADIENT_DITHER: u8 = 3;

fn rng_for(name: &str, seed: u64) -> ChaCha8Rng {
    let salt = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

fn from_fn(side: u32, mut pixel: impl FnMut(u32, u32) -> [u8; 3]) -> PixelBuffer {
    let mut samples = Vec::with_capacity((side * side * 3) as usize);
    for y in 0..side {
        for x in 0..side {
            samples.extend_from_slice(&pixel(x, y));
        }
    }
    PixelBuffer::new(side, side, 3, samples).expect("square corpus geometry")
}

/// One corpus image by name, `None` for an unknown name.
pub fn synthesize(name: &str, side: u32, seed: u64) -> Option<PixelBuffer> {
    let mut rng = rng_for(name, seed);
    let buf = match name {
        "solid" => PixelBuffer::filled(side, side, SOLID_RGB).expect("non-zero side"),
        "tiles" => {
            let tile: Vec<[u8; 3]> = (0..TILE_SIDE * TILE_SIDE).map(|_| rng.random()).collect();
            from_fn(side, |x, y| tile[((y % TILE_SIDE) * TILE_SIDE + x % TILE_SIDE) as usize])
        }
        "gradient" => {
            // Horizontal ramp with a small seeded dither on each sample.
            let span = side.max(2) - 1;
            from_fn(side, |x, _| {
                let base = (x * (255 - u32::from(GRADIENT_DITHER)) / span) as u8;
                [0, 1, 2].map(|_| base + rng.random_range(0..=GRADIENT_DITHER))
            })
        }
        "mono" => mono(side, &mut rng),
        "noise" => from_fn(side, |_, _| rng.random()),
        _ => return None,
    };
    Some(buf)
}

/// Black rectangles and discs on white.
fn mono(side: u32, rng: &mut ChaCha8Rng) -> PixelBuffer {
    let s = side as i64;
    let shapes: Vec<(bool, i64, i64, i64, i64)> = (0..MONO_SHAPES)
        .map(|_| {
            let disc = rng.random_bool(0.5);
            let cx = rng.random_range(0..s);
            let cy = rng.random_range(0..s);
            let a = rng.random_range(s / 32 + 1..=s / 6 + 1);
            let b = rng.random_range(s / 32 + 1..=s / 6 + 1);
            (disc, cx, cy, a, b)
        })
        .collect();
    from_fn(side, |x, y| {
        let (x, y) = (x as i64, y as i64);
        let inside = shapes.iter().any(|&(disc, cx, cy, a, b)| {
            if disc {
                (x - cx).pow(2) + (y - cy).pow(2) <= a * a
            } else {
                (x - cx).abs() <= a && (y - cy).abs() <= b
            }
        });
        if inside {
            [0, 0, 0]
        } else {
            [255, 255, 255]
        }
    })
}

/// All corpus images at full size, in [`CORPUS_NAMES`] order.
pub fn corpus_images(seed: u64) -> Vec<(&'static str, PixelBuffer)> {
    CORPUS_NAMES
        .iter()
        .map(|name| (*name, synthesize(name, CORPUS_SIDE, seed).expect("known name")))
        .collect()
}

/// Writes `<dir>/<name>.bmp` for every corpus image.
pub fn generate_corpus(dir: impl AsRef<Path>, seed: u64) -> io::Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    corpus_images(seed)
        .into_iter()
        .map(|(name, buf)| {
            let path = dir.join(format!("{name}.bmp"));
            fs::write(&path, encode_bmp(&buf))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_images_are_deterministic() {
        for name in CORPUS_NAMES {
            let a = synthesize(name, 32, DEFAULT_SEED).unwrap();
            let b = synthesize(name, 32, DEFAULT_SEED).unwrap();
            assert_eq!(a, b, "{name}");
        }
        assert!(synthesize("lena", 32, DEFAULT_SEED).is_none());
    }

    #[test]
    fn seed_changes_random_images() {
        let a = synthesize("noise", 16, 1).unwrap();
        let b = synthesize("noise", 16, 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(synthesize("solid", 16, 1), synthesize("solid", 16, 2));
    }

    #[test]
    fn mono_is_two_tone_with_both_tones() {
        let m = synthesize("mono", 128, DEFAULT_SEED).unwrap();
        let black = m.samples().chunks(3).filter(|p| p == &[0, 0, 0]).count();
        let white = m.samples().chunks(3).filter(|p| p == &[255, 255, 255]).count();
        assert_eq!(black + white, 128 * 128);
        assert!(black > 0 && white > 0);
    }

    #[test]
    fn tiles_repeat_every_sixteen_pixels() {
        let t = synthesize("tiles", 64, DEFAULT_SEED).unwrap();
        for (x, y) in [(0, 0), (5, 3), (15, 15)] {
            assert_eq!(t.pixel(x, y), t.pixel(x + 16, y + 32));
        }
    }

    #[test]
    fn gradient_ramps_left_to_right() {
        let g = synthesize("gradient", 64, DEFAULT_SEED).unwrap();
        let mean = |x: u32| (0..64).map(|y| u32::from(g.pixel(x, y)[0])).sum::<u32>() / 64;
        assert!(mean(0) + 100 < mean(63));
    }
}
