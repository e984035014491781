//! Pixel buffers, 24-bit BMP codec and the scan orders that turn an image
//! into a terminal-symbol stream.

mod bmp;
mod scan;

use thiserror::Error;

pub use bmp::{decode_bmp, encode_bmp, BmpError, BMP_HEADER_LEN};
pub use scan::{delinearize, linearize, scan_order, LinearizationMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid dimensions {width}x{height} with {channels} channel(s)")]
    InvalidDimensions {
        width: u32,
        height: u32,
        channels: u8,
    },
    #[error("invalid geometry: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: u64, actual: u64 },
    #[error("symbol {0} is not a terminal")]
    NonTerminal(u32),
}

/// A decoded image: row-major, top row first, channels interleaved (R,G,B).
#[derive(Clone, PartialEq, Eq)]
pub struct PixelBuffer {
    width: u32,
    height: u32,
    channels: u8,
    samples: Vec<u8>,
}

impl std::fmt::Debug for PixelBuffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PixelBuffer")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .field("samples", &self.samples.len())
            .finish()
    }
}

/// Sample count for a geometry, or an error if it is not representable.
pub fn sample_count(width: u32, height: u32, channels: u8) -> Result<usize, GeometryError> {
    let invalid = GeometryError::InvalidDimensions {
        width,
        height,
        channels,
    };
    if width == 0 || height == 0 || !matches!(channels, 1 | 3) {
        return Err(invalid);
    }
    (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(channels as usize))
        .ok_or(invalid)
}

impl PixelBuffer {
    pub fn new(width: u32, height: u32, channels: u8, samples: Vec<u8>) -> Result<Self, GeometryError> {
        let expected = sample_count(width, height, channels)?;
        if samples.len() != expected {
            return Err(GeometryError::LengthMismatch {
                expected: expected as u64,
                actual: samples.len() as u64,
            });
        }
        Ok(PixelBuffer {
            width,
            height,
            channels,
            samples,
        })
    }

    /// An image filled with one RGB colour.
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Result<Self, GeometryError> {
        let n = sample_count(width, height, 3)?;
        let samples = rgb.iter().copied().cycle().take(n).collect();
        PixelBuffer::new(width, height, 3, samples)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    /// Samples of pixel (x, y).
    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let c = self.channels as usize;
        let at = (y as usize * self.width as usize + x as usize) * c;
        &self.samples[at..at + c]
    }

    /// Three-channel copy; grayscale samples are replicated into R, G and B.
    pub fn to_rgb(&self) -> PixelBuffer {
        if self.channels == 3 {
            return self.clone();
        }
        let samples = self.samples.iter().flat_map(|&v| [v, v, v]).collect();
        PixelBuffer {
            width: self.width,
            height: self.height,
            channels: 3,
            samples,
        }
    }
}
