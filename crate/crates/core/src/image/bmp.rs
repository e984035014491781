//! Uncompressed 24-bit BMP with a BITMAPINFOHEADER.
//!
//! Layout: 14-byte file header ("BM", file size, two reserved words, pixel
//! offset), 40-byte info header, then rows of BGR triples padded to a
//! multiple of four bytes. Positive heights store the bottom row first.

use thiserror::Error;

use super::{sample_count, PixelBuffer};

/// File header plus info header.
pub const BMP_HEADER_LEN: usize = 54;
const FILE_HEADER_LEN: usize = 14;
const INFO_HEADER_LEN: u32 = 40;
// 72 dpi
const PIXELS_PER_METRE: i32 = 2835;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BmpError {
    #[error("not a BMP file (missing \"BM\" magic)")]
    NotBmp,
    #[error("unsupported BMP: {0}; convert to 24-bit uncompressed BMP")]
    Unsupported(String),
    #[error("corrupt BMP: {0}")]
    Corrupt(String),
}

fn row_stride(width: usize) -> usize {
    (width * 3).div_ceil(4) * 4
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn i32_at(b: &[u8], at: usize) -> i32 {
    u32_at(b, at) as i32
}

pub fn decode_bmp(bytes: &[u8]) -> Result<PixelBuffer, BmpError> {
    if bytes.len() < 2 || &bytes[..2] != b"BM" {
        return Err(BmpError::NotBmp);
    }
    if bytes.len() < FILE_HEADER_LEN + 4 {
        return Err(BmpError::Corrupt("truncated header".into()));
    }
    let info_len = u32_at(bytes, 14);
    if info_len != INFO_HEADER_LEN {
        return Err(BmpError::Unsupported(format!("info header of {info_len} bytes")));
    }
    if bytes.len() < BMP_HEADER_LEN {
        return Err(BmpError::Corrupt("truncated header".into()));
    }
    let offset = u32_at(bytes, 10) as usize;
    let width = i32_at(bytes, 18);
    let height = i32_at(bytes, 22);
    let planes = u16_at(bytes, 26);
    let depth = u16_at(bytes, 28);
    let compression = u32_at(bytes, 30);

    if depth != 24 {
        return Err(BmpError::Unsupported(format!("{depth}-bit pixels")));
    }
    if compression != 0 {
        return Err(BmpError::Unsupported(format!("compression method {compression}")));
    }
    if planes != 1 {
        return Err(BmpError::Corrupt(format!("{planes} colour planes")));
    }
    if width <= 0 || height == 0 || height == i32::MIN {
        return Err(BmpError::Corrupt(format!("dimensions {width}x{height}")));
    }
    let top_down = height < 0;
    let (w, h) = (width as u32, height.unsigned_abs());
    let n = sample_count(w, h, 3).map_err(|e| BmpError::Corrupt(e.to_string()))?;
    if offset < BMP_HEADER_LEN {
        return Err(BmpError::Corrupt(format!("pixel offset {offset} inside header")));
    }

    let stride = row_stride(w as usize);
    let needed = (h as usize)
        .checked_mul(stride)
        .and_then(|len| len.checked_add(offset))
        .ok_or_else(|| BmpError::Corrupt("pixel array too large".into()))?;
    if bytes.len() < needed {
        return Err(BmpError::Corrupt(format!(
            "pixel data truncated: need {needed} bytes, have {}",
            bytes.len()
        )));
    }

    let mut samples = Vec::with_capacity(n);
    for y in 0..h as usize {
        let stored = if top_down { y } else { h as usize - 1 - y };
        let row = &bytes[offset + stored * stride..][..w as usize * 3];
        for bgr in row.chunks_exact(3) {
            samples.extend_from_slice(&[bgr[2], bgr[1], bgr[0]]);
        }
    }
    PixelBuffer::new(w, h, 3, samples).map_err(|e| BmpError::Corrupt(e.to_string()))
}

/// Canonical bottom-up encoding; pad bytes are zero.
pub fn encode_bmp(buf: &PixelBuffer) -> Vec<u8> {
    let rgb = buf.to_rgb();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let stride = row_stride(w);
    let image_len = stride * h;
    let file_len = BMP_HEADER_LEN + image_len;

    let mut out = Vec::with_capacity(file_len);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&(file_len as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(BMP_HEADER_LEN as u32).to_le_bytes());
    out.extend_from_slice(&INFO_HEADER_LEN.to_le_bytes());
    out.extend_from_slice(&(w as i32).to_le_bytes());
    out.extend_from_slice(&(h as i32).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&24u16.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(image_len as u32).to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());

    let pad = stride - w * 3;
    for row in rgb.samples().chunks_exact(w * 3).rev() {
        for rgb in row.chunks_exact(3) {
            out.extend_from_slice(&[rgb[2], rgb[1], rgb[0]]);
        }
        out.extend(std::iter::repeat_n(0, pad));
    }
    out
}
