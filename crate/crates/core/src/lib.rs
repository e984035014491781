//! Lossless image compression with Re-Pair.
//!
//! An image is decoded from 24-bit BMP, read out in one of several scan
//! orders, and the resulting byte stream is compressed into a straight-line
//! grammar. The grammar and its residue sequence are stored in an `.rpim`
//! container from which the original pixels are rebuilt exactly.
//!
//! ```
//! use rpim_core::codec::{compress_image, decompress, Decompressed};
//! use rpim_core::image::{LinearizationMode, PixelBuffer};
//! use rpim_core::repair::CompressorConfig;
//!
//! let img = PixelBuffer::filled(16, 16, [10, 20, 30]).unwrap();
//! let artifact = compress_image(&img, LinearizationMode::ZigZag, CompressorConfig::default());
//! let bytes = rpim_core::container::serialize(&artifact);
//! let back = rpim_core::container::deserialize(&bytes).unwrap();
//! assert_eq!(decompress(&back).unwrap(), Decompressed::Image(img));
//! ```

pub mod bench;
pub mod codec;
pub mod container;
pub mod image;
pub mod par;
pub mod repair;
