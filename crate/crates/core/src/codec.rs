//! End-to-end compression of images and opaque byte streams.

use thiserror::Error;

use crate::container::{self, CompressedArtifact, ContainerError, ImageGeometry, PayloadKind};
use crate::image::{self, BmpError, GeometryError, LinearizationMode, PixelBuffer};
use crate::repair::{self, CompressorConfig, GrammarError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Bmp(#[from] BmpError),
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// What a container decompresses to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decompressed {
    Image(PixelBuffer),
    Raw(Vec<u8>),
}

pub fn compress_image(buf: &PixelBuffer, mode: LinearizationMode, config: CompressorConfig) -> CompressedArtifact {
    let seq = image::linearize(buf, mode);
    let (grammar, residue) = repair::compress(&seq, config);
    let geom = ImageGeometry {
        width: buf.width(),
        height: buf.height(),
        channels: buf.channels(),
        mode,
    };
    CompressedArtifact::new(PayloadKind::Image(geom), grammar, residue)
        .expect("compressor output always expands to its input")
}

pub fn compress_raw(bytes: &[u8], config: CompressorConfig) -> CompressedArtifact {
    let (grammar, residue) = repair::compress_bytes(bytes, config);
    let kind = PayloadKind::RawStream {
        original_length: bytes.len() as u64,
    };
    CompressedArtifact::new(kind, grammar, residue).expect("compressor output always expands to its input")
}

/// Decodes a BMP file and compresses its pixels.
pub fn compress_bmp(
    bmp: &[u8],
    mode: LinearizationMode,
    config: CompressorConfig,
) -> Result<CompressedArtifact, Error> {
    let buf = image::decode_bmp(bmp)?;
    Ok(compress_image(&buf, mode, config))
}

pub fn decompress(artifact: &CompressedArtifact) -> Result<Decompressed, Error> {
    let terminals = artifact.grammar().expand(artifact.sequence())?;
    match *artifact.kind() {
        PayloadKind::Image(g) => {
            let buf = image::delinearize(&terminals, g.mode, g.width, g.height, g.channels)?;
            Ok(Decompressed::Image(buf))
        }
        PayloadKind::RawStream { .. } => Ok(Decompressed::Raw(
            terminals.iter().map(|s| s.value() as u8).collect(),
        )),
    }
}

/// Parses a container and returns the bytes to write back out: a canonical
/// BMP for images, the original stream for raw payloads.
pub fn decompress_container(bytes: &[u8]) -> Result<Vec<u8>, Error> {
    let artifact = container::deserialize(bytes)?;
    Ok(match decompress(&artifact)? {
        Decompressed::Image(buf) => image::encode_bmp(&buf),
        Decompressed::Raw(data) => data,
    })
}
