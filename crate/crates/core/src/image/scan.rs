use std::fmt;
use std::str::FromStr;

use super::{sample_count, GeometryError, PixelBuffer};
use crate::repair::Symbol;

/// Order in which samples are read out of a [`PixelBuffer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinearizationMode {
    /// Samples as stored.
    RowMajor,
    /// Boustrophedon: even rows left to right, odd rows right to left,
    /// pixels kept channel-interleaved.
    ZigZag,
    /// One plane per channel, each read row-major, planes concatenated.
    ChannelSplitRowMajor,
    /// One plane per channel, each read boustrophedon.
    ChannelSplitZigZag,
}

impl LinearizationMode {
    pub const ALL: [LinearizationMode; 4] = [
        LinearizationMode::RowMajor,
        LinearizationMode::ZigZag,
        LinearizationMode::ChannelSplitRowMajor,
        LinearizationMode::ChannelSplitZigZag,
    ];

    /// Wire byte used by the container format.
    pub fn code(self) -> u8 {
        match self {
            LinearizationMode::RowMajor => 0,
            LinearizationMode::ZigZag => 1,
            LinearizationMode::ChannelSplitRowMajor => 2,
            LinearizationMode::ChannelSplitZigZag => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            LinearizationMode::RowMajor => "row",
            LinearizationMode::ZigZag => "zigzag",
            LinearizationMode::ChannelSplitRowMajor => "split-row",
            LinearizationMode::ChannelSplitZigZag => "split-zigzag",
        }
    }

    fn split(self) -> bool {
        matches!(
            self,
            LinearizationMode::ChannelSplitRowMajor | LinearizationMode::ChannelSplitZigZag
        )
    }

    fn serpentine(self) -> bool {
        matches!(self, LinearizationMode::ZigZag | LinearizationMode::ChannelSplitZigZag)
    }
}

impl fmt::Display for LinearizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for LinearizationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected row, zigzag, split-row or split-zigzag)"))
    }
}

/// Sample indices in read order. Each index in `0..width*height*channels`
/// appears exactly once.
pub fn scan_order(
    width: u32,
    height: u32,
    channels: u8,
    mode: LinearizationMode,
) -> impl Iterator<Item = usize> {
    let (w, h, c) = (width as usize, height as usize, channels as usize);
    let serpentine = mode.serpentine();
    let column = move |y: usize, step: usize| if serpentine && y % 2 == 1 { w - 1 - step } else { step };
    let (planes, per_plane) = if mode.split() { (c, 1) } else { (1, c) };
    (0..planes).flat_map(move |plane| {
        (0..h).flat_map(move |y| {
            (0..w).flat_map(move |step| {
                let base = (y * w + column(y, step)) * c;
                (0..per_plane).map(move |k| base + plane + k)
            })
        })
    })
}

pub fn linearize(buf: &PixelBuffer, mode: LinearizationMode) -> Vec<Symbol> {
    let samples = buf.samples();
    scan_order(buf.width(), buf.height(), buf.channels(), mode)
        .map(|i| Symbol::terminal(samples[i]))
        .collect()
}

pub fn delinearize(
    seq: &[Symbol],
    mode: LinearizationMode,
    width: u32,
    height: u32,
    channels: u8,
) -> Result<PixelBuffer, GeometryError> {
    let n = sample_count(width, height, channels)?;
    if seq.len() != n {
        return Err(GeometryError::LengthMismatch {
            expected: n as u64,
            actual: seq.len() as u64,
        });
    }
    let mut samples = vec![0u8; n];
    for (sym, at) in seq.iter().zip(scan_order(width, height, channels, mode)) {
        samples[at] = sym.as_byte().ok_or(GeometryError::NonTerminal(sym.value()))?;
    }
    PixelBuffer::new(width, height, channels, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(seq: &[Symbol]) -> Vec<u8> {
        seq.iter().map(|s| s.as_byte().unwrap()).collect()
    }

    fn syms(bytes: &[u8]) -> Vec<Symbol> {
        bytes.iter().map(|b| Symbol::terminal(*b)).collect()
    }

    #[test]
    fn zigzag_gray_example() {
        let buf = PixelBuffer::new(3, 2, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(values(&linearize(&buf, LinearizationMode::ZigZag)), [1, 2, 3, 6, 5, 4]);
        let back = delinearize(&syms(&[1, 2, 3, 6, 5, 4]), LinearizationMode::ZigZag, 3, 2, 1).unwrap();
        assert_eq!(back, buf);
    }

    #[test]
    fn zigzag_keeps_pixels_interleaved() {
        let buf = PixelBuffer::new(2, 2, 3, (0..12).collect()).unwrap();
        assert_eq!(
            values(&linearize(&buf, LinearizationMode::ZigZag)),
            [0, 1, 2, 3, 4, 5, 9, 10, 11, 6, 7, 8]
        );
    }

    #[test]
    fn row_major_is_identity() {
        let buf = PixelBuffer::new(2, 2, 3, (10..22).collect()).unwrap();
        assert_eq!(values(&linearize(&buf, LinearizationMode::RowMajor)), buf.samples());
    }

    #[test]
    fn channel_split_concatenates_planes() {
        let (r1, g1, b1, r2, g2, b2) = (1, 2, 3, 4, 5, 6);
        let buf = PixelBuffer::new(2, 1, 3, vec![r1, g1, b1, r2, g2, b2]).unwrap();
        assert_eq!(
            values(&linearize(&buf, LinearizationMode::ChannelSplitRowMajor)),
            [r1, r2, g1, g2, b1, b2]
        );
    }

    #[test]
    fn channel_split_zigzag_reverses_odd_rows_per_plane() {
        // 2x2 RGB, pixel p has samples (10p, 10p+1, 10p+2)
        let s: Vec<u8> = (0..4).flat_map(|p| [10 * p, 10 * p + 1, 10 * p + 2]).collect();
        let buf = PixelBuffer::new(2, 2, 3, s).unwrap();
        assert_eq!(
            values(&linearize(&buf, LinearizationMode::ChannelSplitZigZag)),
            [0, 10, 30, 20, 1, 11, 31, 21, 2, 12, 32, 22]
        );
    }

    #[test]
    fn gray_split_is_single_plane() {
        let buf = PixelBuffer::new(3, 2, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(values(&linearize(&buf, LinearizationMode::ChannelSplitRowMajor)), buf.samples());
        assert_eq!(
            values(&linearize(&buf, LinearizationMode::ChannelSplitZigZag)),
            [1, 2, 3, 6, 5, 4]
        );
    }

    #[test]
    fn delinearize_checks_length_and_terminals() {
        assert!(matches!(
            delinearize(&syms(&[1, 2]), LinearizationMode::RowMajor, 3, 1, 1),
            Err(GeometryError::LengthMismatch { expected: 3, actual: 2 })
        ));
        let seq = [Symbol::terminal(1), Symbol::nonterminal(0)];
        assert_eq!(
            delinearize(&seq, LinearizationMode::RowMajor, 2, 1, 1),
            Err(GeometryError::NonTerminal(256))
        );
    }

    #[test]
    fn mode_codes_and_names() {
        for m in LinearizationMode::ALL {
            assert_eq!(LinearizationMode::from_code(m.code()), Some(m));
            assert_eq!(m.name().parse::<LinearizationMode>(), Ok(m));
        }
        assert_eq!(LinearizationMode::from_code(4), None);
        assert!("diagonal".parse::<LinearizationMode>().is_err());
    }
}
