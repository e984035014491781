//! Compression sweeps over a corpus, with verified round trips and
//! text/CSV reports.

mod corpus;
mod report;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

pub use corpus::{corpus_images, generate_corpus, synthesize, CORPUS_NAMES, CORPUS_SIDE, DEFAULT_SEED};
pub use report::{emit_report, ReportFormat};

use crate::codec::{self, Decompressed};
use crate::container;
use crate::image::{self, BmpError, LinearizationMode};
use crate::par::{map_jobs, Execution};
use crate::repair::CompressorConfig;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{name}: {source}")]
    Bmp { name: String, source: BmpError },
    #[error("round trip mismatch for {name} ({mode}); this is a compressor bug")]
    Corruption { name: String, mode: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputKind {
    Bmp,
    OpaqueStream,
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            InputKind::Bmp => "bmp",
            InputKind::OpaqueStream => "raw",
        })
    }
}

/// A named file held in memory. BMP inputs are compressed once per mode,
/// opaque inputs once as a byte stream.
#[derive(Clone, Debug)]
pub struct BenchInput {
    pub name: String,
    pub kind: InputKind,
    pub bytes: Vec<u8>,
}

impl BenchInput {
    pub fn new(name: impl Into<String>, kind: InputKind, bytes: Vec<u8>) -> Self {
        BenchInput {
            name: name.into(),
            kind,
            bytes,
        }
    }

    /// Reads `path`; the name is its file stem.
    pub fn from_path(path: &Path, kind: InputKind) -> Result<Self, BenchError> {
        let bytes = fs::read(path).map_err(|source| BenchError::Io {
            path: path.to_owned(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(BenchInput::new(name, kind, bytes))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub kind: InputKind,
    pub mode: Option<LinearizationMode>,
    pub size_in: u64,
    pub size_out: u64,
    pub ratio: f64,
    pub wall_time: f64,
    pub rules: usize,
}

impl BenchRow {
    pub fn mode_label(&self) -> &'static str {
        self.mode.map_or("n/a", LinearizationMode::name)
    }

    fn sort_key(&self) -> (&str, InputKind, u8) {
        (&self.name, self.kind, self.mode.map_or(u8::MAX, LinearizationMode::code))
    }
}

/// Loads every `*.bmp` in `dir` (sorted by name), once as a BMP input and
/// once as an opaque stream.
pub fn load_corpus(dir: &Path) -> Result<Vec<BenchInput>, BenchError> {
    let io_err = |source| BenchError::Io {
        path: dir.to_owned(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io_err)?;
    paths.retain(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("bmp")));
    paths.sort();
    let mut inputs = Vec::with_capacity(paths.len() * 2);
    for path in paths {
        let bmp = BenchInput::from_path(&path, InputKind::Bmp)?;
        let raw = BenchInput::new(bmp.name.clone(), InputKind::OpaqueStream, bmp.bytes.clone());
        inputs.push(bmp);
        inputs.push(raw);
    }
    Ok(inputs)
}

fn run_job(
    input: &BenchInput,
    mode: Option<LinearizationMode>,
    config: CompressorConfig,
) -> Result<BenchRow, BenchError> {
    let corruption = || BenchError::Corruption {
        name: input.name.clone(),
        mode: mode.map_or("n/a", LinearizationMode::name).to_owned(),
    };
    let (encoded, wall_time, rules) = match (input.kind, mode) {
        (InputKind::Bmp, Some(mode)) => {
            let buf = image::decode_bmp(&input.bytes).map_err(|source| BenchError::Bmp {
                name: input.name.clone(),
                source,
            })?;
            let start = Instant::now();
            let artifact = codec::compress_image(&buf, mode, config);
            let encoded = container::serialize(&artifact);
            let elapsed = start.elapsed().as_secs_f64();
            let back = container::deserialize(&encoded).map_err(|_| corruption())?;
            match codec::decompress(&back) {
                Ok(Decompressed::Image(out)) if out == buf => {}
                _ => return Err(corruption()),
            }
            (encoded, elapsed, artifact.grammar().len())
        }
        _ => {
            let start = Instant::now();
            let artifact = codec::compress_raw(&input.bytes, config);
            let encoded = container::serialize(&artifact);
            let elapsed = start.elapsed().as_secs_f64();
            let back = container::deserialize(&encoded).map_err(|_| corruption())?;
            match codec::decompress(&back) {
                Ok(Decompressed::Raw(out)) if out == input.bytes => {}
                _ => return Err(corruption()),
            }
            (encoded, elapsed, artifact.grammar().len())
        }
    };
    let size_in = input.bytes.len() as u64;
    let size_out = encoded.len() as u64;
    Ok(BenchRow {
        name: input.name.clone(),
        kind: input.kind,
        mode: match input.kind {
            InputKind::Bmp => mode,
            InputKind::OpaqueStream => None,
        },
        size_in,
        size_out,
        ratio: if size_in == 0 { f64::NAN } else { size_out as f64 / size_in as f64 },
        wall_time,
        rules,
    })
}

/// One row per (BMP input, mode) and per opaque input, sorted by name then mode.
/// Every row has passed a byte-exact round trip.
pub fn run_bench_with(
    inputs: &[BenchInput],
    modes: &[LinearizationMode],
    config: CompressorConfig,
    execution: Execution,
) -> Result<Vec<BenchRow>, BenchError> {
    let jobs: Vec<(&BenchInput, Option<LinearizationMode>)> = inputs
        .iter()
        .flat_map(|input| -> Vec<_> {
            match input.kind {
                InputKind::Bmp => modes.iter().map(|m| (input, Some(*m))).collect(),
                InputKind::OpaqueStream => vec![(input, None)],
            }
        })
        .collect();
    let results = map_jobs(&jobs, execution, |(input, mode)| run_job(input, *mode, config));
    let mut rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn run_bench(
    inputs: &[BenchInput],
    modes: &[LinearizationMode],
    config: CompressorConfig,
) -> Result<Vec<BenchRow>, BenchError> {
    run_bench_with(inputs, modes, config, Execution::default())
}

pub fn sort_rows(rows: &mut [BenchRow]) {
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::encode_bmp;

    fn small_inputs() -> Vec<BenchInput> {
        let mut inputs = Vec::new();
        for name in ["solid", "noise"] {
            let bmp = encode_bmp(&synthesize(name, 24, DEFAULT_SEED).unwrap());
            inputs.push(BenchInput::new(name, InputKind::Bmp, bmp.clone()));
            inputs.push(BenchInput::new(name, InputKind::OpaqueStream, bmp));
        }
        inputs
    }

    #[test]
    fn rows_cover_every_mode_plus_raw() {
        let rows = run_bench(&small_inputs(), &LinearizationMode::ALL, CompressorConfig::default()).unwrap();
        assert_eq!(rows.len(), 2 * 5);
        assert_eq!(rows[0].name, "noise");
        assert_eq!(rows[4].mode, None);
        for row in &rows {
            assert!(row.size_in > 0);
            assert!((row.ratio - row.size_out as f64 / row.size_in as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let inputs = small_inputs();
        let strip = |rows: Vec<BenchRow>| -> Vec<_> {
            rows.into_iter().map(|r| (r.name, r.kind, r.mode, r.size_out)).collect()
        };
        let cfg = CompressorConfig::default();
        let seq = run_bench_with(&inputs, &LinearizationMode::ALL, cfg, Execution::Sequential).unwrap();
        let par = run_bench_with(&inputs, &LinearizationMode::ALL, cfg, Execution::Parallel).unwrap();
        assert_eq!(strip(seq), strip(par));
    }

    #[test]
    fn invalid_bmp_input_is_an_error() {
        let inputs = vec![BenchInput::new("bad", InputKind::Bmp, b"nope".to_vec())];
        assert!(matches!(
            run_bench(&inputs, &[LinearizationMode::RowMajor], CompressorConfig::default()),
            Err(BenchError::Bmp { .. })
        ));
    }

    #[test]
    fn load_corpus_pairs_bmp_and_raw() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("b.bmp"), encode_bmp(&synthesize("solid", 4, 0).unwrap())).unwrap();
        fs::write(dir.path().join("a.bmp"), encode_bmp(&synthesize("noise", 4, 0).unwrap())).unwrap();
        fs::write(dir.path().join("notes.txt"), b"skip").unwrap();
        let inputs = load_corpus(dir.path()).unwrap();
        let names: Vec<_> = inputs.iter().map(|i| (i.name.as_str(), i.kind)).collect();
        assert_eq!(
            names,
            [
                ("a", InputKind::Bmp),
                ("a", InputKind::OpaqueStream),
                ("b", InputKind::Bmp),
                ("b", InputKind::OpaqueStream)
            ]
        );
        assert!(matches!(load_corpus(&dir.path().join("missing")), Err(BenchError::Io { .. })));
    }
}
