//! Binary dataset files: a fixed header plus one record per sample
//! (family tag, class label, 256 little-endian f64 feature coefficients).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::pauli::{PauliVector, N_FEATURES, N_QUBITS};
use crate::sampling::{FamilyTag, Orbit};
use crate::svm::LabeledSample;

pub const DATASET_MAGIC: [u8; 4] = *b"EWDS";
pub const DATASET_VERSION: u16 = 1;
pub const DATASET_EXTENSION: &str = "ewd";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetHeader {
    pub version: u16,
    pub n_qubits: u16,
    pub n_features: u32,
    pub count: u64,
    pub seed: u64,
    pub orbit: Orbit,
}

impl DatasetHeader {
    pub fn new(count: u64, seed: u64, orbit: Orbit) -> Self {
        Self {
            version: DATASET_VERSION,
            n_qubits: N_QUBITS as u16,
            n_features: N_FEATURES as u32,
            count,
            seed,
            orbit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: DatasetHeader,
    pub samples: Vec<LabeledSample>,
}

impl Dataset {
    pub fn new(samples: Vec<LabeledSample>, seed: u64, orbit: Orbit) -> Self {
        Self { header: DatasetHeader::new(samples.len() as u64, seed, orbit), samples }
    }

    /// Canonical file name of a family's dataset within a directory.
    pub fn path_for(dir: &Path, tag: FamilyTag) -> PathBuf {
        dir.join(format!("{tag}.{DATASET_EXTENSION}"))
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&DATASET_MAGIC)?;
        w.write_all(&self.header.version.to_le_bytes())?;
        w.write_all(&self.header.n_qubits.to_le_bytes())?;
        w.write_all(&self.header.n_features.to_le_bytes())?;
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        w.write_all(&self.header.seed.to_le_bytes())?;
        let (orbit_byte, epsilon) = match self.header.orbit {
            Orbit::Epsilon(e) => (0u8, e),
            Orbit::Haar => (1u8, 0.0),
        };
        w.write_all(&[orbit_byte])?;
        w.write_all(&epsilon.to_le_bytes())?;
        for sample in &self.samples {
            w.write_all(&[sample.family.as_byte(), sample.label.sign() as i8 as u8])?;
            for c in sample.features.coeffs() {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if magic != DATASET_MAGIC {
            return Err(Error::Malformed { what: "dataset file", detail: "bad magic".into() });
        }
        let version = read_u16(&mut r)?;
        if version != DATASET_VERSION {
            return Err(Error::VersionMismatch { found: version, expected: DATASET_VERSION });
        }
        let n_qubits = read_u16(&mut r)?;
        let n_features = read_u32(&mut r)?;
        if n_qubits as usize != N_QUBITS || n_features as usize != N_FEATURES {
            return Err(Error::Malformed {
                what: "dataset file",
                detail: format!("unsupported dimensions n_q={n_qubits}, n_f={n_features}"),
            });
        }
        let count = read_u64(&mut r)?;
        let seed = read_u64(&mut r)?;
        let mut orbit_byte = [0u8; 1];
        r.read_exact(&mut orbit_byte)?;
        let epsilon = read_f64(&mut r)?;
        let orbit = match orbit_byte[0] {
            0 => Orbit::Epsilon(epsilon),
            1 => Orbit::Haar,
            b => {
                return Err(Error::Malformed {
                    what: "dataset file",
                    detail: format!("unknown orbit kind {b}"),
                })
            }
        };

        let mut samples = Vec::with_capacity(count as usize);
        for index in 0..count {
            let mut tag_label = [0u8; 2];
            r.read_exact(&mut tag_label).map_err(|_| Error::Malformed {
                what: "dataset file",
                detail: format!("truncated at record {index}"),
            })?;
            let family = FamilyTag::from_byte(tag_label[0]).ok_or_else(|| Error::Malformed {
                what: "dataset file",
                detail: format!("unknown family byte {} at record {index}", tag_label[0]),
            })?;
            let label = tag_label[1] as i8;
            if f64::from(label) != family.label().sign() {
                return Err(Error::Malformed {
                    what: "dataset file",
                    detail: format!("label {label} disagrees with family {family} at record {index}"),
                });
            }
            let mut coeffs = [0.0f64; N_FEATURES];
            let mut buf = [0u8; 8];
            for c in &mut coeffs {
                r.read_exact(&mut buf).map_err(|_| Error::Malformed {
                    what: "dataset file",
                    detail: format!("truncated at record {index}"),
                })?;
                *c = f64::from_le_bytes(buf);
            }
            samples.push(LabeledSample::new(PauliVector::new(coeffs)?, family));
        }
        if r.bytes().next().is_some() {
            return Err(Error::Malformed {
                what: "dataset file",
                detail: "trailing bytes after the declared record count".into(),
            });
        }
        let header = DatasetHeader { version, n_qubits, n_features, count, seed, orbit };
        Ok(Self { header, samples })
    }
}

fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    let mut buf = [0u8; 2];
    r.read_exact(&mut buf)?;
    Ok(u16::from_le_bytes(buf))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}
