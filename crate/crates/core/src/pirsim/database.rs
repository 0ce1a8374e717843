use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// `M` files of `L` bits each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Database {
    files: Vec<BitVec>,
    file_bits: usize,
}

impl Database {
    pub fn new(files: Vec<BitVec>) -> Result<Self> {
        let Some(first) = files.first() else {
            return Err(Error::param("database needs at least one file"));
        };
        let file_bits = first.len();
        if file_bits == 0 {
            return Err(Error::param("files must be at least one bit long"));
        }
        if let Some((i, f)) = files.iter().enumerate().find(|(_, f)| f.len() != file_bits) {
            return Err(Error::dim(format!(
                "file {} has {} bits, expected {file_bits}",
                i + 1,
                f.len()
            )));
        }
        Ok(Database { files, file_bits })
    }

    /// Uniformly random contents from a seeded ChaCha8 stream.
    pub fn random(files: usize, file_bits: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(
            (0..files)
                .map(|_| BitVec::from_fn(file_bits, |_| rng.random::<bool>()))
                .collect(),
        )
    }

    /// Reads `M * L` bits, MSB first, file after file.
    pub fn from_bytes(bytes: &[u8], files: usize, file_bits: usize) -> Result<Self> {
        Self::new(
            (0..files)
                .map(|m| BitVec::from_bytes(bytes, m * file_bits, file_bits))
                .collect::<Result<_>>()?,
        )
    }

    pub fn num_files(&self) -> usize {
        self.files.len()
    }

    pub fn file_bits(&self) -> usize {
        self.file_bits
    }

    pub fn files(&self) -> &[BitVec] {
        &self.files
    }

    /// File `f`, 1-based.
    pub fn file(&self, f: usize) -> &BitVec {
        &self.files[f - 1]
    }

    /// Splits every file into `parts` substrings. Substring `j` of file `m`
    /// (both 0-based) lands at index `m * parts + j`.
    pub fn substrings(&self, parts: usize) -> Result<Vec<BitVec>> {
        let mut out = Vec::with_capacity(self.files.len() * parts);
        for f in &self.files {
            out.extend(f.split(parts)?);
        }
        Ok(out)
    }

    pub(crate) fn check_index(&self, f: usize) -> Result<()> {
        if f == 0 || f > self.files.len() {
            return Err(Error::param(format!(
                "file index {f} outside 1..={}",
                self.files.len()
            )));
        }
        Ok(())
    }
}
