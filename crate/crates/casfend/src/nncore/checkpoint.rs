//! Binary checkpoint format.
//!
//! Byte layout (all integers little-endian):
//!
//! ```text
//! magic        4 bytes  "CFND"
//! version      u32      currently 1
//! kind         u8       0 = teacher, 1 = student
//! config_hash  32 bytes sha256 of the config file contents
//! vocab_hash   32 bytes sha256 of the persisted vocabulary file contents
//! has_teacher  u8       1 iff a teacher hash follows (student checkpoints)
//! teacher_hash 32 bytes sha256 of the teacher checkpoint file (if present)
//! n_params     u32
//! per param:
//!   name_len   u32, then utf-8 name bytes
//!   trainable  u8
//!   n_dims     u32, then each dim as u64
//!   values     n f64, little-endian bit patterns
//! ```
//!
//! Round-trips are bit-exact: values are written as raw f64 bits.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::params::{ParamSet, ParamTensor};
use super::tensor::Tensor;
use crate::error::CheckpointError;

const MAGIC: &[u8; 4] = b"CFND";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckpointKind {
    Teacher,
    Student,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub kind: CheckpointKind,
    pub config_hash: [u8; 32],
    pub vocab_hash: [u8; 32],
    /// For student checkpoints: hash of the teacher checkpoint file they were
    /// distilled from.
    pub teacher_hash: Option<[u8; 32]>,
    pub params: ParamSet,
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.push(match self.kind {
            CheckpointKind::Teacher => 0,
            CheckpointKind::Student => 1,
        });
        buf.extend_from_slice(&self.config_hash);
        buf.extend_from_slice(&self.vocab_hash);
        match &self.teacher_hash {
            Some(h) => {
                buf.push(1);
                buf.extend_from_slice(h);
            }
            None => buf.push(0),
        }
        buf.extend_from_slice(&(self.params.len() as u32).to_le_bytes());
        for p in self.params.iter() {
            let name = p.name.as_bytes();
            buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
            buf.extend_from_slice(name);
            buf.push(p.trainable as u8);
            let shape = p.values.shape();
            buf.extend_from_slice(&(shape.len() as u32).to_le_bytes());
            for &d in shape {
                buf.extend_from_slice(&(d as u64).to_le_bytes());
            }
            for v in p.values.data() {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        buf
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let bytes = self.to_bytes();
        let mut f = fs::File::create(path).map_err(|e| CheckpointError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        f.write_all(&bytes).map_err(|e| CheckpointError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CheckpointError> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(CheckpointError::BadMagic);
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(CheckpointError::BadVersion(version));
        }
        let kind = match r.u8()? {
            0 => CheckpointKind::Teacher,
            1 => CheckpointKind::Student,
            k => {
                return Err(CheckpointError::ParamMismatch(format!(
                    "unknown checkpoint kind {k}"
                )))
            }
        };
        let config_hash = r.hash()?;
        let vocab_hash = r.hash()?;
        let teacher_hash = if r.u8()? == 1 { Some(r.hash()?) } else { None };
        let n_params = r.u32()? as usize;
        let mut params = ParamSet::new();
        for _ in 0..n_params {
            let name_len = r.u32()? as usize;
            let name = String::from_utf8(r.take(name_len)?.to_vec())
                .map_err(|e| CheckpointError::ParamMismatch(e.to_string()))?;
            let trainable = r.u8()? == 1;
            let n_dims = r.u32()? as usize;
            let mut shape = Vec::with_capacity(n_dims);
            for _ in 0..n_dims {
                shape.push(r.u64()? as usize);
            }
            let n: usize = shape.iter().product();
            let mut data = Vec::with_capacity(n);
            for _ in 0..n {
                data.push(r.f64()?);
            }
            params.add(ParamTensor::new(&name, Tensor::from_vec(&shape, data), trainable));
        }
        Ok(Checkpoint {
            kind,
            config_hash,
            vocab_hash,
            teacher_hash,
            params,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| CheckpointError::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
        Self::from_bytes(&bytes)
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CheckpointError> {
        if self.pos + n > self.buf.len() {
            return Err(CheckpointError::Truncated);
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8, CheckpointError> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, CheckpointError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64, CheckpointError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn hash(&mut self) -> Result<[u8; 32], CheckpointError> {
        Ok(self.take(32)?.try_into().unwrap())
    }
}

pub fn sha256_bytes(bytes: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().into()
}

pub fn sha256_file(path: &Path) -> Result<[u8; 32], CheckpointError> {
    let bytes = fs::read(path).map_err(|e| CheckpointError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(sha256_bytes(&bytes))
}
