//! Error types, one enum per subsystem.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("loss must be a scalar, got shape {0:?}")]
    NotScalar(Vec<usize>),
    #[error("loss is not finite: {0}")]
    NonFiniteLoss(f64),
    #[error("masked softmax requires at least one unmasked position")]
    AllMasked,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite gradient in parameter {0}")]
    NonFiniteGrad(String),
    #[error("unknown parameter {0}")]
    UnknownParam(String),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate record id {0}")]
    DuplicateId(String),
    #[error("record {id}: {msg}")]
    Invalid { id: String, msg: String },
    #[error("chronological split needs at least {min} records, got {got}")]
    TooFewRecords { min: usize, got: usize },
    #[error("synthetic vocabulary size {vocab} too small for {markers} marker tokens")]
    VocabTooSmall { vocab: usize, markers: usize },
}

#[derive(Debug, Error)]
pub enum EmolexError {
    #[error("missing resource file {0}")]
    MissingFile(PathBuf),
    #[error("io error reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("intensity for {word} out of [0,1]: {value}")]
    IntensityRange { word: String, value: f64 },
    #[error("unknown emotion category {0}")]
    UnknownCategory(String),
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("cannot build a vocabulary from an empty training set")]
    EmptyTrainingSet,
    #[error("io error on vocabulary file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("vocabulary file {path}:{line}: {msg}")]
    Malformed {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    BadVersion(u32),
    #[error("truncated checkpoint file")]
    Truncated,
    #[error("{kind} hash mismatch: checkpoint was produced with different {kind}")]
    HashMismatch { kind: &'static str },
    #[error("parameter set mismatch: {0}")]
    ParamMismatch(String),
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("non-finite training loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("distillation weight alpha must be >= 0, got {0}")]
    NegativeAlpha(f64),
    #[error("{0}")]
    Config(String),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot evaluate an empty record set")]
    Empty,
}
