//! Minimal dense-tensor engine: reverse-mode autodiff, shared layers, Adam,
//! finite-difference gradient checking, and the checkpoint format.

pub mod checkpoint;
pub mod gradcheck;
pub mod graph;
pub mod layers;
pub mod optim;
pub mod params;
pub mod tensor;

pub use checkpoint::{sha256_bytes, sha256_file, Checkpoint, CheckpointKind};
pub use gradcheck::{grad_check, GradCheckReport};
pub use graph::{masked_softmax_values, sigmoid, Graph, NodeId};
pub use layers::{MaskAttentionSpec, MlpSpec};
pub use optim::AdamState;
pub use params::{BoundParams, ParamSet, ParamTensor};
pub use tensor::Tensor;
