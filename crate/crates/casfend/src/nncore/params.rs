//! Named trainable parameters and their binding into computation graphs.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::graph::{Graph, NodeId};
use super::tensor::Tensor;
use crate::error::NnError;

/// A named dense array with a gradient slot.
#[derive(Debug, Clone)]
pub struct ParamTensor {
    pub name: String,
    pub values: Tensor,
    pub grad: Tensor,
    pub trainable: bool,
}

impl ParamTensor {
    pub fn new(name: &str, values: Tensor, trainable: bool) -> Self {
        let grad = Tensor::zeros(values.shape());
        ParamTensor {
            name: name.to_string(),
            values,
            grad,
            trainable,
        }
    }
}

/// An ordered collection of parameters. Order is insertion order, which makes
/// checkpoints and optimizer sweeps deterministic.
#[derive(Debug, Clone, Default)]
pub struct ParamSet {
    params: Vec<ParamTensor>,
    index: HashMap<String, usize>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, param: ParamTensor) {
        assert!(
            !self.index.contains_key(&param.name),
            "duplicate parameter {}",
            param.name
        );
        self.index.insert(param.name.clone(), self.params.len());
        self.params.push(param);
    }

    pub fn add_gaussian(&mut self, name: &str, shape: &[usize], std: f64, rng: &mut ChaCha8Rng) {
        let n: usize = shape.iter().product();
        let data: Vec<f64> = (0..n).map(|_| gaussian(rng) * std).collect();
        self.add(ParamTensor::new(name, Tensor::from_vec(shape, data), true));
    }

    pub fn add_zeros(&mut self, name: &str, shape: &[usize]) {
        self.add(ParamTensor::new(name, Tensor::zeros(shape), true));
    }

    pub fn get(&self, name: &str) -> Option<&ParamTensor> {
        self.index.get(name).map(|&i| &self.params[i])
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut ParamTensor> {
        let i = *self.index.get(name)?;
        Some(&mut self.params[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParamTensor> {
        self.params.iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut ParamTensor> {
        self.params.iter_mut()
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn zero_grads(&mut self) {
        for p in &mut self.params {
            p.grad.fill(0.0);
        }
    }

    pub fn set_trainable(&mut self, trainable: bool) {
        for p in &mut self.params {
            p.trainable = trainable;
        }
    }

    /// Merge another set under a name prefix (used to keep teacher and
    /// encoder parameters in one addressable space).
    pub fn absorb(&mut self, other: ParamSet, prefix: &str) {
        for mut p in other.params {
            p.name = format!("{}{}", prefix, p.name);
            self.add(p);
        }
    }
}

/// Leaf nodes for every parameter of a set, created once per graph.
pub struct BoundParams {
    nodes: HashMap<String, NodeId>,
    bindings: Vec<(String, NodeId)>,
}

impl BoundParams {
    pub fn bind(graph: &mut Graph, params: &ParamSet) -> Self {
        let mut nodes = HashMap::new();
        let mut bindings = Vec::new();
        for p in params.iter() {
            let id = graph.leaf(p.values.clone());
            nodes.insert(p.name.clone(), id);
            bindings.push((p.name.clone(), id));
        }
        BoundParams { nodes, bindings }
    }

    pub fn node(&self, name: &str) -> NodeId {
        *self
            .nodes
            .get(name)
            .unwrap_or_else(|| panic!("parameter {} not bound", name))
    }

    /// Accumulate graph leaf gradients into the trainable parameters.
    /// Frozen parameters receive nothing and keep zero gradients.
    pub fn pull_grads(&self, graph: &Graph, params: &mut ParamSet) -> Result<(), NnError> {
        for (name, id) in &self.bindings {
            let p = params
                .get_mut(name)
                .ok_or_else(|| NnError::UnknownParam(name.clone()))?;
            if p.trainable {
                let g = graph.grad(*id);
                if !g.is_finite() {
                    return Err(NnError::NonFiniteGrad(name.clone()));
                }
                p.grad.axpy(1.0, g);
            }
        }
        Ok(())
    }
}

/// Box-Muller standard normal draw from a seeded stream.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
