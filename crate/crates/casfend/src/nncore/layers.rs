//! Shared layers: multi-layer perceptrons and mask attention pooling.
//!
//! Layers are parameter-name conventions plus graph-building forwards; the
//! parameters themselves live in a [`ParamSet`] so they can be checkpointed
//! and frozen uniformly.

use rand_chacha::ChaCha8Rng;

use super::graph::{Graph, NodeId};
use super::params::{BoundParams, ParamSet};
use crate::error::NnError;

/// MLP with `dims = [in, hidden..., out]`; tanh between layers, plain affine
/// output, optional sigmoid head for classification.
#[derive(Debug, Clone)]
pub struct MlpSpec {
    pub prefix: String,
    pub dims: Vec<usize>,
    pub sigmoid_head: bool,
}

impl MlpSpec {
    pub fn new(prefix: &str, dims: &[usize], sigmoid_head: bool) -> Self {
        assert!(dims.len() >= 2, "MLP needs at least input and output dims");
        MlpSpec {
            prefix: prefix.to_string(),
            dims: dims.to_vec(),
            sigmoid_head,
        }
    }

    pub fn init(&self, params: &mut ParamSet, rng: &mut ChaCha8Rng) {
        for i in 0..self.dims.len() - 1 {
            let (fan_in, fan_out) = (self.dims[i], self.dims[i + 1]);
            let std = (1.0 / fan_in as f64).sqrt();
            params.add_gaussian(&format!("{}.w{}", self.prefix, i), &[fan_out, fan_in], std, rng);
            params.add_zeros(&format!("{}.b{}", self.prefix, i), &[fan_out]);
        }
    }

    /// Forward over a single input vector.
    pub fn forward(&self, g: &mut Graph, bound: &BoundParams, x: NodeId) -> Result<NodeId, NnError> {
        let n_layers = self.dims.len() - 1;
        let mut h = x;
        for i in 0..n_layers {
            let w = bound.node(&format!("{}.w{}", self.prefix, i));
            let b = bound.node(&format!("{}.b{}", self.prefix, i));
            let expect = g.value(h).len();
            if expect != self.dims[i] {
                return Err(NnError::ShapeMismatch(format!(
                    "{}: layer {} expects input dim {}, got {}",
                    self.prefix, i, self.dims[i], expect
                )));
            }
            let affine = g.matvec(w, h, false);
            h = g.add(affine, b);
            if i + 1 < n_layers {
                h = g.tanh(h);
            }
        }
        if self.sigmoid_head {
            h = g.sigmoid(h);
        }
        Ok(h)
    }
}

/// Scores each column of a d x L token matrix with a d -> 1 MLP (one hidden
/// layer of size k) and softmaxes over the mask-true columns.
#[derive(Debug, Clone)]
pub struct MaskAttentionSpec {
    pub prefix: String,
    pub d: usize,
    pub k: usize,
}

impl MaskAttentionSpec {
    pub fn new(prefix: &str, d: usize, k: usize) -> Self {
        MaskAttentionSpec {
            prefix: prefix.to_string(),
            d,
            k,
        }
    }

    pub fn init(&self, params: &mut ParamSet, rng: &mut ChaCha8Rng) {
        let std1 = (1.0 / self.d as f64).sqrt();
        let std2 = (1.0 / self.k as f64).sqrt();
        params.add_gaussian(&format!("{}.w1", self.prefix), &[self.k, self.d], std1, rng);
        params.add_zeros(&format!("{}.b1", self.prefix), &[self.k]);
        params.add_gaussian(&format!("{}.w2", self.prefix), &[self.k], std2, rng);
        params.add_zeros(&format!("{}.b2", self.prefix), &[]);
    }

    /// Per-column scores `w2^T tanh(W1 p_i + b1) + b2`, length L.
    pub fn scores(&self, g: &mut Graph, bound: &BoundParams, tokens: NodeId) -> NodeId {
        let w1 = bound.node(&format!("{}.w1", self.prefix));
        let b1 = bound.node(&format!("{}.b1", self.prefix));
        let w2 = bound.node(&format!("{}.w2", self.prefix));
        let b2 = bound.node(&format!("{}.b2", self.prefix));
        let hidden = g.matmul(w1, tokens, false, false);
        let hidden = g.add_col_bias(hidden, b1);
        let hidden = g.tanh(hidden);
        let scores = g.matvec(hidden, w2, true);
        g.add_broadcast_scalar(scores, b2)
    }

    /// Returns `(feature, weights)`: weights = masked softmax of the scores,
    /// feature = weighted sum of the token columns.
    pub fn pool(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        tokens: NodeId,
        mask: &[bool],
    ) -> Result<(NodeId, NodeId), NnError> {
        let scores = self.scores(g, bound, tokens);
        let weights = g.masked_softmax(scores, mask)?;
        let feature = g.matvec(tokens, weights, false);
        Ok((feature, weights))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nncore::params::ParamTensor;
    use crate::nncore::tensor::Tensor;
    use rand::SeedableRng;

    fn bind(params: &ParamSet) -> (Graph, BoundParams) {
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, params);
        (g, bound)
    }

    #[test]
    fn zero_mlp_with_sigmoid_head_outputs_half() {
        let spec = MlpSpec::new("clf", &[3, 1], true);
        let mut params = ParamSet::new();
        params.add(ParamTensor::new("clf.w0", Tensor::zeros(&[1, 3]), true));
        params.add(ParamTensor::new("clf.b0", Tensor::zeros(&[1]), true));
        let (mut g, bound) = bind(&params);
        let x = g.constant(Tensor::from_vec(&[3], vec![1.0, -1.0, 2.0]));
        let y = spec.forward(&mut g, &bound, x).unwrap();
        assert_eq!(g.value(y).data(), &[0.5]);
    }

    #[test]
    fn identity_single_layer_is_identity() {
        let spec = MlpSpec::new("id", &[2, 2], false);
        let mut params = ParamSet::new();
        params.add(ParamTensor::new(
            "id.w0",
            Tensor::from_vec(&[2, 2], vec![1.0, 0.0, 0.0, 1.0]),
            true,
        ));
        params.add(ParamTensor::new("id.b0", Tensor::zeros(&[2]), true));
        let (mut g, bound) = bind(&params);
        let x = g.constant(Tensor::from_vec(&[2], vec![0.3, -0.7]));
        let y = spec.forward(&mut g, &bound, x).unwrap();
        assert_eq!(g.value(y).data(), &[0.3, -0.7]);
    }

    #[test]
    fn two_two_one_net_matches_hand_computation() {
        let spec = MlpSpec::new("net", &[2, 2, 1], false);
        let mut params = ParamSet::new();
        params.add(ParamTensor::new(
            "net.w0",
            Tensor::from_vec(&[2, 2], vec![0.5, -0.25, 0.1, 0.2]),
            true,
        ));
        params.add(ParamTensor::new(
            "net.b0",
            Tensor::from_vec(&[2], vec![0.05, -0.1]),
            true,
        ));
        params.add(ParamTensor::new(
            "net.w1",
            Tensor::from_vec(&[1, 2], vec![1.5, -2.0]),
            true,
        ));
        params.add(ParamTensor::new(
            "net.b1",
            Tensor::from_vec(&[1], vec![0.3]),
            true,
        ));
        let (mut g, bound) = bind(&params);
        let x = g.constant(Tensor::from_vec(&[2], vec![1.0, 2.0]));
        let y = spec.forward(&mut g, &bound, x).unwrap();
        // Scalar oracle computed step by step.
        let h0 = (0.5 * 1.0 - 0.25 * 2.0 + 0.05_f64).tanh();
        let h1 = (0.1 * 1.0 + 0.2 * 2.0 - 0.1_f64).tanh();
        let expect = 1.5 * h0 - 2.0 * h1 + 0.3;
        assert!((g.value(y).data()[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let spec = MlpSpec::new("m", &[3, 1], false);
        let mut params = ParamSet::new();
        params.add(ParamTensor::new("m.w0", Tensor::zeros(&[1, 3]), true));
        params.add(ParamTensor::new("m.b0", Tensor::zeros(&[1]), true));
        let (mut g, bound) = bind(&params);
        let x = g.constant(Tensor::from_vec(&[2], vec![1.0, 2.0]));
        assert!(spec.forward(&mut g, &bound, x).is_err());
    }

    #[test]
    fn single_real_token_pool_returns_that_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = MaskAttentionSpec::new("att", 2, 3);
        let mut params = ParamSet::new();
        spec.init(&mut params, &mut rng);
        let (mut g, bound) = bind(&params);
        let tokens = g.constant(Tensor::from_vec(&[2, 3], vec![1.0, 9.0, 9.0, -2.0, 9.0, 9.0]));
        let (feature, weights) = spec
            .pool(&mut g, &bound, tokens, &[true, false, false])
            .unwrap();
        assert_eq!(g.value(weights).data(), &[1.0, 0.0, 0.0]);
        assert_eq!(g.value(feature).data(), &[1.0, -2.0]);
    }

    #[test]
    fn identical_columns_pool_to_that_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = MaskAttentionSpec::new("att", 2, 3);
        let mut params = ParamSet::new();
        spec.init(&mut params, &mut rng);
        let (mut g, bound) = bind(&params);
        let tokens = g.constant(Tensor::from_vec(&[2, 2], vec![0.4, 0.4, -1.1, -1.1]));
        let (feature, _) = spec.pool(&mut g, &bound, tokens, &[true, true]).unwrap();
        assert!((g.value(feature).data()[0] - 0.4).abs() < 1e-12);
        assert!((g.value(feature).data()[1] + 1.1).abs() < 1e-12);
    }

    #[test]
    fn random_pool_matches_brute_force_weighted_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = MaskAttentionSpec::new("att", 3, 4);
        let mut params = ParamSet::new();
        spec.init(&mut params, &mut rng);
        let (mut g, bound) = bind(&params);
        let data = vec![0.1, -0.2, 0.3, 0.7, 0.0, -0.5, 0.9, 0.2, -0.4];
        let tokens = g.constant(Tensor::from_vec(&[3, 3], data.clone()));
        let mask = [true, true, true];
        let (feature, weights) = spec.pool(&mut g, &bound, tokens, &mask).unwrap();
        let w = g.value(weights).data().to_vec();
        // Independent matrix arithmetic in float64.
        for r in 0..3 {
            let expect: f64 = (0..3).map(|c| w[c] * data[r * 3 + c]).sum();
            assert!((g.value(feature).data()[r] - expect).abs() < 1e-12);
        }
    }
}
