//! Adam optimizer over a [`ParamSet`].

use std::collections::HashMap;

use super::params::ParamSet;
use super::tensor::Tensor;
use crate::error::NnError;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Default)]
pub struct AdamState {
    m: HashMap<String, Tensor>,
    v: HashMap<String, Tensor>,
    t: u64,
}

impl AdamState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn timestep(&self) -> u64 {
        self.t
    }

    /// One Adam update over all trainable parameters. Frozen parameters are
    /// untouched. Errors on non-finite gradients before mutating anything.
    pub fn step(&mut self, params: &mut ParamSet, lr: f64) -> Result<(), NnError> {
        for p in params.iter() {
            if p.trainable && !p.grad.is_finite() {
                return Err(NnError::NonFiniteGrad(p.name.clone()));
            }
        }
        self.t += 1;
        let t = self.t as f64;
        let bc1 = 1.0 - ADAM_BETA1.powf(t);
        let bc2 = 1.0 - ADAM_BETA2.powf(t);
        for p in params.iter_mut() {
            if !p.trainable {
                continue;
            }
            let m = self
                .m
                .entry(p.name.clone())
                .or_insert_with(|| Tensor::zeros(p.values.shape()));
            let v = self
                .v
                .entry(p.name.clone())
                .or_insert_with(|| Tensor::zeros(p.values.shape()));
            for i in 0..p.values.len() {
                let g = p.grad.data()[i];
                let mi = ADAM_BETA1 * m.data()[i] + (1.0 - ADAM_BETA1) * g;
                let vi = ADAM_BETA2 * v.data()[i] + (1.0 - ADAM_BETA2) * g * g;
                m.data_mut()[i] = mi;
                v.data_mut()[i] = vi;
                let mhat = mi / bc1;
                let vhat = vi / bc2;
                p.values.data_mut()[i] -= lr * mhat / (vhat.sqrt() + ADAM_EPS);
            }
            if !p.values.is_finite() {
                return Err(NnError::NonFiniteGrad(p.name.clone()));
            }
        }
        Ok(())
    }
}
