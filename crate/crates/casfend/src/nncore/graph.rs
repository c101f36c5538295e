//! Reverse-mode automatic differentiation over a recorded operation tape.
//!
//! Values are computed eagerly as nodes are appended, so node indices form a
//! topological order and `backward` is a single reverse sweep that visits each
//! node exactly once. Gradients accumulate additively into each node's grad
//! buffer.

use super::tensor::Tensor;
use crate::error::NnError;

/// Probability clamp used by the binary cross-entropy node.
pub const BCE_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone)]
enum Op {
    /// Input node: a parameter leaf or a constant. No parents.
    Leaf,
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Tanh(NodeId),
    Sigmoid(NodeId),
    /// `out = s * x` where `s` is a scalar node.
    ScaleByScalar { x: NodeId, s: NodeId },
    ScaleConst { x: NodeId, c: f64 },
    MatMul { a: NodeId, b: NodeId, ta: bool, tb: bool },
    /// `out = op_m(M) v`.
    MatVec { m: NodeId, v: NodeId, tm: bool },
    /// Add a length-r bias vector to every column of an r x c matrix.
    AddColBias { m: NodeId, b: NodeId },
    /// Add a scalar node to every entry.
    AddBroadcastScalar { x: NodeId, s: NodeId },
    /// Columns of the output are rows of a V x d table selected by index;
    /// output is d x L. Repeated indices accumulate gradient.
    GatherCols { table: NodeId, indices: Vec<usize> },
    /// Zero out the columns whose mask entry is false.
    ZeroCols { m: NodeId, mask: Vec<bool> },
    /// Softmax over the mask-true entries of a vector; mask-false outputs are 0.
    MaskedSoftmax { x: NodeId, mask: Vec<bool> },
    /// `sum_i (a_i - b_i)^2 / denom` over all entries.
    MseVec { a: NodeId, b: NodeId, denom: f64 },
    /// Same, restricted to mask-true entries.
    MseMasked { a: NodeId, b: NodeId, mask: Vec<bool>, denom: f64 },
    /// Binary cross-entropy of a scalar probability against a constant label.
    Bce { yhat: NodeId, y: f64 },
    /// Pick one entry of a vector as a scalar.
    Index { x: NodeId, i: usize },
    MulScalar(NodeId, NodeId),
}

struct Node {
    op: Op,
    value: Tensor,
    grad: Tensor,
}

#[derive(Default)]
pub struct Graph {
    nodes: Vec<Node>,
}

impl Graph {
    pub fn new() -> Self {
        Graph { nodes: Vec::new() }
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].value
    }

    pub fn grad(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].grad
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, op: Op, value: Tensor) -> NodeId {
        let grad = Tensor::zeros(value.shape());
        self.nodes.push(Node { op, value, grad });
        NodeId(self.nodes.len() - 1)
    }

    pub fn leaf(&mut self, value: Tensor) -> NodeId {
        self.push(Op::Leaf, value)
    }

    pub fn constant(&mut self, value: Tensor) -> NodeId {
        self.push(Op::Leaf, value)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut v = self.nodes[a.0].value.clone();
        v.axpy(1.0, &self.nodes[b.0].value);
        self.push(Op::Add(a, b), v)
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut v = self.nodes[a.0].value.clone();
        v.axpy(-1.0, &self.nodes[b.0].value);
        self.push(Op::Sub(a, b), v)
    }

    pub fn tanh(&mut self, x: NodeId) -> NodeId {
        let mut v = self.nodes[x.0].value.clone();
        v.data_mut().iter_mut().for_each(|e| *e = e.tanh());
        self.push(Op::Tanh(x), v)
    }

    pub fn sigmoid(&mut self, x: NodeId) -> NodeId {
        let mut v = self.nodes[x.0].value.clone();
        v.data_mut().iter_mut().for_each(|e| *e = sigmoid(*e));
        self.push(Op::Sigmoid(x), v)
    }

    pub fn scale_by_scalar(&mut self, x: NodeId, s: NodeId) -> NodeId {
        let c = self.nodes[s.0].value.as_scalar();
        let mut v = self.nodes[x.0].value.clone();
        v.data_mut().iter_mut().for_each(|e| *e *= c);
        self.push(Op::ScaleByScalar { x, s }, v)
    }

    pub fn scale_const(&mut self, x: NodeId, c: f64) -> NodeId {
        let mut v = self.nodes[x.0].value.clone();
        v.data_mut().iter_mut().for_each(|e| *e *= c);
        self.push(Op::ScaleConst { x, c }, v)
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId, ta: bool, tb: bool) -> NodeId {
        let v = Tensor::matmul(&self.nodes[a.0].value, &self.nodes[b.0].value, ta, tb);
        self.push(Op::MatMul { a, b, ta, tb }, v)
    }

    pub fn matvec(&mut self, m: NodeId, v: NodeId, tm: bool) -> NodeId {
        let out = Tensor::matvec(&self.nodes[m.0].value, &self.nodes[v.0].value, tm);
        self.push(Op::MatVec { m, v, tm }, out)
    }

    pub fn add_col_bias(&mut self, m: NodeId, b: NodeId) -> NodeId {
        let mat = &self.nodes[m.0].value;
        let bias = &self.nodes[b.0].value;
        assert_eq!(mat.rows(), bias.len(), "bias length must match rows");
        let (rows, cols) = (mat.rows(), mat.cols());
        let mut v = mat.clone();
        for i in 0..rows {
            let bi = bias.data()[i];
            for j in 0..cols {
                v.data_mut()[i * cols + j] += bi;
            }
        }
        self.push(Op::AddColBias { m, b }, v)
    }

    pub fn add_broadcast_scalar(&mut self, x: NodeId, s: NodeId) -> NodeId {
        let c = self.nodes[s.0].value.as_scalar();
        let mut v = self.nodes[x.0].value.clone();
        v.data_mut().iter_mut().for_each(|e| *e += c);
        self.push(Op::AddBroadcastScalar { x, s }, v)
    }

    pub fn gather_cols(&mut self, table: NodeId, indices: &[usize]) -> NodeId {
        let t = &self.nodes[table.0].value;
        let (v_size, d) = (t.rows(), t.cols());
        let l = indices.len();
        let mut out = Tensor::zeros(&[d, l]);
        for (j, &idx) in indices.iter().enumerate() {
            assert!(idx < v_size, "gather index {} out of range {}", idx, v_size);
            for r in 0..d {
                out.data_mut()[r * l + j] = t.data()[idx * d + r];
            }
        }
        self.push(
            Op::GatherCols {
                table,
                indices: indices.to_vec(),
            },
            out,
        )
    }

    pub fn zero_cols(&mut self, m: NodeId, mask: &[bool]) -> NodeId {
        let mat = &self.nodes[m.0].value;
        assert_eq!(mat.cols(), mask.len());
        let (rows, cols) = (mat.rows(), mat.cols());
        let mut v = mat.clone();
        for (j, &keep) in mask.iter().enumerate() {
            if !keep {
                for i in 0..rows {
                    v.data_mut()[i * cols + j] = 0.0;
                }
            }
        }
        self.push(
            Op::ZeroCols {
                m,
                mask: mask.to_vec(),
            },
            v,
        )
    }

    pub fn masked_softmax(&mut self, x: NodeId, mask: &[bool]) -> Result<NodeId, NnError> {
        let v = masked_softmax_values(self.nodes[x.0].value.data(), mask)?;
        let out = Tensor::from_vec(&[mask.len()], v);
        Ok(self.push(
            Op::MaskedSoftmax {
                x,
                mask: mask.to_vec(),
            },
            out,
        ))
    }

    pub fn mse_vec(&mut self, a: NodeId, b: NodeId, denom: f64) -> NodeId {
        let (av, bv) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(av.shape(), bv.shape(), "mse operands must match");
        let s: f64 = av
            .data()
            .iter()
            .zip(bv.data())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        self.push(Op::MseVec { a, b, denom }, Tensor::scalar(s / denom))
    }

    pub fn mse_masked(&mut self, a: NodeId, b: NodeId, mask: &[bool], denom: f64) -> NodeId {
        let (av, bv) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(av.shape(), bv.shape(), "mse operands must match");
        assert_eq!(av.len(), mask.len());
        let s: f64 = av
            .data()
            .iter()
            .zip(bv.data())
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|((x, y), _)| (x - y) * (x - y))
            .sum();
        self.push(
            Op::MseMasked {
                a,
                b,
                mask: mask.to_vec(),
                denom,
            },
            Tensor::scalar(s / denom),
        )
    }

    pub fn bce(&mut self, yhat: NodeId, y: f64) -> NodeId {
        let p = clamp_prob(self.nodes[yhat.0].value.as_scalar());
        let loss = -y * p.ln() - (1.0 - y) * (1.0 - p).ln();
        self.push(Op::Bce { yhat, y }, Tensor::scalar(loss))
    }

    pub fn index(&mut self, x: NodeId, i: usize) -> NodeId {
        let v = self.nodes[x.0].value.data()[i];
        self.push(Op::Index { x, i }, Tensor::scalar(v))
    }

    pub fn mul_scalar(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let v = self.nodes[a.0].value.as_scalar() * self.nodes[b.0].value.as_scalar();
        self.push(Op::MulScalar(a, b), Tensor::scalar(v))
    }

    /// Backpropagate from a scalar loss node, filling grad buffers.
    pub fn backward(&mut self, loss: NodeId) -> Result<(), NnError> {
        let lv = &self.nodes[loss.0].value;
        if lv.len() != 1 {
            return Err(NnError::NotScalar(lv.shape().to_vec()));
        }
        if !lv.is_finite() {
            return Err(NnError::NonFiniteLoss(lv.as_scalar()));
        }
        for n in self.nodes.iter_mut().take(loss.0 + 1) {
            n.grad.fill(0.0);
        }
        self.nodes[loss.0].grad.data_mut()[0] = 1.0;
        for i in (0..=loss.0).rev() {
            // Split borrows: take the op and grad of the current node.
            let op = self.nodes[i].op.clone();
            let g = self.nodes[i].grad.clone();
            if g.data().iter().all(|&x| x == 0.0) {
                continue;
            }
            self.propagate(i, &op, &g);
        }
        Ok(())
    }

    fn propagate(&mut self, node: usize, op: &Op, g: &Tensor) {
        match op {
            Op::Leaf => {}
            Op::Add(a, b) => {
                self.nodes[a.0].grad.axpy(1.0, g);
                self.nodes[b.0].grad.axpy(1.0, g);
            }
            Op::Sub(a, b) => {
                self.nodes[a.0].grad.axpy(1.0, g);
                self.nodes[b.0].grad.axpy(-1.0, g);
            }
            Op::Tanh(x) => {
                let y = self.nodes[node].value.clone();
                let gx = &mut self.nodes[x.0].grad;
                for ((dst, gi), yi) in gx.data_mut().iter_mut().zip(g.data()).zip(y.data()) {
                    *dst += gi * (1.0 - yi * yi);
                }
            }
            Op::Sigmoid(x) => {
                let y = self.nodes[node].value.clone();
                let gx = &mut self.nodes[x.0].grad;
                for ((dst, gi), yi) in gx.data_mut().iter_mut().zip(g.data()).zip(y.data()) {
                    *dst += gi * yi * (1.0 - yi);
                }
            }
            Op::ScaleByScalar { x, s } => {
                let c = self.nodes[s.0].value.as_scalar();
                let xv = self.nodes[x.0].value.clone();
                self.nodes[x.0].grad.axpy(c, g);
                let ds: f64 = xv.data().iter().zip(g.data()).map(|(a, b)| a * b).sum();
                self.nodes[s.0].grad.data_mut()[0] += ds;
            }
            Op::ScaleConst { x, c } => {
                self.nodes[x.0].grad.axpy(*c, g);
            }
            Op::MatMul { a, b, ta, tb } => {
                let av = self.nodes[a.0].value.clone();
                let bv = self.nodes[b.0].value.clone();
                // C = opA(A) opB(B); standard transpose-flag gradients.
                let da = if !ta {
                    Tensor::matmul(g, &bv, false, !tb)
                } else {
                    Tensor::matmul(&bv, g, *tb, true)
                };
                let db = if !tb {
                    Tensor::matmul(&av, g, !ta, false)
                } else {
                    Tensor::matmul(g, &av, true, *ta)
                };
                self.nodes[a.0].grad.axpy(1.0, &da);
                self.nodes[b.0].grad.axpy(1.0, &db);
            }
            Op::MatVec { m, v, tm } => {
                let mv = self.nodes[m.0].value.clone();
                let vv = self.nodes[v.0].value.clone();
                let (rows, cols) = (mv.rows(), mv.cols());
                // y = op(M) v. dv = op(M)^T g; dM = g v^T (or v g^T if transposed).
                let dv = Tensor::matvec(&mv, g, !tm);
                self.nodes[v.0].grad.axpy(1.0, &dv);
                let gm = &mut self.nodes[m.0].grad;
                if !tm {
                    for i in 0..rows {
                        for j in 0..cols {
                            gm.data_mut()[i * cols + j] += g.data()[i] * vv.data()[j];
                        }
                    }
                } else {
                    for i in 0..rows {
                        for j in 0..cols {
                            gm.data_mut()[i * cols + j] += vv.data()[i] * g.data()[j];
                        }
                    }
                }
            }
            Op::AddColBias { m, b } => {
                self.nodes[m.0].grad.axpy(1.0, g);
                let (rows, cols) = {
                    let mv = &self.nodes[m.0].value;
                    (mv.rows(), mv.cols())
                };
                let gb = &mut self.nodes[b.0].grad;
                for i in 0..rows {
                    let mut acc = 0.0;
                    for j in 0..cols {
                        acc += g.data()[i * cols + j];
                    }
                    gb.data_mut()[i] += acc;
                }
            }
            Op::AddBroadcastScalar { x, s } => {
                self.nodes[x.0].grad.axpy(1.0, g);
                let sum: f64 = g.data().iter().sum();
                self.nodes[s.0].grad.data_mut()[0] += sum;
            }
            Op::GatherCols { table, indices } => {
                let d = self.nodes[node].value.rows();
                let l = indices.len();
                let gt = &mut self.nodes[table.0].grad;
                let dt = gt.cols();
                for (j, &idx) in indices.iter().enumerate() {
                    for r in 0..d {
                        gt.data_mut()[idx * dt + r] += g.data()[r * l + j];
                    }
                }
            }
            Op::ZeroCols { m, mask } => {
                let (rows, cols) = {
                    let mv = &self.nodes[m.0].value;
                    (mv.rows(), mv.cols())
                };
                let gm = &mut self.nodes[m.0].grad;
                for (j, &keep) in mask.iter().enumerate() {
                    if keep {
                        for i in 0..rows {
                            gm.data_mut()[i * cols + j] += g.data()[i * cols + j];
                        }
                    }
                }
            }
            Op::MaskedSoftmax { x, mask } => {
                let y = self.nodes[node].value.clone();
                let inner: f64 = y
                    .data()
                    .iter()
                    .zip(g.data())
                    .zip(mask)
                    .filter(|(_, &m)| m)
                    .map(|((yi, gi), _)| yi * gi)
                    .sum();
                let gx = &mut self.nodes[x.0].grad;
                for i in 0..mask.len() {
                    if mask[i] {
                        gx.data_mut()[i] += y.data()[i] * (g.data()[i] - inner);
                    }
                }
            }
            Op::MseVec { a, b, denom } => {
                let gs = g.as_scalar();
                let av = self.nodes[a.0].value.clone();
                let bv = self.nodes[b.0].value.clone();
                let scale = 2.0 * gs / denom;
                let ga = &mut self.nodes[a.0].grad;
                for (dst, (x, y)) in ga.data_mut().iter_mut().zip(av.data().iter().zip(bv.data())) {
                    *dst += scale * (x - y);
                }
                let gb = &mut self.nodes[b.0].grad;
                for (dst, (x, y)) in gb.data_mut().iter_mut().zip(av.data().iter().zip(bv.data())) {
                    *dst -= scale * (x - y);
                }
            }
            Op::MseMasked { a, b, mask, denom } => {
                let gs = g.as_scalar();
                let av = self.nodes[a.0].value.clone();
                let bv = self.nodes[b.0].value.clone();
                let scale = 2.0 * gs / denom;
                for i in 0..mask.len() {
                    if mask[i] {
                        let diff = av.data()[i] - bv.data()[i];
                        self.nodes[a.0].grad.data_mut()[i] += scale * diff;
                        self.nodes[b.0].grad.data_mut()[i] -= scale * diff;
                    }
                }
            }
            Op::Bce { yhat, y } => {
                let gs = g.as_scalar();
                let p = clamp_prob(self.nodes[yhat.0].value.as_scalar());
                let d = -y / p + (1.0 - y) / (1.0 - p);
                self.nodes[yhat.0].grad.data_mut()[0] += gs * d;
            }
            Op::Index { x, i } => {
                self.nodes[x.0].grad.data_mut()[*i] += g.as_scalar();
            }
            Op::MulScalar(a, b) => {
                let gs = g.as_scalar();
                let av = self.nodes[a.0].value.as_scalar();
                let bv = self.nodes[b.0].value.as_scalar();
                self.nodes[a.0].grad.data_mut()[0] += gs * bv;
                self.nodes[b.0].grad.data_mut()[0] += gs * av;
            }
        }
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(BCE_EPS, 1.0 - BCE_EPS)
}

/// Numerically-stable softmax over the mask-true entries; mask-false are 0.
pub fn masked_softmax_values(scores: &[f64], mask: &[bool]) -> Result<Vec<f64>, NnError> {
    if scores.len() != mask.len() {
        return Err(NnError::ShapeMismatch(format!(
            "scores length {} vs mask length {}",
            scores.len(),
            mask.len()
        )));
    }
    let mut max = f64::NEG_INFINITY;
    for (s, &m) in scores.iter().zip(mask) {
        if m && *s > max {
            max = *s;
        }
    }
    if max == f64::NEG_INFINITY {
        return Err(NnError::AllMasked);
    }
    let mut out = vec![0.0; scores.len()];
    let mut sum = 0.0;
    for i in 0..scores.len() {
        if mask[i] {
            let e = (scores[i] - max).exp();
            out[i] = e;
            sum += e;
        }
    }
    for v in out.iter_mut() {
        *v /= sum;
    }
    Ok(out)
}
