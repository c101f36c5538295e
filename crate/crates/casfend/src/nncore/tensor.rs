//! Dense float64 tensors (scalars, vectors, matrices) used throughout the
//! models. Shapes are `[]`, `[n]`, or `[rows, cols]`; matrices are row-major.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(shape: &[usize]) -> Self {
        let n: usize = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![0.0; n],
        }
    }

    pub fn scalar(v: f64) -> Self {
        Tensor {
            shape: vec![],
            data: vec![v],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<f64>) -> Self {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "shape {:?} does not match data length {}",
            shape,
            data.len()
        );
        Tensor {
            shape: shape.to_vec(),
            data,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn as_scalar(&self) -> f64 {
        assert!(self.data.len() == 1, "tensor is not a scalar");
        self.data[0]
    }

    pub fn rows(&self) -> usize {
        assert_eq!(self.shape.len(), 2, "not a matrix");
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        assert_eq!(self.shape.len(), 2, "not a matrix");
        self.shape[1]
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        let cols = self.cols();
        self.data[r * cols + c] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Matrix product `op_a(A) * op_b(B)` where `ta`/`tb` transpose the operand.
    pub fn matmul(a: &Tensor, b: &Tensor, ta: bool, tb: bool) -> Tensor {
        let (am, ak) = dims2(a, ta);
        let (bk, bn) = dims2(b, tb);
        assert_eq!(ak, bk, "matmul inner dims {} vs {}", ak, bk);
        let mut out = Tensor::zeros(&[am, bn]);
        for i in 0..am {
            for k in 0..ak {
                let av = get2(a, i, k, ta);
                if av == 0.0 {
                    continue;
                }
                for j in 0..bn {
                    out.data[i * bn + j] += av * get2(b, k, j, tb);
                }
            }
        }
        out
    }

    /// `op_m(M) * v` producing a vector.
    pub fn matvec(m: &Tensor, v: &Tensor, tm: bool) -> Tensor {
        let (rows, cols) = dims2(m, tm);
        assert_eq!(cols, v.len(), "matvec inner dims {} vs {}", cols, v.len());
        let mut out = vec![0.0; rows];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..cols {
                acc += get2(m, i, k, tm) * v.data[k];
            }
            *slot = acc;
        }
        Tensor::from_vec(&[rows], out)
    }

    pub fn dot(a: &Tensor, b: &Tensor) -> f64 {
        assert_eq!(a.len(), b.len());
        a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum()
    }

    /// `self += c * other` (same shape).
    pub fn axpy(&mut self, c: f64, other: &Tensor) {
        assert_eq!(self.shape, other.shape);
        for (s, o) in self.data.iter_mut().zip(&other.data) {
            *s += c * o;
        }
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }
}

fn dims2(t: &Tensor, transpose: bool) -> (usize, usize) {
    assert_eq!(t.shape.len(), 2, "expected a matrix, got shape {:?}", t.shape);
    if transpose {
        (t.shape[1], t.shape[0])
    } else {
        (t.shape[0], t.shape[1])
    }
}

fn get2(t: &Tensor, i: usize, j: usize, transpose: bool) -> f64 {
    if transpose {
        t.data[j * t.shape[1] + i]
    } else {
        t.data[i * t.shape[1] + j]
    }
}
