//! Dense order-3 tensors.
//!
//! Entries are stored frontal slice after frontal slice, each slice in
//! column-major order: entry `(a, b, k)` of an `n1 × n2 × n3` tensor lives at
//! `a + n1 * (b + n2 * k)`. A frontal slice is therefore one contiguous run of
//! `n1 * n2` values laid out exactly like an `nalgebra` matrix.
//!
//! Mode unfoldings follow the Kolda–Bader column ordering:
//!
//! | mode | rows | column index of entry `(a, b, k)` |
//! |------|------|-----------------------------------|
//! | 1    | `n1` | `b + n2 * k`                      |
//! | 2    | `n2` | `a + n1 * k`                      |
//! | 3    | `n3` | `a + n1 * b`                      |

use crate::error::{invalid, mismatch, Error, Result};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        Self::check_dims([n1, n2, n3])?;
        Ok(Self { dims: [n1, n2, n3], data: vec![0.0; n1 * n2 * n3] })
    }

    /// Builds a tensor from values in the canonical ordering described in the
    /// module docs.
    pub fn from_vec(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        Self::check_dims(dims)?;
        if data.len() != dims[0] * dims[1] * dims[2] {
            return mismatch(format!(
                "{} values supplied for a {}x{}x{} tensor",
                data.len(),
                dims[0],
                dims[1],
                dims[2]
            ));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("tensor values"));
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut t = Self::zeros(dims[0], dims[1], dims[2])?;
        for k in 0..dims[2] {
            for b in 0..dims[1] {
                for a in 0..dims[0] {
                    let idx = t.offset(a, b, k);
                    t.data[idx] = f(a, b, k);
                }
            }
        }
        if t.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("tensor values"));
        }
        Ok(t)
    }

    /// Stacks `v` square `n × n` matrices into an `n × n × v` tensor.
    pub fn stack_frontal(matrices: &[Matrix]) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot stack an empty list of matrices".into()))?;
        let n = first.nrows();
        for (i, m) in matrices.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return mismatch(format!(
                    "matrix {i} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                ));
            }
        }
        let mut data = Vec::with_capacity(n * n * matrices.len());
        for m in matrices {
            data.extend_from_slice(m.as_slice());
        }
        Self::from_vec([n, n, matrices.len()], data)
    }

    fn check_dims(dims: [usize; 3]) -> Result<()> {
        if dims.contains(&0) {
            return invalid(format!("tensor dimensions must be positive, got {dims:?}"));
        }
        Ok(())
    }

    #[inline]
    fn offset(&self, a: usize, b: usize, k: usize) -> usize {
        a + self.dims[0] * (b + self.dims[1] * k)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// True when every frontal slice is square (`n1 == n2`).
    pub fn is_square_frontal(&self) -> bool {
        self.dims[0] == self.dims[1]
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, k: usize) -> f64 {
        self.data[self.offset(a, b, k)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, k: usize, value: f64) {
        let idx = self.offset(a, b, k);
        self.data[idx] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    fn frontal_range(&self, i: usize) -> Result<std::ops::Range<usize>> {
        if i >= self.dims[2] {
            return Err(Error::IndexOutOfRange { index: i, len: self.dims[2] });
        }
        let size = self.dims[0] * self.dims[1];
        Ok(i * size..(i + 1) * size)
    }

    /// The `n1 × n2` matrix `t(:, :, i)`.
    pub fn frontal_slice(&self, i: usize) -> Result<Matrix> {
        let range = self.frontal_range(i)?;
        Ok(Matrix::from_column_slice(self.dims[0], self.dims[1], &self.data[range]))
    }

    pub(crate) fn frontal_data(&self, i: usize) -> &[f64] {
        let size = self.dims[0] * self.dims[1];
        &self.data[i * size..(i + 1) * size]
    }

    pub fn set_frontal_slice(&mut self, i: usize, m: &Matrix) -> Result<()> {
        let range = self.frontal_range(i)?;
        if m.nrows() != self.dims[0] || m.ncols() != self.dims[1] {
            return mismatch(format!(
                "frontal slice must be {}x{}, got {}x{}",
                self.dims[0],
                self.dims[1],
                m.nrows(),
                m.ncols()
            ));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("frontal slice"));
        }
        self.data[range].copy_from_slice(m.as_slice());
        Ok(())
    }

    /// The `n3 × n2` matrix whose row `k` is `t(j, :, k)`.
    pub fn horizontal_slice(&self, j: usize) -> Result<Matrix> {
        if j >= self.dims[0] {
            return Err(Error::IndexOutOfRange { index: j, len: self.dims[0] });
        }
        Ok(Matrix::from_fn(self.dims[2], self.dims[1], |k, b| self.get(j, b, k)))
    }

    pub fn set_horizontal_slice(&mut self, j: usize, m: &Matrix) -> Result<()> {
        if j >= self.dims[0] {
            return Err(Error::IndexOutOfRange { index: j, len: self.dims[0] });
        }
        if m.nrows() != self.dims[2] || m.ncols() != self.dims[1] {
            return mismatch(format!(
                "horizontal slice must be {}x{}, got {}x{}",
                self.dims[2],
                self.dims[1],
                m.nrows(),
                m.ncols()
            ));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("horizontal slice"));
        }
        for k in 0..self.dims[2] {
            for b in 0..self.dims[1] {
                self.set(j, b, k, m[(k, b)]);
            }
        }
        Ok(())
    }

    /// Mode-`mode` unfolding (`mode` in 1..=3), see the module docs for the
    /// column ordering.
    pub fn unfold(&self, mode: usize) -> Result<Matrix> {
        let [n1, n2, n3] = self.dims;
        match mode {
            1 => Ok(Matrix::from_column_slice(n1, n2 * n3, &self.data)),
            2 => Ok(Matrix::from_fn(n2, n1 * n3, |b, col| self.get(col % n1, b, col / n1))),
            3 => Ok(Matrix::from_fn(n3, n1 * n2, |k, col| self.get(col % n1, col / n1, k))),
            _ => invalid(format!("unfolding mode must be 1, 2 or 3, got {mode}")),
        }
    }

    /// Inverse of [`Tensor3::unfold`].
    pub fn fold(m: &Matrix, mode: usize, dims: [usize; 3]) -> Result<Self> {
        Self::check_dims(dims)?;
        let [n1, n2, n3] = dims;
        let expected = match mode {
            1 => (n1, n2 * n3),
            2 => (n2, n1 * n3),
            3 => (n3, n1 * n2),
            _ => return invalid(format!("unfolding mode must be 1, 2 or 3, got {mode}")),
        };
        if m.shape() != expected {
            return mismatch(format!(
                "mode-{mode} unfolding of a {n1}x{n2}x{n3} tensor must be {}x{}, got {}x{}",
                expected.0,
                expected.1,
                m.nrows(),
                m.ncols()
            ));
        }
        match mode {
            1 => Self::from_vec(dims, m.as_slice().to_vec()),
            2 => Self::from_fn(dims, |a, b, k| m[(b, a + n1 * k)]),
            _ => Self::from_fn(dims, |a, b, k| m[(k, a + n1 * b)]),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return mismatch(format!("shapes {:?} and {:?} differ", self.dims, other.dims));
        }
        Ok(())
    }

    /// `alpha * x + y`.
    pub fn axpy(alpha: f64, x: &Self, y: &Self) -> Result<Self> {
        x.check_same_shape(y)?;
        let data = x.data.iter().zip(&y.data).map(|(xi, yi)| alpha * xi + yi).collect();
        Ok(Self { dims: x.dims, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::axpy(1.0, other, self)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::axpy(-1.0, other, self)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|x| alpha * x)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { dims: self.dims, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}
